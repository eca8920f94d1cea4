"""Coefficient sufficient conditions for membership in K_q.

Each criterion takes a real coefficient sequence ``A_0..A_N`` (``A_0 = 0``,
``A_1 = 1``), forms a derived sequence ``B`` and tests either a summability
bound or a monotone chain.  A satisfied criterion names the starlike
reference ``g`` it certifies.  At ``q = 1`` every rule reduces to the
classical ``b_n = n a_n`` tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .series import TruncatedSeries, q_brackets, validate_q

CHAIN_TOL = 1e-12
BUDGET_TOL = 1e-12
IMAG_TOL = 1e-14
CONVERGENCE_WINDOW = 8
CONVERGENCE_RTOL = 1e-10


class ComplexCoefficientsError(TypeError):
    """Raised when a criterion is asked of a sequence with non-real coefficients."""


@dataclass(frozen=True)
class CriterionSequence:
    """``plain``: ``B_n = A_n [n]_q``; ``consecutive_diff``: ``B_n = A_{n+1}[n+1]_q - A_n [n]_q``."""

    rule: str
    values: np.ndarray
    q: float


@dataclass(frozen=True)
class CriterionResult:
    criterion: str
    variant: str
    satisfied: bool
    statistic: float
    budget: float
    certifies: str
    first_violation: int | None = None
    chain_direction: str | None = None
    last_increment: float = 0.0
    converged: bool = True

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "variant": self.variant,
            "satisfied": self.satisfied,
            "statistic": self.statistic,
            "budget": self.budget,
            "certifies": self.certifies,
            "first_violation": self.first_violation,
            "chain_direction": self.chain_direction,
            "last_increment": self.last_increment,
            "converged": self.converged,
        }


def as_real_sequence(A) -> np.ndarray:
    """Validate a coefficient sequence: real (imaginary parts <= 1e-14) and normalized."""
    if isinstance(A, TruncatedSeries):
        A = A.coeffs
    arr = np.asarray(A)
    if np.iscomplexobj(arr):
        if np.any(np.abs(arr.imag) > IMAG_TOL):
            raise ComplexCoefficientsError("criteria need real coefficients")
        arr = arr.real
    arr = np.asarray(arr, dtype=float).reshape(-1)
    if arr.size < 2 or arr[0] != 0.0 or arr[1] != 1.0:
        raise ValueError("sequence must be normalized: A_0 = 0, A_1 = 1")
    return arr


def criterion_sequence(A, q: float, rule: str = "plain") -> CriterionSequence:
    A = as_real_sequence(A)
    q = validate_q(q)
    br = q_brackets(A.size - 1, q)
    scaled = A * br
    if rule == "plain":
        values = scaled
    elif rule == "consecutive_diff":
        # B_0 = A_1 [1] - A_0 [0] = 1; B_n needs A_{n+1}, so stops at N-1
        values = scaled[1:] - scaled[:-1]
    else:
        raise ValueError(f"unknown rule {rule!r}")
    return CriterionSequence(rule, values, q)


def classical_sequence(a) -> np.ndarray:
    """``b_n = n a_n``."""
    a = as_real_sequence(a)
    return np.arange(a.size) * a


def _sum_result(name: str, increments: np.ndarray, certifies: str, first_n: int, budget: float = 1.0) -> CriterionResult:
    """Partial-sum verdict; ``first_n`` is the sequence index of ``increments[0]``."""
    inc = np.abs(increments)
    stat = float(np.sum(inc))
    last = float(inc[-1]) if inc.size else 0.0
    tail = inc[-CONVERGENCE_WINDOW:]
    converged = bool(np.all(tail < CONVERGENCE_RTOL * budget))
    first = None
    if stat > budget + BUDGET_TOL:
        first = first_n + int(np.argmax(np.cumsum(inc) > budget + BUDGET_TOL))
    return CriterionResult(
        criterion=name,
        variant="sum",
        satisfied=stat <= budget + BUDGET_TOL,
        statistic=stat,
        budget=budget,
        certifies=certifies,
        first_violation=first,
        last_increment=last,
        converged=converged,
    )


def scan_chain(anchor: float, chain: np.ndarray, low: float, high: float) -> tuple[str | None, int | None]:
    """Check ``anchor >= c_1 >= c_2 >= ... >= low`` or ``anchor <= c_1 <= ... <= high``.

    Returns the direction that holds, or ``(None, k)`` with ``k`` the position
    (1-based within ``chain``) where the longer-surviving pattern first breaks.
    """
    seq = np.concatenate([[anchor], np.asarray(chain, dtype=float)])
    step = np.diff(seq)
    dec_bad = (step > CHAIN_TOL) | (seq[1:] < low - CHAIN_TOL)
    inc_bad = (step < -CHAIN_TOL) | (seq[1:] > high + CHAIN_TOL)
    if not dec_bad.any():
        return "decreasing", None
    if not inc_bad.any():
        return "increasing", None
    return None, int(max(np.argmax(dec_bad), np.argmax(inc_bad))) + 1


def _chain_result(
    name: str,
    anchor: float,
    chain: np.ndarray,
    low: float,
    high: float,
    index_of: Sequence[int],
    statistic: float,
    certifies: str,
) -> CriterionResult:
    direction, pos = scan_chain(anchor, chain, low, high)
    satisfied = direction is not None and statistic <= 1.0 + BUDGET_TOL
    return CriterionResult(
        criterion=name,
        variant="chain",
        satisfied=satisfied,
        statistic=statistic,
        budget=1.0,
        certifies=certifies,
        first_violation=None if pos is None else int(index_of[pos - 1]),
        chain_direction=direction,
    )


def crit_sum_halfplane(A, q: float) -> CriterionResult:
    """``sum_{n>=1} |B_{n+1} - B_n| <= 1`` certifies ``g = z/(1-z)``."""
    B = criterion_sequence(A, q).values
    return _sum_result("sum_halfplane", np.diff(B[1:]), "cayley_plus", 1)


def crit_monotone_halfplane(A, q: float) -> CriterionResult:
    """``1 >= B_2 >= B_3 >= ... >= 0`` or ``1 <= B_2 <= ... <= 2`` certifies ``g = z/(1-z)``."""
    B = criterion_sequence(A, q).values
    stat = float(np.sum(np.abs(np.diff(B[1:]))))
    N = B.size - 1
    return _chain_result("monotone_halfplane", B[1], B[2:], 0.0, 2.0, range(2, N + 1), stat, "cayley_plus")


def crit_koebe(A, q: float, variant: str = "sum") -> CriterionResult:
    """Consecutive-difference rule with ``B_0 = 1``; certifies ``g = z/(1-z)^2``.

    ``sum``: ``sum_{n>=1} |B_n - B_{n-1}| <= 1``.
    ``chain``: ``1 >= B_1 >= B_2 >= ... >= 0`` or ``1 <= B_1 <= ... <= 2``.
    """
    B = criterion_sequence(A, q, "consecutive_diff").values
    inc = np.diff(B)
    if variant == "sum":
        return _sum_result("koebe", inc, "koebe_plus", 1)
    if variant == "chain":
        stat = float(np.sum(np.abs(inc)))
        return _chain_result("koebe", B[0], B[1:], 0.0, 2.0, range(1, B.size), stat, "koebe_plus")
    raise ValueError(f"unknown variant {variant!r}")


def crit_odd_lemniscate(A, q: float, variant: str = "sum") -> CriterionResult:
    """For odd ``f``: ``sum |B_{2n-1} - B_{2n+1}| <= 1`` or the chain
    ``1 >= B_3 >= B_5 >= ... >= 0`` (resp. increasing to 2); certifies ``z/(1-z^2)``.

    ``A`` is the full sequence ``A_0..A_N``; its even entries must vanish.
    """
    A = as_real_sequence(A)
    if np.any(A[2::2] != 0.0):
        raise ValueError("odd-lemniscate criterion needs an odd function (even coefficients zero)")
    B = criterion_sequence(A, q).values
    odd = B[1::2]
    inc = np.diff(odd)
    if variant == "sum":
        return _sum_result("odd_lemniscate", inc, "lemniscate_plus", 1)
    if variant == "chain":
        stat = float(np.sum(np.abs(inc)))
        idx = list(range(3, B.size, 2))
        return _chain_result("odd_lemniscate", odd[0], odd[1:], 0.0, 2.0, idx, stat, "lemniscate_plus")
    raise ValueError(f"unknown variant {variant!r}")


def crit_two_step(A, q: float, variant: str = "sum") -> CriterionResult:
    """``sum_{n>=2} |B_n - B_{n-2}| <= 1`` or the pair-sum chain
    ``1 >= B_1+B_2 >= B_2+B_3 >= ... >= 0`` (resp. increasing to 2); certifies ``z/(1-z^2)``."""
    B = criterion_sequence(A, q).values
    inc = B[2:] - B[:-2]
    if variant == "sum":
        return _sum_result("two_step", inc, "lemniscate_plus", 2)
    if variant == "chain":
        pairs = B[1:-1] + B[2:]  # B_{n-1} + B_n for n = 2..N
        stat = float(np.sum(np.abs(inc)))
        return _chain_result("two_step", B[0] + B[1], pairs, 0.0, 2.0, range(2, B.size), stat, "lemniscate_plus")
    raise ValueError(f"unknown variant {variant!r}")


def hexic_terms(B: np.ndarray) -> np.ndarray:
    """``B_{n-1} - B_n + B_{n+1}`` for ``n = 1..N-1``."""
    return B[:-2] - B[1:-1] + B[2:]


def hexic_chain(B: np.ndarray) -> np.ndarray:
    """``T_1 = B_2 - B_1`` and ``T_n = B_2 + B_3 + ... + B_{n-1} + B_{n+1}`` for ``n = 2..N-1``."""
    N = B.size - 1
    T = np.empty(max(N - 1, 0))
    if N >= 2:
        T[0] = B[2] - B[1]
    for n in range(2, N):
        T[n - 1] = np.sum(B[2:n]) + B[n + 1]
    return T


def crit_hexic(A, q: float, variant: str = "sum") -> CriterionResult:
    """``sum_{n>=1} |B_{n-1} - B_n + B_{n+1}| <= 1`` or the nested-sum chain
    ``0 >= B_2 - B_1 >= B_3 >= B_2 + B_4 >= ... >= -1`` (resp. increasing to 1);
    certifies ``z/(1-z+z^2)``."""
    B = criterion_sequence(A, q).values
    terms = hexic_terms(B)
    if variant == "sum":
        return _sum_result("hexic", terms, "hexic_plus", 1)
    if variant == "chain":
        T = hexic_chain(B)
        stat = float(np.sum(np.abs(terms)))
        return _chain_result("hexic", 0.0, T, -1.0, 1.0, range(1, T.size + 1), stat, "hexic_plus")
    raise ValueError(f"unknown variant {variant!r}")


CRITERIA = {
    "sum_halfplane": lambda A, q, variant="sum": crit_sum_halfplane(A, q),
    "monotone_halfplane": lambda A, q, variant="chain": crit_monotone_halfplane(A, q),
    "koebe": crit_koebe,
    "odd_lemniscate": crit_odd_lemniscate,
    "two_step": crit_two_step,
    "hexic": crit_hexic,
}


CRITERION_VARIANTS = {
    "sum_halfplane": ("sum",),
    "monotone_halfplane": ("chain",),
    "koebe": ("sum", "chain"),
    "odd_lemniscate": ("sum", "chain"),
    "two_step": ("sum", "chain"),
    "hexic": ("sum", "chain"),
}


def sequence_from_plain(B: np.ndarray, q: float) -> np.ndarray:
    """Back-solve ``A_n = B_n / [n]_q`` (``A_0 = 0``)."""
    B = np.asarray(B, dtype=float)
    br = q_brackets(B.size - 1, q)
    A = np.zeros_like(B)
    A[1:] = B[1:] / br[1:]
    A[1] = 1.0
    return A


def sequence_from_consecutive_diff(B: np.ndarray, q: float) -> np.ndarray:
    """Back-solve ``A`` from ``B_n = A_{n+1}[n+1] - A_n[n]`` given ``B_1..B_{N-1}`` (``B_0 = 1``)."""
    B = np.asarray(B, dtype=float)
    N = B.size
    br = q_brackets(N, q)
    scaled = np.zeros(N + 1)
    scaled[1] = 1.0
    for n in range(1, N):
        scaled[n + 1] = scaled[n] + B[n]
    A = np.zeros(N + 1)
    A[1:] = scaled[1:] / br[1:]
    A[1] = 1.0
    return A
