"""Coefficient bounds for K_q and S*_q, their classical limits, and the
series identities linking the bound sequences to Heine's function.

Every ``(1 - q^n)/(1 - q)`` is evaluated as ``[n]_q`` (an explicit sum), so
the formulas stay accurate for q close to 1 and are exact at q = 1.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .qspecial import HypergeometricSpec, heine_phi, kq_coeffs_recurrence, psi_series
from .series import TruncatedSeries, derivative, q_bracket, q_brackets, validate_q

CLASSICAL_EPS = 1e-6

REFERENCE_TAGS = {
    "identity": "kq_identity",
    "cayley_plus": "kq_cayley",
    "koebe_plus": "kq_koebe",
    "lemniscate_plus": "kq_lemniscate",
    "hexic_plus": "kq_hexic",
}

CLASS_TAGS = ("kq_general", "kq_identity", "kq_cayley", "kq_koebe", "kq_lemniscate", "kq_hexic", "sq_product", "sq_cn")


def _check_n(n: int) -> int:
    n = int(n)
    if n < 2:
        raise ValueError("coefficient bounds are stated for n >= 2")
    return n


def kq_bound(n: int, q: float) -> float:
    """``(1-q)/(1-q^n) [n + n(n-1)(1+q)/2]``; equals ``n`` at q = 1."""
    n = _check_n(n)
    q = validate_q(q)
    return (n + n * (n - 1) * (1.0 + q) / 2.0) / q_bracket(n, q)


def lemniscate_branch(n: int) -> str:
    odd, even = n % 2 == 1, n % 2 == 0
    assert odd + even == 1
    return "odd" if odd else "even"


def hexic_branch(n: int) -> str:
    """Which residue case of the ``z/(1-z+z^2)`` bound applies: ``3m-1``, ``3m`` or ``3m+1``."""
    hits = [name for name, fires in (("3m-1", n % 3 == 2), ("3m", n % 3 == 0), ("3m+1", n % 3 == 1)) if fires]
    assert len(hits) == 1
    return hits[0]


def kq_bound_for_reference(n: int, q: float, ref: str) -> float:
    """Bound on ``|a_n|`` for ``f`` in K_q with a given starlike reference ``g``."""
    n = _check_n(n)
    q = validate_q(q)
    br = q_bracket(n, q)
    if ref == "identity":
        return (1.0 + q) / br
    if ref == "cayley_plus":
        return (n + q * (n - 1)) / br
    if ref == "koebe_plus":
        return kq_bound(n, q)
    if ref == "lemniscate_plus":
        if lemniscate_branch(n) == "odd":
            return (n * (1.0 + q) / 2.0 + (1.0 - q) / 2.0) / br
        return (1.0 + q) * (n / 2.0) / br
    if ref == "hexic_plus":
        branch = hexic_branch(n)
        if branch == "3m-1":
            return ((2.0 - q) / 3.0 + 2.0 * n * (1.0 + q) / 3.0) / br
        if branch == "3m":
            return (1.0 + q) * (2.0 * n / 3.0) / br
        return (2.0 * n * (1.0 + q) / 3.0 + (1.0 - 2.0 * q) / 3.0) / br
    raise ValueError(f"no coefficient bound for reference {ref!r}; supported: {', '.join(REFERENCE_TAGS)}")


def sq_product_bound(n: int, q: float) -> float:
    """``(1-q^2)/(q-q^n) * prod_{k=2}^{n-1} (1 + (1-q^2)/(q-q^k))``.

    Uses ``(1-q^2)/(q-q^k) = (1+q) / (q [k-1]_q)``.
    """
    n = _check_n(n)
    q = validate_q(q)
    br = q_brackets(n - 1, q)
    value = (1.0 + q) / (q * br[n - 1])
    for k in range(2, n):
        value *= 1.0 + (1.0 + q) / (q * br[k - 1])
    return value


def sq_cn_bound(n: int, q: float) -> float:
    """``c_n``, the n-th coefficient of the q-Koebe function."""
    if int(n) < 1:
        raise ValueError("n must be >= 1")
    return float(kq_coeffs_recurrence(q, int(n))[int(n)])


def classical_bound(class_tag: str, n: int) -> float:
    """The classical (q = 1) coefficient bound each q-bound should approach."""
    if class_tag in ("kq_general", "kq_koebe", "sq_product", "sq_cn"):
        return float(n)
    if class_tag == "kq_identity":
        return 2.0 / n
    if class_tag == "kq_cayley":
        return (2.0 * n - 1.0) / n
    if class_tag == "kq_lemniscate":
        return 1.0
    if class_tag == "kq_hexic":
        return {"3m-1": (4.0 * n + 1.0) / (3.0 * n), "3m": 4.0 / 3.0, "3m+1": (4.0 * n - 1.0) / (3.0 * n)}[hexic_branch(n)]
    raise ValueError(f"unknown class tag {class_tag!r}")


def bound_value(class_tag: str, n: int, q: float) -> float:
    if n == 1:
        return 1.0
    if class_tag == "kq_general":
        return kq_bound(n, q)
    if class_tag == "sq_product":
        return sq_product_bound(n, q)
    if class_tag == "sq_cn":
        return sq_cn_bound(n, q)
    for ref, tag in REFERENCE_TAGS.items():
        if tag == class_tag:
            return kq_bound_for_reference(n, q, ref)
    raise ValueError(f"unknown class tag {class_tag!r}; expected one of {', '.join(CLASS_TAGS)}")


@dataclass(frozen=True)
class BoundTable:
    class_tag: str
    q: float
    n: np.ndarray
    values: np.ndarray
    classical_limit: np.ndarray
    eps: float = CLASSICAL_EPS

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "value", "classical_limit"])
        for n, v, c in zip(self.n, self.values, self.classical_limit):
            w.writerow([int(n), repr(float(v)), repr(float(c))])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "class_tag": self.class_tag,
            "q": self.q,
            "eps": self.eps,
            "rows": [
                {"n": int(n), "value": float(v), "classical_limit": float(c)}
                for n, v, c in zip(self.n, self.values, self.classical_limit)
            ],
        }


def bound_table(class_tag: str, q: float, n_lo: int, n_hi: int, eps: float = CLASSICAL_EPS) -> BoundTable:
    """Bound values for ``n`` in ``[n_lo, n_hi]`` plus the same formula at ``q = 1 - eps``.

    ``n = 1`` rows are the normalization ``a_1 = 1``.
    """
    if class_tag not in CLASS_TAGS:
        raise ValueError(f"unknown class tag {class_tag!r}; expected one of {', '.join(CLASS_TAGS)}")
    q = validate_q(q)
    n_lo = max(int(n_lo), 1)
    if n_hi < n_lo:
        raise ValueError("empty n range")
    ns = np.arange(n_lo, int(n_hi) + 1)
    if class_tag == "sq_cn":
        # one recurrence per q instead of one per row
        c = kq_coeffs_recurrence(q, int(n_hi))
        c_lim = kq_coeffs_recurrence(1.0 - eps, int(n_hi))
        values, limits = c[ns], c_lim[ns]
    else:
        values = np.array([bound_value(class_tag, int(n), q) for n in ns])
        limits = np.array([bound_value(class_tag, int(n), 1.0 - eps) for n in ns])
    return BoundTable(class_tag, q, ns, values, limits, eps)


def radius_estimate(A, window: int = 20) -> float:
    """Ratio-test radius: mean of ``A_n / A_{n+1}`` over the last ``window`` indices."""
    A = np.asarray(A, dtype=float)
    if A.size < window + 1:
        raise ValueError(f"need at least {window + 1} terms")
    num = A[-window - 1 : -1]
    den = A[-window:]
    if np.any(num == 0) or np.any(den == 0):
        raise ValueError("vanishing terms in the averaging window")
    return float(np.mean(num / den))


@dataclass(frozen=True)
class IdentityReport:
    name: str
    max_deviation: float
    first_mismatch: int | None
    left_at_mismatch: float | None = None
    right_at_mismatch: float | None = None
    expected_mismatch: bool = False
    deviations: np.ndarray = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "max_deviation": self.max_deviation,
            "first_mismatch": self.first_mismatch,
            "left_at_mismatch": self.left_at_mismatch,
            "right_at_mismatch": self.right_at_mismatch,
            "expected_mismatch": self.expected_mismatch,
        }


MISMATCH_RTOL = 1e-12


def compare_series(name: str, left: TruncatedSeries, right: TruncatedSeries, expected_mismatch: bool = False) -> IdentityReport:
    """Coefficientwise comparison; a mismatch is a deviation above ``1e-12 * max(1, |left_n|)``."""
    n = min(left.order, right.order)
    lc, rc = left.coeffs[: n + 1], right.coeffs[: n + 1]
    dev = np.abs(lc - rc)
    bad = dev > MISMATCH_RTOL * np.maximum(1.0, np.abs(lc))
    first = int(np.argmax(bad)) if bad.any() else None
    return IdentityReport(
        name=name,
        max_deviation=float(dev.max()),
        first_mismatch=first,
        left_at_mismatch=None if first is None else float(lc[first].real),
        right_at_mismatch=None if first is None else float(rc[first].real),
        expected_mismatch=expected_mismatch,
        deviations=dev,
    )


def kq_bound_series(q: float, order: int) -> TruncatedSeries:
    """``z + sum_{n>=2} kq_bound(n, q) z^n``."""
    out = np.zeros(order + 1)
    out[1] = 1.0
    for n in range(2, order + 1):
        out[n] = kq_bound(n, q)
    return TruncatedSeries(out)


def verify_series1_identity(q: float, order: int) -> IdentityReport:
    """The generating series of :func:`kq_bound` equals ``(1+q)/2 z^2 Psi'' + z Psi'``."""
    q = validate_q(q, allow_one=False)
    left = kq_bound_series(q, order)
    psi = psi_series(q, order)
    d1 = derivative(psi)  # order N-1
    z_d1 = d1.times_z()
    z2_d2 = derivative(d1).times_z().times_z()
    right = (1.0 + q) / 2.0 * z2_d2 + z_d1
    return compare_series("series1", left, right)


def verify_identity_corollaries(q: float, order: int) -> list[IdentityReport]:
    """Three coefficientwise identities for the identity- and Cayley-reference bounds.

    (i)   ``z + sum (1-q^2)/(1-q^n) z^n = (1+q) z Phi[q,q;q^2;q,z] - q z``
    (ii)  the same left side against ``z + z^2 Phi[q^2,q^2;q^3;q^2,z]``
          (disagrees from ``n = 4`` on; kept as an expected mismatch)
    (iii) ``z + sum (1-q)/(1-q^n) [n + q(n-1)] z^n = (1+q) z Psi' - q Psi``
    """
    q = validate_q(q, allow_one=False)
    N = order
    left_id = np.zeros(N + 1)
    left_id[1] = 1.0
    left_cay = np.zeros(N + 1)
    left_cay[1] = 1.0
    for n in range(2, N + 1):
        left_id[n] = kq_bound_for_reference(n, q, "identity")
        left_cay[n] = kq_bound_for_reference(n, q, "cayley_plus")
    left_id_s = TruncatedSeries(left_id)

    phi = heine_phi(HypergeometricSpec(q, q, q * q, q, N - 1))
    z = TruncatedSeries.monomial(1, N)
    right_i = (1.0 + q) * phi.times_z() - q * z

    phi2 = heine_phi(HypergeometricSpec(q * q, q * q, q**3, q * q, N - 2))
    right_ii = z + phi2.times_z().times_z()

    psi = psi_series(q, N)
    right_iii = (1.0 + q) * derivative(psi).times_z() - q * psi

    return [
        compare_series("(i) (1+q) z Phi[q,q;q^2;q,z] - q z", left_id_s, right_i),
        compare_series("(ii) z + z^2 Phi[q^2,q^2;q^3;q^2,z]", left_id_s, right_ii, expected_mismatch=True),
        compare_series("(iii) (1+q) z Psi' - q Psi", TruncatedSeries(left_cay), right_iii),
    ]
