"""Named functions as truncated series: q-Pochhammer, Heine's series, the
q-Koebe function ``k_q``, (quantum) dilogarithms and the nine integer-
coefficient schlicht functions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .series import MIN_Q, TruncatedSeries, q_brackets, series_exp, validate_q

CATALOG_IDS = (
    "identity",
    "cayley_plus",
    "cayley_minus",
    "koebe_plus",
    "koebe_minus",
    "lemniscate_plus",
    "lemniscate_minus",
    "hexic_plus",
    "hexic_minus",
)

# denominators D with g = z / D(z), constant term first
CATALOG_DENOMINATORS = {
    "identity": (1,),
    "cayley_plus": (1, -1),
    "cayley_minus": (1, 1),
    "koebe_plus": (1, -2, 1),
    "koebe_minus": (1, 2, 1),
    "lemniscate_plus": (1, 0, -1),
    "lemniscate_minus": (1, 0, 1),
    "hexic_plus": (1, -1, 1),
    "hexic_minus": (1, 1, 1),
}

CATALOG_FORMULAS = {
    "identity": "z",
    "cayley_plus": "z/(1-z)",
    "cayley_minus": "z/(1+z)",
    "koebe_plus": "z/(1-z)^2",
    "koebe_minus": "z/(1+z)^2",
    "lemniscate_plus": "z/(1-z^2)",
    "lemniscate_minus": "z/(1+z^2)",
    "hexic_plus": "z/(1-z+z^2)",
    "hexic_minus": "z/(1+z+z^2)",
}


def q_pochhammer(a: complex, q: float, n: int) -> complex:
    """``(a; q)_n = (1 - a)(1 - a q) ... (1 - a q^(n-1))``; empty product is 1."""
    if n < 0:
        raise ValueError("n must be non-negative")
    out = 1.0 + 0j
    factor = complex(a)
    for _ in range(n):
        out *= 1.0 - factor
        factor *= q
    return out


@dataclass(frozen=True)
class HypergeometricSpec:
    a: complex
    b: complex
    c: complex
    base: float
    order: int

    def __post_init__(self) -> None:
        if not 0.0 < self.base < 1.0:
            raise ValueError("base must lie in (0, 1)")
        if self.order < 0:
            raise ValueError("order must be non-negative")
        for n in range(self.order + 1):
            if abs(1.0 - complex(self.c) * self.base**n) < 1e-15:
                raise ValueError(f"c * base^{n} = 1: Heine series denominator vanishes")


def heine_phi(spec: HypergeometricSpec) -> TruncatedSeries:
    """Heine's series ``sum (a;q)_n (b;q)_n / ((c;q)_n (q;q)_n) z^n`` with ``q = spec.base``.

    Pochhammer ratios are updated incrementally, one factor per order.
    """
    q = spec.base
    a, b, c = complex(spec.a), complex(spec.b), complex(spec.c)
    out = np.empty(spec.order + 1, dtype=complex)
    term = 1.0 + 0j
    out[0] = term
    qk = 1.0
    for n in range(1, spec.order + 1):
        # factor index k = n - 1
        term *= (1.0 - a * qk) * (1.0 - b * qk) / ((1.0 - c * qk) * (1.0 - q * qk))
        out[n] = term
        qk *= q
    return TruncatedSeries(out)


def psi_series(q: float, order: int) -> TruncatedSeries:
    """``Psi(q; z) = z Phi[q, q; q^2; q, z]``, coefficients ``1 / [n]_q``."""
    q = validate_q(q, allow_one=False)
    br = q_brackets(order, q)
    out = np.zeros(order + 1)
    out[1:] = 1.0 / br[1:]
    return TruncatedSeries(out, name="psi")


def _one_minus_q_pow(q: float, n: np.ndarray) -> np.ndarray:
    # 1 - q^n without cancellation for q near 1
    return -np.expm1(n * math.log(q))


def quantum_dilog(q: float, order: int) -> TruncatedSeries:
    """Quantum dilogarithm ``Li_2(z; q) = sum z^n / (n (1 - q^n))``."""
    q = validate_q(q, allow_one=False)
    n = np.arange(1, order + 1, dtype=float)
    out = np.zeros(order + 1)
    out[1:] = 1.0 / (n * _one_minus_q_pow(q, n))
    return TruncatedSeries(out, name="quantum_dilog")


def quantum_dilog_scaled(q: float, order: int) -> TruncatedSeries:
    """``(1 - q) Li_2(z; q)``, built as ``1 / (n [n]_q)`` so that ``a_1 = 1`` exactly."""
    q = validate_q(q, allow_one=False)
    br = q_brackets(order, q)
    n = np.arange(1, order + 1, dtype=float)
    out = np.zeros(order + 1)
    out[1:] = 1.0 / (n * br[1:])
    return TruncatedSeries(out, name="quantum_dilog_scaled")


def dilog(order: int) -> TruncatedSeries:
    n = np.arange(1, order + 1, dtype=float)
    out = np.zeros(order + 1)
    out[1:] = 1.0 / (n * n)
    return TruncatedSeries(out, name="dilog")


def kq_exponent(q: float, order: int) -> np.ndarray:
    """``u_n = -2 ln q / (1 - q^n)`` for ``n = 0..order`` (``u_0 = 0``)."""
    q = validate_q(q, allow_one=False, floor=MIN_Q)
    u = np.zeros(order + 1)
    n = np.arange(1, order + 1, dtype=float)
    u[1:] = -2.0 * math.log(q) / _one_minus_q_pow(q, n)
    return u


def kq_series(q: float, order: int) -> TruncatedSeries:
    """The q-Koebe function ``k_q(z) = z exp(sum u_n z^n)``."""
    u = kq_exponent(q, order)
    E = series_exp(TruncatedSeries(u[:order]))
    return TruncatedSeries(np.concatenate([[0.0], E.coeffs.real]), name="kq")


def kq_coeffs_recurrence(q: float, order: int) -> np.ndarray:
    """Coefficients ``c_0..c_order`` of ``k_q`` from the differentiated recurrence

    ``(n-1) c_n = (n-1) u_{n-1} + sum_{k=2}^{n-1} (k-1) u_{k-1} c_{n+1-k}``.
    """
    u = kq_exponent(q, order)
    c = np.zeros(order + 1)
    if order >= 1:
        c[1] = 1.0
    for n in range(2, order + 1):
        acc = (n - 1) * u[n - 1]
        for k in range(2, n):
            acc += (k - 1) * u[k - 1] * c[n + 1 - k]
        c[n] = acc / (n - 1)
    return c


def friedman_catalog(tag: str, order: int) -> TruncatedSeries:
    """One of the nine schlicht functions with integer coefficients."""
    if tag not in CATALOG_DENOMINATORS:
        raise KeyError(f"unknown catalog id {tag!r}; expected one of {', '.join(CATALOG_IDS)}")
    n = np.arange(order + 1)
    a = np.zeros(order + 1)
    pos = n >= 1
    if tag == "identity":
        a[n == 1] = 1.0
    elif tag == "cayley_plus":
        a[pos] = 1.0
    elif tag == "cayley_minus":
        a[pos] = (-1.0) ** (n[pos] - 1)
    elif tag == "koebe_plus":
        a[pos] = n[pos]
    elif tag == "koebe_minus":
        a[pos] = (-1.0) ** (n[pos] - 1) * n[pos]
    elif tag == "lemniscate_plus":
        a[pos & (n % 2 == 1)] = 1.0
    elif tag == "lemniscate_minus":
        odd = pos & (n % 2 == 1)
        a[odd] = (-1.0) ** ((n[odd] - 1) // 2)
    elif tag == "hexic_plus":
        a[pos] = np.array([1, 1, 0, -1, -1, 0])[(n[pos] - 1) % 6]
    elif tag == "hexic_minus":
        a[pos] = np.array([1, -1, 0, 1, -1, 0])[(n[pos] - 1) % 6]
    return TruncatedSeries(a, exact=tag == "identity", name=tag)


def catalog_denominator(tag: str, order: int) -> TruncatedSeries:
    if tag not in CATALOG_DENOMINATORS:
        raise KeyError(f"unknown catalog id {tag!r}")
    d = np.zeros(order + 1)
    coeffs = CATALOG_DENOMINATORS[tag]
    d[: min(len(coeffs), order + 1)] = coeffs[: order + 1]
    return TruncatedSeries(d, exact=len(coeffs) <= order + 1)
