"""Truncated complex power series and the q-operators acting on them.

A series ``f(z) = a_0 + a_1 z + ... + a_N z^N`` is stored as its ``N + 1``
coefficients.  All operations return fresh series; inputs are never mutated.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

DEFAULT_ORDER = 64
MIN_Q = 1e-6


def validate_q(q: float, *, allow_one: bool = True, floor: float = 0.0) -> float:
    """Return ``q`` as a float after checking ``0 < q <= 1`` and ``q >= floor``."""
    q = float(q)
    if not math.isfinite(q) or q <= 0.0 or q < floor or q > 1.0:
        raise ValueError(f"q must lie in ({floor}, 1], got {q!r}")
    if q == 1.0 and not allow_one:
        raise ValueError("q = 1 is not permitted here; use 0 < q < 1")
    return q


def q_brackets(n_max: int, q: float) -> np.ndarray:
    """Array ``[0]_q, [1]_q, ..., [n_max]_q`` with ``[n]_q = 1 + q + ... + q^(n-1)``.

    Computed as an explicit running sum so that q -> 1 is stable and q = 1
    yields the integers exactly.
    """
    powers = np.empty(n_max, dtype=float)
    if n_max:
        powers[0] = 1.0
        for k in range(1, n_max):
            powers[k] = powers[k - 1] * q
    out = np.zeros(n_max + 1, dtype=float)
    np.cumsum(powers, out=out[1:])
    return out


def q_bracket(n: int, q: float) -> float:
    return float(q_brackets(n, q)[n])


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Coefficients ``a_0..a_N`` of a power series truncated at order ``N``.

    ``exact`` marks a series whose coefficients above ``N`` are known to
    vanish (a polynomial); truncation-error estimates treat it as tail-free.
    """

    coeffs: np.ndarray
    exact: bool = False
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        arr = np.array(self.coeffs, dtype=complex).reshape(-1)
        if arr.size == 0:
            raise ValueError("a series needs at least one coefficient")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[complex], exact: bool = False, name: str = "") -> TruncatedSeries:
        return cls(np.asarray(list(coeffs), dtype=complex), exact=exact, name=name)

    @classmethod
    def zero(cls, order: int) -> TruncatedSeries:
        return cls(np.zeros(order + 1, dtype=complex), exact=True)

    @classmethod
    def one(cls, order: int) -> TruncatedSeries:
        return cls.monomial(0, order)

    @classmethod
    def monomial(cls, k: int, order: int, c: complex = 1.0) -> TruncatedSeries:
        arr = np.zeros(order + 1, dtype=complex)
        if k <= order:
            arr[k] = c
        return cls(arr, exact=k <= order)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @property
    def is_normalized(self) -> bool:
        return self.order >= 1 and self.coeffs[0] == 0 and self.coeffs[1] == 1

    @property
    def real(self) -> np.ndarray:
        return self.coeffs.real.copy()

    def __getitem__(self, n: int) -> complex:
        return complex(self.coeffs[n])

    def __len__(self) -> int:
        return self.coeffs.size

    def __call__(self, z: complex) -> complex:
        return series_eval(self, z)

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        return series_add(self, other)

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        return series_add(self, series_scale(other, -1.0))

    def __neg__(self) -> TruncatedSeries:
        return series_scale(self, -1.0)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        return series_scale(self, other)

    __rmul__ = __mul__

    def equals(self, other: TruncatedSeries) -> bool:
        """Exact coefficientwise equality (orders must agree)."""
        return self.order == other.order and bool(np.array_equal(self.coeffs, other.coeffs))

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.order:
            raise ValueError("cannot truncate to a higher order")
        return TruncatedSeries(self.coeffs[: order + 1], exact=False, name=self.name)

    def times_z(self) -> TruncatedSeries:
        """Multiply by ``z`` without losing the top coefficient (order grows by one)."""
        return TruncatedSeries(np.concatenate([[0.0], self.coeffs]), exact=self.exact, name=self.name)

    def to_dict(self, name: str | None = None) -> dict:
        d = {
            "name": self.name if name is None else name,
            "order": self.order,
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
        }
        if self.exact:
            d["exact"] = True
        return d

    def to_json(self, name: str | None = None) -> str:
        return json.dumps(self.to_dict(name))

    @classmethod
    def from_dict(cls, d: dict) -> TruncatedSeries:
        try:
            order = int(d["order"])
            pairs = d["coeffs"]
            coeffs = [complex(float(re), float(im)) for re, im in pairs]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed series document: {exc}") from exc
        if len(coeffs) != order + 1:
            raise ValueError(f"series declares order {order} but carries {len(coeffs)} coefficients")
        return cls.from_coeffs(coeffs, exact=bool(d.get("exact", False)), name=str(d.get("name", "")))

    @classmethod
    def from_json(cls, text: str) -> TruncatedSeries:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed series JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ValueError("series JSON must be an object")
        return cls.from_dict(doc)


def horner(coeffs: np.ndarray, z):
    """Evaluate ``sum coeffs[n] z^n`` by nested multiplication; ``z`` may be an array."""
    z = np.asarray(z, dtype=complex)
    acc = np.full(z.shape, coeffs[-1], dtype=complex)
    for c in coeffs[-2::-1]:
        acc = acc * z + c
    return acc


def series_eval(f: TruncatedSeries, z: complex) -> complex:
    if abs(z) > 1.0:
        raise ValueError(f"|z| must not exceed 1, got |z| = {abs(z)}")
    return complex(horner(f.coeffs, complex(z)))


def series_add(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    n = min(f.order, g.order)
    exact = f.exact and g.exact and f.order == g.order
    return TruncatedSeries(f.coeffs[: n + 1] + g.coeffs[: n + 1], exact=exact)


def series_scale(f: TruncatedSeries, c: complex) -> TruncatedSeries:
    return TruncatedSeries(f.coeffs * c, exact=f.exact)


def series_mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated to the smaller of the two orders."""
    n = min(f.order, g.order)
    full = np.convolve(f.coeffs[: n + 1], g.coeffs[: n + 1])
    exact = f.exact and g.exact and f.order == g.order and not np.any(full[n + 1 :])
    return TruncatedSeries(full[: n + 1], exact=exact)


def series_exp(u: TruncatedSeries) -> TruncatedSeries:
    """``exp(u)`` for ``u(0) = 0`` via ``n E_n = sum_{k=1}^n k u_k E_{n-k}``."""
    if u.coeffs[0] != 0:
        raise ValueError("series_exp requires a zero constant term")
    N = u.order
    ku = np.arange(N + 1) * u.coeffs
    E = np.zeros(N + 1, dtype=complex)
    E[0] = 1.0
    for n in range(1, N + 1):
        # sum_{k=1}^n k u_k E_{n-k}
        E[n] = np.dot(ku[1 : n + 1], E[n - 1 :: -1][:n]) / n
    return TruncatedSeries(E)


def series_dilate(f: TruncatedSeries, q: float) -> TruncatedSeries:
    """Coefficients of ``f(qz)``."""
    powers = np.power(float(q), np.arange(f.order + 1))
    return TruncatedSeries(f.coeffs * powers, exact=f.exact)


def q_difference(f: TruncatedSeries, q: float) -> TruncatedSeries:
    """Jackson q-difference ``(f(z) - f(qz)) / (z (1 - q))`` as a series of order ``N - 1``.

    The coefficient of ``z^(n-1)`` is ``a_n [n]_q``; ``q = 1`` gives the
    ordinary derivative.
    """
    q = validate_q(q)
    if f.order == 0:
        return TruncatedSeries.zero(0)
    br = q_brackets(f.order, q)
    return TruncatedSeries(f.coeffs[1:] * br[1:], exact=f.exact)


def derivative(f: TruncatedSeries) -> TruncatedSeries:
    return q_difference(f, 1.0)


def tail_bound(f: TruncatedSeries, r: float) -> float:
    """Heuristic bound ``max|a_n| r^(N+1) / (1 - r)`` on the discarded tail at radius ``r``.

    Valid only if the true coefficients stay below the largest retained one.
    """
    if not 0.0 < r < 1.0:
        raise ValueError("tail_bound needs 0 < r < 1")
    amax = float(np.max(np.abs(f.coeffs)))
    return amax * r ** (f.order + 1) / (1.0 - r)


@dataclass(frozen=True)
class DiskGrid:
    """Concentric sample circles ``z = r exp(2 pi i k / M)`` inside the unit disk."""

    radii: Sequence[float] = (0.5, 0.8, 0.95)
    angles_per_circle: int = 720

    def __post_init__(self) -> None:
        radii = tuple(float(r) for r in self.radii)
        if not radii or any(not 0.0 < r < 1.0 for r in radii):
            raise ValueError("grid radii must lie in (0, 1)")
        if int(self.angles_per_circle) < 1:
            raise ValueError("angles_per_circle must be positive")
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "angles_per_circle", int(self.angles_per_circle))

    @property
    def thetas(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.angles_per_circle) / self.angles_per_circle

    def points(self) -> np.ndarray:
        """Sample points, shape ``(len(radii), M)``."""
        r = np.asarray(self.radii)[:, None]
        return r * np.exp(1j * self.thetas)[None, :]

    def step(self, r: float) -> float:
        """Arc length between neighbouring samples on the circle of radius ``r``."""
        return 2.0 * math.pi * r / self.angles_per_circle

    @property
    def max_radius(self) -> float:
        return max(self.radii)
