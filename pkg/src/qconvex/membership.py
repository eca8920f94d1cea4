"""Grid-sampled membership checks for S*, S*_q, K and K_q.

"For all z in the disk" is replaced by sampling concentric circles.  Every
checked quantity is the modulus (or real part) of a function analytic in the
disk, so the worst slack on a circle can only get worse as the radius grows;
the outermost circle carries most of the weight and the inner ones guard
against truncation artefacts.  ``z = 0`` is never sampled: all expressions
extend continuously there (``(z/g) D_q f -> 1``, ``f(qz)/f(z) -> q``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .series import DiskGrid, TruncatedSeries, horner, q_difference, series_dilate, tail_bound, validate_q

VANISH = 1e-12


class ReferenceNotStarlikeError(ValueError):
    """The reference function vanishes at a sample point away from the origin."""


@dataclass(frozen=True)
class CheckConfig:
    grid: DiskGrid = field(default_factory=DiskGrid)
    tol: float | None = None

    def resolve_tol(self, tail_note: float) -> float:
        if self.tol is not None:
            if self.tol < 0:
                raise ValueError("tol must be non-negative")
            return float(self.tol)
        return 10.0 * tail_note + 1e-9

    def to_dict(self) -> dict:
        return {
            "radii": list(self.grid.radii),
            "angles": self.grid.angles_per_circle,
            "tol": self.tol,
        }


@dataclass(frozen=True)
class Verdict:
    """Outcome of a grid check.

    ``holds`` is two-valued; ``inconclusive`` flags that the denominator
    vanished at a sample (reported as a failure at that point).
    """

    holds: bool
    worst_margin: float
    witness: complex
    tail_note: float
    tol: float
    check: str = ""
    inconclusive: bool = False
    config: CheckConfig = field(default_factory=CheckConfig)

    @property
    def status(self) -> str:
        if self.inconclusive:
            return "inconclusive"
        return "holds" if self.holds else "fails"

    def to_dict(self) -> dict:
        wm = self.worst_margin
        return {
            "check": self.check,
            "holds": self.holds,
            "status": self.status,
            "worst_margin": wm if math.isfinite(wm) else None,
            "witness": [self.witness.real, self.witness.imag],
            "tail_note": self.tail_note,
            "tol": self.tol,
            "config": self.config.to_dict(),
        }


def _require_normalized(f: TruncatedSeries, label: str) -> None:
    if not f.is_normalized:
        raise ValueError(f"{label} must be normalized (a_0 = 0, a_1 = 1)")


def _tail_note(series: tuple[TruncatedSeries, ...], r: float) -> float:
    notes = [tail_bound(s, r) for s in series if not s.exact]
    return max(notes, default=0.0)


def _aggregate(
    check: str,
    margins: np.ndarray,
    points: np.ndarray,
    inputs: tuple[TruncatedSeries, ...],
    cfg: CheckConfig,
    *,
    strict: bool = False,
    degenerate: np.ndarray | None = None,
    tol_scale: float = 1.0,
) -> Verdict:
    tail_note = _tail_note(inputs, cfg.grid.max_radius)
    tol = cfg.resolve_tol(tail_note) * tol_scale
    margins = np.array(margins, dtype=float)
    bad = ~np.isfinite(margins)
    if degenerate is not None:
        bad |= degenerate
    inconclusive = bool(np.any(bad))
    margins[bad] = -np.inf
    idx = np.unravel_index(int(np.argmin(margins)), margins.shape)
    worst = float(margins[idx])
    holds = (worst > tol) if strict else (worst >= -tol)
    return Verdict(
        holds=bool(holds and not inconclusive),
        worst_margin=worst,
        witness=complex(points[idx]),
        tail_note=tail_note,
        tol=tol,
        check=check,
        inconclusive=inconclusive,
        config=cfg,
    )


# Margin fields.  Each takes sample points z (any shape, z != 0) and returns
# the slack of the inequality being tested at every point.


def kq_margins(f: TruncatedSeries, g: TruncatedSeries, q: float, z: np.ndarray) -> np.ndarray:
    """``1/(1-q) - |(z/g) D_q f - 1/(1-q)|``."""
    c = 1.0 / (1.0 - q)
    w = z * horner(q_difference(f, q).coeffs, z) / horner(g.coeffs, z)
    return c - np.abs(w - c)


def kq_lemma_margins(f: TruncatedSeries, g: TruncatedSeries, q: float, z: np.ndarray) -> np.ndarray:
    """``(|g| - |g + f(qz) - f(z)|) / |g|``."""
    gz = horner(g.coeffs, z)
    num = gz + horner(series_dilate(f, q).coeffs, z) - horner(f.coeffs, z)
    return 1.0 - np.abs(num) / np.abs(gz)


def ratio_margins(f: TruncatedSeries, q: float, z: np.ndarray) -> np.ndarray:
    """``1 - |f(qz) / f(z)|``."""
    return 1.0 - np.abs(horner(series_dilate(f, q).coeffs, z) / horner(f.coeffs, z))


def classical_margins(f: TruncatedSeries, g: TruncatedSeries, z: np.ndarray) -> np.ndarray:
    """``Re(z f'(z) / g(z))``."""
    fp = horner(q_difference(f, 1.0).coeffs, z)
    return np.real(z * fp / horner(g.coeffs, z))


def _vanishing(s: TruncatedSeries, z: np.ndarray) -> np.ndarray:
    return np.abs(horner(s.coeffs, z)) < VANISH


def _reference_guard(g: TruncatedSeries, z: np.ndarray) -> None:
    bad = _vanishing(g, z)
    if np.any(bad):
        where = complex(z[np.unravel_index(int(np.argmax(bad)), bad.shape)])
        raise ReferenceNotStarlikeError(f"reference not starlike at sample z = {where}")


def check_sq_star_def(f: TruncatedSeries, q: float, cfg: CheckConfig | None = None) -> Verdict:
    """S*_q by definition: ``|(z/f) D_q f - 1/(1-q)| <= 1/(1-q)``."""
    cfg = cfg or CheckConfig()
    q = validate_q(q, allow_one=False)
    _require_normalized(f, "f")
    z = cfg.grid.points()
    degenerate = _vanishing(f, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        m = kq_margins(f, f, q, z)
    return _aggregate("sq_star_def", m, z, (f,), cfg, degenerate=degenerate)


def check_sq_star_ratio(f: TruncatedSeries, q: float, cfg: CheckConfig | None = None) -> Verdict:
    """S*_q via the ratio test ``|f(qz)/f(z)| <= 1``."""
    cfg = cfg or CheckConfig()
    q = validate_q(q, allow_one=False)
    _require_normalized(f, "f")
    z = cfg.grid.points()
    degenerate = _vanishing(f, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        m = ratio_margins(f, q, z)
    return _aggregate("sq_star_ratio", m, z, (f,), cfg, degenerate=degenerate)


def check_kq(f: TruncatedSeries, g: TruncatedSeries, q: float, cfg: CheckConfig | None = None) -> Verdict:
    """K_q with reference ``g``: ``|(z/g) D_q f - 1/(1-q)| <= 1/(1-q)``."""
    cfg = cfg or CheckConfig()
    q = validate_q(q, allow_one=False)
    _require_normalized(f, "f")
    _require_normalized(g, "g")
    z = cfg.grid.points()
    _reference_guard(g, z)
    return _aggregate("kq", kq_margins(f, g, q, z), z, (f, g), cfg)


def check_kq_lemma(f: TruncatedSeries, g: TruncatedSeries, q: float, cfg: CheckConfig | None = None) -> Verdict:
    """K_q with reference ``g`` via ``|g + f(qz) - f(z)| <= |g|``.

    The slack here equals ``(1 - q)`` times the slack of :func:`check_kq`,
    so the tolerance is scaled by the same factor.
    """
    cfg = cfg or CheckConfig()
    q = validate_q(q, allow_one=False)
    _require_normalized(f, "f")
    _require_normalized(g, "g")
    z = cfg.grid.points()
    _reference_guard(g, z)
    return _aggregate("kq_lemma", kq_lemma_margins(f, g, q, z), z, (f, g), cfg, tol_scale=1.0 - q)


def check_classical_starlike(g: TruncatedSeries, cfg: CheckConfig | None = None) -> Verdict:
    """``Re(z g'/g) > 0``; strict, so the worst margin must exceed ``tol``."""
    return _classical("classical_starlike", g, g, cfg)


def check_classical_ctc(f: TruncatedSeries, g: TruncatedSeries, cfg: CheckConfig | None = None) -> Verdict:
    """``Re(z f'/g) > 0``; strict, so the worst margin must exceed ``tol``."""
    return _classical("classical_ctc", f, g, cfg)


def _classical(check: str, f: TruncatedSeries, g: TruncatedSeries, cfg: CheckConfig | None) -> Verdict:
    cfg = cfg or CheckConfig()
    _require_normalized(f, "f")
    _require_normalized(g, "g")
    z = cfg.grid.points()
    _reference_guard(g, z)
    inputs = (f,) if f is g else (f, g)
    return _aggregate(check, classical_margins(f, g, z), z, inputs, cfg, strict=True)


def witnesses_agree(a: Verdict, b: Verdict, grid: DiskGrid) -> bool:
    """True if two witnesses lie on the same circle within one angular step."""
    ra, rb = abs(a.witness), abs(b.witness)
    if not math.isclose(ra, rb, rel_tol=1e-9, abs_tol=1e-12):
        return False
    return abs(a.witness - b.witness) <= grid.step(ra) * (1 + 1e-9)


CHECKS = {
    "sq_star_def": False,
    "sq_star_ratio": False,
    "kq": True,
    "kq_lemma": True,
    "classical_starlike": False,
    "classical_ctc": True,
}
"""Check name -> whether it takes a reference ``g``."""


def run_check(check: str, f: TruncatedSeries, g: TruncatedSeries | None, q: float, cfg: CheckConfig | None = None) -> Verdict:
    if check not in CHECKS:
        raise ValueError(f"unknown check {check!r}; expected one of {', '.join(CHECKS)}")
    if CHECKS[check] and g is None:
        raise ValueError(f"check {check!r} needs a reference g")
    if check == "sq_star_def":
        return check_sq_star_def(f, q, cfg)
    if check == "sq_star_ratio":
        return check_sq_star_ratio(f, q, cfg)
    if check == "kq":
        return check_kq(f, g, q, cfg)
    if check == "kq_lemma":
        return check_kq_lemma(f, g, q, cfg)
    if check == "classical_starlike":
        return check_classical_starlike(f, cfg)
    return check_classical_ctc(f, g, cfg)


def margin_field(check: str, f: TruncatedSeries, g: TruncatedSeries | None, q: float, z: np.ndarray) -> np.ndarray:
    """The per-sample slack a check aggregates (non-finite where a denominator vanishes)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        if check == "sq_star_def":
            return kq_margins(f, f, q, z)
        if check == "sq_star_ratio":
            return ratio_margins(f, q, z)
        if check == "kq":
            return kq_margins(f, g, q, z)
        if check == "kq_lemma":
            return kq_lemma_margins(f, g, q, z)
        if check == "classical_starlike":
            return classical_margins(f, f, z)
        if check == "classical_ctc":
            return classical_margins(f, g, z)
    raise ValueError(f"unknown check {check!r}")
