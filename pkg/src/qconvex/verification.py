"""Test corpus and the end-to-end verification suite behind ``qconvex verify``."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import bounds, criteria, membership
from .membership import CheckConfig, Verdict
from .qspecial import (
    CATALOG_IDS,
    HypergeometricSpec,
    friedman_catalog,
    heine_phi,
    kq_coeffs_recurrence,
    kq_series,
    psi_series,
    quantum_dilog_scaled,
)
from .series import TruncatedSeries

# Catalog references are built at this order regardless of the working
# order: at r = 0.95 their truncation error is then below 1e-18.
REFERENCE_ORDER = 1024

LIMIT_EPS = 1e-6
LIMIT_RTOL = 1e-3


def reference(tag: str, order: int = REFERENCE_ORDER) -> TruncatedSeries:
    return friedman_catalog(tag, max(order, REFERENCE_ORDER))


def bad_quadratic() -> TruncatedSeries:
    """``z + 2 z^2``: vanishes at ``z = -1/2`` and is in none of the classes."""
    return TruncatedSeries.from_coeffs([0, 1, 2], exact=True, name="z+2z^2")


def identity_series() -> TruncatedSeries:
    return TruncatedSeries.from_coeffs([0, 1], exact=True, name="z")


# --- sequences certified by a coefficient criterion -------------------------


def _plain(B: Callable[[np.ndarray], np.ndarray]) -> Callable[[float, int], np.ndarray]:
    def build(q: float, order: int) -> np.ndarray:
        n = np.arange(order + 1)
        vals = np.zeros(order + 1)
        vals[1:] = B(n[1:])
        return criteria.sequence_from_plain(vals, q)

    return build


def _hexic_decaying(q: float, order: int) -> np.ndarray:
    # B_{n+1} = B_n - B_{n-1} + c_n with c_n = -2^-n; partial sums of c fall from 0 to -1
    B = np.zeros(order + 1)
    B[1] = 1.0
    for n in range(1, order):
        B[n + 1] = B[n] - B[n - 1] - 2.0 ** (-n)
    return criteria.sequence_from_plain(B, q)


def _koebe_harmonic(q: float, order: int) -> np.ndarray:
    return criteria.sequence_from_consecutive_diff(1.0 / (np.arange(order) + 1.0), q)


def _cayley(q: float, order: int) -> np.ndarray:
    A = np.ones(order + 1)
    A[0] = 0.0
    return A


@dataclass(frozen=True)
class CertifiedCase:
    label: str
    criterion: str
    variant: str
    build: Callable[[float, int], np.ndarray]

    def run(self, q: float, order: int) -> criteria.CriterionResult:
        return criteria.CRITERIA[self.criterion](self.build(q, order), q, self.variant)


CERTIFIED_CORPUS = (
    CertifiedCase("(1-q)Li2(z;q)", "sum_halfplane", "sum", _plain(lambda n: 1.0 / n)),
    CertifiedCase("(1-q)Li2(z;q)", "monotone_halfplane", "chain", _plain(lambda n: 1.0 / n)),
    CertifiedCase("Psi(q;z)", "sum_halfplane", "sum", _plain(lambda n: np.ones_like(n, dtype=float))),
    CertifiedCase("B_n = 2 - 1/n", "monotone_halfplane", "chain", _plain(lambda n: 2.0 - 1.0 / n)),
    CertifiedCase("z/(1-z)", "koebe", "chain", _cayley),
    CertifiedCase("B_n = 1/(n+1) (consecutive)", "koebe", "chain", _koebe_harmonic),
    CertifiedCase("B_n = 1/(n+1) (consecutive)", "koebe", "sum", _koebe_harmonic),
    CertifiedCase("odd B = 1/n", "odd_lemniscate", "chain", _plain(lambda n: np.where(n % 2 == 1, 1.0 / n, 0.0))),
    CertifiedCase("z", "odd_lemniscate", "sum", _plain(lambda n: (n == 1).astype(float))),
    CertifiedCase("B = 1,0,1,0,...", "two_step", "sum", _plain(lambda n: (n % 2 == 1).astype(float))),
    CertifiedCase("B = 1,0,1,0,...", "two_step", "chain", _plain(lambda n: (n % 2 == 1).astype(float))),
    CertifiedCase("z", "two_step", "sum", _plain(lambda n: (n == 1).astype(float))),
    CertifiedCase("B period 6", "hexic", "sum", _plain(lambda n: np.array([0, 1, 1, 0, -1, -1])[n % 6].astype(float))),
    CertifiedCase("hexic c_n = -2^-n", "hexic", "chain", _hexic_decaying),
    CertifiedCase("hexic c_n = -2^-n", "hexic", "sum", _hexic_decaying),
)


def series_from_sequence(A: np.ndarray, exact: bool = False, name: str = "") -> TruncatedSeries:
    return TruncatedSeries(np.asarray(A, dtype=float), exact=exact, name=name)


# --- (f, g) pairs for verifier cross-checks --------------------------------


def membership_corpus(q: float, order: int) -> list[tuple[str, TruncatedSeries, TruncatedSeries]]:
    """At least twelve ``(label, f, g)`` pairs covering every catalog reference."""
    fs = [
        identity_series(),
        bad_quadratic(),
        quantum_dilog_scaled(q, order),
        psi_series(q, order),
        friedman_catalog("cayley_plus", order),
    ]
    cases = []
    for i, tag in enumerate(CATALOG_IDS):
        f = fs[i % len(fs)]
        cases.append((f"{f.name or 'f'} | {tag}", f, reference(tag)))
    g_cay, g_koebe = reference("cayley_plus"), reference("koebe_plus")
    cases += [
        ("z+2z^2 | cayley_plus", bad_quadratic(), g_cay),
        ("psi | cayley_plus", psi_series(q, order), g_cay),
        ("(1-q)Li2 | koebe_plus", quantum_dilog_scaled(q, order), g_koebe),
        ("z/(1-z) | koebe_plus", friedman_catalog("cayley_plus", order), g_koebe),
        ("z/(1-z)^2 | koebe_plus", friedman_catalog("koebe_plus", order), g_koebe),
    ]
    return cases


def equivalent_verdicts(a: Verdict, b: Verdict, f, g, q: float, grid, rtol: float = 1e-9) -> bool:
    """Same verdict, and witnesses within one grid step or tied minimisers of the lemma field."""
    if a.holds != b.holds:
        return False
    if membership.witnesses_agree(a, b, grid):
        return True
    at_a = float(membership.kq_lemma_margins(f, g, q, np.array([a.witness]))[0])
    return abs(at_a - b.worst_margin) <= rtol * max(1.0, abs(b.worst_margin))


def on_negative_axis(v: Verdict, grid) -> bool:
    return v.witness.real < 0 and abs(v.witness.imag) <= grid.step(abs(v.witness))


# --- the suite --------------------------------------------------------------


@dataclass
class CheckOutcome:
    name: str
    status: str  # pass | fail | expected-mismatch
    detail: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status in ("pass", "expected-mismatch")

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": self.detail}


def _outcome(name: str, passed: bool, detail: dict | None = None, **extra) -> CheckOutcome:
    return CheckOutcome(name, "pass" if passed else "fail", {**(detail or {}), **extra})


def _rel_err(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def run_suite(q: float = 0.5, order: int = 64, cfg: CheckConfig | None = None) -> list[CheckOutcome]:
    cfg = cfg or CheckConfig()
    grid = cfg.grid
    out: list[CheckOutcome] = []
    # membership checks run on long truncations so the tail tolerance stays negligible
    deep = max(order, REFERENCE_ORDER)

    n_max = min(50, order)
    rec = kq_coeffs_recurrence(q, n_max)[1:]
    ser = kq_series(q, n_max).coeffs.real[1:]
    err = _rel_err(rec, ser)
    out.append(_outcome("kq_recurrence_vs_exp", err <= 1e-10, max_rel_err=err, n_max=n_max))

    psi = psi_series(q, order)
    zphi = heine_phi(HypergeometricSpec(q, q, q * q, q, order - 1)).times_z()
    dev = float(np.max(np.abs(psi.coeffs - zphi.coeffs)))
    out.append(_outcome("psi_vs_z_heine", dev <= 1e-14, max_deviation=dev))

    s1 = bounds.verify_series1_identity(q, order)
    out.append(_outcome("series1_identity", s1.first_mismatch is None, s1.to_dict()))
    for rep in bounds.verify_identity_corollaries(q, order):
        if rep.expected_mismatch:
            status = "expected-mismatch" if rep.first_mismatch is not None else "fail"
            out.append(CheckOutcome(f"heine_identity {rep.name}", status, rep.to_dict()))
        else:
            out.append(_outcome(f"heine_identity {rep.name}", rep.first_mismatch is None, rep.to_dict()))

    q_lim = 1.0 - LIMIT_EPS
    worst = 0.0
    for tag in bounds.CLASS_TAGS:
        if tag == "sq_cn":
            continue
        for n in range(2, 21):
            c = bounds.classical_bound(tag, n)
            worst = max(worst, abs(bounds.bound_value(tag, n, q_lim) - c) / c)
    out.append(_outcome("classical_limits", worst <= LIMIT_RTOL, max_rel_err=worst, eps=LIMIT_EPS))

    A = np.array([bounds.sq_product_bound(n, q) for n in range(2, 201)])
    rad = bounds.radius_estimate(A)
    target = q / (q + 1 - q * q)
    out.append(_outcome("sq_radius", abs(rad - target) <= 0.01 * target, estimate=rad, target=target))

    L = quantum_dilog_scaled(q, deep)
    B = criteria.criterion_sequence(L.coeffs, q).values
    b_err = float(np.max(np.abs(B[1:] - 1.0 / np.arange(1, deep + 1))))
    mono = criteria.crit_monotone_halfplane(L.coeffs, q)
    v = membership.check_kq(L, reference("cayley_plus"), q, cfg)
    out.append(
        _outcome(
            "quantum_dilog_in_Kq",
            b_err <= 1e-14 and mono.satisfied and v.holds,
            b_minus_1_over_n=b_err,
            criterion=mono.to_dict(),
            verdict=v.to_dict(),
        )
    )

    star = {tag: membership.check_classical_starlike(reference(tag), cfg) for tag in CATALOG_IDS}
    out.append(
        _outcome(
            "catalog_starlike",
            all(v.holds for v in star.values()),
            worst_margins={t: v.worst_margin for t, v in star.items()},
        )
    )

    f = bad_quadratic()
    vr = membership.check_sq_star_ratio(f, q, cfg)
    vk = membership.check_kq(f, reference("cayley_plus"), q, cfg)
    out.append(
        _outcome(
            "negative_controls",
            not vr.holds and not vk.holds and on_negative_axis(vr, grid) and on_negative_axis(vk, grid),
            ratio=vr.to_dict(),
            kq=vk.to_dict(),
        )
    )

    rows, agree = [], True
    for label, fc, gc in membership_corpus(q, deep):
        a = membership.check_kq(fc, gc, q, cfg)
        b = membership.check_kq_lemma(fc, gc, q, cfg)
        same = equivalent_verdicts(a, b, fc, gc, q, grid)
        agree &= same
        rows.append({"case": label, "kq": a.holds, "lemma": b.holds, "kq_margin": a.worst_margin,
                     "lemma_margin": b.worst_margin, "tol": a.tol, "agree": same})
    out.append(_outcome("kq_lemma_equivalence", agree and len(rows) >= 12, cases=rows))

    rows, ok = [], True
    for case in CERTIFIED_CORPUS:
        res = case.run(q, deep)
        fc = series_from_sequence(case.build(q, deep), name=case.label)
        v = membership.check_kq(fc, reference(res.certifies), q, cfg)
        good = res.satisfied and v.holds
        ok &= good
        rows.append({"case": case.label, "criterion": case.criterion, "variant": case.variant,
                     "satisfied": res.satisfied, "kq_holds": v.holds, "worst_margin": v.worst_margin, "tol": v.tol})
    out.append(_outcome("criteria_imply_membership", ok, cases=rows))

    return out


def suite_passed(outcomes: list[CheckOutcome]) -> bool:
    return all(o.ok for o in outcomes)
