import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qconvex import membership
from qconvex.membership import (
    CheckConfig,
    ReferenceNotStarlikeError,
    check_classical_ctc,
    check_classical_starlike,
    check_kq,
    check_kq_lemma,
    check_sq_star_def,
    check_sq_star_ratio,
    kq_lemma_margins,
    kq_margins,
)
from qconvex.qspecial import CATALOG_IDS, kq_series, quantum_dilog_scaled
from qconvex.series import DiskGrid, TruncatedSeries
from qconvex.verification import (
    REFERENCE_ORDER,
    bad_quadratic,
    equivalent_verdicts,
    identity_series,
    membership_corpus,
    on_negative_axis,
    reference,
)

CFG = CheckConfig()


def test_identity_in_sq_star_both_ways():
    for q in (0.2, 0.5, 0.9):
        v = check_sq_star_def(identity_series(), q)
        assert v.holds
        # |1 - c| = q/(1-q), so the slack is exactly 1
        assert v.worst_margin == pytest.approx(1.0)
        r = check_sq_star_ratio(identity_series(), q)
        assert r.holds and r.worst_margin == pytest.approx(1 - q)


def test_kq_in_sq_star():
    k = kq_series(0.5, 128)
    d = check_sq_star_def(k, 0.5, CFG)
    r = check_sq_star_ratio(k, 0.5, CFG)
    assert d.holds and r.holds
    assert d.worst_margin > 0 and r.worst_margin > 0


def test_negative_control_ratio_hand_value():
    # at z = -0.55: f(qz)/f(z) = q (1 - 2 q r)/(1 - 2 r) with r = 0.55 -> magnitude 2.25
    f, q = bad_quadratic(), 0.5
    z = np.array([-0.55])
    ratio = abs(f(q * z[0]) / f(z[0]))
    assert ratio == pytest.approx(2.25)
    assert membership.ratio_margins(f, q, z)[0] == pytest.approx(1 - 2.25)
    v = check_sq_star_ratio(f, q)
    assert not v.holds and on_negative_axis(v, CFG.grid)


def test_negative_control_ratio_fails_without_sampling_the_zero():
    # 719 angles miss z = -1/2 exactly; its neighbours still fail with finite slack
    v = check_sq_star_ratio(bad_quadratic(), 0.5, CheckConfig(DiskGrid((0.5, 0.8, 0.95), 719)))
    assert not v.holds and not v.inconclusive and math.isfinite(v.worst_margin)
    assert abs(v.witness + 0.5) < 0.01


def test_negative_control_def_fails_on_negative_axis():
    v = check_sq_star_def(bad_quadratic(), 0.5)
    assert not v.holds and on_negative_axis(v, CFG.grid)
    # f vanishes at -1/2, which is a sample point of the inner circle
    assert v.inconclusive and v.status == "inconclusive"
    assert v.witness == pytest.approx(-0.5)


def test_negative_control_def_failure_comes_from_the_zero():
    # z D_q f / f = (1 + 3z)/(1 + 2z) at q = 1/2 blows up at the zero z = -1/2;
    # at z = -0.55 it equals 6.5, slack 2 - 4.5
    f = bad_quadratic()
    v = check_sq_star_def(f, 0.5, CheckConfig(DiskGrid((0.55, 0.8, 0.95), 720)))
    assert not v.holds and not v.inconclusive
    assert v.witness == pytest.approx(-0.55)
    assert v.worst_margin == pytest.approx(-2.5)
    # away from the zero the inequality is satisfied: at -0.95 the slack is 2 - |37/18 - 2|
    far = check_sq_star_def(f, 0.5, CheckConfig(DiskGrid((0.8, 0.95), 720)))
    assert far.holds
    assert kq_margins(f, f, 0.5, np.array([-0.95]))[0] == pytest.approx(2 - 1 / 18)


def test_negative_control_kq_hand_value():
    # z D_q f / g = (1 + 3z)(1 - z) at q = 1/2; at z = -0.95 that is -1.85 * 1.95
    f, q = bad_quadratic(), 0.5
    g = reference("cayley_plus")
    v = check_kq(f, g, q)
    w = (1 - 3 * 0.95) * 1.95
    assert not v.holds
    assert v.witness == pytest.approx(-0.95)
    assert v.worst_margin == pytest.approx(2 - abs(w - 2), rel=1e-12)


def test_quantum_dilog_in_kq():
    for q in (0.3, 0.5, 0.7):
        L = quantum_dilog_scaled(q, REFERENCE_ORDER)
        g = reference("cayley_plus")
        v = check_kq(L, g, q)
        w = check_kq_lemma(L, g, q)
        assert v.holds and w.holds
        assert v.worst_margin > 0.1
        assert v.tol < 1e-8


def test_lemma_margin_is_scaled_kq_margin():
    rng = np.random.default_rng(3)
    q = 0.4
    z = CFG.grid.points()
    for tag in CATALOG_IDS:
        f = TruncatedSeries.from_coeffs(np.concatenate([[0, 1], rng.normal(scale=0.2, size=30)]))
        g = reference(tag, 64)
        np.testing.assert_allclose(kq_lemma_margins(f, g, q, z), (1 - q) * kq_margins(f, g, q, z), atol=1e-10)


def test_corpus_equivalence():
    q = 0.5
    corpus = membership_corpus(q, REFERENCE_ORDER)
    assert len(corpus) >= 12
    assert {g.name for _, _, g in corpus} >= set(CATALOG_IDS)
    for label, f, g in corpus:
        a, b = check_kq(f, g, q), check_kq_lemma(f, g, q)
        assert a.holds == b.holds, label
        assert equivalent_verdicts(a, b, f, g, q, CFG.grid), label


@pytest.mark.parametrize("q", [0.2, 0.8])
def test_corpus_equivalence_other_q(q):
    for label, f, g in membership_corpus(q, REFERENCE_ORDER):
        a, b = check_kq(f, g, q), check_kq_lemma(f, g, q)
        assert equivalent_verdicts(a, b, f, g, q, CFG.grid), label


def test_limit_consistency_with_classical():
    q = 1 - 1e-4
    for label, f, g in membership_corpus(q, REFERENCE_ORDER):
        assert check_kq(f, g, q).holds == check_classical_ctc(f, g).holds, label


def test_class_chain_sq_star_implies_kq_with_g_equal_f():
    q = 0.5
    candidates = [identity_series(), kq_series(q, 128), quantum_dilog_scaled(q, 256), bad_quadratic()]
    candidates += [reference(t, 256) for t in CATALOG_IDS]
    for f in candidates:
        if check_sq_star_def(f, q).holds:
            assert check_kq(f, f, q).holds, f.name


@given(st.sampled_from(CATALOG_IDS), st.floats(0.1, 0.9))
def test_monotone_in_radius(tag, q):
    f = quantum_dilog_scaled(q, 256)
    g = reference(tag, 256)
    outer = DiskGrid((0.95,), 360)
    inner = DiskGrid((0.5,), 360)
    for margins in (
        lambda z: kq_margins(f, g, q, z),
        lambda z: membership.classical_margins(g, g, z),
    ):
        assert np.min(margins(outer.points())) <= np.min(margins(inner.points())) + 1e-12


def test_catalog_classically_starlike():
    for tag in CATALOG_IDS:
        v = check_classical_starlike(reference(tag))
        assert v.holds, tag
        assert v.worst_margin > v.tol


def test_koebe_starlike_margin():
    v = check_classical_starlike(reference("koebe_plus"))
    # Re((1+z)/(1-z)) is smallest at z = -r: (1-r)/(1+r)
    assert v.worst_margin == pytest.approx(0.05 / 1.95, rel=1e-9)


def test_classical_ctc_negative_control():
    v = check_classical_ctc(bad_quadratic(), reference("cayley_plus"))
    # z f'/g = (1+4z)(1-z); at z = -0.95 this is -2.8 * 1.95
    assert not v.holds
    assert v.worst_margin == pytest.approx(-2.8 * 1.95)


def test_classical_check_is_strict():
    # f = z, g = z/(1-z): Re(1 - z) > 0 but the margin at r = 0.95 is only 0.05
    f, g = identity_series(), reference("cayley_plus")
    assert check_classical_ctc(f, g).holds
    assert not check_classical_ctc(f, g, CheckConfig(tol=0.06)).holds


def test_tolerance_rule():
    f, g = identity_series(), reference("cayley_plus")
    v = check_kq(f, g, 0.5)
    assert v.tol == pytest.approx(1e-9, rel=1e-6)
    w = check_kq(f, g, 0.5, CheckConfig(tol=0.25))
    assert w.tol == 0.25
    with pytest.raises(ValueError):
        check_kq(f, g, 0.5, CheckConfig(tol=-1))


def test_holds_iff_margin_above_minus_tol():
    f, q = bad_quadratic(), 0.5
    g = reference("cayley_plus")
    v = check_kq(f, g, q)
    loose = check_kq(f, g, q, CheckConfig(tol=-v.worst_margin))
    tight = check_kq(f, g, q, CheckConfig(tol=-v.worst_margin * (1 - 1e-9)))
    assert loose.holds and not tight.holds


def test_short_truncation_widens_tolerance():
    q = 0.5
    v64 = check_kq(quantum_dilog_scaled(q, 64), reference("cayley_plus"), q)
    # max |a_n| = a_1 = 1 for both inputs
    assert v64.tail_note == pytest.approx(0.95**65 / 0.05, rel=1e-12)
    assert v64.tol == pytest.approx(10 * v64.tail_note + 1e-9)


def test_reference_must_not_vanish():
    with pytest.raises(ReferenceNotStarlikeError):
        check_kq(identity_series(), bad_quadratic(), 0.5)
    with pytest.raises(ReferenceNotStarlikeError):
        check_classical_ctc(identity_series(), bad_quadratic())


def test_inputs_must_be_normalized():
    f = TruncatedSeries.from_coeffs([0, 2, 1])
    with pytest.raises(ValueError):
        check_sq_star_def(f, 0.5)
    with pytest.raises(ValueError):
        check_kq(identity_series(), f, 0.5)
    with pytest.raises(ValueError):
        check_kq(identity_series(), identity_series(), 1.0)


def test_verdict_json():
    v = check_sq_star_def(bad_quadratic(), 0.5)
    doc = json.loads(json.dumps(v.to_dict(), allow_nan=False))
    assert set(doc) >= {"holds", "worst_margin", "witness", "tail_note", "config"}
    assert doc["worst_margin"] is None and doc["status"] == "inconclusive"
    assert doc["config"]["radii"] == [0.5, 0.8, 0.95]
    ok = check_kq(identity_series(), identity_series(), 0.5).to_dict()
    assert ok["holds"] is True and math.isfinite(ok["worst_margin"])


def test_run_check_dispatch():
    f, g = identity_series(), reference("cayley_plus")
    assert membership.run_check("kq", f, g, 0.5).check == "kq"
    assert membership.run_check("classical_starlike", g, None, 0.5).holds
    with pytest.raises(ValueError):
        membership.run_check("kq", f, None, 0.5)
    with pytest.raises(ValueError):
        membership.run_check("nope", f, g, 0.5)
