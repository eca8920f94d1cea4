import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qconvex.series import (
    DiskGrid,
    TruncatedSeries,
    derivative,
    horner,
    q_bracket,
    q_brackets,
    q_difference,
    series_add,
    series_dilate,
    series_eval,
    series_exp,
    series_mul,
    series_scale,
    tail_bound,
    validate_q,
)

finite = st.floats(-2.0, 2.0, allow_nan=False)
qs = st.floats(0.05, 0.99)


def coeff_lists(order=12):
    return st.lists(finite, min_size=order + 1, max_size=order + 1)


def rand_series(values, exact=False):
    return TruncatedSeries.from_coeffs(values, exact=exact)


# --- q-brackets -------------------------------------------------------------


def test_q_bracket_closed_form():
    q = 0.5
    br = q_brackets(20, q)
    n = np.arange(21)
    np.testing.assert_allclose(br, (1 - q**n) / (1 - q), rtol=1e-15)
    assert br[0] == 0.0 and br[1] == 1.0


def test_q_bracket_is_integer_at_one():
    assert np.array_equal(q_brackets(50, 1.0), np.arange(51, dtype=float))
    assert q_bracket(7, 1.0) == 7.0


def test_q_bracket_stable_near_one():
    # the closed form (1-q^n)/(1-q) loses digits here; the running sum does not
    q = 1 - 1e-12
    assert abs(q_bracket(10, q) - 10.0) < 1e-9


@pytest.mark.parametrize("bad", [0.0, -0.1, 1.5, float("nan"), float("inf")])
def test_validate_q_rejects(bad):
    with pytest.raises(ValueError):
        validate_q(bad)


def test_validate_q_one_and_floor():
    assert validate_q(1.0) == 1.0
    with pytest.raises(ValueError):
        validate_q(1.0, allow_one=False)
    assert validate_q(1e-6, floor=1e-6) == 1e-6
    with pytest.raises(ValueError):
        validate_q(1e-7, floor=1e-6)


# --- the series type --------------------------------------------------------


def test_coefficients_are_immutable():
    f = rand_series([0, 1, 2])
    with pytest.raises(ValueError):
        f.coeffs[1] = 5
    g = f + f
    assert f[2] == 2 and g[2] == 4


def test_normalization_flag():
    assert rand_series([0, 1, 3]).is_normalized
    assert not rand_series([0, 2, 3]).is_normalized
    assert not rand_series([1e-300, 1, 3]).is_normalized
    assert not rand_series([0]).is_normalized


def test_empty_series_rejected():
    with pytest.raises(ValueError):
        TruncatedSeries.from_coeffs([])


def test_monomial_and_constants():
    assert TruncatedSeries.monomial(3, 5)[3] == 1
    assert TruncatedSeries.one(4)[0] == 1 and TruncatedSeries.one(4).exact
    assert not np.any(TruncatedSeries.zero(4).coeffs)


def test_eval_matches_polynomial():
    f = rand_series([1, -2, 0.5, 3])
    z = 0.3 - 0.4j
    assert series_eval(f, z) == pytest.approx(1 - 2 * z + 0.5 * z**2 + 3 * z**3, abs=1e-15)
    assert f(z) == series_eval(f, z)


def test_eval_outside_disk_raises():
    with pytest.raises(ValueError):
        series_eval(rand_series([0, 1]), 1.01)


def test_add_truncates_to_shorter():
    f = rand_series([1, 2, 3, 4])
    g = rand_series([1, 1])
    assert (f + g).equals(rand_series([2, 3]))
    assert (f - f).order == 3 and not np.any((f - f).coeffs)


def test_scale_and_negate():
    f = rand_series([0, 1, 2])
    assert (2 * f).equals(rand_series([0, 2, 4]))
    assert (-f).equals(series_scale(f, -1))


def test_mul_matches_numpy_polynomial_product():
    rng = np.random.default_rng(1)
    a, b = rng.normal(size=9), rng.normal(size=9)
    full = np.polynomial.polynomial.polymul(a, b)
    np.testing.assert_allclose(series_mul(rand_series(a), rand_series(b)).coeffs, full[:9], rtol=1e-13, atol=1e-13)


def test_mul_exactness():
    p = rand_series([1, 1], exact=True)
    assert (p * p).exact is False  # (1+z)^2 needs z^2, dropped at order 1
    p2 = rand_series([1, 1, 0], exact=True)
    assert (p2 * p2).exact and (p2 * p2).equals(rand_series([1, 2, 1]))


@given(coeff_lists(), coeff_lists())
def test_mul_commutative(a, b):
    f, g = rand_series(a), rand_series(b)
    np.testing.assert_allclose((f * g).coeffs, (g * f).coeffs, atol=1e-12)


@given(coeff_lists(8), coeff_lists(8), coeff_lists(8))
def test_mul_associative(a, b, c):
    f, g, h = rand_series(a), rand_series(b), rand_series(c)
    np.testing.assert_allclose(((f * g) * h).coeffs, (f * (g * h)).coeffs, atol=1e-9)


def test_exp_of_z_is_exponential_series():
    E = series_exp(TruncatedSeries.monomial(1, 15))
    expected = [1 / math.factorial(n) for n in range(16)]
    np.testing.assert_allclose(E.coeffs.real, expected, rtol=1e-14)


def test_exp_needs_zero_constant():
    with pytest.raises(ValueError):
        series_exp(rand_series([1, 1]))


@given(coeff_lists(10), coeff_lists(10))
def test_exp_turns_sums_into_products(a, b):
    a[0] = b[0] = 0.0
    u, v = rand_series([x / 2 for x in a]), rand_series([x / 2 for x in b])
    lhs = series_exp(u + v).coeffs
    rhs = (series_exp(u) * series_exp(v)).coeffs
    np.testing.assert_allclose(lhs, rhs, rtol=1e-9, atol=1e-9)


def test_dilate():
    f = rand_series([1, 1, 1, 1])
    np.testing.assert_array_equal(series_dilate(f, 0.5).coeffs.real, [1, 0.5, 0.25, 0.125])


# --- q-difference -----------------------------------------------------------


def test_q_difference_of_monomial():
    q = 0.3
    for n in range(1, 8):
        d = q_difference(TruncatedSeries.monomial(n, 8), q)
        assert d.order == 7
        assert d[n - 1] == pytest.approx(sum(q**k for k in range(n)), rel=1e-15)
        assert np.count_nonzero(d.coeffs) == 1


def test_q_difference_pointwise():
    # (f(z) - f(qz)) / (z (1 - q)) evaluated directly
    rng = np.random.default_rng(7)
    f = rand_series(rng.normal(size=12), exact=True)
    q, z = 0.6, 0.4 + 0.3j
    direct = (horner(f.coeffs, z) - horner(f.coeffs, q * z)) / (z * (1 - q))
    assert q_difference(f, q)(z) == pytest.approx(complex(direct), rel=1e-12)


@given(coeff_lists(), coeff_lists(), finite, qs)
def test_q_difference_linear(a, b, lam, q):
    f, g = rand_series(a), rand_series(b)
    lhs = q_difference(f + lam * g, q).coeffs
    rhs = (q_difference(f, q) + lam * q_difference(g, q)).coeffs
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_q_difference_at_one_is_derivative():
    f = rand_series([3, 1, 4, 1, 5])
    assert derivative(f).equals(rand_series([1, 8, 3, 20]))
    assert q_difference(f, 1.0).equals(derivative(f))


def test_q_difference_tends_to_derivative():
    f = rand_series(1 / np.arange(1, 20) ** 2)
    np.testing.assert_allclose(q_difference(f, 1 - 1e-9).coeffs, derivative(f).coeffs, rtol=1e-7)


def test_times_z_keeps_all_coefficients():
    f = rand_series([1, 2, 3], exact=True)
    assert f.times_z().equals(rand_series([0, 1, 2, 3])) and f.times_z().exact


def test_truncate():
    f = rand_series([1, 2, 3, 4], exact=True)
    assert f.truncate(1).equals(rand_series([1, 2])) and not f.truncate(1).exact
    with pytest.raises(ValueError):
        f.truncate(5)


# --- serialization ------------------------------------------------------------


@given(st.lists(st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False), min_size=1, max_size=20))
def test_json_round_trip_is_bit_exact(values):
    f = TruncatedSeries.from_coeffs(values, name="x")
    g = TruncatedSeries.from_json(f.to_json())
    assert g.equals(f) and g.name == "x"


def test_json_layout():
    doc = json.loads(rand_series([0, 1], exact=True).to_json(name="z"))
    assert doc == {"name": "z", "order": 1, "coeffs": [[0.0, 0.0], [1.0, 0.0]], "exact": True}


@pytest.mark.parametrize(
    "text",
    [
        "{",
        "[1, 2]",
        '{"order": 1}',
        '{"order": 2, "coeffs": [[0, 0], [1, 0]]}',
        '{"order": 1, "coeffs": [[0, 0], ["a", 0]]}',
        '{"order": 1, "coeffs": [0, 1]}',
    ],
)
def test_json_malformed(text):
    with pytest.raises(ValueError):
        TruncatedSeries.from_json(text)


# --- tail bound and grid ----------------------------------------------------


def test_tail_bound_formula():
    f = rand_series([0, 1, -3, 2])
    assert tail_bound(f, 0.5) == pytest.approx(3 * 0.5**4 / 0.5)
    with pytest.raises(ValueError):
        tail_bound(f, 1.0)


def test_tail_bound_covers_geometric_tail():
    # for 1/(1-z) truncated at N the true tail at r is r^(N+1)/(1-r): the bound is exact there
    f = rand_series(np.ones(31))
    r = 0.8
    true_tail = abs(1 / (1 - r) - f(r))
    assert true_tail <= tail_bound(f, r) * (1 + 1e-12)


def test_disk_grid():
    grid = DiskGrid()
    z = grid.points()
    assert z.shape == (3, 720)
    np.testing.assert_allclose(np.abs(z[2]), 0.95)
    assert grid.max_radius == 0.95
    assert grid.step(0.95) == pytest.approx(2 * math.pi * 0.95 / 720)
    assert np.min(np.abs(z)) > 0


@pytest.mark.parametrize("radii,angles", [((), 10), ((1.0,), 10), ((0.5,), 0), ((-0.1,), 5)])
def test_disk_grid_rejects(radii, angles):
    with pytest.raises(ValueError):
        DiskGrid(radii, angles)


def test_add_is_plain_function_too():
    f = rand_series([1, 2])
    assert series_add(f, f).equals(f + f)
