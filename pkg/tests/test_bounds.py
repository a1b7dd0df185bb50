"""Path-counting bound, hand-rolled Bessel function, and the NN cone."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from magnonchain import bounds, ionchain, magnon

J0 = 2 * np.pi * 30.0


# ---------------------------------------------------------------------------
# path counting


def test_path_count_by_hand():
    assert bounds.path_count(0, 0) == 1
    assert bounds.path_count(3, 3) == 1          # only the direct walk
    assert bounds.path_count(4, 2) == 4          # C(4, 1)
    assert bounds.path_count(6, 0) == 20         # C(6, 3)
    assert bounds.path_count(5, 2) == 0          # parity mismatch
    assert bounds.path_count(2, 5) == 0          # too few steps
    with pytest.raises(ValueError):
        bounds.path_count(-1, 0)


def test_path_count_total_over_distances():
    # summing C(m, (m-d)/2) over all reachable d (signed) gives 2^m
    m = 9
    total = bounds.path_count(m, 0) + 2 * sum(bounds.path_count(m, d)
                                              for d in range(1, m + 1))
    # d = 0 unreachable for odd m; count signed displacements
    assert total == 2 ** m


# ---------------------------------------------------------------------------
# Bessel function vs scipy


@pytest.mark.parametrize("order", [0, 1, 2, 5, 10])
def test_bessel_series_region_against_scipy(order):
    for x in np.linspace(0.0, 90.0, 19):
        mine = bounds.modified_bessel_i(order, float(x))
        ref = float(special.iv(order, x))
        assert mine == pytest.approx(ref, rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("x", [150.0, 400.0, 700.0])
def test_bessel_asymptotic_region_against_scipy(x):
    for order in (0, 1, 3, 8):
        mine = bounds.modified_bessel_i(order, x)
        ref = float(special.iv(order, x))
        assert mine == pytest.approx(ref, rel=1e-12)


def test_bessel_scaled_survives_overflow():
    # e^-x I_0(x) stays finite where the unscaled value overflows
    assert np.isinf(bounds.modified_bessel_i(0, 800.0))
    scaled = bounds.modified_bessel_i(0, 800.0, scaled=True)
    assert scaled == pytest.approx(float(special.ive(0, 800.0)), rel=1e-12)


def test_bessel_rejects_bad_arguments():
    with pytest.raises(ValueError):
        bounds.modified_bessel_i(-1, 1.0)
    with pytest.raises(ValueError):
        bounds.modified_bessel_i(0, -1.0)


@settings(deadline=None, max_examples=40)
@given(order=st.integers(min_value=0, max_value=12),
       # scipy.special.iv underflows to 0 (or NaN on subnormals) once the
       # result drops below ~1e-270, so keep x out of that corner
       x=st.floats(min_value=1e-18, max_value=300.0))
def test_bessel_matches_scipy_everywhere(order, x):
    assert bounds.modified_bessel_i(order, x) == pytest.approx(
        float(special.iv(order, x)), rel=1e-11, abs=1e-300)


def test_bessel_tiny_argument_leading_term():
    # below scipy's underflow threshold the series still returns the
    # leading Taylor term (x/2)^n / n!
    assert bounds.modified_bessel_i(7, 1e-40) == pytest.approx(
        1.5500992063492054e-286, rel=1e-12)
    assert bounds.modified_bessel_i(0, 1e-200) == pytest.approx(1.0, rel=1e-15)


# ---------------------------------------------------------------------------
# series vs closed form


def test_series_equals_bessel_closed_form():
    g = 1.0
    for d in range(0, 11):
        for x in np.linspace(0.0, 8.0, 9):
            t = x / 4.0
            s = bounds.lr_bound_series(d, t, g, m_max=400, rtol=1e-14)
            b = bounds.lr_bound_bessel(d, t, g)
            assert math.isclose(s.value, b, rel_tol=1e-10, abs_tol=1e-300)


def test_series_value_at_zero_time():
    # only the m = 0 term survives: F(0, 0) = 2, F(d>0, 0) = 0
    assert bounds.lr_bound_series(0, 0.0, 5.0).value == 2.0
    assert bounds.lr_bound_series(3, 0.0, 5.0).value == 0.0


def test_series_reports_truncation():
    s = bounds.lr_bound_series(1, 0.01, J0)
    assert s.remainder < 1e-12
    assert s.terms_used >= 1
    with pytest.raises(bounds.TruncationError):
        bounds.lr_bound_series(0, 10.0, J0, m_max=10)


def test_series_rejects_bad_arguments():
    with pytest.raises(ValueError):
        bounds.lr_bound_series(-1, 1.0, 1.0)
    with pytest.raises(ValueError):
        bounds.lr_bound_series(5, 1.0, 1.0, m_max=3)


@settings(deadline=None, max_examples=30)
@given(d=st.integers(min_value=0, max_value=8),
       t=st.floats(min_value=1e-6, max_value=0.02))
def test_bound_decreases_with_distance(d, t):
    # deeper into the cone the bound can only shrink
    assert bounds.lr_bound_bessel(d + 1, t, J0) <= bounds.lr_bound_bessel(d, t, J0)


@settings(deadline=None, max_examples=30)
@given(d=st.integers(min_value=0, max_value=6))
def test_bound_grows_with_time(d):
    ts = np.linspace(1e-4, 0.03, 10)
    vals = [bounds.lr_bound_bessel(d, t, J0) for t in ts]
    assert all(a <= b for a, b in zip(vals, vals[1:]))


# ---------------------------------------------------------------------------
# NN cone reference


def test_nn_lightcone_of_uniform_chain():
    J = ionchain.nearest_neighbour_coupling(9, J0)
    params = bounds.nn_lightcone(J)
    assert params.g == pytest.approx(J0)
    assert params.jbar == pytest.approx(J0)
    spec = magnon.diagonalize_magnons(J)
    assert params.v == pytest.approx(magnon.max_group_velocity(spec), rel=1e-12)


def test_nn_lightcone_uses_mean_bond_of_nonuniform_chain():
    J = ionchain.power_law_coupling(9, 1.5, J0)
    params = bounds.nn_lightcone(J)
    assert params.jbar == pytest.approx(J0)      # power law: first diagonal is flat
    assert params.g == pytest.approx(J0)
    assert params.mu == 1.0 and params.C == 1.0


def test_cone_arrival_times():
    params = bounds.LightConeParams(g=1.0, v=200.0, jbar=1.0)
    np.testing.assert_allclose(bounds.cone_arrival_times(params, [1, 2, 4]),
                               [0.005, 0.01, 0.02])
    frozen = bounds.LightConeParams(g=1.0, v=0.0, jbar=1.0)
    assert np.all(np.isinf(bounds.cone_arrival_times(frozen, [1, 2])))
