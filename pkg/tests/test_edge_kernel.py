import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from edgecalc.edge_kernel import (BesselHalfOrder, Kind, bessel_half, bessel_half_jet,
                                  exit_symbols, fit_small_r_exponent, fredholm_data, gamma_grid,
                                  is_fredholm_weight, large_r_class_numeric, membership_decide,
                                  membership_exponent, membership_quadrature, ode_residual,
                                  radial_residual, radial_solution)
from edgecalc.errors import NonpositiveArgument, OrderOverflow, PreconditionError, TruncationBound
from edgecalc.symbols import EdgeSymbolParams


def test_reference_values():
    assert bessel_half(BesselHalfOrder(0, Kind.K), 1.0) == pytest.approx(0.46106850444789454, rel=1e-15)
    assert bessel_half(BesselHalfOrder(0, Kind.I_PLUS), 1.0) == pytest.approx(
        math.sqrt(2 / math.pi) * math.sinh(1.0), rel=1e-15)
    assert bessel_half(BesselHalfOrder(0, Kind.I_MINUS), 1.0) == pytest.approx(
        math.sqrt(2 / math.pi) * math.cosh(1.0), rel=1e-15)


@pytest.mark.parametrize("l", [0, 1, 2, 5, 10, 20])
@pytest.mark.parametrize("z", [0.05, 0.5, 1.0, 5.0, 30.0])
def test_against_scipy(l, z):
    nu = l + 0.5
    assert bessel_half(BesselHalfOrder(l, Kind.K), z) == pytest.approx(special.kv(nu, z), rel=1e-12)
    assert bessel_half(BesselHalfOrder(l, Kind.I_PLUS), z) == pytest.approx(special.iv(nu, z), rel=1e-12)
    assert bessel_half(BesselHalfOrder(l, Kind.I_MINUS), z) == pytest.approx(special.iv(-nu, z), rel=1e-12)


def test_jet_against_scipy_derivatives():
    for l in (0, 3, 7):
        for z in (0.3, 2.0, 9.0):
            w, d1, d2 = bessel_half_jet(BesselHalfOrder(l, Kind.K), z)
            assert d1 == pytest.approx(special.kvp(l + 0.5, z, 1), rel=1e-12)
            assert d2 == pytest.approx(special.kvp(l + 0.5, z, 2), rel=1e-12)


def test_argument_errors():
    with pytest.raises(NonpositiveArgument):
        bessel_half(BesselHalfOrder(0, Kind.K), 0.0)
    with pytest.raises(OrderOverflow):
        bessel_half(BesselHalfOrder(21, Kind.K), 1.0)


@pytest.mark.parametrize("kind", list(Kind))
@pytest.mark.parametrize("l", range(11))
def test_ode_residuals(kind, l):
    for z in (0.5, 1.0, 5.0, 10.0):
        spec = BesselHalfOrder(l, kind)
        assert ode_residual(spec, z) < 1e-12
        assert ode_residual(spec, z, method="fd") < 1e-8


def test_radial_residual_examples():
    assert radial_residual(0, -1.0, 1.0, Kind.K) < 1e-12
    assert radial_residual(3, -4.0, 0.7, Kind.I_PLUS) < 1e-12
    assert radial_residual(0, -1.0, 1.0, Kind.K, method="fd") < 1e-7
    assert radial_residual(3, -4.0, 0.7, Kind.I_PLUS, method="fd") < 1e-7
    f, _, _ = radial_solution(0, -1.0, 1.0)
    # r^{-1/2} K_{1/2}(r) = sqrt(pi/2) e^{-r} / r
    assert f == pytest.approx(math.sqrt(math.pi / 2) * math.exp(-1.0))


def test_radial_requires_negative_C():
    with pytest.raises(PreconditionError):
        radial_solution(0, 0.0, 1.0)
    with pytest.raises(PreconditionError):
        radial_residual(1, 2.0, 1.0)


@pytest.mark.parametrize("l", [0, 1, 2, 4])
def test_small_r_exponent_fit(l):
    assert fit_small_r_exponent(l, Kind.K) == pytest.approx(membership_exponent(l, Kind.K)[0], abs=1e-3)
    assert fit_small_r_exponent(l, Kind.I_PLUS) == pytest.approx(l, abs=1e-3)
    assert large_r_class_numeric(l, Kind.K)[0] == "decaying"
    assert large_r_class_numeric(l, Kind.I_PLUS)[0] == "growing"


def test_membership_examples():
    assert membership_exponent(0, Kind.K) == (-1.0, "decaying")
    assert membership_exponent(2, Kind.K) == (-3.0, "decaying")
    assert membership_exponent(2, Kind.I_PLUS)[1] == "growing"
    assert membership_decide(0, 0.0)
    assert not membership_decide(0, 0.6)
    assert membership_decide(1, -1.0)
    assert not membership_decide(1, -0.4)


@pytest.mark.parametrize("l,gamma", [(0, 0.0), (0, 0.6), (1, -1.0), (1, -0.3), (2, -1.7), (2, -1.2)])
def test_membership_quadrature_agrees(l, gamma):
    inside, n1, n2 = membership_quadrature(l, gamma)
    assert inside == membership_decide(l, gamma)
    assert n1 > 0 and n2 >= n1


@pytest.mark.parametrize("gamma,expected", [(1.0, (0, 0, 0)), (0.0, (1, 0, 1)),
                                            (2.0, (0, 1, -1)), (-1.0, (4, 0, 4))])
def test_fredholm_examples(gamma, expected):
    d = fredholm_data(gamma)
    assert (d.dim_ker, d.dim_coker, d.index) == expected
    assert d.isomorphism == (gamma == 1.0)


def test_fredholm_nonadmissible_weight_warns():
    with pytest.warns(RuntimeWarning):
        d = fredholm_data(0.5)
    assert not d.fredholm_ok and not d.isomorphism
    assert not is_fredholm_weight(-2.5) and is_fredholm_weight(-2.4)


def test_truncation_bound():
    with pytest.raises(TruncationBound):
        fredholm_data(-10.0, l_max=5)
    with pytest.raises(TruncationBound):
        fredholm_data(7.0, l_max=5)


def test_gamma_grid_excludes_half_integers():
    grid = gamma_grid(-3, 4, 0.05)
    assert all(is_fredholm_weight(g) for g in grid)
    assert len(grid) == 141 - 7


@settings(max_examples=200, deadline=None)
@given(st.floats(-8.0, 9.0).filter(is_fredholm_weight))
def test_fredholm_properties(gamma):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        d = fredholm_data(gamma)
    ker = sum(2 * l + 1 for l in range(21) if l < 0.5 - gamma)
    coker = sum(2 * l + 1 for l in range(21) if l < gamma - 1.5)
    assert (d.dim_ker, d.dim_coker) == (ker, coker)
    dual = fredholm_data(2.0 - gamma)
    assert (dual.dim_ker, dual.dim_coker) == (d.dim_coker, d.dim_ker)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        assert fredholm_data(gamma + 0.3).index <= d.index
    assert d.isomorphism == (0.5 < gamma < 1.5)


def test_exit_symbols(rng):
    for _ in range(100):
        t = rng.uniform(0.2, 3)
        params = EdgeSymbolParams(t, rng.uniform(0.2, 2.9), 0.0, *rng.normal(size=3))
        xi = rng.normal(size=3)
        se, spe = exit_symbols(params, xi)
        assert se > 0 and spe > 0
        assert se - spe == pytest.approx(-params.C / (2 * t * t))
    params = EdgeSymbolParams(1.0, 1.0, 0.0, 0.0, 0.0, 0.0)
    assert exit_symbols(params, [0.0, 0.0, 0.0]) == (0.0, 0.0)
