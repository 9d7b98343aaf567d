import math

import numpy as np
import pytest
import sympy as sp

from edgecalc.charts import (Chart, HyperPoint, coulomb_potential, random_interior_points,
                             to_cartesian)
from edgecalc.errors import CoalescenceOverlap, DegenerateAngles, OnSingularSet, OutOfDomain
from edgecalc.fields import EdgeField, field_catalogue, gaussian, polynomial, solid_harmonic
from edgecalc.hamiltonian import (SERIES_THRESHOLD, apply_beltrami, apply_cartesian, apply_corner,
                                  apply_edge, coeff_h, coeff_v, delta_x1, edge_fuchs_terms,
                                  laplacian_hyper, potential)

R = sp.symbols("r")


def test_coeff_h_examples():
    assert coeff_h(math.pi / 4) == pytest.approx(1.0, abs=1e-15)
    assert coeff_h(0.0) == -1.0
    with pytest.raises(OutOfDomain):
        coeff_h(math.pi / 2)


def test_coeff_h_series_matches_symbolic_expansion():
    h = 1 + 2 * R * sp.tan(R) - 2 * R * sp.cot(R)
    ser = sp.series(h, R, 0, 10).removeO()
    for r in (1e-5, 1e-4, 5e-4, 0.999e-3):
        assert coeff_h(r) == pytest.approx(float(ser.subs(R, r)), abs=1e-15)


def test_coeff_h_branch_consistency():
    r = SERIES_THRESHOLD
    direct = 1 + 2 * r * math.tan(r) - 2 * r / math.tan(r)
    below = coeff_h(r * (1 - 1e-12))
    assert below == pytest.approx(direct, abs=1e-12)
    assert coeff_h(r) == pytest.approx(direct, abs=1e-15)


def test_coeff_h_cauchy_at_edge():
    vals = [coeff_h(10.0 ** -k) for k in range(4, 9)]
    diffs = np.abs(np.diff(vals))
    assert np.all(diffs[1:] <= diffs[:-1])
    assert abs(vals[-1] + 1) < 1e-15


def test_coeff_v_limit_and_series():
    term = -2 * R / sp.sin(R)
    ser = sp.series(term, R, 0, 8).removeO()
    args = (1.0, 0.2, 2.0, 1.5)
    for r in (1e-6, 1e-4, 9e-4):
        k = math.cos(1.0) * math.cos(2.0) + math.sin(1.0) * math.sin(2.0) * math.cos(0.2 - 1.5)
        ref = float(ser.subs(R, r)) - 2 * r / math.cos(r) + r / math.sqrt(1 - math.sin(2 * r) * k)
        assert coeff_v(r, *args) == pytest.approx(ref, abs=1e-15)
    assert coeff_v(0.0, *args) == -2.0
    vals = [coeff_v(10.0 ** -k, *args) for k in range(4, 9)]
    assert np.all(np.abs(np.diff(vals))[1:] <= np.abs(np.diff(vals))[:-1])


def test_coeff_v_example_against_cartesian_potential():
    r = math.pi / 4
    v = coeff_v(r, math.pi / 2, 0.0, math.pi / 2, math.pi)
    assert v == pytest.approx(-7 * math.pi * math.sqrt(2) / 8, rel=1e-14)
    x = to_cartesian(HyperPoint(Chart.U1, 1.0, r, math.pi / 2, 0.0, math.pi / 2, math.pi))
    assert v / r == pytest.approx(coulomb_potential(x), rel=1e-14)


def test_coeff_v_coalescence():
    with pytest.raises(CoalescenceOverlap):
        coeff_v(math.pi / 4, math.pi / 2, 0.0, math.pi / 2, 0.0)


@pytest.mark.parametrize("chart", list(Chart))
def test_potential_factorization(chart, rng):
    for p in random_interior_points(rng, 100, chart):
        V = coulomb_potential(to_cartesian(p))
        tr = p.t * p.r
        assert tr * coeff_v(p.r, *p.angles(), chart=chart) == pytest.approx(tr * tr * V, rel=1e-13)
        assert potential(p) == pytest.approx(V, rel=1e-13)


def test_u3_coefficient_is_smooth_at_edge():
    args = (1.0, 0.2, 2.0, 1.5)
    assert coeff_v(0.0, *args, chart=Chart.U3) == pytest.approx(1 / math.sqrt(2))


def test_apply_cartesian_t_squared(rng):
    u = polynomial(Q=2.0 * np.eye(6))
    for x in rng.normal(size=(5, 6)):
        assert apply_cartesian(u, x) == pytest.approx(-6.0 + coulomb_potential(x) * (x @ x))


def test_apply_cartesian_gaussian(rng):
    u = gaussian()
    for x in rng.normal(size=(10, 6)):
        ref = -0.5 * (4 * x @ x - 12) * u(x) + coulomb_potential(x) * u(x)
        assert apply_cartesian(u, x) == pytest.approx(ref, abs=1e-10)


def test_apply_cartesian_on_singular_set():
    with pytest.raises(OnSingularSet):
        apply_cartesian(gaussian(), [0, 0, 0, 1, 0, 0])


@pytest.mark.parametrize("chart", list(Chart))
def test_form_equivalence(chart, rng):
    pts = random_interior_points(rng, 30, chart)
    for f in field_catalogue(3):
        e = EdgeField.pullback(f)
        for p in pts:
            hc = apply_cartesian(f, to_cartesian(p))
            he = apply_edge(e, p)
            assert abs(hc - he) < 1e-6
            assert abs(apply_corner(e, p) - he) < 1e-9


def test_t_squared_edge_matches_cartesian(rng):
    u = polynomial(Q=2.0 * np.eye(6))
    e = EdgeField.pullback(u)
    for p in random_interior_points(rng, 10):
        assert apply_edge(e, p) == pytest.approx(-6.0 + potential(p) * p.t ** 2, abs=1e-12)


def test_radial_reduction(rng):
    def f(t):
        return math.sin(t), math.cos(t), -math.sin(t)

    e = EdgeField.radial(f)
    for p in random_interior_points(rng, 10):
        ref = 0.5 * math.sin(p.t) - 2.5 / p.t * math.cos(p.t) + potential(p) * math.sin(p.t)
        assert apply_edge(e, p) == pytest.approx(ref, abs=1e-12)
        assert apply_corner(e, p) == pytest.approx(ref, abs=1e-12)


def test_constant_gives_potential(rng):
    e = EdgeField.pullback(polynomial(c0=2.5))
    for p in random_interior_points(rng, 10):
        assert apply_corner(e, p) == pytest.approx(2.5 * potential(p), rel=1e-12)


def test_edge_operator_singular_and_degenerate():
    e = EdgeField.pullback(gaussian())
    with pytest.raises(OnSingularSet):
        apply_edge(e, HyperPoint(Chart.U1, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0))
    with pytest.raises(DegenerateAngles):
        apply_corner(e, HyperPoint(Chart.U1, 1.0, 0.5, 0.0, 0.0, 1.0, 0.0))


def test_beltrami_constant_is_zero():
    e = EdgeField.pullback(polynomial(c0=1.0))
    assert apply_beltrami(e, HyperPoint(Chart.U1, 1.3, 0.7, 1.0, 0.5, 2.0, 0.1)) == pytest.approx(0, abs=1e-13)


@pytest.mark.parametrize("l", [1, 2, 3])
def test_delta_x_eigenvalue(l, rng):
    e = EdgeField.pullback(solid_harmonic(l))
    for p in random_interior_points(rng, 5):
        v, g, H = e.jet(p)
        assert delta_x1(g, H, p.theta1) == pytest.approx(-l * (l + 1) * v, abs=1e-12)
        # the Delta_X contribution to the angular Laplacian is -l(l+1) u / sin^2 r
        assert math.sin(p.r) ** -2 * delta_x1(g, H, p.theta1) == pytest.approx(
            -l * (l + 1) * v / math.sin(p.r) ** 2, abs=1e-11)


def test_beltrami_assembly_vs_fd_cartesian_laplacian(rng):
    u = field_catalogue()[1]
    e = EdgeField.pullback(u)
    fd = u.numeric(1e-3)
    for p in random_interior_points(rng, 10):
        assert laplacian_hyper(e, p) == pytest.approx(fd.laplacian(to_cartesian(p)), abs=1e-6)


def test_fuchs_terms_shape_and_frozen_values():
    terms = edge_fuchs_terms(0.0, 1.5, 1.0, 0.2, 2.0, 0.4)
    for term in terms:
        order = term.j + sum(term.alpha)
        assert order <= 2
        assert term.x_order <= 2 - order
        assert math.isfinite(term.value)
    by = {term.label: term.value for term in terms}
    tt = 1.5 ** 2
    assert by["(-r d_r)^2"] == pytest.approx(-1 / (2 * tt))
    assert by["(-r d_r)"] == pytest.approx(1 / (2 * tt))
    assert by["(r d_t)"] == 0.0 and by["(r d_theta2)"] == 0.0 and by["potential"] == 0.0
    assert by["Delta_X"] == pytest.approx(-1 / (2 * tt))
    assert by["(r d_theta2)^2"] == pytest.approx(-1 / (2 * tt))


def test_fuchs_coefficients_continuous_on_quarter_interval():
    rs = np.linspace(0.0, math.pi / 4, 200)
    vals = np.array([[t.value for t in edge_fuchs_terms(r, 1.0, 1.0, 0.2, 2.0, 0.4)] for r in rs])
    assert np.all(np.isfinite(vals))
    assert np.abs(np.diff(vals, axis=0)).max() < 0.1
