import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgecalc.charts import (Chart, HyperPoint, chart_matrix, coulomb_potential,
                             ee_distance_ratio, embedding_jet, interparticle_distances,
                             metric_closed_form, metric_pullback, random_interior_points,
                             to_cartesian, to_hyper)
from edgecalc.errors import DegenerateAngles, OutOfDomain, ZeroPoint

S2 = math.sqrt(2.0) / 2.0


def ang(a, b):
    d = (a - b) % (2 * math.pi)
    return min(d, 2 * math.pi - d)


def test_to_hyper_diagonal_point():
    p = to_hyper([S2, 0, 0, S2, 0, 0], Chart.U1)
    assert p.t == pytest.approx(1.0, abs=1e-15)
    assert p.r == pytest.approx(math.pi / 4, abs=1e-15)
    assert (p.theta1, p.phi1, p.theta2, p.phi2) == pytest.approx((math.pi / 2, 0, math.pi / 2, 0), abs=1e-15)


def test_to_hyper_polar_axis_is_flagged():
    x = [0, 0, 0.5, 0, 0, math.sqrt(3) / 2]
    with pytest.raises(DegenerateAngles):
        to_hyper(x, Chart.U1)
    p = to_hyper(x, Chart.U1, allow_degenerate=True)
    assert p.t == pytest.approx(1.0)
    assert p.r == pytest.approx(math.pi / 6)
    assert p.theta1 == 0.0
    assert "theta1" in p.degenerate and "phi1" in p.degenerate
    assert not p.is_interior()


def test_zero_point():
    with pytest.raises(ZeroPoint):
        to_hyper(np.zeros(6))


@pytest.mark.parametrize("p, expected", [
    (HyperPoint(Chart.U1, 1, math.pi / 4, math.pi / 2, 0, math.pi / 2, 0), [S2, 0, 0, S2, 0, 0]),
    (HyperPoint(Chart.U1, 2, math.pi / 6, math.pi / 2, math.pi, math.pi / 2, 0), [-1, 0, 0, math.sqrt(3), 0, 0]),
])
def test_to_cartesian_examples(p, expected):
    np.testing.assert_allclose(to_cartesian(p), expected, atol=1e-15)


def test_invalid_hyperpoint():
    with pytest.raises(OutOfDomain):
        HyperPoint(Chart.U1, -1.0, 0.3, 1, 0, 1, 0)
    with pytest.raises(OutOfDomain):
        HyperPoint(Chart.U1, 1.0, 2.0, 1, 0, 1, 0)


@pytest.mark.parametrize("chart", list(Chart))
def test_roundtrip_seeded(chart, rng):
    for p in random_interior_points(rng, 100, chart):
        q = to_hyper(to_cartesian(p), chart)
        assert abs(q.t - p.t) < 1e-12 and abs(q.r - p.r) < 1e-12
        assert abs(q.theta1 - p.theta1) < 1e-12 and abs(q.theta2 - p.theta2) < 1e-12
        assert ang(q.phi1, p.phi1) < 1e-12 and ang(q.phi2, p.phi2) < 1e-12
        assert np.linalg.norm(to_cartesian(p)) == pytest.approx(p.t, rel=1e-15)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=6, max_size=6), st.sampled_from(list(Chart)))
def test_cartesian_roundtrip_property(x, chart):
    x = np.array(x)
    if np.linalg.norm(x) < 1e-3:
        return
    try:
        p = to_hyper(x, chart, tol=1e-6)
    except DegenerateAngles:
        return
    np.testing.assert_allclose(to_cartesian(p), x, atol=1e-12 * max(1.0, np.linalg.norm(x)))


def test_chart_matrices_orthogonal():
    for c in Chart:
        P = chart_matrix(c)
        np.testing.assert_allclose(P @ P.T, np.eye(6), atol=1e-15)


def test_u3_uses_center_of_mass_coordinates():
    x = np.array([1.0, 0.2, -0.3, 0.4, 0.5, 0.6])
    p = to_hyper(x, Chart.U3)
    z_lo = (x[:3] - x[3:]) / math.sqrt(2)
    assert p.t * math.sin(p.r) == pytest.approx(np.linalg.norm(z_lo))


def test_chart_symmetry_swap(rng):
    for p in random_interior_points(rng, 50, Chart.U1):
        x = to_cartesian(p)
        q = to_hyper(x, Chart.U2)
        assert q.r == pytest.approx(math.pi / 2 - p.r, abs=1e-12)
        assert (q.theta1, q.theta2) == pytest.approx((p.theta2, p.theta1), abs=1e-12)
        swapped = to_hyper(np.concatenate([x[3:], x[:3]]), Chart.U2)
        assert swapped.r == pytest.approx(p.r, abs=1e-12)


def test_interparticle_coalescence_direction():
    p = HyperPoint(Chart.U1, 1, math.pi / 4, math.pi / 2, 0, math.pi / 2, 0)
    d1, d2, d12 = interparticle_distances(p)
    assert (d1, d2) == pytest.approx((S2, S2), abs=1e-15)
    assert d12 == pytest.approx(0.0, abs=1e-7)


def test_interparticle_opposite_direction():
    p = HyperPoint(Chart.U1, 1, math.pi / 4, math.pi / 2, 0, math.pi / 2, math.pi)
    x = to_cartesian(p)
    oracle = np.linalg.norm(x[:3] - x[3:])
    assert oracle == pytest.approx(math.sqrt(2), abs=1e-15)
    assert interparticle_distances(p)[2] == pytest.approx(oracle, abs=1e-15)


@pytest.mark.parametrize("chart", list(Chart))
def test_interparticle_vs_euclidean(chart, rng):
    for p in random_interior_points(rng, 100, chart):
        x = to_cartesian(p)
        ref = (np.linalg.norm(x[:3]), np.linalg.norm(x[3:]), np.linalg.norm(x[:3] - x[3:]))
        np.testing.assert_allclose(interparticle_distances(p), ref, atol=1e-12)


def test_edge_limit():
    d = interparticle_distances(HyperPoint(Chart.U1, 1.7, 0.0, 1.0, 0.2, 2.0, 0.3))
    assert d == pytest.approx((0.0, 1.7, 1.7), abs=1e-15)


def test_coulomb_potential_cartesian():
    x = [S2, 0, 0, -S2, 0, 0]
    assert coulomb_potential(x) == pytest.approx(-7 * math.sqrt(2) / 2)


def test_metric_closed_form_reference_point():
    p = HyperPoint(Chart.U1, 1, math.pi / 4, math.pi / 2, 0, math.pi / 2, 0)
    np.testing.assert_allclose(metric_closed_form(p).matrix(), np.diag([1, 1, .5, .5, .5, .5]), atol=1e-15)
    np.testing.assert_allclose(metric_pullback(p, 1e-5), np.diag([1, 1, .5, .5, .5, .5]), atol=1e-8)


def test_metric_t_scaling():
    p = HyperPoint(Chart.U1, 1.0, 0.4, 1.1, 0.3, 2.0, 1.0)
    g1 = np.diag(metric_closed_form(p).matrix())
    g3 = np.diag(metric_closed_form(p.replace(t=3.0)).matrix())
    assert g3[0] == g1[0] == 1.0
    np.testing.assert_allclose(g3[1:], 9.0 * g1[1:], rtol=1e-15)


def test_metric_polar_degeneration_is_not_error():
    m = metric_closed_form(HyperPoint(Chart.U1, 1.0, 0.4, 0.0, 0.3, 2.0, 1.0)).matrix()
    assert m[3, 3] == 0.0


@pytest.mark.parametrize("chart", list(Chart))
def test_metric_pullback_matches_closed_form(chart, rng):
    for p in random_interior_points(rng, 50, chart):
        M = metric_pullback(p, 1e-5)
        assert np.abs(M - metric_closed_form(p).matrix()).max() < 1e-8
        assert np.abs(M - M.T).max() < 1e-14


def test_metric_pullback_richardson_improves(rng):
    p = random_interior_points(rng, 1)[0]
    ref = metric_closed_form(p).matrix()
    plain = np.abs(metric_pullback(p, 1e-3) - ref).max()
    rich = np.abs(metric_pullback(p, 1e-3, richardson=True) - ref).max()
    assert rich < plain


def test_metric_pullback_stencil_leaving_chart():
    with pytest.raises(DegenerateAngles):
        metric_pullback(HyperPoint(Chart.U1, 1.0, 1e-6, 1.0, 0.0, 1.0, 0.0), 1e-5)
    with pytest.raises(OutOfDomain):
        metric_pullback(HyperPoint(Chart.U1, 1.0, 0.5, 1.0, 0.0, 1.0, 0.0), 1e-1)


@pytest.mark.parametrize("chart", list(Chart))
def test_embedding_jet_against_finite_differences(chart, rng):
    p = random_interior_points(rng, 1, chart)[0]
    x, J, D2 = embedding_jet(p)
    np.testing.assert_allclose(x, to_cartesian(p), atol=1e-15)
    h = 1e-5
    q = p.as_array()
    for a in range(6):
        e = np.zeros(6)
        e[a] = h
        xp, Jp, _ = embedding_jet(HyperPoint.from_array(chart, q + e))
        xm, Jm, _ = embedding_jet(HyperPoint.from_array(chart, q - e))
        np.testing.assert_allclose(J[:, a], (xp - xm) / (2 * h), atol=1e-9)
        np.testing.assert_allclose(D2[:, :, a], (Jp - Jm) / (2 * h), atol=1e-9)


def test_ee_distance_ratio_measured():
    ratio = ee_distance_ratio(HyperPoint(Chart.U3, 1.0, 1e-5, 1.0, 0.3, 2.0, 1.0))
    # |x1 - x2| = sqrt(2) t sin r with the 1/sqrt(2)-normalised center-of-mass map
    assert ratio == pytest.approx(math.sqrt(2), rel=1e-9)
