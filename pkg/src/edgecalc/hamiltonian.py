"""The helium Hamiltonian in Cartesian, corner-degenerate and edge-degenerate form.

Near the edge ``|x1| = 0`` (chart ``U1``) the Laplacian of ``R^6`` reads::

    Delta = t^-2 [(-t d_t)^2 - 4(-t d_t) + Delta_S5]
    Delta_S5 = r^-2 [(-r d_r)^2 + h(r)(-r d_r) + r^2/sin^2 r Delta_X + r^2/cos^2 r Delta_Y]

with ``h(r) = 1 + 2r tan r - 2r cot r`` and the Coulomb potential factorises as
``V = v / (t r)`` with ``v`` smooth up to ``r = 0``. The edge and corner forms
below are the two groupings of ``-Delta/2 + V`` in powers of ``(-r d_r)``,
``(r d_t)`` and ``(-r t d_t)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .charts import DEGENERACY_TOL, HALF_PI, Chart, HyperPoint, _kappa
from .errors import (CoalescenceOverlap, DegenerateAngles, OnSingularSet,
                     OutOfDomain)
from .fields import EdgeField, ScalarField

__all__ = [
    "SERIES_THRESHOLD",
    "coeff_h",
    "coeff_v",
    "potential",
    "apply_cartesian",
    "apply_edge",
    "apply_corner",
    "apply_beltrami",
    "laplacian_hyper",
    "delta_x1",
    "delta_y1",
    "FuchsTerm",
    "edge_fuchs_terms",
]

SERIES_THRESHOLD = 1e-3
SQRT2 = math.sqrt(2.0)


def _r_over_sin(r: float) -> float:
    if abs(r) < SERIES_THRESHOLD:
        r2 = r * r
        return 1.0 + r2 / 6.0 + 7.0 * r2 * r2 / 360.0 + 31.0 * r2 ** 3 / 15120.0
    return r / math.sin(r)


def _check_r(r: float) -> None:
    if not 0.0 <= r < HALF_PI:
        raise OutOfDomain(f"r must lie in [0, pi/2), got {r}")


def coeff_h(r: float) -> float:
    """``1 + 2r tan r - 2r cot r``, smooth on ``[0, pi/2)`` with ``h(0) = -1``."""
    _check_r(r)
    if r < SERIES_THRESHOLD:
        r2 = r * r
        return -1.0 + 8.0 / 3.0 * r2 + 32.0 / 45.0 * r2 * r2 + 256.0 / 945.0 * r2 ** 3
    return 1.0 + 2.0 * r * math.tan(r) - 2.0 * r / math.tan(r)


def coeff_v(r: float, theta1: float, phi1: float, theta2: float, phi2: float,
            chart: Chart = Chart.U1, *, tol: float = DEGENERACY_TOL) -> float:
    """Smooth potential coefficient ``v = t r V`` in the given chart.

    For ``U1``/``U2`` this is ``-2r/sin r - 2r/cos r + r/sqrt(1 - sin(2r) kappa)``
    with ``kappa`` the cosine between the two unit directions; for ``U3`` the roles of
    nuclear and inter-electronic terms are exchanged by the center-of-mass map.
    """
    _check_r(r)
    chart = Chart.parse(chart)
    s2k = math.sin(2.0 * r) * _kappa(theta1, phi1, theta2, phi2)
    if chart is Chart.U3:
        plus, minus = 1.0 + s2k, 1.0 - s2k
        if min(plus, minus) <= tol:
            raise OnSingularSet("electron-nucleus coalescence inside chart u3")
        return (-2.0 * SQRT2 * r / math.sqrt(plus) - 2.0 * SQRT2 * r / math.sqrt(minus)
                + _r_over_sin(r) / SQRT2)
    radicand = 1.0 - s2k
    if radicand <= tol:
        raise CoalescenceOverlap(f"electron-electron coalescence inside chart {chart.value}")
    return -2.0 * _r_over_sin(r) - 2.0 * r / math.cos(r) + r / math.sqrt(radicand)


def potential(p: HyperPoint) -> float:
    """Coulomb potential ``V = v / (t r)`` at a chart point with ``r > 0``."""
    if p.r <= 0.0:
        raise OnSingularSet("V is singular at r = 0")
    return coeff_v(p.r, *p.angles(), chart=p.chart) / (p.t * p.r)


def apply_cartesian(u: ScalarField, x, *, tol: float = DEGENERACY_TOL) -> float:
    """``(H u)(x) = -Delta u / 2 - 2u/|x1| - 2u/|x2| + u/|x1 - x2|``."""
    x = np.asarray(x, dtype=float)
    d1 = np.linalg.norm(x[:3])
    d2 = np.linalg.norm(x[3:])
    d12 = np.linalg.norm(x[:3] - x[3:])
    if min(d1, d2, d12) < tol:
        raise OnSingularSet(f"distances ({d1}, {d2}, {d12}) touch a Coulomb singularity")
    uval = u(x)
    return -0.5 * u.laplacian(x) + (-2.0 / d1 - 2.0 / d2 + 1.0 / d12) * uval


def _check_point(p: HyperPoint, tol: float) -> None:
    if p.r < tol:
        raise OnSingularSet("edge operator is singular at r = 0")
    if math.cos(p.r) < tol or math.sin(p.theta1) < tol or math.sin(p.theta2) < tol:
        raise DegenerateAngles(f"point {p} lies on a degenerate locus")


def delta_x1(g: np.ndarray, H: np.ndarray, theta1: float) -> float:
    """Unit-sphere Laplacian in ``(theta1, phi1)`` from a 6-variable jet."""
    return H[2, 2] + g[2] / math.tan(theta1) + H[3, 3] / math.sin(theta1) ** 2


def delta_y1(g: np.ndarray, H: np.ndarray, theta2: float) -> float:
    return H[4, 4] + g[4] / math.tan(theta2) + H[5, 5] / math.sin(theta2) ** 2


def apply_edge(u: EdgeField, p: HyperPoint, *, tol: float = DEGENERACY_TOL) -> float:
    """Edge-degenerate form: ``t`` treated as an edge variable next to ``(theta2, phi2)``."""
    _check_point(p, tol)
    t, r, th2 = p.t, p.r, p.theta2
    val, g, H = u.jet(p)
    h = coeff_h(r)
    v = coeff_v(r, *p.angles(), chart=p.chart)
    c2 = math.cos(r) ** 2
    s2 = math.sin(th2) ** 2
    m_r = -r * g[1]                       # (-r d_r) u
    m_rr = r * g[1] + r * r * H[1, 1]     # (-r d_r)^2 u
    bracket = (
        -m_rr / (2.0 * t * t)
        - h / (2.0 * t * t) * m_r
        - 0.5 * (r * r * H[0, 0])
        - 5.0 * r / (2.0 * t) * (r * g[0])
        - 1.0 / (2.0 * t * t * c2) * (r * r * H[4, 4])
        - r / math.tan(th2) / (2.0 * t * t * c2) * (r * g[4])
        - 1.0 / (2.0 * t * t * s2 * c2) * (r * r * H[5, 5])
        - r * r / (2.0 * t * t * math.sin(r) ** 2) * delta_x1(g, H, p.theta1)
        + r / t * v * val
    )
    return bracket / (r * r)


def apply_corner(u: EdgeField, p: HyperPoint, *, tol: float = DEGENERACY_TOL) -> float:
    """Corner-degenerate form: ``t^-2 r^-2 [...]`` in powers of ``(-r t d_t)``."""
    _check_point(p, tol)
    t, r, th2 = p.t, p.r, p.theta2
    val, g, H = u.jet(p)
    h = coeff_h(r)
    v = coeff_v(r, *p.angles(), chart=p.chart)
    c2 = math.cos(r) ** 2
    s2 = math.sin(th2) ** 2
    m_t = -r * t * g[0]                               # (-r t d_t) u
    m_tt = r * r * t * g[0] + r * r * t * t * H[0, 0]  # (-r t d_t)^2 u
    m_r = -r * g[1]
    m_rr = r * g[1] + r * r * H[1, 1]
    bracket = (
        -0.5 * m_tt
        + 2.0 * r * m_t
        - 0.5 * m_rr
        - 0.5 * h * m_r
        - 1.0 / (2.0 * c2) * (r * r * H[4, 4])
        - r / math.tan(th2) / (2.0 * c2) * (r * g[4])
        - 1.0 / (2.0 * s2 * c2) * (r * r * H[5, 5])
        - r * r / (2.0 * math.sin(r) ** 2) * delta_x1(g, H, p.theta1)
        + t * r * v * val
    )
    return bracket / (t * t * r * r)


def apply_beltrami(u: EdgeField, p: HyperPoint, *, tol: float = DEGENERACY_TOL) -> float:
    """Laplace-Beltrami operator of the unit ``S^5`` near the edge, acting on the angular part."""
    _check_point(p, tol)
    r = p.r
    _, g, H = u.jet(p)
    m_r = -r * g[1]
    m_rr = r * g[1] + r * r * H[1, 1]
    return (m_rr + coeff_h(r) * m_r
            + r * r / math.sin(r) ** 2 * delta_x1(g, H, p.theta1)
            + r * r / math.cos(r) ** 2 * delta_y1(g, H, p.theta2)) / (r * r)


def laplacian_hyper(u: EdgeField, p: HyperPoint, *, tol: float = DEGENERACY_TOL) -> float:
    """Full ``R^6`` Laplacian assembled as ``t^-2[(-t d_t)^2 - 4(-t d_t) + Delta_S5]``."""
    t = p.t
    _, g, H = u.jet(p)
    m_t = -t * g[0]
    m_tt = t * g[0] + t * t * H[0, 0]
    return (m_tt - 4.0 * m_t + apply_beltrami(u, p, tol=tol)) / (t * t)


@dataclass(frozen=True)
class FuchsTerm:
    """One coefficient ``a_{j alpha}`` of ``r^-2 sum a_{j alpha} (-r d_r)^j (r d_y)^alpha``.

    ``alpha`` counts derivatives in the edge variables ``(t, theta2, phi2)``;
    ``x_order`` is the order of the coefficient as an operator on the cone base
    (2 for the ``Delta_X`` term, 0 for multiplications).
    """

    j: int
    alpha: tuple[int, int, int]
    x_order: int
    label: str
    value: float


def edge_fuchs_terms(r: float, t: float, theta1: float, phi1: float, theta2: float,
                     phi2: float, chart: Chart = Chart.U1) -> list[FuchsTerm]:
    """Coefficients of the edge-degenerate Hamiltonian, evaluable up to ``r = 0``."""
    _check_r(r)
    c2 = math.cos(r) ** 2
    s2 = math.sin(theta2) ** 2
    tt = t * t
    v = coeff_v(r, theta1, phi1, theta2, phi2, chart=chart)
    return [
        FuchsTerm(2, (0, 0, 0), 0, "(-r d_r)^2", -1.0 / (2.0 * tt)),
        FuchsTerm(1, (0, 0, 0), 0, "(-r d_r)", -coeff_h(r) / (2.0 * tt)),
        FuchsTerm(0, (2, 0, 0), 0, "(r d_t)^2", -0.5),
        FuchsTerm(0, (1, 0, 0), 0, "(r d_t)", -5.0 * r / (2.0 * t)),
        FuchsTerm(0, (0, 2, 0), 0, "(r d_theta2)^2", -1.0 / (2.0 * tt * c2)),
        FuchsTerm(0, (0, 1, 0), 0, "(r d_theta2)", -r / math.tan(theta2) / (2.0 * tt * c2)),
        FuchsTerm(0, (0, 0, 2), 0, "(r d_phi2)^2", -1.0 / (2.0 * tt * s2 * c2)),
        FuchsTerm(0, (0, 0, 0), 2, "Delta_X", -_r_over_sin(r) ** 2 / (2.0 * tt)),
        FuchsTerm(0, (0, 0, 0), 0, "potential", r / t * v),
    ]
