"""Hyperspherical charts around the three Coulomb edges of the helium configuration space.

Chart ``U1`` is adapted to the electron-nucleus edge ``|x1| = 0``::

    x1 = t sin r sin(theta1) cos(phi1)    x4 = t cos r sin(theta2) cos(phi2)
    x2 = t sin r sin(theta1) sin(phi1)    x5 = t cos r sin(theta2) sin(phi2)
    x3 = t sin r cos(theta1)              x6 = t cos r cos(theta2)

``U2`` (edge ``|x2| = 0``) applies the electron swap before the ``U1`` formulas and
``U3`` (edge ``x1 = x2``) applies the orthogonal center-of-mass map
``z = ((x1 - x2)/sqrt 2, (x1 + x2)/sqrt 2)``. Coordinates are always ordered
``(t, r, theta1, phi1, theta2, phi2)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateAngles, OutOfDomain, ZeroPoint

__all__ = [
    "Chart",
    "HyperPoint",
    "MetricBlocks",
    "COORD_NAMES",
    "DEGENERACY_TOL",
    "chart_matrix",
    "to_hyper",
    "to_cartesian",
    "embedding_jet",
    "interparticle_distances",
    "coulomb_potential",
    "metric_closed_form",
    "metric_pullback",
    "ee_distance_ratio",
    "random_interior_points",
]

COORD_NAMES = ("t", "r", "theta1", "phi1", "theta2", "phi2")
DEGENERACY_TOL = 1e-10
HALF_PI = 0.5 * math.pi
TWO_PI = 2.0 * math.pi


class Chart(str, enum.Enum):
    U1 = "u1"
    U2 = "u2"
    U3 = "u3"

    @classmethod
    def parse(cls, value: "str | Chart") -> "Chart":
        if isinstance(value, Chart):
            return value
        return cls(str(value).lower())


_I3 = np.eye(3)
_Z3 = np.zeros((3, 3))
_SWAP = np.block([[_Z3, _I3], [_I3, _Z3]])
_COM = np.block([[_I3, -_I3], [_I3, _I3]]) / math.sqrt(2.0)


def chart_matrix(chart: Chart) -> np.ndarray:
    """Orthogonal matrix ``P`` with ``z = P x``; the ``U1`` formulas are applied to ``z``."""
    chart = Chart.parse(chart)
    if chart is Chart.U1:
        return np.eye(6)
    if chart is Chart.U2:
        return _SWAP.copy()
    return _COM.copy()


@dataclass(frozen=True)
class HyperPoint:
    """Chart-tagged hyperspherical coordinates.

    ``degenerate`` lists the coordinate names that are undefined or sit on a
    boundary locus (e.g. ``("theta1", "phi1")`` on the polar axis).
    """

    chart: Chart
    t: float
    r: float
    theta1: float
    phi1: float
    theta2: float
    phi2: float
    degenerate: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "chart", Chart.parse(self.chart))
        vals = (self.t, self.r, self.theta1, self.phi1, self.theta2, self.phi2)
        if not all(math.isfinite(v) for v in vals):
            raise OutOfDomain(f"non-finite coordinate in {vals}")
        if self.t <= 0.0:
            raise OutOfDomain(f"t must be positive, got {self.t}")
        if not 0.0 <= self.r <= HALF_PI:
            raise OutOfDomain(f"r must lie in [0, pi/2], got {self.r}")
        for name in ("theta1", "theta2"):
            if not 0.0 <= getattr(self, name) <= math.pi:
                raise OutOfDomain(f"{name} must lie in [0, pi], got {getattr(self, name)}")

    @classmethod
    def from_array(cls, chart: Chart, q) -> "HyperPoint":
        t, r, th1, ph1, th2, ph2 = (float(v) for v in q)
        return cls(chart, t, r, th1, ph1, th2, ph2)

    def as_array(self) -> np.ndarray:
        return np.array([self.t, self.r, self.theta1, self.phi1, self.theta2, self.phi2])

    def angles(self) -> tuple[float, float, float, float]:
        return self.theta1, self.phi1, self.theta2, self.phi2

    def is_interior(self, tol: float = DEGENERACY_TOL) -> bool:
        return not _degenerate_names(self.r, self.theta1, self.theta2, tol)

    def replace(self, **changes) -> "HyperPoint":
        d = {k: getattr(self, k) for k in ("chart",) + COORD_NAMES}
        d.update(changes)
        return HyperPoint(**d)


def _degenerate_names(r, theta1, theta2, tol) -> tuple[str, ...]:
    names = []
    if math.sin(r) < tol:
        names += ["r", "theta1", "phi1"]
    elif math.sin(theta1) < tol:
        names += ["theta1", "phi1"]
    if math.cos(r) < tol:
        names += ["r", "theta2", "phi2"]
    elif math.sin(theta2) < tol:
        names += ["theta2", "phi2"]
    return tuple(dict.fromkeys(names))


def _sphere(v: np.ndarray) -> tuple[float, float, float]:
    """(radius, polar, azimuth) of a 3-vector, azimuth in [0, 2 pi)."""
    rho = math.hypot(v[0], v[1])
    theta = math.atan2(rho, v[2])
    phi = math.atan2(v[1], v[0]) % TWO_PI if rho > 0.0 else 0.0
    return math.hypot(rho, v[2]), theta, phi


def to_hyper(x, chart: Chart = Chart.U1, *, tol: float = DEGENERACY_TOL,
             allow_degenerate: bool = False) -> HyperPoint:
    """Hyperspherical coordinates of a Cartesian point ``x`` in ``R^6``.

    Raises
    ------
    ZeroPoint
        If ``x`` is the origin.
    DegenerateAngles
        If an azimuth is undefined (``sin r sin theta1`` or ``cos r sin theta2``
        below ``tol``) and ``allow_degenerate`` is false. With
        ``allow_degenerate`` the point is returned with its ``degenerate`` tags
        set and undefined azimuths reported as 0.
    """
    chart = Chart.parse(chart)
    x = np.asarray(x, dtype=float).reshape(6)
    t = float(np.linalg.norm(x))
    if t == 0.0:
        raise ZeroPoint("the origin has no hyperspherical coordinates")
    z = chart_matrix(chart) @ x
    n1, th1, ph1 = _sphere(z[:3])
    n2, th2, ph2 = _sphere(z[3:])
    r = math.atan2(n1, n2)
    flags = []
    if n1 / t < tol:
        flags += ["r", "theta1", "phi1"]
    elif math.hypot(z[0], z[1]) / t < tol:
        flags += ["theta1", "phi1"]
    if n2 / t < tol:
        flags += ["r", "theta2", "phi2"]
    elif math.hypot(z[3], z[4]) / t < tol:
        flags += ["theta2", "phi2"]
    flags = tuple(dict.fromkeys(flags))
    if flags and not allow_degenerate:
        raise DegenerateAngles(f"chart {chart.value}: degenerate coordinates {flags}")
    return HyperPoint(chart, t, r, th1, ph1, th2, ph2, degenerate=flags)


def _omega(theta, phi):
    st, ct, sp, cp = math.sin(theta), math.cos(theta), math.sin(phi), math.cos(phi)
    w = np.array([st * cp, st * sp, ct])
    w_t = np.array([ct * cp, ct * sp, -st])
    w_p = np.array([-st * sp, st * cp, 0.0])
    w_tp = np.array([-ct * sp, ct * cp, 0.0])
    w_pp = np.array([-st * cp, -st * sp, 0.0])
    return w, w_t, w_p, -w, w_tp, w_pp


def embedding_jet(p: HyperPoint) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Value, Jacobian and second derivatives of ``q -> to_cartesian(q)`` at ``p``.

    Returns ``(x, J, D2)`` with ``J[i, a] = dx_i/dq_a`` and
    ``D2[i, a, b] = d^2 x_i / dq_a dq_b``.
    """
    t, r = p.t, p.r
    sr, cr = math.sin(r), math.cos(r)
    w1, w1t, w1p, w1tt, w1tp, w1pp = _omega(p.theta1, p.phi1)
    w2, w2t, w2p, w2tt, w2tp, w2pp = _omega(p.theta2, p.phi2)
    z3 = np.zeros(3)

    def cat(a, b):
        return np.concatenate([a, b])

    e = cat(sr * w1, cr * w2)
    de = np.empty((6, 6))  # de[:, a] = d e / d q_a, a >= 1 (column 0 unused)
    de[:, 0] = 0.0
    de[:, 1] = cat(cr * w1, -sr * w2)
    de[:, 2] = cat(sr * w1t, z3)
    de[:, 3] = cat(sr * w1p, z3)
    de[:, 4] = cat(z3, cr * w2t)
    de[:, 5] = cat(z3, cr * w2p)

    d2e = np.zeros((6, 6, 6))
    d2e[:, 1, 1] = -e
    d2e[:, 1, 2] = d2e[:, 2, 1] = cat(cr * w1t, z3)
    d2e[:, 1, 3] = d2e[:, 3, 1] = cat(cr * w1p, z3)
    d2e[:, 1, 4] = d2e[:, 4, 1] = cat(z3, -sr * w2t)
    d2e[:, 1, 5] = d2e[:, 5, 1] = cat(z3, -sr * w2p)
    d2e[:, 2, 2] = cat(sr * w1tt, z3)
    d2e[:, 2, 3] = d2e[:, 3, 2] = cat(sr * w1tp, z3)
    d2e[:, 3, 3] = cat(sr * w1pp, z3)
    d2e[:, 4, 4] = cat(z3, cr * w2tt)
    d2e[:, 4, 5] = d2e[:, 5, 4] = cat(z3, cr * w2tp)
    d2e[:, 5, 5] = cat(z3, cr * w2pp)

    x = t * e
    J = t * de
    J[:, 0] = e
    D2 = t * d2e
    D2[:, 0, 1:] = de[:, 1:]
    D2[:, 1:, 0] = de[:, 1:]
    D2[:, 0, 0] = 0.0

    P = chart_matrix(p.chart)
    if p.chart is not Chart.U1:
        # z = P x  =>  x = P^T z
        x, J, D2 = P.T @ x, P.T @ J, np.einsum("ji,jab->iab", P, D2)
    return x, J, D2


def to_cartesian(p: HyperPoint) -> np.ndarray:
    """Inverse of :func:`to_hyper`; ``|result| == p.t``."""
    sr, cr = math.sin(p.r), math.cos(p.r)
    w1 = _omega(p.theta1, p.phi1)[0]
    w2 = _omega(p.theta2, p.phi2)[0]
    z = p.t * np.concatenate([sr * w1, cr * w2])
    if p.chart is Chart.U1:
        return z
    return chart_matrix(p.chart).T @ z


def _kappa(theta1, phi1, theta2, phi2) -> float:
    """Cosine of the angle between the two unit directions."""
    return (math.cos(theta1) * math.cos(theta2)
            + math.sin(theta1) * math.sin(theta2) * math.cos(phi1 - phi2))


def interparticle_distances(p: HyperPoint) -> tuple[float, float, float]:
    """Closed-form ``(|x1|, |x2|, |x1 - x2|)`` in the chart's own coordinates."""
    t, r = p.t, p.r
    s2k = math.sin(2.0 * r) * _kappa(*p.angles())
    if p.chart is Chart.U3:
        return (t * math.sqrt(max(1.0 + s2k, 0.0) / 2.0),
                t * math.sqrt(max(1.0 - s2k, 0.0) / 2.0),
                math.sqrt(2.0) * t * math.sin(r))
    d_lo, d_hi = t * math.sin(r), t * math.cos(r)
    d12 = t * math.sqrt(max(1.0 - s2k, 0.0))
    if p.chart is Chart.U2:
        return d_hi, d_lo, d12
    return d_lo, d_hi, d12


def coulomb_potential(x) -> float:
    """``-2/|x1| - 2/|x2| + 1/|x1 - x2|`` in Cartesian coordinates."""
    x = np.asarray(x, dtype=float)
    a, b = x[:3], x[3:]
    return -2.0 / np.linalg.norm(a) - 2.0 / np.linalg.norm(b) + 1.0 / np.linalg.norm(a - b)


@dataclass(frozen=True)
class MetricBlocks:
    """Diagonal metric ``dt^2 + t^2 [dr^2 + sin^2 r g_X + cos^2 r g_Y]``."""

    dt2_coeff: float
    dr2_coeff: float
    gX_scale: float
    gY_scale: float
    g_X: np.ndarray
    g_Y: np.ndarray

    def matrix(self) -> np.ndarray:
        m = np.zeros((6, 6))
        m[0, 0] = self.dt2_coeff
        m[1, 1] = self.dr2_coeff
        m[2:4, 2:4] = self.gX_scale * self.g_X
        m[4:6, 4:6] = self.gY_scale * self.g_Y
        return m


def metric_closed_form(p: HyperPoint) -> MetricBlocks:
    t2 = p.t * p.t
    g_X = np.diag([1.0, math.sin(p.theta1) ** 2])
    g_Y = np.diag([1.0, math.sin(p.theta2) ** 2])
    return MetricBlocks(1.0, t2, t2 * math.sin(p.r) ** 2, t2 * math.cos(p.r) ** 2, g_X, g_Y)


def _fd_jacobian(p: HyperPoint, h: float) -> np.ndarray:
    q = p.as_array()
    J = np.empty((6, 6))
    for a in range(6):
        qp, qm = q.copy(), q.copy()
        qp[a] += h
        qm[a] -= h
        J[:, a] = (to_cartesian(HyperPoint.from_array(p.chart, qp))
                   - to_cartesian(HyperPoint.from_array(p.chart, qm))) / (2.0 * h)
    return J


def metric_pullback(p: HyperPoint, step: float = 1e-5, *, richardson: bool = False) -> np.ndarray:
    """``J^T J`` with ``J`` the central-difference Jacobian of :func:`to_cartesian`."""
    if not 1e-7 <= step <= 1e-3:
        raise OutOfDomain(f"step must lie in [1e-7, 1e-3], got {step}")
    if (p.t - step <= 0.0 or p.r - step <= 0.0 or p.r + step >= HALF_PI
            or min(p.theta1, p.theta2) - step <= 0.0
            or max(p.theta1, p.theta2) + step >= math.pi):
        raise DegenerateAngles("finite-difference stencil leaves the chart interior")
    J = _fd_jacobian(p, step)
    if richardson:
        J = (4.0 * _fd_jacobian(p, 0.5 * step) - J) / 3.0
    M = J.T @ J
    return 0.5 * (M + M.T)


def ee_distance_ratio(p: HyperPoint) -> float:
    """Measured ``|x1 - x2| / (t r)`` for a point given in chart ``U3``."""
    if p.chart is not Chart.U3:
        p = to_hyper(to_cartesian(p), Chart.U3)
    x = to_cartesian(p)
    return float(np.linalg.norm(x[:3] - x[3:]) / (p.t * p.r))


def random_interior_points(rng: np.random.Generator, n: int, chart: Chart = Chart.U1, *,
                           t_range=(0.5, 2.0), margin: float = 0.05,
                           min_radicand: float = 1e-2) -> list[HyperPoint]:
    """Seeded points well inside the chart and away from every Coulomb singular set."""
    chart = Chart.parse(chart)
    out: list[HyperPoint] = []
    while len(out) < n:
        t = rng.uniform(*t_range)
        r = rng.uniform(margin, HALF_PI - margin)
        th1, th2 = rng.uniform(margin, math.pi - margin, size=2)
        ph1, ph2 = rng.uniform(0.0, TWO_PI, size=2)
        s2k = math.sin(2.0 * r) * _kappa(th1, ph1, th2, ph2)
        if 1.0 - abs(s2k) < min_radicand:
            continue
        out.append(HyperPoint(chart, t, r, th1, ph1, th2, ph2))
    return out
