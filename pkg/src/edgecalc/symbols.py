"""Symbolic hierarchy of the edge-degenerate helium Hamiltonian in chart ``U1``.

Covariables ``(rho, tau, Theta1, Phi1, Theta2, Phi2)`` are dual to
``(r, t, theta1, phi1, theta2, phi2)``. The edge covariables are
``eta = (tau, Theta2, Phi2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .charts import DEGENERACY_TOL, HALF_PI, HyperPoint
from .errors import DegenerateAngles, OutOfDomain
from .fields import _fd_gradient, _fd_hessian, real_sph_harm
from .hamiltonian import edge_fuchs_terms
from .report import CheckRecord, check

__all__ = [
    "Covector",
    "EdgeSymbolParams",
    "ConeField",
    "ConormalSpectrum",
    "GridSpec",
    "EllipticityReport",
    "sigma_psi",
    "sigma_psi_tilde",
    "sigma_psi_grid",
    "sigma_psi_tilde_grid",
    "sigma_wedge_apply",
    "conormal_symbol",
    "conormal_spectrum",
    "check_ellipticity",
]


@dataclass(frozen=True)
class Covector:
    rho: float = 0.0
    tau: float = 0.0
    Theta1: float = 0.0
    Phi1: float = 0.0
    Theta2: float = 0.0
    Phi2: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.rho, self.tau, self.Theta1, self.Phi1, self.Theta2, self.Phi2])

    def scaled(self, lam: float) -> "Covector":
        return Covector(*(lam * self.as_array()))

    def normalized(self) -> "Covector":
        n = float(np.linalg.norm(self.as_array()))
        if n == 0.0:
            raise ValueError("cannot normalise the zero covector")
        return self.scaled(1.0 / n)


def _r2_over_sin2(r):
    """``r^2 / sin^2 r`` (array-aware), equal to 1 at ``r = 0``."""
    r = np.asarray(r, dtype=float)
    small = np.abs(r) < 1e-3
    r2 = r * r
    series = 1.0 + r2 / 3.0 + r2 * r2 / 15.0 + 2.0 * r2 ** 3 / 189.0
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = r2 / np.sin(r) ** 2
    return np.where(small, series, direct)


def _symbol_checks(r, theta1, theta2, *, allow_r0: bool, tol=DEGENERACY_TOL):
    if (not allow_r0 and r < tol) or math.cos(r) < tol:
        raise DegenerateAngles(f"r = {r} outside the chart interior")
    if math.sin(theta1) < tol or math.sin(theta2) < tol:
        raise DegenerateAngles("polar angle on the axis")


def sigma_psi(p: HyperPoint, cov: Covector) -> float:
    """Homogeneous principal symbol (order 2) at an interior point of ``U1``."""
    _symbol_checks(p.r, p.theta1, p.theta2, allow_r0=False)
    t, r = p.t, p.r
    c2 = math.cos(r) ** 2
    s_r2 = math.sin(r) ** 2
    s1 = math.sin(p.theta1) ** 2
    s2 = math.sin(p.theta2) ** 2
    k = cov
    return (
        (r * k.rho) ** 2 / (2 * t * t)
        + (r * k.tau) ** 2 / 2
        + (r * k.Theta2) ** 2 / (2 * t * t * c2)
        + (r * k.Phi2) ** 2 / (2 * t * t * s2 * c2)
        + r * r * k.Theta1 ** 2 / (2 * t * t * s_r2)
        + r * r * k.Phi1 ** 2 / (2 * t * t * s_r2 * s1)
    ) / (r * r)


def sigma_psi_tilde(p: HyperPoint, cov: Covector) -> float:
    """Rescaled principal symbol, evaluable up to ``r = 0``."""
    _symbol_checks(p.r, p.theta1, p.theta2, allow_r0=True)
    return float(sigma_psi_tilde_grid(p.t, p.r, p.theta1, p.theta2, cov.as_array()[None, :])[0])


def sigma_psi_grid(t, r, theta1, theta2, cov) -> np.ndarray:
    """Vectorised :func:`sigma_psi`; ``cov`` has shape ``(N, 6)``, others broadcast."""
    cov = np.asarray(cov, dtype=float)
    rho, tau, T1, P1, T2, P2 = cov.T
    t2 = 2.0 * np.asarray(t) ** 2
    c2 = np.cos(r) ** 2
    return (rho ** 2 / t2 + tau ** 2 / 2 + T2 ** 2 / (t2 * c2)
            + P2 ** 2 / (t2 * np.sin(theta2) ** 2 * c2)
            + (T1 ** 2 + P1 ** 2 / np.sin(theta1) ** 2) / (t2 * np.sin(r) ** 2))


def sigma_psi_tilde_grid(t, r, theta1, theta2, cov) -> np.ndarray:
    cov = np.asarray(cov, dtype=float)
    rho, tau, T1, P1, T2, P2 = cov.T
    t2 = 2.0 * np.asarray(t) ** 2
    c2 = np.cos(r) ** 2
    return (rho ** 2 / t2 + tau ** 2 / 2 + T2 ** 2 / (t2 * c2)
            + P2 ** 2 / (t2 * np.sin(theta2) ** 2 * c2)
            + _r2_over_sin2(r) * (T1 ** 2 + P1 ** 2 / np.sin(theta1) ** 2) / t2)


# ---------------------------------------------------------------------------
# principal edge symbol


@dataclass(frozen=True)
class EdgeSymbolParams:
    """Frozen edge point ``(t, theta2, phi2)`` and edge covariables ``(tau, Theta2, Phi2)``."""

    t: float
    theta2: float
    phi2: float
    tau: float
    Theta2: float
    Phi2: float

    def __post_init__(self):
        if self.t <= 0.0:
            raise OutOfDomain("edge variable t must be positive")
        if math.sin(self.theta2) < DEGENERACY_TOL:
            raise DegenerateAngles("theta2 on the polar axis")

    @property
    def C(self) -> float:
        return -(self.t * self.tau) ** 2 - self.Theta2 ** 2 - self.Phi2 ** 2 / math.sin(self.theta2) ** 2

    @property
    def edge_covector_zero(self) -> bool:
        return self.tau == 0.0 and self.Theta2 == 0.0 and self.Phi2 == 0.0


@dataclass
class ConeField:
    """A function on the stretched cone ``(0, inf) x S^2``.

    ``jet(r, theta, phi)`` returns ``(u, d_r u, d_r^2 u, Delta_X u)``.
    """

    jet: Callable[[float, float, float], tuple[float, float, float, float]]
    name: str = "cone-field"

    @classmethod
    def separated(cls, radial: Callable[[float], tuple[float, float, float]], l: int, m: int = 0,
                  name: Optional[str] = None) -> "ConeField":
        """``f(r) Y_lm``; ``radial(r)`` returns ``(f, f', f'')``."""

        def jet(r, theta, phi):
            y = float(real_sph_harm(l, m, theta, phi))
            f, d1, d2 = radial(r)
            return f * y, d1 * y, d2 * y, -l * (l + 1) * f * y

        return cls(jet, name or f"separated_l{l}_m{m}")

    @classmethod
    def from_function(cls, f: Callable[[float, float, float], float], step: float = 1e-3,
                      name: str = "fd-cone-field") -> "ConeField":
        def jet(r, theta, phi):
            q = np.array([r, theta, phi])
            g = _fd_gradient(lambda q: f(*q), q, step)
            H = _fd_hessian(lambda q: f(*q), q, step)
            lap = H[1, 1] + g[1] / math.tan(theta) + H[2, 2] / math.sin(theta) ** 2
            return f(r, theta, phi), g[0], H[0, 0], lap

        return cls(jet, name)

    @classmethod
    def constant(cls, c: float = 1.0) -> "ConeField":
        return cls(lambda r, th, ph: (c, 0.0, 0.0, 0.0), "constant")


def sigma_wedge_apply(params: EdgeSymbolParams, u: ConeField, r: float, theta1: float,
                      phi1: float, *, form: str = "footnote") -> float:
    """Apply the principal edge symbol to ``u`` at ``(r, theta1, phi1)``.

    ``form`` selects the Fuchs-type display (``"display"``), the reduced
    ``-(1/2t^2)[d_r^2 + (2/r) d_r + Delta_X/r^2 + C]`` form (``"footnote"``), or
    the operator rebuilt from the Hamiltonian's edge coefficients frozen at
    ``r = 0`` (``"frozen"``).
    """
    if r <= 0.0:
        raise OutOfDomain("cone variable must be positive")
    if math.sin(theta1) < DEGENERACY_TOL:
        raise DegenerateAngles("theta1 on the polar axis")
    t = params.t
    tt = t * t
    val, d1, d2, lap = u.jet(r, theta1, phi1)
    m_r = -r * d1
    m_rr = r * d1 + r * r * d2
    if form == "footnote":
        return -(d2 + 2.0 / r * d1 + lap / (r * r) + params.C * val) / (2.0 * tt)
    if form == "display":
        return (
            -m_rr / (2.0 * tt)
            + m_r / (2.0 * tt)
            + (r * params.tau) ** 2 / 2.0 * val
            + (r * params.Theta2) ** 2 / (2.0 * tt) * val
            + (r * params.Phi2) ** 2 / (2.0 * tt * math.sin(params.theta2) ** 2) * val
            - lap / (2.0 * tt)
        ) / (r * r)
    if form == "frozen":
        eta = (params.tau, params.Theta2, params.Phi2)
        total = 0.0 + 0.0j
        for term in edge_fuchs_terms(0.0, t, theta1, phi1, params.theta2, params.phi2):
            if term.x_order == 2:
                base = lap
            else:
                base = {0: val, 1: m_r, 2: m_rr}[term.j]
            # (r d_y)^alpha -> (i r eta)^alpha
            factor = np.prod([(1j * r * e) ** a for e, a in zip(eta, term.alpha)])
            total += term.value * factor * base
        return float(total.real) / (r * r)
    raise ValueError(f"unknown form {form!r}")


# ---------------------------------------------------------------------------
# conormal symbol


def _frozen_mellin_coeffs(t: float, l: int) -> tuple[float, float, float]:
    """``(a2, a1, a0)`` of the conormal symbol on the spherical-harmonic sector ``l``."""
    a = {2: 0.0, 1: 0.0, 0: 0.0}
    for term in edge_fuchs_terms(0.0, t, HALF_PI, 0.0, HALF_PI, 0.0):
        if any(term.alpha):
            continue  # carries r^|alpha|, vanishes in the conormal symbol
        if term.x_order == 2:
            a[0] += term.value * (-l * (l + 1))
        else:
            a[term.j] += term.value
    return a[2], a[1], a[0]


def conormal_symbol(w: complex, l: int, t: float = 1.0) -> complex:
    a2, a1, a0 = _frozen_mellin_coeffs(t, l)
    return a2 * w * w + a1 * w + a0


def _quadratic_roots(a, b, c) -> tuple[float, float]:
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        sq = complex(0.0, math.sqrt(-disc))
        return ((-b - sq) / (2 * a), (-b + sq) / (2 * a))
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b if b != 0.0 else 1.0))
    return tuple(sorted((q / a, c / q)))


@dataclass
class ConormalSpectrum:
    t: float
    sectors: list[tuple[int, tuple[float, float]]] = field(default_factory=list)

    def union(self) -> list[float]:
        return sorted({w for _, roots in self.sectors for w in roots})


def conormal_spectrum(l_max: int, t: float = 1.0) -> ConormalSpectrum:
    """Points ``w`` where the conormal symbol fails to be invertible, per sector ``l <= l_max``."""
    if l_max < 0:
        raise ValueError("l_max must be non-negative")
    spec = ConormalSpectrum(t)
    for l in range(l_max + 1):
        spec.sectors.append((l, _quadratic_roots(*_frozen_mellin_coeffs(t, l))))
    return spec


# ---------------------------------------------------------------------------
# ellipticity sweep


@dataclass
class GridSpec:
    """Tensor grid over ``(t, r, theta1, theta2)`` paired with seeded unit covectors.

    The symbols do not depend on ``phi1``, ``phi2``.
    """

    n_per_axis: int = 10
    t_range: tuple[float, float] = (0.5, 2.0)
    r_range: tuple[float, float] = (1e-3, HALF_PI - 1e-3)
    angle_margin: float = 1e-3
    seed: int = 0
    covectors: str = "random"  # or "zero"
    threshold: float = 1e-12

    def axes(self, include_r0: bool = False):
        n = self.n_per_axis
        t = np.linspace(*self.t_range, n)
        r = np.linspace(*self.r_range, n)
        if include_r0:
            r = np.concatenate([[0.0], r])
        th = np.linspace(self.angle_margin, math.pi - self.angle_margin, n)
        return t, r, th, th

    def points(self, include_r0: bool = False) -> np.ndarray:
        grids = np.meshgrid(*self.axes(include_r0), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)

    def unit_covectors(self, n: int) -> np.ndarray:
        if self.covectors == "zero":
            return np.zeros((n, 6))
        rng = np.random.default_rng(self.seed)
        c = rng.normal(size=(n, 6))
        return c / np.linalg.norm(c, axis=1, keepdims=True)


@dataclass
class EllipticityReport:
    n_psi: int
    n_tilde: int
    min_sigma_psi: float
    min_sigma_psi_tilde: float
    min_exact_psi: float
    min_exact_tilde: float
    threshold: float
    degenerate_input: bool = False

    @property
    def passed(self) -> bool:
        return (not self.degenerate_input and self.min_sigma_psi > self.threshold
                and self.min_sigma_psi_tilde > self.threshold)

    def records(self) -> list[CheckRecord]:
        if self.degenerate_input:
            return [CheckRecord("ellipticity.covectors", "degenerate", 0.0, self.threshold,
                                "zero covectors supplied; symbols vanish identically")]
        return [
            check("ellipticity.sigma_psi.min_sampled", self.min_sigma_psi, self.threshold,
                  below=False, detail=f"samples={self.n_psi}"),
            check("ellipticity.sigma_psi.min_unit_sphere", self.min_exact_psi, self.threshold,
                  below=False, detail="smallest diagonal coefficient over the grid"),
            check("ellipticity.sigma_psi_tilde.min_sampled", self.min_sigma_psi_tilde,
                  self.threshold, below=False, detail=f"samples={self.n_tilde};includes r=0"),
            check("ellipticity.sigma_psi_tilde.min_unit_sphere", self.min_exact_tilde,
                  self.threshold, below=False, detail="includes r=0"),
        ]


def _diag_coeffs(t, r, th1, th2, tilde: bool) -> np.ndarray:
    eye = np.eye(6)
    return np.stack([(sigma_psi_tilde_grid if tilde else sigma_psi_grid)(
        t, r, th1, th2, np.broadcast_to(eye[k], (len(t), 6))) for k in range(6)], axis=1)


def check_ellipticity(grid: Optional[GridSpec] = None) -> EllipticityReport:
    """Minimum of both principal symbols over the grid on unit covectors.

    Both symbols are diagonal quadratic forms, so besides the sampled minimum the
    exact minimum over the unit sphere (smallest diagonal coefficient) is reported.
    """
    grid = grid or GridSpec()
    pts = grid.points()
    pts0 = grid.points(include_r0=True)
    cov = grid.unit_covectors(len(pts))
    cov0 = grid.unit_covectors(len(pts0))
    if grid.covectors == "zero":
        return EllipticityReport(len(pts), len(pts0), 0.0, 0.0, 0.0, 0.0, grid.threshold,
                                 degenerate_input=True)
    s = sigma_psi_grid(*pts.T, cov)
    s0 = sigma_psi_tilde_grid(*pts0.T, cov0)
    d = _diag_coeffs(*pts.T, tilde=False)
    d0 = _diag_coeffs(*pts0.T, tilde=True)
    return EllipticityReport(len(pts), len(pts0), float(s.min()), float(s0.min()),
                             float(d.min()), float(d0.min()), grid.threshold)
