"""Test functions with analytic derivative oracles.

A :class:`ScalarField` lives on Cartesian ``R^6``; an :class:`EdgeField` lives on a
hyperspherical chart. Pulling a scalar field back through a chart uses the exact
chain rule with :func:`edgecalc.charts.embedding_jet`, so operator identities can
be certified well below finite-difference noise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.special import sph_harm_y

from .charts import HyperPoint, embedding_jet, to_cartesian

__all__ = [
    "ScalarField",
    "EdgeField",
    "gaussian",
    "polynomial",
    "product",
    "radial_profile",
    "solid_harmonic",
    "real_sph_harm",
    "field_catalogue",
]


def _fd_gradient(f, x, h):
    g = np.empty(len(x))
    for i in range(len(x)):
        e = np.zeros(len(x))
        e[i] = h
        g[i] = (-f(x + 2 * e) + 8 * f(x + e) - 8 * f(x - e) + f(x - 2 * e)) / (12 * h)
    return g


def _fd_hessian(f, x, h):
    """Fourth-order central differences for all second partials."""
    n = len(x)
    H = np.empty((n, n))
    f0 = f(x)
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h
        H[i, i] = (-f(x + 2 * ei) + 16 * f(x + ei) - 30 * f0 + 16 * f(x - ei) - f(x - 2 * ei)) / (12 * h * h)
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = h

            def mixed(s):
                return (f(x + s * (ei + ej)) - f(x + s * (ei - ej))
                        - f(x - s * (ei - ej)) + f(x - s * (ei + ej))) / (4 * s * s * h * h)

            H[i, j] = H[j, i] = (4 * mixed(1.0) - mixed(2.0)) / 3.0
    return H


@dataclass
class ScalarField:
    """A C^2 function on ``R^6`` with optional analytic gradient/Hessian.

    Missing oracles fall back to fourth-order central differences with step ``fd_step``.
    """

    func: Callable[[np.ndarray], float]
    grad: Optional[Callable[[np.ndarray], np.ndarray]] = None
    hess: Optional[Callable[[np.ndarray], np.ndarray]] = None
    fd_step: float = 1e-3
    name: str = "field"

    def __call__(self, x) -> float:
        return float(self.func(np.asarray(x, dtype=float)))

    @property
    def analytic(self) -> bool:
        return self.grad is not None and self.hess is not None

    def gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.grad is not None:
            return np.asarray(self.grad(x), dtype=float)
        return _fd_gradient(self.func, x, self.fd_step)

    def hessian(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.hess is not None:
            return np.asarray(self.hess(x), dtype=float)
        return _fd_hessian(self.func, x, self.fd_step)

    def laplacian(self, x) -> float:
        return float(np.trace(self.hessian(x)))

    def numeric(self, fd_step: Optional[float] = None) -> "ScalarField":
        """Copy with the analytic oracles dropped (forces finite differences)."""
        return ScalarField(self.func, fd_step=fd_step or self.fd_step, name=self.name + "[fd]")


@dataclass
class EdgeField:
    """A function of hyperspherical coordinates ``(t, r, theta1, phi1, theta2, phi2)``.

    ``jet(p)`` returns ``(value, gradient[6], hessian[6, 6])`` in coordinate order.
    Without an analytic ``jet`` the derivatives come from fourth-order central
    differences in the chart variables.
    """

    func: Callable[[HyperPoint], float]
    jet_fn: Optional[Callable[[HyperPoint], tuple]] = None
    fd_step: float = 1e-3
    name: str = "edge-field"

    def __call__(self, p: HyperPoint) -> float:
        return float(self.func(p))

    def jet(self, p: HyperPoint) -> tuple[float, np.ndarray, np.ndarray]:
        if self.jet_fn is not None:
            v, g, H = self.jet_fn(p)
            return float(v), np.asarray(g, dtype=float), np.asarray(H, dtype=float)
        chart = p.chart

        def f(q):
            return self.func(HyperPoint.from_array(chart, q))

        q = p.as_array()
        return f(q), _fd_gradient(f, q, self.fd_step), _fd_hessian(f, q, self.fd_step)

    @classmethod
    def pullback(cls, u: ScalarField) -> "EdgeField":
        """``u o to_cartesian`` with derivatives by the exact chain rule."""

        def func(p):
            return u(to_cartesian(p))

        def jet(p):
            x, J, D2 = embedding_jet(p)
            g = u.gradient(x)
            H = u.hessian(x)
            return u(x), J.T @ g, J.T @ H @ J + np.einsum("i,iab->ab", g, D2)

        return cls(func, jet, name=u.name)

    @classmethod
    def radial(cls, f: Callable[[float], tuple[float, float, float]], name="radial") -> "EdgeField":
        """Field depending on ``t`` only; ``f(t)`` returns ``(f, f', f'')``."""

        def jet(p):
            v, d1, d2 = f(p.t)
            g = np.zeros(6)
            g[0] = d1
            H = np.zeros((6, 6))
            H[0, 0] = d2
            return v, g, H

        return cls(lambda p: f(p.t)[0], jet, name=name)


# ---------------------------------------------------------------------------
# catalogue


def gaussian(A=None, center=None, name="gaussian") -> ScalarField:
    """``exp(-(x - c)^T A (x - c))``; defaults to ``exp(-|x|^2)``."""
    A = np.eye(6) if A is None else np.asarray(A, dtype=float)
    A = 0.5 * (A + A.T)
    c = np.zeros(6) if center is None else np.asarray(center, dtype=float)

    def func(x):
        d = x - c
        return math.exp(-d @ A @ d)

    def grad(x):
        d = x - c
        return -2.0 * (A @ d) * func(x)

    def hess(x):
        d = x - c
        Ad = A @ d
        return (4.0 * np.outer(Ad, Ad) - 2.0 * A) * func(x)

    return ScalarField(func, grad, hess, name=name)


def polynomial(c0=0.0, b=None, Q=None, T=None, name="polynomial") -> ScalarField:
    """``c0 + b.x + x^T Q x / 2 + T_ijk x_i x_j x_k / 6`` with symmetrised ``Q``, ``T``."""
    b = np.zeros(6) if b is None else np.asarray(b, dtype=float)
    Q = np.zeros((6, 6)) if Q is None else np.asarray(Q, dtype=float)
    Q = 0.5 * (Q + Q.T)
    if T is None:
        T = np.zeros((6, 6, 6))
    else:
        T = np.asarray(T, dtype=float)
        T = sum(np.transpose(T, perm) for perm in
                [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]) / 6.0

    def func(x):
        return c0 + b @ x + 0.5 * x @ Q @ x + np.einsum("ijk,i,j,k->", T, x, x, x) / 6.0

    def grad(x):
        return b + Q @ x + 0.5 * np.einsum("ijk,j,k->i", T, x, x)

    def hess(x):
        return Q + np.einsum("ijk,k->ij", T, x)

    return ScalarField(func, grad, hess, name=name)


def product(a: ScalarField, b: ScalarField, name=None) -> ScalarField:
    def func(x):
        return a(x) * b(x)

    def grad(x):
        return a(x) * b.gradient(x) + b(x) * a.gradient(x)

    def hess(x):
        ga, gb = a.gradient(x), b.gradient(x)
        return a(x) * b.hessian(x) + b(x) * a.hessian(x) + np.outer(ga, gb) + np.outer(gb, ga)

    return ScalarField(func, grad, hess, name=name or f"{a.name}*{b.name}")


def radial_profile(f: Callable[[float], tuple[float, float, float]], name="radial") -> ScalarField:
    """``f(|x|)`` where ``f(s)`` returns ``(f, f', f'')``; requires ``x != 0``."""

    def func(x):
        return f(float(np.linalg.norm(x)))[0]

    def grad(x):
        s = float(np.linalg.norm(x))
        return f(s)[1] * x / s

    def hess(x):
        s = float(np.linalg.norm(x))
        _, d1, d2 = f(s)
        e = x / s
        return d2 * np.outer(e, e) + d1 / s * (np.eye(6) - np.outer(e, e))

    return ScalarField(func, grad, hess, name=name)


# Real homogeneous harmonic polynomials of degree l in electron-1 coordinates,
# written as the quadratic/cubic data accepted by ``polynomial``.
def solid_harmonic(l: int, electron: int = 1) -> ScalarField:
    """A harmonic homogeneous polynomial of degree ``l`` (0..3) in one electron's coordinates.

    On the sphere it restricts to ``Y_{l0}`` up to normalisation, so the angular
    Laplacian of that electron acts as ``-l(l+1)``.
    """
    o = 0 if electron == 1 else 3
    name = f"solid_harmonic_l{l}_e{electron}"
    if l == 0:
        return polynomial(c0=1.0, name=name)
    if l == 1:
        b = np.zeros(6)
        b[o + 2] = 1.0
        return polynomial(b=b, name=name)
    if l == 2:
        Q = np.zeros((6, 6))
        Q[o, o] = Q[o + 1, o + 1] = -2.0
        Q[o + 2, o + 2] = 4.0  # 2 z^2 - x^2 - y^2
        return polynomial(Q=Q, name=name)
    if l == 3:
        # 2 z^3 - 3 z x^2 - 3 z y^2
        T = np.zeros((6, 6, 6))
        T[o + 2, o + 2, o + 2] = 12.0
        for k in (o, o + 1):
            T[o + 2, k, k] = T[k, o + 2, k] = T[k, k, o + 2] = -6.0
        return polynomial(T=T, name=name)
    raise ValueError("solid harmonics are catalogued for l <= 3")


def real_sph_harm(l: int, m: int, theta, phi):
    """Real orthonormal spherical harmonic ``Y_lm`` (``theta`` polar, ``phi`` azimuth)."""
    y = sph_harm_y(l, abs(m), theta, phi)
    if m > 0:
        return math.sqrt(2.0) * (-1) ** m * np.real(y)
    if m < 0:
        return math.sqrt(2.0) * (-1) ** m * np.imag(y)
    return np.real(y)


def field_catalogue(seed: int = 0) -> list[ScalarField]:
    """Gaussian, polynomial and ``Y_lm``-modulated fields, each stressing different terms."""
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(6, 6))
    A = 0.3 * np.eye(6) + 0.05 * (M @ M.T)
    fields = [
        gaussian(name="gaussian_iso"),
        gaussian(A=A, center=0.2 * rng.normal(size=6), name="gaussian_aniso"),
        polynomial(c0=0.0, Q=2.0 * np.eye(6), name="t_squared"),
        polynomial(c0=0.7, b=rng.normal(size=6), Q=rng.normal(size=(6, 6)),
                   T=0.5 * rng.normal(size=(6, 6, 6)), name="cubic"),
    ]
    g = gaussian(A=0.5 * np.eye(6), name="g")
    for l in (1, 2, 3):
        fields.append(product(solid_harmonic(l, 1), g, name=f"ylm_l{l}_gauss"))
    fields.append(product(solid_harmonic(2, 2), g, name="ylm_l2_e2_gauss"))
    return fields
