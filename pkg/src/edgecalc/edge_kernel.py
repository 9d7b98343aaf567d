"""Kernel, cokernel and Fredholm index of the principal edge symbol over the weight line.

Separating ``u = f(r) Y_lm`` in ``sigma_wedge u = 0`` leaves the radial equation
``f'' + (2/r) f' - l(l+1)/r^2 f + C f = 0`` with ``C < 0``; the substitution
``f = r^{-1/2} w(sqrt(-C) r)`` turns it into the modified Bessel equation of
order ``l + 1/2``. Half-integer orders are elementary, so everything here is
computed in closed form plus three-term recurrences run in their stable
direction.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import NonpositiveArgument, OrderOverflow, PreconditionError, TruncationBound
from .symbols import ConeField, EdgeSymbolParams

__all__ = [
    "Kind",
    "BesselHalfOrder",
    "WeightGamma",
    "FredholmData",
    "L_MAX_DEFAULT",
    "GAMMA_TOL",
    "bessel_half",
    "bessel_half_jet",
    "ode_residual",
    "radial_solution",
    "radial_residual",
    "kernel_field",
    "membership_exponent",
    "fit_small_r_exponent",
    "large_r_class_numeric",
    "membership_decide",
    "weighted_norm_truncated",
    "membership_quadrature",
    "is_fredholm_weight",
    "fredholm_data",
    "gamma_grid",
    "fredholm_table",
    "exit_symbols",
]

L_MAX_DEFAULT = 20
GAMMA_TOL = 1e-12
_RESCALE = 1e250


class Kind(str, enum.Enum):
    I_PLUS = "I_plus"
    I_MINUS = "I_minus"
    K = "K"


@dataclass(frozen=True)
class BesselHalfOrder:
    """``I_{l+1/2}``, ``I_{-(l+1/2)}`` or ``K_{l+1/2}``."""

    l: int
    kind: Kind = Kind.K

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.l < 0:
            raise ValueError("l must be non-negative")

    @property
    def order(self) -> float:
        return -(self.l + 0.5) if self.kind is Kind.I_MINUS else self.l + 0.5


def _k_seq(n: int, z: float) -> list[float]:
    """``K_{k+1/2}(z)`` for ``k = 0..n`` by upward recurrence (stable for K)."""
    k0 = math.sqrt(math.pi / (2.0 * z)) * math.exp(-z)
    out = [k0, k0 * (1.0 + 1.0 / z)]
    for k in range(1, n):
        out.append(out[k - 1] + (2.0 * k + 1.0) / z * out[k])
    return out[: n + 1]


def _i_minus_value(n: int, z: float) -> float:
    """``I_{-(n+1/2)}(z) = I_{n+1/2}(z) + (2/pi) (-1)^n K_{n+1/2}(z)``.

    Both terms are computed in their stable direction; the only cancellation is
    at the genuine zeros of odd-``n`` members.
    """
    return _i_plus_seq(n, z)[n] + (2.0 / math.pi) * (-1) ** n * _k_seq(n, z)[n]


def _i_plus_seq(n: int, z: float) -> list[float]:
    """``I_{k+1/2}(z)`` for ``k = 0..n`` by Miller's downward recurrence."""
    start = n + 30 + int(2.0 * z)
    vals = [0.0] * (start + 2)
    vals[start] = 1.0
    for k in range(start, 0, -1):
        # I_{mu-1} = I_{mu+1} + (2 mu / z) I_mu,  mu = k + 1/2
        vals[k - 1] = vals[k + 1] + (2.0 * k + 1.0) / z * vals[k]
        if abs(vals[k - 1]) > _RESCALE:
            vals = [v / _RESCALE for v in vals]
    norm = math.sqrt(2.0 / (math.pi * z)) * math.sinh(z) / vals[0]
    return [v * norm for v in vals[: n + 1]]


def _half_order_value(family: str, k: int, z: float) -> float:
    """Value at order ``k + 1/2`` (any integer ``k``) for family ``"I"`` or ``"K"``."""
    if family == "K":
        k = k if k >= 0 else -k - 1  # K_{-nu} = K_nu
        return _k_seq(k, z)[k]
    if k >= 0:
        return _i_plus_seq(k, z)[k]
    return _i_minus_value(-k - 1, z)


def _check_args(spec: BesselHalfOrder, z: float, l_max: int) -> None:
    if z <= 0.0:
        raise NonpositiveArgument(f"z must be positive, got {z}")
    if spec.l > l_max:
        raise OrderOverflow(f"l = {spec.l} exceeds l_max = {l_max}")


def _family_k(spec: BesselHalfOrder) -> tuple[str, int]:
    if spec.kind is Kind.K:
        return "K", spec.l
    if spec.kind is Kind.I_PLUS:
        return "I", spec.l
    return "I", -spec.l - 1


def bessel_half(spec: BesselHalfOrder, z: float, *, l_max: int = L_MAX_DEFAULT) -> float:
    """Modified Bessel function of half-integer order in elementary closed form."""
    _check_args(spec, z, l_max)
    return _half_order_value(*_family_k(spec), z)


def bessel_half_jet(spec: BesselHalfOrder, z: float, *,
                    l_max: int = L_MAX_DEFAULT) -> tuple[float, float, float]:
    """``(w, w', w'')`` using the derivative recursions in the order."""
    _check_args(spec, z, l_max)
    fam, k = _family_k(spec)
    v = {d: _half_order_value(fam, k + d, z) for d in (-2, -1, 0, 1, 2)}
    sign = -1.0 if fam == "K" else 1.0
    d1 = sign * 0.5 * (v[-1] + v[1])
    d2 = 0.25 * (v[-2] + 2.0 * v[0] + v[2])
    return v[0], d1, d2


def _fd_jet(f, x: float, h: float) -> tuple[float, float, float]:
    """Fourth-order central differences, Richardson-refined once."""

    def d(hh):
        fp1, fm1, fp2, fm2 = f(x + hh), f(x - hh), f(x + 2 * hh), f(x - 2 * hh)
        f0 = f(x)
        return ((-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * hh),
                (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * hh * hh))

    (a1, a2), (b1, b2) = d(h), d(0.5 * h)
    return f(x), (16 * b1 - a1) / 15, (16 * b2 - a2) / 15


def ode_residual(spec: BesselHalfOrder, z: float, *, method: str = "recurrence",
                 l_max: int = L_MAX_DEFAULT) -> float:
    """Scaled residual of ``z^2 w'' + z w' - (z^2 + nu^2) w`` for the chosen solution.

    The residual is divided by the sum of the magnitudes of the three terms, so it
    measures relative cancellation independently of the function's scale.
    ``method="fd"`` differentiates the computed values numerically instead of
    using the order recursions.
    """
    nu = spec.order
    if method == "recurrence":
        w, d1, d2 = bessel_half_jet(spec, z, l_max=l_max)
    elif method == "fd":
        _check_args(spec, z, l_max)
        w, d1, d2 = _fd_jet(lambda s: bessel_half(spec, s, l_max=l_max), z, 0.01 * z)
    else:
        raise ValueError(f"unknown method {method!r}")
    terms = (z * z * d2, z * d1, -(z * z + nu * nu) * w)
    scale = sum(abs(x) for x in terms)
    return abs(sum(terms)) / scale if scale else 0.0


def _check_C(C: float) -> float:
    if not C < 0.0:
        raise PreconditionError(f"need -C > 0 (nonzero edge covector), got C = {C}")
    return math.sqrt(-C)


def radial_solution(l: int, C: float, r: float, kind: Kind = Kind.K,
                    *, l_max: int = L_MAX_DEFAULT) -> tuple[float, float, float]:
    """``(f, f', f'')`` for ``f(r) = r^{-1/2} B_{l+1/2}(sqrt(-C) r)``."""
    a = _check_C(C)
    if r <= 0.0:
        raise NonpositiveArgument("r must be positive")
    w, w1, w2 = bessel_half_jet(BesselHalfOrder(l, kind), a * r, l_max=l_max)
    s = r ** -0.5
    f = s * w
    f1 = -0.5 * s / r * w + s * a * w1
    f2 = 0.75 * s / (r * r) * w - s / r * a * w1 + s * a * a * w2
    return f, f1, f2


def radial_residual(l: int, C: float, r: float, kind: Kind = Kind.K, *,
                    method: str = "analytic", l_max: int = L_MAX_DEFAULT) -> float:
    """Scaled residual of ``[d^2 + (2/r) d - l(l+1)/r^2 + C] f`` for the radial solution."""
    _check_C(C)
    if method == "analytic":
        f, f1, f2 = radial_solution(l, C, r, kind, l_max=l_max)
    elif method == "fd":
        f, f1, f2 = _fd_jet(lambda s: radial_solution(l, C, s, kind, l_max=l_max)[0], r, 0.01 * r)
    else:
        raise ValueError(f"unknown method {method!r}")
    terms = (f2, 2.0 / r * f1, (C - l * (l + 1) / (r * r)) * f)
    scale = sum(abs(x) for x in terms)
    return abs(sum(terms)) / scale if scale else 0.0


def kernel_field(params: EdgeSymbolParams, l: int, m: int = 0, kind: Kind = Kind.K) -> ConeField:
    """``r^{-1/2} B_{l+1/2}(sqrt(-C) r) Y_lm`` as a cone field."""
    C = params.C
    _check_C(C)
    return ConeField.separated(lambda r: radial_solution(l, C, r, kind), l, m,
                               name=f"{Kind(kind).value}_l{l}_m{m}")


# ---------------------------------------------------------------------------
# weighted-space membership


def membership_exponent(l: int, kind: Kind = Kind.K) -> tuple[float, str]:
    """Small-``r`` power and large-``r`` class of ``r^{-1/2} B_{l+1/2}(a r)``."""
    if l < 0:
        raise ValueError("l must be non-negative")
    kind = Kind(kind)
    if kind is Kind.K:
        return -(l + 1.0), "decaying"
    if kind is Kind.I_PLUS:
        return float(l), "growing"
    return -(l + 1.0), "growing"


def fit_small_r_exponent(l: int, kind: Kind = Kind.K, a: float = 1.0,
                         r_range: tuple[float, float] = (1e-6, 1e-3), n: int = 25) -> float:
    """Least-squares slope of ``log|f|`` against ``log r`` near the cone tip."""
    rs = np.geomspace(*r_range, n)
    spec = BesselHalfOrder(l, kind)
    vals = np.array([abs(bessel_half(spec, a * r)) / math.sqrt(r) for r in rs])
    slope, _ = np.polyfit(np.log(rs), np.log(vals), 1)
    return float(slope)


def large_r_class_numeric(l: int, kind: Kind = Kind.K, a: float = 1.0,
                          r1: float = 25.0, r2: float = 50.0) -> tuple[str, float]:
    """Classify growth from ``f(r2)/f(r1)``; also returns the fitted exponential rate."""
    spec = BesselHalfOrder(l, kind)
    f1 = abs(bessel_half(spec, a * r1)) / math.sqrt(r1)
    f2 = abs(bessel_half(spec, a * r2)) / math.sqrt(r2)
    rate = math.log(f2 / f1) / (r2 - r1)
    return ("growing" if rate > 0 else "decaying"), rate


def membership_decide(l: int, gamma: float) -> bool:
    """Whether ``r^{-1/2} K_{l+1/2}(a r) Y_lm`` lies in ``K^{2,gamma}`` of the cone over ``S^2``.

    With base dimension ``n = 2`` the tip condition is
    ``integral r^{2 - 2 gamma} |f|^2 dr < inf``; ``f ~ r^{-(l+1)}`` gives
    ``gamma < 1/2 - l``. The exponential decay settles the behaviour at infinity.
    """
    if l < 0:
        raise ValueError("l must be non-negative")
    p, large = membership_exponent(l, Kind.K)
    if large != "decaying":
        return False
    # integrand power 2 - 2 gamma + 2p must exceed -1
    return 2.0 - 2.0 * gamma + 2.0 * p > -1.0


def weighted_norm_truncated(l: int, gamma: float, eps: float, *, a: float = 1.0,
                            kind: Kind = Kind.K, s: int = 2) -> float:
    """``sum_{j<=s} int_eps^1 r^{2-2 gamma} |(r d_r)^j f|^2 dr`` for the radial solution."""
    C = -a * a

    def integrand(logr):
        r = math.exp(logr)
        f, f1, f2 = radial_solution(l, C, r, kind)
        jets = [f, r * f1, r * f1 + r * r * f2][: s + 1]
        # dr = r d(log r)
        return r ** (3.0 - 2.0 * gamma) * sum(x * x for x in jets)

    val, _ = integrate.quad(integrand, math.log(eps), 0.0, limit=200, epsabs=0.0, epsrel=1e-10)
    return val


def membership_quadrature(l: int, gamma: float, *, eps: float = 1e-10,
                          growth: float = 0.10, a: float = 1.0) -> tuple[bool, float, float]:
    """Confirming oracle: the truncated norm is flagged divergent if halving ``eps``
    grows it by more than ``growth``. Returns ``(in_space, N(eps), N(eps/2))``."""
    n1 = weighted_norm_truncated(l, gamma, eps, a=a)
    n2 = weighted_norm_truncated(l, gamma, 0.5 * eps, a=a)
    return n2 <= (1.0 + growth) * n1, n1, n2


# ---------------------------------------------------------------------------
# Fredholm data


def is_fredholm_weight(gamma: float, tol: float = GAMMA_TOL) -> bool:
    """``gamma`` is admissible iff it stays off ``Z + 1/2``."""
    return abs((gamma - 0.5) - round(gamma - 0.5)) > tol


@dataclass(frozen=True)
class WeightGamma:
    gamma: float

    @property
    def fredholm_ok(self) -> bool:
        return is_fredholm_weight(self.gamma)


@dataclass
class FredholmData:
    gamma: float
    dim_ker: int
    dim_coker: int
    fredholm_ok: bool = True
    kernel_l: list[int] = field(default_factory=list)
    cokernel_l: list[int] = field(default_factory=list)

    @property
    def index(self) -> int:
        return self.dim_ker - self.dim_coker

    @property
    def isomorphism(self) -> bool:
        return self.fredholm_ok and self.dim_ker == 0 and self.dim_coker == 0


def fredholm_data(gamma: float, l_max: int = L_MAX_DEFAULT) -> FredholmData:
    """Kernel/cokernel dimensions of the principal edge symbol on ``K^{s,gamma}``.

    Kernel sectors are those ``l`` whose decaying solution lies in ``K^{2,gamma}``;
    the cokernel is the kernel of the (formally identical) adjoint on
    ``K^{0,2-gamma}``. Dimensions count the ``2l+1`` spherical harmonics per sector;
    ``kernel_l`` / ``cokernel_l`` list the contributing ``l`` themselves.
    """
    if 0.5 - gamma >= l_max or gamma - 1.5 >= l_max:
        raise TruncationBound(f"l_max = {l_max} too small for gamma = {gamma}")
    ok = is_fredholm_weight(gamma)
    if not ok:
        warnings.warn(f"gamma = {gamma} lies on Z + 1/2; the edge symbol is not Fredholm there",
                      RuntimeWarning, stacklevel=2)
    ker = [l for l in range(l_max + 1) if membership_decide(l, gamma)]
    coker = [l for l in range(l_max + 1) if membership_decide(l, 2.0 - gamma)]
    return FredholmData(gamma, sum(2 * l + 1 for l in ker), sum(2 * l + 1 for l in coker),
                        ok, ker, coker)


def gamma_grid(gamma_min: float, gamma_max: float, step: float, *,
               exclude_nonfredholm: bool = True) -> list[float]:
    """Weights ``gamma_min + k step`` up to ``gamma_max``, rounded to 12 digits."""
    if step <= 0 or gamma_min >= gamma_max:
        raise ValueError("need step > 0 and gamma_min < gamma_max")
    n = int(math.floor((gamma_max - gamma_min) / step + 1e-9))
    grid = [round(gamma_min + k * step, 12) for k in range(n + 1)]
    if exclude_nonfredholm:
        grid = [g for g in grid if is_fredholm_weight(g)]
    return grid


def fredholm_table(gamma_min: float, gamma_max: float, step: float,
                   l_max: int = L_MAX_DEFAULT) -> list[FredholmData]:
    return [fredholm_data(g, l_max) for g in gamma_grid(gamma_min, gamma_max, step)]


def exit_symbols(params: EdgeSymbolParams, xi) -> tuple[float, float]:
    """``(sigma_e, sigma_psi_e) = ((|xi|^2 - C) / 2t^2, |xi|^2 / 2t^2)`` of the pushed-forward operator."""
    xi = np.asarray(xi, dtype=float)
    n2 = float(xi @ xi)
    tt2 = 2.0 * params.t ** 2
    return (n2 - params.C) / tt2, n2 / tt2
