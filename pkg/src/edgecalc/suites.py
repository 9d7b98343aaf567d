"""Verification suites. Each returns a list of :class:`CheckRecord` for one claim cluster."""
from __future__ import annotations

import math
from typing import Iterable, Optional

import numpy as np

from . import charts as ch
from . import edge_kernel as ek
from . import hamiltonian as ham
from . import symbols as sy
from .charts import Chart, HyperPoint
from .fields import EdgeField, field_catalogue, gaussian, polynomial, product, solid_harmonic
from .report import CheckRecord, check

__all__ = [
    "TOL",
    "verify_coords",
    "verify_operator",
    "verify_symbols",
    "verify_ellipticity",
    "verify_conormal",
    "verify_kernel",
    "verify_exit",
    "verify_fredholm",
]

# Pinned tolerances; a caller-supplied ``tol`` replaces the primary one of a suite.
TOL = {
    "roundtrip": 1e-12,
    "metric": 1e-8,
    "metric_step": 1e-5,
    "symmetry": 1e-14,
    "distance": 1e-12,
    "equivalence": 1e-6,
    "fd_equivalence": 1e-4,
    "rearrangement": 1e-9,
    "beltrami": 1e-6,
    "series": 1e-12,
    "wedge_forms": 1e-10,
    "positivity": 1e-12,
    "integer": 1e-12,
    "bessel_ode": 1e-8,
    "annihilation": 1e-8,
    "exponent_fit": 1e-3,
}


def _angle_diff(a: float, b: float) -> float:
    d = (a - b) % ch.TWO_PI
    return min(d, ch.TWO_PI - d)


def _charts(chart) -> list[Chart]:
    if chart is None or chart == "all":
        return list(Chart)
    return [Chart.parse(chart)]


# ---------------------------------------------------------------------------


def verify_coords(chart=None, samples: int = 100, seed: int = 0,
                  tol: Optional[float] = None) -> list[CheckRecord]:
    tol_rt = tol if tol is not None else TOL["roundtrip"]
    step = TOL["metric_step"]
    rng = np.random.default_rng(seed)
    out = []
    for c in _charts(chart):
        pts = ch.random_interior_points(rng, samples, c)
        rt = norm = metric = sym = dist = 0.0
        for p in pts:
            x = ch.to_cartesian(p)
            q = ch.to_hyper(x, c)
            rt = max(rt, abs(q.t - p.t), abs(q.r - p.r), abs(q.theta1 - p.theta1),
                     abs(q.theta2 - p.theta2), _angle_diff(q.phi1, p.phi1),
                     _angle_diff(q.phi2, p.phi2))
            rt = max(rt, float(np.abs(ch.to_cartesian(q) - x).max()))
            norm = max(norm, abs(np.linalg.norm(x) - p.t) / p.t)
            M = ch.metric_pullback(p, step)
            metric = max(metric, float(np.abs(M - ch.metric_closed_form(p).matrix()).max()))
            sym = max(sym, float(np.abs(M - M.T).max()))
            d_closed = ch.interparticle_distances(p)
            d_euclid = (np.linalg.norm(x[:3]), np.linalg.norm(x[3:]), np.linalg.norm(x[:3] - x[3:]))
            dist = max(dist, max(abs(a - b) for a, b in zip(d_closed, d_euclid)))
        k = f"coords.{c.value}"
        out += [
            check(f"{k}.roundtrip", rt, tol_rt, detail=f"samples={samples}"),
            check(f"{k}.norm_preservation", norm, tol_rt),
            check(f"{k}.metric_pullback_vs_closed_form", metric, TOL["metric"], detail=f"step={step}"),
            check(f"{k}.metric_symmetry", sym, TOL["symmetry"]),
            check(f"{k}.interparticle_distances", dist, TOL["distance"]),
        ]

    # electron swap maps U1 data to U2 data with r -> pi/2 - r
    pts = ch.random_interior_points(rng, samples, Chart.U1)
    swap_err = 0.0
    for p in pts:
        x = ch.to_cartesian(p)
        q2 = ch.to_hyper(x, Chart.U2)
        swap_err = max(swap_err, abs(q2.r - (ch.HALF_PI - p.r)), abs(q2.theta1 - p.theta2),
                       abs(q2.theta2 - p.theta1), _angle_diff(q2.phi1, p.phi2),
                       _angle_diff(q2.phi2, p.phi1), abs(q2.t - p.t))
        xs = np.concatenate([x[3:], x[:3]])
        q2s = ch.to_hyper(xs, Chart.U2)
        swap_err = max(swap_err, abs(q2s.r - p.r), abs(q2s.theta1 - p.theta1),
                       _angle_diff(q2s.phi1, p.phi1))
    out.append(check("coords.chart_symmetry_u1_u2", swap_err, tol_rt))

    # edge limit r -> 0 in U1: distances -> (0, t, t)
    p0 = HyperPoint(Chart.U1, 1.3, 1e-14, 1.0, 0.4, 2.0, 1.1)
    d = ch.interparticle_distances(p0)
    out.append(check("coords.edge_limit_distances",
                     max(abs(d[0]), abs(d[1] - 1.3), abs(d[2] - 1.3)), 1e-12))

    ratios = [ch.ee_distance_ratio(HyperPoint(Chart.U3, 1.0, r, 1.0, 0.3, 2.0, 1.0))
              for r in (1e-2, 1e-3, 1e-4)]
    out.append(CheckRecord(
        "coords.u3.ee_distance_over_t_r", "warning", ratios[-1], None,
        "measured |x1-x2|/(t r) as r->0 in chart u3: "
        + ", ".join(f"{v:.12f}" for v in ratios) + " (sqrt2 = 1.414213562373)"))
    return out


# ---------------------------------------------------------------------------


def _radial_test_field():
    # f(t) = t^2 exp(-t)
    def f(t):
        e = math.exp(-t)
        return t * t * e, (2 * t - t * t) * e, (2 - 4 * t + t * t) * e
    return f


def verify_operator(chart=None, samples: int = 100, seed: int = 0,
                    tol: Optional[float] = None) -> list[CheckRecord]:
    tol_eq = tol if tol is not None else TOL["equivalence"]
    rng = np.random.default_rng(seed)
    fields = field_catalogue(seed)
    edge_fields = [EdgeField.pullback(f) for f in fields]
    out = []
    for c in _charts(chart):
        pts = ch.random_interior_points(rng, samples, c)
        ce = ee = lap = pot = 0.0
        for p in pts:
            x = ch.to_cartesian(p)
            V = ch.coulomb_potential(x)
            pot = max(pot, abs(p.t * p.r * ham.coeff_v(p.r, *p.angles(), chart=c)
                               - (p.t * p.r) ** 2 * V) / (p.t * p.r) ** 2 / max(1.0, abs(V)))
            for f, e in zip(fields, edge_fields):
                hc = ham.apply_cartesian(f, x)
                he = ham.apply_edge(e, p)
                hk = ham.apply_corner(e, p)
                ce = max(ce, abs(hc - he))
                ee = max(ee, abs(he - hk))
                lap = max(lap, abs(ham.laplacian_hyper(e, p) - f.laplacian(x)))
        k = f"operator.{c.value}"
        out += [
            check(f"{k}.cartesian_vs_edge", ce, tol_eq,
                  detail=f"samples={samples};fields={len(fields)}"),
            check(f"{k}.edge_vs_corner", ee, min(tol_eq, TOL["rearrangement"])),
            check(f"{k}.beltrami_assembly_vs_cartesian_laplacian", lap, TOL["beltrami"]),
            check(f"{k}.potential_factorization", pot, TOL["series"]),
        ]

    # finite-difference fallback route (no analytic oracles), a few points
    pts = ch.random_interior_points(rng, 5, Chart.U1)
    g = gaussian(A=0.5 * np.eye(6), name="g")
    fd_err = 0.0
    for p in pts:
        x = ch.to_cartesian(p)
        fd_err = max(fd_err, abs(ham.apply_cartesian(g.numeric(1e-3), x)
                                 - ham.apply_edge(EdgeField(EdgeField.pullback(g).func), p)))
    out.append(check("operator.u1.finite_difference_route", fd_err, TOL["fd_equivalence"]))

    # radial reduction u = f(t):  -f''/2 - 5 f'/(2t) + V f
    f = _radial_test_field()
    rad = EdgeField.radial(f)
    red = 0.0
    for p in ch.random_interior_points(rng, 20, Chart.U1):
        v, d1, d2 = f(p.t)
        ref = -0.5 * d2 - 2.5 / p.t * d1 + ham.potential(p) * v
        red = max(red, abs(ham.apply_edge(rad, p) - ref), abs(ham.apply_corner(rad, p) - ref))
    out.append(check("operator.u1.radial_reduction", red, TOL["rearrangement"]))

    # constant u: only the potential survives
    const = EdgeField.pullback(polynomial(c0=1.0))
    cst = max(abs(ham.apply_corner(const, p) - ham.potential(p))
              for p in ch.random_interior_points(rng, 20, Chart.U1))
    out.append(check("operator.u1.constant_field", cst, TOL["rearrangement"]))

    # Delta_X acts as -l(l+1) on Y_lm
    eig = 0.0
    for l in (0, 1, 2, 3):
        e = EdgeField.pullback(solid_harmonic(l, 1))
        for p in ch.random_interior_points(rng, 10, Chart.U1):
            val, gr, H = e.jet(p)
            eig = max(eig, abs(ham.delta_x1(gr, H, p.theta1) + l * (l + 1) * val))
    out.append(check("operator.u1.delta_x_eigenvalues", eig, TOL["beltrami"]))

    # smoothness of h and v at the edge
    hs = [ham.coeff_h(10.0 ** -k) for k in range(4, 9)]
    vs = [ham.coeff_v(10.0 ** -k, 1.0, 0.2, 2.0, 1.5) for k in range(4, 9)]
    out.append(check("operator.coeff_h_edge_limit", max(abs(h + 1.0) for h in hs), 1e-6,
                     detail="h(10^-k), k=4..8 -> -1"))
    out.append(check("operator.coeff_v_edge_limit", max(abs(v + 2.0) for v in vs), 1e-3,
                     detail="v(10^-k), k=4..8 -> -2"))
    out.append(check("operator.coeff_h_series_branch",
                     abs(1 + 2e-3 * math.tan(1e-3) - 2e-3 / math.tan(1e-3) - ham.coeff_h(1e-3 * (1 - 1e-15))),
                     TOL["series"]))
    out.append(_fuchs_shape_record())
    return out


def _fuchs_shape_record() -> CheckRecord:
    """Edge form has Fuchs shape: j + |alpha| <= 2, base order <= 2 - (j + |alpha|),
    coefficients finite and continuous on r in [0, pi/4]."""
    rs = np.concatenate([[0.0], np.geomspace(1e-8, math.pi / 4, 60)])
    worst_jump = 0.0
    shape_ok = True
    prev = None
    for r in rs:
        terms = ham.edge_fuchs_terms(float(r), 1.2, 1.0, 0.3, 2.0, 1.1)
        for term in terms:
            order = term.j + sum(term.alpha)
            if order > 2 or term.x_order > 2 - order or not math.isfinite(term.value):
                shape_ok = False
        vals = np.array([term.value for term in terms])
        if prev is not None and r < 1e-6:
            worst_jump = max(worst_jump, float(np.abs(vals - prev).max()))
        prev = vals
    value = worst_jump if shape_ok else math.inf
    return check("operator.fuchs_shape", value, 1e-5,
                 detail="max coefficient change between r=0 and r<1e-6")


# ---------------------------------------------------------------------------


def _random_params(rng, n: int) -> list[sy.EdgeSymbolParams]:
    out = []
    while len(out) < n:
        t = rng.uniform(0.5, 2.0)
        th2 = rng.uniform(0.1, math.pi - 0.1)
        tau, T2, P2 = rng.normal(size=3)
        out.append(sy.EdgeSymbolParams(t, th2, rng.uniform(0, ch.TWO_PI), tau, T2, P2))
    return out


def verify_symbols(samples: int = 100, seed: int = 0,
                   tol: Optional[float] = None) -> list[CheckRecord]:
    rng = np.random.default_rng(seed)
    out = []
    pts = ch.random_interior_points(rng, samples, Chart.U1)
    hom = rel = inv = 0.0
    for p in pts:
        cov = sy.Covector(*rng.normal(size=6))
        s = sy.sigma_psi(p, cov)
        lam = rng.uniform(0.1, 10.0)
        hom = max(hom, abs(sy.sigma_psi(p, cov.scaled(lam)) - lam ** 2 * s) / (lam ** 2 * s))
        k = cov.as_array()
        scaled = sy.Covector(k[0] / p.r, k[1] / p.r, k[2], k[3], k[4] / p.r, k[5] / p.r)
        st = sy.sigma_psi_tilde(p, cov)
        rel = max(rel, abs(p.r ** 2 * sy.sigma_psi(p, scaled) - st) / st)
        # half the inverse metric in covariable order (rho, tau, ...) = coords (r, t, ...)
        G = ch.metric_closed_form(p).matrix()
        kc = np.array([k[1], k[0], k[2], k[3], k[4], k[5]])
        oracle = 0.5 * kc @ np.linalg.solve(G, kc)
        inv = max(inv, abs(s - oracle) / oracle)
    out += [
        check("symbols.sigma_psi.homogeneity", hom, 1e-12),
        check("symbols.sigma_psi_tilde.rescaling_relation", rel, 1e-12),
        check("symbols.sigma_psi.half_inverse_metric", inv, 1e-12),
        check("symbols.sigma_psi_tilde.r0_limit",
              abs(sy.sigma_psi_tilde(HyperPoint(Chart.U1, 1.0, 0.0, ch.HALF_PI, 0.0, 1.0, 0.0),
                                     sy.Covector(Theta1=1.0)) - 0.5), 1e-15),
    ]

    agree = const = frozen = 0.0
    gauss = sy.ConeField.from_function(
        lambda r, th, ph: math.exp(-r * r) * (1 + 0.3 * math.cos(th) + 0.2 * math.sin(th) * math.cos(ph)))
    for prm in _random_params(rng, samples):
        r = rng.uniform(0.1, 3.0)
        th1, ph1 = rng.uniform(0.2, math.pi - 0.2), rng.uniform(0, ch.TWO_PI)
        l = int(rng.integers(0, 4))
        sep = sy.ConeField.separated(lambda s: (math.exp(-s) * s, (1 - s) * math.exp(-s),
                                                (s - 2) * math.exp(-s)), l, int(rng.integers(-l, l + 1)))
        for u in (sep, gauss):
            a = sy.sigma_wedge_apply(prm, u, r, th1, ph1, form="display")
            b = sy.sigma_wedge_apply(prm, u, r, th1, ph1, form="footnote")
            c = sy.sigma_wedge_apply(prm, u, r, th1, ph1, form="frozen")
            scale = max(1.0, abs(a))
            agree = max(agree, abs(a - b) / scale)
            frozen = max(frozen, abs(a - c) / scale)
        const = max(const, abs(sy.sigma_wedge_apply(prm, sy.ConeField.constant(), r, th1, ph1)
                               + prm.C / (2 * prm.t ** 2)))
    out += [
        check("symbols.sigma_wedge.display_vs_footnote", agree, TOL["wedge_forms"]),
        check("symbols.sigma_wedge.frozen_coefficients", frozen, TOL["wedge_forms"]),
        check("symbols.sigma_wedge.constant_field", const, TOL["wedge_forms"]),
    ]
    return out


def verify_ellipticity(grid: Optional[sy.GridSpec] = None) -> list[CheckRecord]:
    return sy.check_ellipticity(grid).records()


def verify_conormal(l_max: int = 10, t: float = 1.0,
                    tol: Optional[float] = None) -> list[CheckRecord]:
    tol = tol if tol is not None else TOL["integer"]
    spec = sy.conormal_spectrum(l_max, t)
    integ = sector = 0.0
    for l, roots in spec.sectors:
        for w in roots:
            integ = max(integ, abs(w - round(float(np.real(w)))) if np.isreal(w) else math.inf)
        sector = max(sector, abs(roots[0] - (-l)), abs(roots[1] - (l + 1)))
    union = [round(float(w)) for w in spec.union()]
    covers = union == list(range(-l_max, l_max + 2))
    return [
        check("conormal.roots_integral", integ, tol, detail=f"l_max={l_max}"),
        check("conormal.sector_roots_equal_-l_l+1", sector, tol),
        CheckRecord("conormal.union_is_integer_range", "pass" if covers else "fail",
                    float(len(union)), None, f"union={union[0]}..{union[-1]}"),
    ]


# ---------------------------------------------------------------------------


def verify_kernel(l_max: int = 10, seed: int = 0, samples: int = 20) -> list[CheckRecord]:
    rng = np.random.default_rng(seed)
    out = []
    zs = np.linspace(0.1, 10.0, 50)
    for kind in ek.Kind:
        rec = fd = 0.0
        for l in range(l_max + 1):
            spec = ek.BesselHalfOrder(l, kind)
            for z in zs:
                rec = max(rec, ek.ode_residual(spec, z))
                fd = max(fd, ek.ode_residual(spec, z, method="fd"))
        out.append(check(f"kernel.bessel_ode.{kind.value}.recurrence_derivatives", rec,
                         TOL["bessel_ode"], detail=f"l<={l_max};z in [0.1,10]"))
        out.append(check(f"kernel.bessel_ode.{kind.value}.finite_difference_derivatives", fd,
                         TOL["bessel_ode"], detail=f"l<={l_max};z in [0.1,10]"))

    ann = 0.0
    for prm in _random_params(rng, samples):
        for l in range(min(5, l_max) + 1):
            for m in range(-l, l + 1):
                u = ek.kernel_field(prm, l, m)
                r = rng.uniform(0.05, 5.0)
                th1, ph1 = rng.uniform(0.1, math.pi - 0.1), rng.uniform(0, ch.TWO_PI)
                val, d1, d2, lap = u.jet(r, th1, ph1)
                scale = (abs(d2) + abs(2 * d1 / r) + abs(lap / r ** 2) + abs(prm.C * val)) / (2 * prm.t ** 2)
                res = sy.sigma_wedge_apply(prm, u, r, th1, ph1, form="display")
                ann = max(ann, abs(res) / scale)
    out.append(check("kernel.sigma_wedge_annihilates_K_solutions", ann, TOL["annihilation"],
                     detail="scaled residual; l<=5, all m"))

    fit = 0.0
    for l in range(4):
        fit = max(fit, abs(ek.fit_small_r_exponent(l, ek.Kind.K) - ek.membership_exponent(l)[0]))
    out.append(check("kernel.small_r_exponent_fit", fit, TOL["exponent_fit"]))
    classes_ok = all(ek.large_r_class_numeric(l, k)[0] == ek.membership_exponent(l, k)[1]
                     for l in range(4) for k in ek.Kind)
    out.append(CheckRecord("kernel.large_r_class", "pass" if classes_ok else "fail"))

    mismatch = []
    for l, g in [(0, 0.0), (0, 0.6), (1, -1.0), (0, -1.0), (1, 0.0), (2, -2.0), (0, 1.0)]:
        if ek.membership_decide(l, g) != ek.membership_quadrature(l, g)[0]:
            mismatch.append(f"(l={l},gamma={g})")
    out.append(CheckRecord("kernel.membership_quadrature_confirms", "fail" if mismatch else "pass",
                           float(len(mismatch)), 0.0, ";".join(mismatch)))
    return out


def verify_exit(samples: int = 1000, seed: int = 0) -> list[CheckRecord]:
    rng = np.random.default_rng(seed)
    min_e = min_psi = math.inf
    for prm in _random_params(rng, samples):
        xi = rng.normal(size=3) * rng.uniform(0.0, 5.0)
        se, spe = ek.exit_symbols(prm, xi)
        min_e = min(min_e, se)
        if np.any(xi != 0):
            min_psi = min(min_psi, spe / float(xi @ xi))
    out = [
        check("exit.sigma_e_positive", min_e, 0.0, below=False, detail=f"samples={samples}"),
        check("exit.sigma_psi_e_positive_on_unit_xi", min_psi, 0.0, below=False),
    ]
    zero = sy.EdgeSymbolParams(1.0, 1.0, 0.0, 0.0, 0.0, 0.0)
    out.append(CheckRecord("exit.zero_edge_covector", "degenerate", ek.exit_symbols(zero, np.zeros(3))[0],
                           None, "C = 0: excluded case, sigma_e(0) = 0"))
    return out


# ---------------------------------------------------------------------------


def verify_fredholm(gamma_min: float = -3.0, gamma_max: float = 4.0, step: float = 0.05,
                    l_max: int = 10) -> tuple[list[CheckRecord], list[ek.FredholmData]]:
    table = ek.fredholm_table(gamma_min, gamma_max, step, l_max)
    out = []
    for k, row in enumerate(table):
        out.append(CheckRecord(
            f"fredholm.row.{k:04d}", "pass", float(row.index), None,
            f"gamma={row.gamma:+.4f};dim_ker={row.dim_ker};dim_coker={row.dim_coker};"
            f"index={row.index};ker_l={row.kernel_l};coker_l={row.cokernel_l}"))

    iso = [row.gamma for row in table if row.dim_ker == 0 and row.dim_coker == 0]
    expected = [row.gamma for row in table if 0.5 < row.gamma < 1.5]
    out.append(CheckRecord("fredholm.isomorphism_window", "pass" if iso == expected else "fail",
                           float(len(iso)), None,
                           f"iso_rows={len(iso)};range=[{min(iso, default=math.nan)},{max(iso, default=math.nan)}]"))

    bad = []
    for a, b in zip(table, table[1:]):
        expected_jump = 0
        for l in range(l_max + 1):
            for crossing in (0.5 - l, 1.5 + l):
                if a.gamma < crossing < b.gamma:
                    expected_jump -= 2 * l + 1
        if b.index - a.index != expected_jump:
            bad.append(f"{a.gamma}->{b.gamma}")
    out.append(CheckRecord("fredholm.index_jumps", "fail" if bad else "pass",
                           float(len(bad)), 0.0, ";".join(bad[:5])))

    dual = [row.gamma for row in table
            if row.dim_coker != ek.fredholm_data(2.0 - row.gamma, l_max).dim_ker]
    out.append(CheckRecord("fredholm.coker_ker_duality", "fail" if dual else "pass",
                           float(len(dual)), 0.0))
    mono = all(b.index <= a.index for a, b in zip(table, table[1:]))
    out.append(CheckRecord("fredholm.index_nonincreasing", "pass" if mono else "fail"))
    return out, table


def chain(*groups: Iterable[CheckRecord]) -> list[CheckRecord]:
    return [rec for g in groups for rec in g]
