"""Domain-perturbation laboratory for boxes and planar shells.

A scenario sandwiches an arbitrary domain U between an inner domain A and an
outer domain B (A subset of U subset of B) and audits the eigenfunction
ratios phi_U/phi_B (bounded above) and phi_U/phi_A (bounded below on the
trimmed inner domain), plus the eigenvalue ordering lam(B) <= lam(U) <=
lam(A).  For shells the admissible widening is cubic in the shell thickness:
a_eps, b_eps <= const * eps^3, which keeps the eigenvalue gap of the
sandwich bounded.

Scenario configs load from a key = value text file; radial boundary
functions are truncated cosine series `const | k:amp:phase | ...`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from . import bases, estimates, spectral2d

__all__ = [
    "PerturbationScenario",
    "check_box_conditions",
    "box_perturbation_audit",
    "annulus_perturbation_audit",
    "parse_scenario",
    "load_scenario",
    "harmonic_series",
]


def harmonic_series(const: float, harmonics=()):
    """theta -> const + sum amp * cos(k theta + phase)."""
    harmonics = tuple(harmonics)

    def fn(theta):
        theta = np.asarray(theta, dtype=float)
        out = np.full_like(theta, const)
        for k, amp, phase in harmonics:
            out = out + amp * np.cos(k * theta + phase)
        return out

    return fn


@dataclass
class PerturbationScenario:
    """Sandwich A subset U subset B, either boxes or planar shells.

    Box form: half widths a_widths (B1) and b_widths (B2) plus an optional
    corner notch size carving U out of B2.  Shell form: inner shell
    (1, 1+eps) x window, hull widened by (a_eps, b_eps) radially and eta on
    each angular side, U bounded by the harmonic series rmin/rmax.
    """

    kind: str  # "box" or "annulus"
    # box fields
    a_widths: tuple = ()
    b_widths: tuple = ()
    notch: float = 0.0
    # annulus fields
    eps: float = 0.0
    a_eps: float = 0.0
    b_eps: float = 0.0
    eta: float = 0.0
    theta1: float | None = None  # None: full circle
    rmin_const: float = 0.0
    rmin_harmonics: tuple = ()
    rmax_const: float = 0.0
    rmax_harmonics: tuple = ()
    # regime parameters (recorded, checked where meaningful)
    C1: float = 1.0
    C2: float = 1.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind == "annulus":
            if self.eps <= 0:
                raise ValueError("annulus scenario needs eps > 0")
            if self.a_eps > self.C1 * self.eps**3 + 1e-15 or \
               self.b_eps > self.C2 * self.eps**3 + 1e-15:
                raise ValueError(
                    "widening exceeds the cubic regime: need a_eps <= C1 eps^3 "
                    "and b_eps <= C2 eps^3"
                )
            if self.rmin_const == 0.0:
                self.rmin_const = 1.0 - self.a_eps
            if self.rmax_const == 0.0:
                self.rmax_const = 1.0 + self.eps + self.b_eps
        elif self.kind == "box":
            if len(self.a_widths) != len(self.b_widths):
                raise ValueError("box scenario needs matching dimensions")
            if any(a > b + 1e-15 for a, b in zip(self.a_widths, self.b_widths)):
                raise ValueError("need B1 inside B2 componentwise")
        else:
            raise ValueError(f"unknown scenario kind {self.kind!r}")

    def r_min(self):
        return harmonic_series(self.rmin_const, self.rmin_harmonics)

    def r_max(self):
        return harmonic_series(self.rmax_const, self.rmax_harmonics)


def check_box_conditions(a_widths, b_widths, C1: float, C2: float) -> dict:
    """Evaluate the two box-sandwich admissibility conditions exactly.

    Condition 1: 1/a_i^2 - 1/b_i^2 <= C1 / max_i b_i^2 for every axis.
    Condition 2: a_i >= b_i / C2.  Also checks that condition 1 at level C1
    implies condition 2 at C2 = sqrt(C1 + 1).
    """
    a = np.asarray(a_widths, dtype=float)
    b = np.asarray(b_widths, dtype=float)
    bmax2 = float(np.max(b) ** 2)
    lhs1 = float(np.max(1.0 / a**2 - 1.0 / b**2) * bmax2)
    cond1 = estimates.BoundsReport.check(
        "box condition 1 (eigenvalue drift)", lhs1, 0.0, C1, tol=1e-12,
        extra={"required_C1": lhs1},
    )
    ratio = float(np.min(a / b))
    cond2 = estimates.BoundsReport.check(
        "box condition 2 (width ratio)", ratio, 1.0 / C2, math.inf, tol=1e-12,
        extra={"required_C2": 1.0 / ratio},
    )
    implied_c2 = math.sqrt(lhs1 + 1.0)
    implication = estimates.BoundsReport.check(
        "condition 1 implies condition 2 at sqrt(C1+1)", ratio,
        1.0 / implied_c2, math.inf, tol=1e-12, extra={"implied_C2": implied_c2},
    )
    return {"condition1": cond1, "condition2": cond2, "implication": implication}


def _box_indicator(scenario: PerturbationScenario):
    bw = np.asarray(scenario.b_widths, dtype=float)
    s = scenario.notch

    def indicator(X, Y):
        inside = (np.abs(X) < bw[0]) & (np.abs(Y) < bw[1])
        if s > 0:
            in_notch = (np.abs(X) > bw[0] - s) & (np.abs(Y) > bw[1] - s)
            inside &= ~in_notch
        return inside

    return indicator


def box_perturbation_audit(scenario: PerturbationScenario, h: float,
                           margin_cells: int = 2) -> dict:
    """Eigenfunction ratio audit for a box sandwich B1 subset U subset B2.

    Solves U on the grid, evaluates the exact box eigenfunctions of B1 and
    B2 at the grid nodes, and reports max_U phi_U/phi_B2 and
    min over the trimmed B1 of phi_U/phi_B1, with the eigenvalue ordering.
    """
    if scenario.kind != "box":
        raise ValueError("need a box scenario")
    conditions = check_box_conditions(
        scenario.a_widths, scenario.b_widths, scenario.C1, scenario.C2
    )
    bw = scenario.b_widths
    domain = spectral2d.CartesianDomain2D(
        indicator=_box_indicator(scenario),
        bbox=(-bw[0], bw[0], -bw[1], bw[1]),
    )
    sol = spectral2d.solve_cartesian(domain, h, k=1)
    x, y = sol.axes
    X, Y = np.meshgrid(x, y, indexing="ij")
    phi_u = sol.values[0]
    interior = sol.interior_mask(margin_cells)

    aw = np.asarray(scenario.a_widths, dtype=float)
    inside_a = (np.abs(X) < aw[0]) & (np.abs(Y) < aw[1])
    # sandwich check on the node set
    if np.any(inside_a & ~sol.mask):
        raise ValueError("sandwich violated on grid: B1 escapes U")

    car_b2 = estimates.box_caricature(scenario.b_widths)
    car_b1 = estimates.box_caricature(scenario.a_widths)
    pts = np.stack([X[interior], Y[interior]], axis=1)
    phi_b2 = estimates.caricature_eval(car_b2, pts)
    upper_ratio = float(np.max(phi_u[interior] / phi_b2))

    trim_a = (np.abs(X) < aw[0] - margin_cells * h) & (np.abs(Y) < aw[1] - margin_cells * h)
    trim_a &= interior
    pts_a = np.stack([X[trim_a], Y[trim_a]], axis=1)
    phi_b1 = estimates.caricature_eval(car_b1, pts_a)
    lower_ratio = float(np.min(phi_u[trim_a] / phi_b1))

    lam_b1 = float(sum((math.pi / (2.0 * a)) ** 2 for a in scenario.a_widths))
    lam_b2 = float(sum((math.pi / (2.0 * a)) ** 2 for a in scenario.b_widths))
    lam_u = float(sol.eigenvalues[0])
    ordering_ok = lam_b2 <= lam_u * (1 + 1e-3) and lam_u <= lam_b1 * (1 + 1e-3)
    return {
        "conditions": conditions,
        "upper_ratio": upper_ratio,
        "lower_ratio": lower_ratio,
        "lam_inner": lam_b1,
        "lam_u": lam_u,
        "lam_outer": lam_b2,
        "eigenvalue_ordering_ok": bool(ordering_ok),
        "grid_h": h,
    }


def _interp_on(sol: spectral2d.GridSpectrum, wrap: bool):
    """Linear interpolation of a grid eigenfunction (zero outside its mask)."""
    r, th = sol.axes
    vals = sol.values[0]
    if wrap:
        th_ext = np.concatenate([th, [th[0] + 2.0 * math.pi]])
        vals_ext = np.concatenate([vals, vals[:, :1]], axis=1)
    else:
        th_ext, vals_ext = th, vals
    interp = RegularGridInterpolator(
        (r, th_ext), vals_ext, bounds_error=False, fill_value=0.0
    )

    def fn(rr, tt):
        rr = np.asarray(rr, dtype=float)
        tt = np.asarray(tt, dtype=float)
        if wrap:
            tt = np.mod(tt, 2.0 * math.pi)
        return interp(np.stack([rr.ravel(), tt.ravel()], axis=1)).reshape(rr.shape)

    return fn


def annulus_perturbation_audit(scenario: PerturbationScenario,
                               grids: tuple[int, int] = (48, 384)) -> dict:
    """Eigenfunction ratio audit for a shell sandwich.

    A = (1, 1+eps) x window, B = (1-a_eps, 1+eps+b_eps) x (window widened by
    eta), U bounded by the scenario's radial functions.  Reports
    (i) max_U phi_U/phi_B, (ii) min over the trimmed A of phi_U/phi_A,
    (iii) the spread of phi_U over the tent-profile product on the core
    region, and the eigenvalue ordering.
    """
    if scenario.kind != "annulus":
        raise ValueError("need an annulus scenario")
    eps, a_eps, b_eps, eta = scenario.eps, scenario.a_eps, scenario.b_eps, scenario.eta
    Nr, Nt = grids
    full = scenario.theta1 is None
    if full:
        dom_a = spectral2d.annulus_domain(1.0, 1.0 + eps)
        dom_b = spectral2d.annulus_domain(1.0 - a_eps, 1.0 + eps + b_eps)
        dom_u = spectral2d.PolarDomain2D(
            r_min=scenario.r_min(), r_max=scenario.r_max(), wrap=True
        )
        g_base = bases.base_eigendata(bases.full_sphere(2))
        window_a = (0.0, 2.0 * math.pi)
    else:
        t1 = scenario.theta1
        dom_a = spectral2d.annulus_domain(1.0, 1.0 + eps, 0.0, t1, wrap=False)
        dom_b = spectral2d.annulus_domain(
            1.0 - a_eps, 1.0 + eps + b_eps, -eta, t1 + eta, wrap=False
        )
        dom_u = spectral2d.PolarDomain2D(
            r_min=scenario.r_min(), r_max=scenario.r_max(),
            theta_lo=-eta, theta_hi=t1 + eta, wrap=False,
        )
        g_base = bases.base_eigendata(bases.circle_arc(t1))
        window_a = (0.0, t1)

    sol_a = spectral2d.solve_polar(dom_a, Nr, Nt, k=1)
    sol_b = spectral2d.solve_polar(dom_b, Nr, Nt, k=1)
    sol_u = spectral2d.solve_polar(dom_u, Nr, Nt, k=1)

    lam_a, lam_u, lam_b = (float(s.eigenvalues[0]) for s in (sol_a, sol_u, sol_b))
    ordering_ok = lam_b <= lam_u * (1 + 1e-3) and lam_u <= lam_a * (1 + 1e-3)

    hr = sol_u.meta["hr"]
    margin = 2.0 * hr + eps**3

    # (i) upper: phi_U / phi_B over U's interior nodes
    phi_b_at = _interp_on(sol_b, full)
    r_u, th_u = sol_u.axes
    Ru, THu = np.meshgrid(r_u, th_u, indexing="ij")
    keep_u = sol_u.interior_mask(2) & (sol_u.values[0] > 0)
    phi_b_vals = phi_b_at(Ru[keep_u], THu[keep_u])
    pos = phi_b_vals > 0
    upper_ratio = float(np.max(sol_u.values[0][keep_u][pos] / phi_b_vals[pos]))

    # (ii) lower: phi_U / phi_A over the trimmed inner shell
    phi_u_at = _interp_on(sol_u, full)
    r_a, th_a = sol_a.axes
    Ra, THa = np.meshgrid(r_a, th_a, indexing="ij")
    trim = (Ra > 1.0 + margin) & (Ra < 1.0 + eps - margin)
    if not full:
        trim &= (THa > window_a[0] + eta) & (THa < window_a[1] - eta)
    trim &= sol_a.interior_mask(2)
    phi_u_vals = phi_u_at(Ra[trim], THa[trim])
    lower_ratio = float(np.min(phi_u_vals / sol_a.values[0][trim]))

    # (iii) core spread against the tent-profile product
    core = (Ra > 1.0 + max(a_eps, margin)) & (Ra < 1.0 + eps - max(b_eps, margin))
    if not full:
        core &= (THa > window_a[0] + eta) & (THa < window_a[1] - eta)
    core &= sol_a.interior_mask(2)
    tent = np.minimum(Ra[core] - 1.0, 1.0 + eps - Ra[core]) / eps**1.5
    profile = tent * g_base.phi0(THa[core])
    ratios = phi_u_at(Ra[core], THa[core]) / profile
    core_spread = float(np.max(ratios) / np.min(ratios))

    return {
        "upper_ratio": upper_ratio,
        "lower_ratio": lower_ratio,
        "core_spread": core_spread,
        "lam_inner": lam_a,
        "lam_u": lam_u,
        "lam_hull": lam_b,
        "eigenvalue_gap": lam_a - lam_b,
        "eigenvalue_ordering_ok": bool(ordering_ok),
        "grids": grids,
    }


def widening_exponent_sweep(eps: float, p_values=(2.0, 2.5, 3.0),
                            grids: tuple[int, int] = (40, 256)) -> list[dict]:
    """Exploratory sweep of the widening exponent: hull radii eps^p.

    The cubic exponent is the proven admissible scale; this sweep reports
    how the sandwich ratios and the eigenvalue gap degrade as the widening
    coarsens toward eps^2.  Report-only: no conclusion is asserted.
    """
    rows = []
    for p in p_values:
        w = eps**p
        scenario = PerturbationScenario(
            kind="annulus", eps=eps, a_eps=w, b_eps=w,
            C1=w / eps**3 * (1.0 + 1e-9), C2=w / eps**3 * (1.0 + 1e-9),
        )
        audit = annulus_perturbation_audit(scenario, grids=grids)
        rows.append({
            "p": float(p), "widening": w,
            "upper_ratio": audit["upper_ratio"],
            "lower_ratio": audit["lower_ratio"],
            "core_spread": audit["core_spread"],
            "eigenvalue_gap": audit["eigenvalue_gap"],
        })
    return rows


def _parse_series(text: str):
    parts = [p.strip() for p in text.split("|")]
    const = float(parts[0])
    harm = []
    for p in parts[1:]:
        if not p:
            continue
        k, amp, phase = p.split(":")
        harm.append((int(k), float(amp), float(phase)))
    return const, tuple(harm)


def parse_scenario(text: str) -> PerturbationScenario:
    """Parse a scenario from key = value lines (see load_scenario)."""
    fields: dict = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"malformed scenario line: {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        fields[key] = val
    kind = fields.pop("kind", None)
    if kind not in ("box", "annulus"):
        raise ValueError("scenario must declare kind = box | annulus")
    kwargs: dict = {"kind": kind}
    if kind == "box":
        kwargs["a_widths"] = tuple(float(v) for v in fields.pop("b1").split())
        kwargs["b_widths"] = tuple(float(v) for v in fields.pop("b2").split())
        for key in ("notch", "C1", "C2"):
            if key in fields:
                kwargs[key] = float(fields.pop(key))
    else:
        for key in ("eps", "a_eps", "b_eps", "eta", "C1", "C2", "theta1"):
            if key in fields:
                kwargs[key] = float(fields.pop(key))
        if "rmin" in fields:
            kwargs["rmin_const"], kwargs["rmin_harmonics"] = _parse_series(fields.pop("rmin"))
        if "rmax" in fields:
            kwargs["rmax_const"], kwargs["rmax_harmonics"] = _parse_series(fields.pop("rmax"))
    if fields:
        raise ValueError(f"unknown scenario keys: {sorted(fields)}")
    return PerturbationScenario(**kwargs)


def load_scenario(path) -> PerturbationScenario:
    """Load a scenario config file.

    Format: one `key = value` per line, `#` comments.  Keys: kind
    (box|annulus); box: b1, b2 (half widths, space separated), notch, C1,
    C2; annulus: eps, a_eps, b_eps, eta, theta1 (omit for the full circle),
    rmin, rmax (cosine series `const | k:amp:phase | ...`).
    """
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())
