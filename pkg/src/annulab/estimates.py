"""Closed-form comparison profiles and eigenvalue bound checkers.

A "caricature" is an explicit expression known to be two-sided comparable to
a principal Dirichlet eigenfunction; this module evaluates the catalog of
such profiles (thin/non-thin annuli, boxes, separated cosine products,
orthant products, coordinate triangles on S^2), the matching two-sided
eigenvalue bounds for annuli, and runs the numeric audits that confront
profiles and bounds with computed eigendata.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import radial

__all__ = [
    "BoundsReport",
    "CaricatureFn",
    "thin_annulus_caricature",
    "wide_annulus_caricature",
    "box_caricature",
    "separated_cosine_caricature",
    "orthant_product_caricature",
    "coordinate_triangle_caricature",
    "caricature_eval",
    "comparability_audit",
    "annulus_eigenvalue_coefficients",
    "annulus_eigenvalue_bounds",
    "supnorm_bounds_check",
    "hadamard_scan",
    "eigengap_scan",
]


@dataclass(frozen=True)
class BoundsReport:
    """Outcome of a two-sided bound check."""

    name: str
    value: float
    lower: float
    upper: float
    passed: bool
    slack: float
    extra: dict = field(default_factory=dict)

    @staticmethod
    def check(name: str, value: float, lower: float, upper: float,
              tol: float = 0.0, extra: dict | None = None) -> "BoundsReport":
        passed = (lower - tol) <= value <= (upper + tol)
        slack = min(value - lower, upper - value)
        return BoundsReport(name, value, lower, upper, passed, slack, extra or {})


@dataclass(frozen=True)
class CaricatureFn:
    """An explicit comparison profile; evaluate through caricature_eval."""

    kind: str
    params: dict


def thin_annulus_caricature(n: int, a: float, b: float) -> CaricatureFn:
    """Tent profile for annuli with a/b in (1/2, 1):
    (1/a^(n/2+1)) min(|x|-a, b-|x|) / (b/a - 1)^(3/2)."""
    return CaricatureFn("thin_annulus", {"n": n, "a": a, "b": b})


def wide_annulus_caricature(n: int, a: float, b: float) -> CaricatureFn:
    """Profile for annuli with a/b <= 1/2; harmonic-in-|x| inner factor."""
    kind = "wide_annulus_2d" if n == 2 else "wide_annulus_nd"
    return CaricatureFn(kind, {"n": n, "a": a, "b": b})


def box_caricature(half_widths) -> CaricatureFn:
    """Exact principal eigenfunction of a centered box: prod cos(pi x_i / 2 a_i) / sqrt(a_i)."""
    return CaricatureFn("box", {"half_widths": tuple(float(a) for a in half_widths)})


def separated_cosine_caricature(n: int, a: float, b: float, base_phi0=None) -> CaricatureFn:
    """Separated profile r^(-(n-1)/2) sqrt(2/(b-a)) cos(pi(r-(a+b)/2)/(b-a)) g(theta).

    The radial factor is the exact transformed principal mode when the
    centrifugal coefficient vanishes (n = 3), so the profile is then the
    shell eigenfunction itself up to grid error.  base_phi0 defaults to the
    constant; pass the base eigenfunction for a non-trivial product.
    """
    return CaricatureFn(
        "separated_cosine", {"n": n, "a": a, "b": b, "base_phi0": base_phi0}
    )


def orthant_product_caricature(k: int) -> CaricatureFn:
    """Product of great-circle distances to the k bounding equators."""
    return CaricatureFn("orthant_product", {"k": k})


def coordinate_triangle_caricature(theta1: float) -> CaricatureFn:
    """Profile for the S^2 triangle 0 < theta < theta1, 0 < phi < pi/2.

    The two equator-corner angles are right angles, so their factors drop
    out and the profile reduces to d1 d2 d3 (d1+d2)^(pi/theta1 - 2) over a
    diameter power, with d1, d2 the meridian distances and d3 the equator
    distance.  Evaluate-only: no eigen-oracle is attached.
    """
    return CaricatureFn("coordinate_triangle", {"theta1": theta1})


def caricature_eval(fn: CaricatureFn, point) -> np.ndarray:
    """Evaluate a caricature.

    Point conventions: radial annulus kinds take |x| (scalar or array);
    separated_cosine takes (r, theta_point); box takes arrays of shape
    (..., n); orthant_product takes unit vectors (..., n);
    coordinate_triangle takes (theta, phi).
    """
    p = fn.params
    if fn.kind == "thin_annulus":
        r = np.asarray(point, dtype=float)
        n, a, b = p["n"], p["a"], p["b"]
        _require_inside(r, a, b)
        return np.minimum(r - a, b - r) / ((b / a - 1.0) ** 1.5 * a ** (n / 2.0 + 1.0))
    if fn.kind == "wide_annulus_nd":
        r = np.asarray(point, dtype=float)
        n, a, b = p["n"], p["a"], p["b"]
        _require_inside(r, a, b)
        return (1.0 - (a / r) ** (n - 2)) * (1.0 - r / b) / b ** (n / 2.0)
    if fn.kind == "wide_annulus_2d":
        r = np.asarray(point, dtype=float)
        a, b = p["a"], p["b"]
        _require_inside(r, a, b)
        return np.log(r / a) * (1.0 - r / b) / (b * math.log(1.0 + b / (4.0 * a)))
    if fn.kind == "box":
        x = np.atleast_2d(np.asarray(point, dtype=float))
        half = np.asarray(p["half_widths"])
        if np.any(np.abs(x) >= half):
            raise ValueError("point outside the box")
        vals = np.prod(np.cos(math.pi * x / (2.0 * half)) / np.sqrt(half), axis=-1)
        return vals
    if fn.kind == "separated_cosine":
        r, theta = point
        r = np.asarray(r, dtype=float)
        n, a, b = p["n"], p["a"], p["b"]
        _require_inside(r, a, b, closed=True)
        radial_part = (
            r ** (-(n - 1) / 2.0)
            * math.sqrt(2.0 / (b - a))
            * np.cos(math.pi * (r - (a + b) / 2.0) / (b - a))
        )
        g = p["base_phi0"]
        return radial_part * (g(theta) if g is not None else 1.0)
    if fn.kind == "orthant_product":
        x = np.atleast_2d(np.asarray(point, dtype=float))
        k = p["k"]
        return np.prod(np.arcsin(np.clip(np.abs(x[:, :k]), 0.0, 1.0)), axis=1)
    if fn.kind == "coordinate_triangle":
        theta, phi = point
        theta = np.asarray(theta, dtype=float)
        phi = np.asarray(phi, dtype=float)
        t1 = p["theta1"]
        d1 = np.arcsin(np.clip(np.sin(phi) * np.sin(theta), -1.0, 1.0))
        d2 = np.arcsin(np.clip(np.sin(phi) * np.sin(t1 - theta), -1.0, 1.0))
        d3 = math.pi / 2.0 - phi
        diam = max(math.pi / 2.0, min(t1, math.pi))
        expo = math.pi / t1 - 2.0
        return d1 * d2 * d3 * (d1 + d2) ** expo / diam ** (2.0 + math.pi / t1)
    raise ValueError(f"unknown caricature kind {fn.kind!r}")


def _require_inside(r, a, b, closed=False):
    r = np.asarray(r)
    if closed:
        ok = np.all((r >= a) & (r <= b))
    else:
        ok = np.all((r > a) & (r < b))
    if not ok:
        raise ValueError(f"point outside the annulus ({a}, {b})")


def comparability_audit(phi_values, caricature_values):
    """Empirical two-sided comparability of phi against a profile.

    Returns (sup_ratio, inf_ratio) of phi/Phi over the supplied samples;
    both inputs must already be restricted to an interior margin where the
    profile is strictly positive.
    """
    phi = np.asarray(phi_values, dtype=float).ravel()
    car = np.asarray(caricature_values, dtype=float).ravel()
    keep = car > 0
    if not np.any(keep):
        raise ValueError("empty grid after margin exclusion")
    ratio = phi[keep] / car[keep]
    return float(ratio.max()), float(ratio.min())


def annulus_eigenvalue_coefficients(n: int, x: float) -> tuple[float, float]:
    """The two-sided coefficients (C1, C2) for annuli with radius ratio x = b/a.

    lambda(A_{a,b}) lies in [C1, C2] / (b-a)^2.  The quadratic correction
    swaps between (1 - 1/x)^2 and (x - 1)^2 depending on the sign of
    (n-1)(n-3), i.e. on n = 2 versus n >= 3.
    """
    if n < 2 or x <= 1.0:
        raise ValueError(f"need n >= 2 and x = b/a > 1, got n={n}, x={x}")
    q = (n - 1) * (n - 3) / 4.0
    pi2 = math.pi**2
    shrink = (1.0 - 1.0 / x) ** 2
    grow = (x - 1.0) ** 2
    if n >= 3:
        c1 = max(n * pi2 / 4.0 * shrink, pi2 + q * shrink)
        c2 = min((n * math.pi) ** 2, pi2 + q * grow)
    else:
        c1 = max(n * pi2 / 4.0 * shrink, pi2 + q * grow)
        c2 = min((n * math.pi) ** 2, pi2 + q * shrink)
    return c1, c2


def annulus_eigenvalue_bounds(n: int, a: float, b: float) -> BoundsReport:
    """Bounds report skeleton [C1, C2]/(b-a)^2 for the annulus eigenvalue;
    value is filled with the solver's answer for the pass flag."""
    c1, c2 = annulus_eigenvalue_coefficients(n, b / a)
    lo = c1 / (b - a) ** 2
    hi = c2 / (b - a) ** 2
    lam = radial.solve_radial(n, a, b, 0.0, N=1024, k=1)[0].lam
    return BoundsReport.check(
        f"annulus eigenvalue n={n} a={a:g} b={b:g}", lam, lo, hi,
        tol=1e-6 * lam, extra={"C1": c1, "C2": c2},
    )


def supnorm_bounds_check(lam: float, volume: float, phi_sup: float, n: int) -> BoundsReport:
    """Check 1/|U| <= sup(phi)^2 and record sup(phi)^2 / lambda^(n/2).

    The upper comparison has no explicit constant, so the normalized value
    is reported only; boundedness is asserted across families by the caller.
    """
    value = phi_sup**2
    lower = 1.0 / volume
    ratio = value / lam ** (n / 2.0)
    return BoundsReport.check(
        "eigenfunction sup bound", value, lower, math.inf,
        tol=1e-9 * value, extra={"sup2_over_lam_pow": ratio},
    )


def hadamard_scan(n: int, t_grid, N: int = 1024) -> list[dict]:
    """Normalized sensitivity of the annulus eigenvalue to the outer radius.

    For each t returns t^3 |dF/dt| with F(t) the principal eigenvalue of the
    annulus (1, 1+t); the derivative is a central difference with step
    t/100.  In n = 3 the exact value is 2 pi^2 for every t.
    """
    rows = []
    for t in t_grid:
        if not 0.0 < t <= 1.0:
            raise ValueError(f"t must lie in (0, 1], got {t}")
        h = t / 100.0
        lam_plus = radial.solve_radial(n, 1.0, 1.0 + t + h, 0.0, N=N)[0].lam
        lam_minus = radial.solve_radial(n, 1.0, 1.0 + t - h, 0.0, N=N)[0].lam
        deriv = (lam_plus - lam_minus) / (2.0 * h)
        rows.append({"t": t, "t3_dlam": t**3 * abs(deriv)})
    return rows


def eigengap_scan(n: int, eps_values, inner_scale: float = 1.0,
                  outer_scale: float = 1.0, N: int = 1024) -> list[dict]:
    """Eigenvalue gap between the shell (1, 1+eps) and its eps^3-widened hull.

    The hull is (1 - inner_scale eps^3, 1 + eps + outer_scale eps^3); the gap
    is positive by domain monotonicity and stays bounded as eps shrinks
    because the eigenvalue moves at rate ~ eps^-3 against a widening ~ eps^3.
    """
    rows = []
    for eps in eps_values:
        a_eps = inner_scale * eps**3
        b_eps = outer_scale * eps**3
        lam_a = radial.solve_radial(n, 1.0, 1.0 + eps, 0.0, N=N)[0].lam
        lam_b = radial.solve_radial(n, 1.0 - a_eps, 1.0 + eps + b_eps, 0.0, N=N)[0].lam
        rows.append({"eps": eps, "lam_inner": lam_a, "lam_hull": lam_b,
                     "gap": lam_a - lam_b})
    return rows
