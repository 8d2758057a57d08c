"""Grid Dirichlet eigensolvers for planar domains.

Two solvers: a polar-grid solver for domains bounded by radial functions
r_min(theta) < r < r_max(theta) (optionally wrapping the full circle), and a
Cartesian solver for indicator-defined domains sandwiched between boxes.
Both use vertex-centered second-order stencils in self-adjoint form; the
boundary is handled by node masking (staircase), so audits should trim a
margin of cells before taking eigenfunction ratios, and eigenvalues can be
sharpened by Richardson extrapolation over two resolutions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.sparse as sparse
from scipy.sparse.csgraph import connected_components

from . import numerics

__all__ = [
    "PolarDomain2D",
    "CartesianDomain2D",
    "GridSpectrum",
    "EmptyDomainError",
    "DisconnectedDomainError",
    "solve_polar",
    "solve_polar_mask",
    "solve_cartesian",
    "save_mask",
    "load_mask",
    "annulus_domain",
]


class EmptyDomainError(ValueError):
    """No grid nodes fall inside the domain."""


class DisconnectedDomainError(ValueError):
    """The masked grid domain is not connected."""


@dataclass(frozen=True)
class PolarDomain2D:
    """Planar domain r_min(theta) < r < r_max(theta) over an angular window."""

    r_min: Callable[[np.ndarray], np.ndarray]
    r_max: Callable[[np.ndarray], np.ndarray]
    theta_lo: float = 0.0
    theta_hi: float = 2.0 * math.pi
    wrap: bool = True


def annulus_domain(a: float, b: float, theta_lo: float = 0.0,
                   theta_hi: float = 2.0 * math.pi, wrap: bool | None = None) -> PolarDomain2D:
    """Exact annulus or annular sector as a PolarDomain2D."""
    if wrap is None:
        wrap = abs((theta_hi - theta_lo) - 2.0 * math.pi) < 1e-12
    return PolarDomain2D(
        r_min=lambda th: np.full_like(np.asarray(th, dtype=float), a),
        r_max=lambda th: np.full_like(np.asarray(th, dtype=float), b),
        theta_lo=theta_lo, theta_hi=theta_hi, wrap=wrap,
    )


@dataclass(frozen=True)
class CartesianDomain2D:
    """Planar domain given by a membership predicate and a bounding box."""

    indicator: Callable[[np.ndarray, np.ndarray], np.ndarray]
    bbox: tuple[float, float, float, float]  # x_lo, x_hi, y_lo, y_hi


@dataclass
class GridSpectrum:
    """Eigenpairs on a masked structured grid.

    values[k] is a (n0, n1) array, zero outside the mask, normalized so that
    sum(values^2 * cell_measure) = 1.  axes holds the node coordinates of
    the two grid directions.
    """

    eigenvalues: np.ndarray
    values: list[np.ndarray]
    axes: tuple[np.ndarray, np.ndarray]
    mask: np.ndarray
    cell_measure: np.ndarray
    kind: str
    wrap: bool = False
    meta: dict = field(default_factory=dict)

    def interior_mask(self, margin_cells: int) -> np.ndarray:
        """Mask eroded by a number of cells; excludes staircase-polluted nodes.

        Nodes beyond the array edge count as boundary (they sit one cell
        from the Dirichlet wall), except in the periodic direction."""
        m = self.mask.copy()
        for _ in range(margin_cells):
            shrunk = m.copy()
            shrunk[1:, :] &= m[:-1, :]
            shrunk[:-1, :] &= m[1:, :]
            shrunk[0, :] = False
            shrunk[-1, :] = False
            if self.wrap:
                shrunk &= np.roll(m, 1, axis=1)
                shrunk &= np.roll(m, -1, axis=1)
            else:
                shrunk[:, 1:] &= m[:, :-1]
                shrunk[:, :-1] &= m[:, 1:]
                shrunk[:, 0] = False
                shrunk[:, -1] = False
            m = shrunk
        return m


def _assemble_and_solve(mask, cond_0, cond_1, mass, wrap, k):
    """Masked 5-point operator in self-adjoint form.

    cond_0[i, j]: conductance between nodes (i, j) and (i+1, j), length n0+1
    along axis 0 so index i is the face below node i (virtual boundary rows
    included); similarly cond_1 for axis 1 with wrap support.  Dirichlet
    walls sit at masked-out neighbor nodes.
    """
    n0, n1 = mask.shape
    idx = -np.ones((n0, n1), dtype=np.int64)
    ids = np.flatnonzero(mask.ravel())
    if len(ids) == 0:
        raise EmptyDomainError("no grid nodes inside the domain")
    idx.ravel()[ids] = np.arange(len(ids))
    m = len(ids)

    diag = np.zeros(m)
    rows, cols, vals = [], [], []

    ii, jj = np.meshgrid(np.arange(n0), np.arange(n1), indexing="ij")
    # axis 0 neighbors i+1 / i-1; rows outside the grid are Dirichlet walls
    q_up = np.where(ii + 1 < n0, idx[np.minimum(ii + 1, n0 - 1), jj], -1)
    q_dn = np.where(ii - 1 >= 0, idx[np.maximum(ii - 1, 0), jj], -1)
    c_up = cond_0[ii + 1, jj]
    c_dn = cond_0[ii, jj]
    # axis 1 neighbors, periodic when wrap is set
    if wrap:
        q_rt = idx[ii, (jj + 1) % n1]
        q_lf = idx[ii, (jj - 1) % n1]
    else:
        q_rt = np.where(jj + 1 < n1, idx[ii, np.minimum(jj + 1, n1 - 1)], -1)
        q_lf = np.where(jj - 1 >= 0, idx[ii, np.maximum(jj - 1, 0)], -1)
    c_rt = cond_1[ii, jj + 1]
    c_lf = cond_1[ii, jj]

    # face conductances always load the diagonal; the off-diagonal entry
    # exists only when the neighbor node is inside (else Dirichlet wall)
    p = idx[ii, jj]
    inside = p >= 0
    for q, c in ((q_up, c_up), (q_dn, c_dn), (q_rt, c_rt), (q_lf, c_lf)):
        np.add.at(diag, p[inside], c[inside])
        both = inside & (q >= 0)
        rows.append(p[both])
        cols.append(q[both])
        vals.append(-c[both])

    rows = np.concatenate(rows + [np.arange(m)])
    cols = np.concatenate(cols + [np.arange(m)])
    vals = np.concatenate(vals + [diag])
    K = sparse.csr_matrix((vals, (rows, cols)), shape=(m, m))

    adjacency = K.copy()
    adjacency.setdiag(0)
    adjacency.eliminate_zeros()
    ncomp, _ = connected_components(adjacency, directed=False)
    if ncomp > 1:
        raise DisconnectedDomainError(f"masked grid splits into {ncomp} components")

    mu = mass.ravel()[ids]
    d_half = 1.0 / np.sqrt(mu)
    L = sparse.diags(d_half) @ K @ sparse.diags(d_half)
    L = (L + L.T) / 2.0
    op = numerics.SparseSymmetricOperator.from_matrix(L)
    lam, psi = numerics.sparse_smallest_eigenpairs(op, k, shift=0.0)
    phis = []
    for j in range(k):
        phi = np.zeros(n0 * n1)
        phi[ids] = d_half * psi[:, j]
        phi = phi.reshape(n0, n1)
        if j == 0 and phi.sum() < 0:
            phi = -phi
        phis.append(phi)
    return lam, phis, idx, mu


def solve_polar(domain: PolarDomain2D, Nr: int, Ntheta: int, k: int = 1) -> GridSpectrum:
    """k smallest Dirichlet eigenpairs on a polar-grid domain.

    Vertex-centered discretization of (1/r) d_r(r d_r) + (1/r^2) d^2_theta in
    self-adjoint form; eigenfunctions normalized in L^2(r dr dtheta).
    """
    window = domain.theta_hi - domain.theta_lo
    ht = window / Ntheta
    if domain.wrap:
        th = domain.theta_lo + ht * np.arange(Ntheta)
    else:
        th = domain.theta_lo + ht * np.arange(1, Ntheta)
    rmins = np.asarray(domain.r_min(th), dtype=float)
    rmaxs = np.asarray(domain.r_max(th), dtype=float)
    if np.any(rmins <= 0) or np.any(rmins >= rmaxs):
        raise ValueError("need 0 < r_min(theta) < r_max(theta) everywhere")
    rlo, rhi = rmins.min(), rmaxs.max()
    hr = (rhi - rlo) / Nr
    if np.min(rmaxs - rmins) < 8 * hr:
        raise ValueError("grid too coarse: fewer than 8 radial cells across min thickness")
    r = rlo + hr * np.arange(1, Nr)
    mask = (r[:, None] > rmins[None, :]) & (r[:, None] < rmaxs[None, :])

    n0, n1 = mask.shape
    r_faces = rlo + hr * (np.arange(Nr) + 0.5)  # face between node i and i+1
    cond_r = np.broadcast_to((r_faces * ht / hr)[:, None], (n0 + 1, n1)).copy()
    cond_t = np.broadcast_to((hr / (r * ht))[:, None], (n0, n1 + 1)).copy()
    mass = np.broadcast_to((r * hr * ht)[:, None], (n0, n1)).copy()

    lam, phis, _, _ = _assemble_and_solve(mask, cond_r, cond_t, mass, domain.wrap, k)
    return GridSpectrum(
        eigenvalues=lam, values=phis, axes=(r, th), mask=mask,
        cell_measure=mass * mask, kind="polar", wrap=domain.wrap,
        meta={"hr": hr, "ht": ht, "r_range": (rlo, rhi),
              "theta_range": (domain.theta_lo, domain.theta_hi)},
    )


def solve_polar_mask(mask: np.ndarray, r_range: tuple[float, float],
                     theta_range: tuple[float, float], wrap: bool, k: int = 1) -> GridSpectrum:
    """Same solver from an explicit node mask (see save_mask/load_mask)."""
    mask = np.asarray(mask, dtype=bool)
    n0, n1 = mask.shape
    rlo, rhi = r_range
    tlo, thi = theta_range
    hr = (rhi - rlo) / (n0 + 1)
    ht = (thi - tlo) / (n1 if wrap else n1 + 1)
    r = rlo + hr * np.arange(1, n0 + 1)
    th = tlo + ht * (np.arange(n1) if wrap else np.arange(1, n1 + 1))
    r_faces = rlo + hr * (np.arange(n0 + 1) + 0.5)
    cond_r = np.broadcast_to((r_faces * ht / hr)[:, None], (n0 + 1, n1)).copy()
    cond_t = np.broadcast_to((hr / (r * ht))[:, None], (n0, n1 + 1)).copy()
    mass = np.broadcast_to((r * hr * ht)[:, None], (n0, n1)).copy()
    lam, phis, _, _ = _assemble_and_solve(mask, cond_r, cond_t, mass, wrap, k)
    return GridSpectrum(
        eigenvalues=lam, values=phis, axes=(r, th), mask=mask,
        cell_measure=mass * mask, kind="polar", wrap=wrap,
        meta={"hr": hr, "ht": ht, "r_range": r_range, "theta_range": theta_range},
    )


def solve_cartesian(domain: CartesianDomain2D, h: float, k: int = 1) -> GridSpectrum:
    """k smallest Dirichlet eigenpairs of an indicator-defined planar domain.

    Standard 5-point Laplacian on interior nodes of a uniform grid over the
    bounding box; eigenfunctions normalized in L^2(dx)."""
    x_lo, x_hi, y_lo, y_hi = domain.bbox
    # per-axis widths: cells stay within a rounding of the nominal h even
    # when the box sides are not integer multiples of it
    nx = int(round((x_hi - x_lo) / h))
    ny = int(round((y_hi - y_lo) / h))
    if nx < 8 or ny < 8:
        raise ValueError("grid too coarse: fewer than 8 cells across the box")
    hx = (x_hi - x_lo) / nx
    hy = (y_hi - y_lo) / ny
    x = x_lo + hx * np.arange(1, nx)
    y = y_lo + hy * np.arange(1, ny)
    X, Y = np.meshgrid(x, y, indexing="ij")
    mask = np.asarray(domain.indicator(X, Y), dtype=bool)
    n0, n1 = mask.shape
    cond_0 = np.full((n0 + 1, n1), hy / hx)
    cond_1 = np.full((n0, n1 + 1), hx / hy)
    mass = np.full((n0, n1), hx * hy)
    lam, phis, _, _ = _assemble_and_solve(mask, cond_0, cond_1, mass, False, k)
    return GridSpectrum(
        eigenvalues=lam, values=phis, axes=(x, y), mask=mask,
        cell_measure=mass * mask, kind="cartesian", wrap=False,
        meta={"h": h, "hx": hx, "hy": hy, "bbox": domain.bbox},
    )


def save_mask(path, mask: np.ndarray, r_range: tuple[float, float],
              theta_range: tuple[float, float]) -> None:
    """Write a node mask in the text format: header `Nr Ntheta r_lo r_hi th_lo th_hi`,
    then the row-major 0/1 grid."""
    mask = np.asarray(mask, dtype=int)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{mask.shape[0]} {mask.shape[1]} "
                 f"{float(r_range[0])!r} {float(r_range[1])!r} "
                 f"{float(theta_range[0])!r} {float(theta_range[1])!r}\n")
        for row in mask:
            fh.write(" ".join(str(v) for v in row) + "\n")


def load_mask(path):
    """Read a node mask written by save_mask; returns (mask, r_range, theta_range)."""
    with open(path, encoding="ascii") as fh:
        header = fh.readline().split()
        n0, n1 = int(header[0]), int(header[1])
        r_range = (float(header[2]), float(header[3]))
        theta_range = (float(header[4]), float(header[5]))
        rows = []
        for _ in range(n0):
            rows.append([int(v) for v in fh.readline().split()])
    mask = np.asarray(rows, dtype=bool)
    if mask.shape != (n0, n1):
        raise ValueError(f"mask shape {mask.shape} disagrees with header {(n0, n1)}")
    return mask, r_range, theta_range
