import math

import numpy as np
import pytest

from annulab import bases, numerics, radial, spectral2d


def test_polar_exact_annulus_against_radial_oracle():
    dom = spectral2d.annulus_domain(1.0, 1.5)
    sol = spectral2d.solve_polar(dom, 64, 256, k=1)
    lam_oracle = radial.solve_radial(2, 1.0, 1.5, 0.0, N=4096)[0].lam
    assert sol.eigenvalues[0] == pytest.approx(lam_oracle, rel=1e-3)


def test_polar_sector_against_separated_oracle():
    t1 = 3.0 * math.pi / 4.0
    dom = spectral2d.annulus_domain(1.0, 1.5, 0.0, t1, wrap=False)
    sol = spectral2d.solve_polar(dom, 64, 192, k=1)
    lam0 = bases.base_eigendata(bases.circle_arc(t1)).lambda0
    lam_oracle = radial.solve_radial(2, 1.0, 1.5, lam0, N=4096)[0].lam
    assert sol.eigenvalues[0] == pytest.approx(lam_oracle, rel=1e-3)


def test_polar_dilation():
    dom1 = spectral2d.annulus_domain(1.0, 1.4)
    dom2 = spectral2d.annulus_domain(2.0, 2.8)
    lam1 = spectral2d.solve_polar(dom1, 32, 128).eigenvalues[0]
    lam2 = spectral2d.solve_polar(dom2, 32, 128).eigenvalues[0]
    assert lam2 == pytest.approx(lam1 / 4.0, rel=1e-12)


def test_polar_grid_convergence_order():
    lam_exact = radial.solve_radial(2, 1.0, 1.5, 0.0, N=4096)[0].lam
    e1 = abs(spectral2d.solve_polar(spectral2d.annulus_domain(1.0, 1.5), 16, 64).eigenvalues[0] - lam_exact)
    e2 = abs(spectral2d.solve_polar(spectral2d.annulus_domain(1.0, 1.5), 32, 128).eigenvalues[0] - lam_exact)
    assert e1 / e2 == pytest.approx(4.0, rel=0.3)


def test_polar_positivity_and_normalization():
    sol = spectral2d.solve_polar(spectral2d.annulus_domain(1.0, 1.3), 24, 96)
    phi = sol.values[0]
    assert np.all(phi[sol.mask] > 0)
    assert float(np.sum(phi**2 * sol.cell_measure)) == pytest.approx(1.0, rel=1e-10)


def box_domain(ax, ay):
    return spectral2d.CartesianDomain2D(
        indicator=lambda X, Y: (np.abs(X) < ax) & (np.abs(Y) < ay),
        bbox=(-ax, ax, -ay, ay),
    )


def test_cartesian_unit_box():
    sol_c = spectral2d.solve_cartesian(box_domain(1.0, 1.0), 1.0 / 64.0)
    sol_f = spectral2d.solve_cartesian(box_domain(1.0, 1.0), 1.0 / 128.0)
    lam = numerics.richardson(sol_c.eigenvalues[0], sol_f.eigenvalues[0])
    assert lam == pytest.approx(math.pi**2 / 2.0, rel=2e-3)
    # center value of the L2-normalized eigenfunction is 1
    x, y = sol_f.axes
    ix = np.argmin(np.abs(x))
    iy = np.argmin(np.abs(y))
    assert sol_f.values[0][ix, iy] == pytest.approx(1.0, rel=1e-2)


def test_cartesian_slab():
    sol_c = spectral2d.solve_cartesian(box_domain(1.0, 0.1), 1.0 / 64.0)
    sol_f = spectral2d.solve_cartesian(box_domain(1.0, 0.1), 1.0 / 128.0)
    lam = numerics.richardson(sol_c.eigenvalues[0], sol_f.eigenvalues[0])
    assert lam == pytest.approx(math.pi**2 / 4.0 + 25.0 * math.pi**2, rel=2e-3)


def test_domain_monotonicity():
    lam_small = spectral2d.solve_cartesian(box_domain(0.8, 0.8), 1.0 / 64.0).eigenvalues[0]
    lam_big = spectral2d.solve_cartesian(box_domain(1.0, 1.0), 1.0 / 64.0).eigenvalues[0]
    assert lam_big <= lam_small * (1.0 + 1e-3)


def test_cartesian_disconnected_raises():
    dom = spectral2d.CartesianDomain2D(
        indicator=lambda X, Y: np.abs(X) > 0.5,
        bbox=(-1.0, 1.0, -1.0, 1.0),
    )
    with pytest.raises(spectral2d.DisconnectedDomainError):
        spectral2d.solve_cartesian(dom, 1.0 / 32.0)


def test_cartesian_empty_raises():
    dom = spectral2d.CartesianDomain2D(
        indicator=lambda X, Y: np.zeros_like(X, dtype=bool),
        bbox=(-1.0, 1.0, -1.0, 1.0),
    )
    with pytest.raises(spectral2d.EmptyDomainError):
        spectral2d.solve_cartesian(dom, 1.0 / 32.0)


def test_polar_coarse_grid_raises():
    with pytest.raises(ValueError):
        spectral2d.solve_polar(spectral2d.annulus_domain(1.0, 1.05), 4, 64)


def test_mask_roundtrip_and_solver(tmp_path):
    dom = spectral2d.annulus_domain(1.0, 1.4)
    sol = spectral2d.solve_polar(dom, 24, 96)
    path = tmp_path / "mask.txt"
    spectral2d.save_mask(path, sol.mask, sol.meta["r_range"], sol.meta["theta_range"])
    mask, r_range, theta_range = spectral2d.load_mask(path)
    assert np.array_equal(mask, sol.mask)
    sol2 = spectral2d.solve_polar_mask(mask, r_range, theta_range, wrap=True)
    assert sol2.eigenvalues[0] == pytest.approx(sol.eigenvalues[0], rel=1e-12)


def test_interior_mask_erosion():
    dom = spectral2d.annulus_domain(1.0, 1.4)
    sol = spectral2d.solve_polar(dom, 24, 96)
    inner = sol.interior_mask(2)
    assert inner.sum() < sol.mask.sum()
    assert np.all(sol.mask[inner])
