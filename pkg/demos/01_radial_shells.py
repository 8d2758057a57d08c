"""Radial eigenvalues of shells: exact cases, two-sided bounds, dilation.

The ground eigenvalue of a shell (a,b) x U0 solves a one-dimensional
problem after separation of variables.  In dimension 3 the centrifugal
coefficient vanishes and the annulus eigenvalue is exactly pi^2/(b-a)^2;
in other dimensions it stays pinned inside an explicit coefficient
interval [C1, C2]/(b-a)^2.
"""

import math

from annulab import bases, estimates, radial

print("== exact reduction at n = 3 ==")
res = radial.solve_radial(3, 1.0, 2.0, 0.0, N=4096)[0]
print(f"lambda(annulus 1..2, n=3) = {res.lam:.10f}   (pi^2 = {math.pi**2:.10f})")

print("\n== coefficient interval across dimensions, b/a = 2 ==")
for n in (2, 3, 4, 5):
    lam = radial.solve_radial(n, 1.0, 2.0, 0.0, N=1024)[0].lam
    c1, c2 = estimates.annulus_eigenvalue_coefficients(n, 2.0)
    print(f"n={n}: lambda = {lam:9.5f}  in  [{c1:9.5f}, {c2:9.5f}] ? "
          f"{c1 <= lam <= c2}")

print("\n== base eigenvalue shifts the shell eigenvalue ==")
for base in (bases.circle_arc(math.pi), bases.orthant_intersection(3, 2)):
    data = bases.base_eigendata(base)
    lam = radial.solve_radial(base.n, 1.0, 1.5, data.lambda0, N=1024)[0].lam
    lam_ann = radial.solve_radial(base.n, 1.0, 1.5, 0.0, N=1024)[0].lam
    print(f"{base.label():24s}: lambda0 = {data.lambda0:7.4f}  "
          f"shell lambda = {lam:9.5f}  "
          f"in [ann + lam0/b^2, ann + lam0/a^2] = "
          f"[{lam_ann + data.lambda0 / 1.5**2:9.5f}, {lam_ann + data.lambda0:9.5f}]")

print("\n== dilation covariance: lambda scales like 1/c^2 ==")
lam1 = radial.solve_radial(2, 1.0, 1.4, 1.0, N=512)[0].lam
for c in (0.5, 2.0, 10.0):
    lam_c = radial.solve_radial(2, c, 1.4 * c, 1.0, N=512)[0].lam
    print(f"c={c:5.2f}: lambda(c a, c b) * c^2 = {lam_c * c**2:.10f}  vs  {lam1:.10f}")

print("\n== product spectrum of the unit annulus (first six levels) ==")
spec = radial.AnnularDomainSpec(2, 1.0, 2.0, bases.full_sphere(2))
spectrum = radial.assemble_spectrum(spec, M_base=4, K_radial=2, N=512)
print([round(v, 5) for v in spectrum.eigenvalues[:6]])
