"""Optimal B2 approximations of rho = [[1/2, 1/5], [1/5, 1/2]]."""

import numpy as np

from pauli_approx import BasisId, QubitParams, b2_distance, kkt_verify, optimal_approximation

# a = 1/2 and k sqrt(a(1-a)) = 1/5 gives k = 2/5
p = QubitParams(a=0.5, k=0.4, phi=0.0)

for basis in (BasisId.B2_XZ, BasisId.B2_YZ, BasisId.B2_XY):
    res = b2_distance(p, basis)
    fam = res.family
    print(f"{basis.value}: D = {res.value:.6f}  ({res.branch.case.name}, margin {res.branch.margin:+.4f})")
    print(f"    base {np.round(fam.base.p, 6)}  direction {fam.direction}  t_max {fam.t_max:.4f}")
    # every member of the family is a KKT point
    for t in np.linspace(0, fam.t_max, 3):
        rep = kkt_verify(p, basis, fam.at(t))
        print(f"    t = {t:.3f}: KKT {'ok' if rep.passed else 'FAIL'}")

# states outside the canonical domain are mapped in and the weights relabelled back
q = QubitParams(a=0.8, k=0.9, phi=2.5)
approx = optimal_approximation(q, BasisId.B2_XZ)
print("\nnon-canonical input", q)
print("canonical twin   ", approx.canonical, approx.symmetry)
print("weights (original labels)", np.round(approx.family.base.p, 6), "D =", approx.result.value)
