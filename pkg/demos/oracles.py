"""Closed form against the independent routes: brute-force lattice,
exact polytope projection and the preimage of the projected point."""

import numpy as np

from pauli_approx import BasisId, QubitParams, b2_distance, optimal_family
from pauli_approx.oracle import grid_search, hull_projection, lipschitz_bound, preimage_family, project_bloch
from pauli_approx.qubit import bloch_from_params

p = QubitParams(0.2, 0.7, 0.4)
for basis in (BasisId.B2_XZ, BasisId.B2_YZ, BasisId.B2_XY):
    closed = b2_distance(p, basis).value
    grid = grid_search(p, basis, step=0.01)
    proj = project_bloch(bloch_from_params(p), basis)
    print(f"{basis.value}: closed {closed:.9f}  projection {proj.value:.9f}  "
          f"grid {grid.value:.6f} (bound {lipschitz_bound(basis, grid.step):.3f})")
    fam = optimal_family(p, basis)
    pre = preimage_family(hull_projection(bloch_from_params(p), basis)[0], basis)
    print(f"    closed family base {np.round(fam.base.p, 6)} t_max {fam.t_max:.6f}")
    print(f"    preimage          base {np.round(pre.base.p, 6)} t_max {pre.t_max:.6f}")
