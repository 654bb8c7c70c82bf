"""The six-state octahedron against the best four-state square at k = 4/5."""

import math

from pauli_approx import QubitParams
from pauli_approx.b3 import b3_distance, compare_scan
from pauli_approx.regions import tradeoff

res = compare_scan(0.8, n_a=200, n_phi=200)
a_star, phi_star = res.argmax
print(f"max(min D_B2 - D_B3) = {res.max_gap:.5f} at a = {a_star:.5f}, phi = {phi_star:.5f}")
print(f"equal (gap <= {res.equality_tol:g}) on {res.equality_fraction:.1%} of the grid")
print(f"smallest gap {res.gap.min():.2e}")

p = QubitParams(0.25, 0.8, math.pi / 4)
print(f"\nat a = 1/4, phi = pi/4: min D_B2 = {tradeoff(p).d_min:.5f}, D_B3 = {b3_distance(p):.5f}, "
      f"gap {tradeoff(p).d_min - b3_distance(p):.5f}")
