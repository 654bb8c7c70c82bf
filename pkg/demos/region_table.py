"""Eight-region split of the canonical cube and the tradeoff ranges in each."""

from pauli_approx import QubitParams
from pauli_approx.regions import ScanGrid, classify, scan_ranges, tradeoff, uncertainty_check

p = QubitParams(0.3, 0.9, 0.7)
lab = classify(p)
t = tradeoff(p)
print(p, "-> region", lab.region_index, "predicates", lab.circled)
print(f"d = ({t.d_xz:.4f}, {t.d_yz:.4f}, {t.d_xy:.4f}), sum {t.d_sum:.4f}, squares {t.d_sq_sum:.4f}")
u = uncertainty_check(p)
print(f"variance sum {u.variance_sum:.4f} >= 1/2: {u.holds_half_bound}, >= tau/2 * sum|r|/2: {u.holds_tau_bound}")

# steps 0.005 in a and k, pi/400 in phi
table = scan_ranges(ScanGrid(101, 201, 201))
print("\nregion   samples   d_sum range          d_sq range")
for r in table.rows:
    print(f"{r.region:>6} {r.samples:>9}   [{r.d_sum_min:.4f}, {r.d_sum_max:.4f}]   [{r.d_sq_min:.4f}, {r.d_sq_max:.4f}]")
# in region 1 every distance is an out-of-plane Bloch component, so d_sum = |x| + |y| + |z|
# and its supremum there is 3/2
