"""Distance surfaces, case interfaces and the minimum distance on grids."""

import numpy as np

from pauli_approx.figures import FIGURE_IDS, scan_figure

for fig in FIGURE_IDS:
    g = scan_figure(fig, n_a=101, n_k=101, n_phi=101)
    v = g.value
    finite = np.isfinite(v)
    print(f"fig {fig}: {v.shape}, {finite.mean():6.1%} defined, range [{np.nanmin(v):.4f}, {np.nanmax(v):.4f}]")

# XZ distance along a at fixed k = 4/5, phi = pi/4
g = scan_figure("1a", n_a=6, n_k=5)
print("\na    ", np.round(g.a[:, 0], 3))
print("k=1  ", np.round(g.value[:, -1], 4))
