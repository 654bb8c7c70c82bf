"""Parameter regions, tradeoff quantities and the Pauli uncertainty checks.

Each B2 basis splits the canonical parameter cube into its case I and case II
parts.  Writing (1)/(2) for the B2_XZ split, (3)/(4) for B2_YZ and (5)/(6)
for B2_XY, the eight intersections are numbered

    1: (1)(3)(5)   2: (2)(4)(5)   3: (1)(3)(6)   4: (1)(4)(5)
    5: (2)(3)(5)   6: (2)(3)(6)   7: (1)(4)(6)   8: (2)(4)(6)
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .closed_form import Case, b2_distance, b2_distance_array, case_branch, margin_array
from .qubit import BasisId, DomainError, QubitParams, bloch_from_params

B2_BASES = (BasisId.B2_XZ, BasisId.B2_YZ, BasisId.B2_XY)
TAU = 2 / math.sqrt(3)

# (case I for XZ, case I for YZ, case I for XY) -> region index
REGION_OF = {
    (True, True, True): 1,
    (False, False, True): 2,
    (True, True, False): 3,
    (True, False, True): 4,
    (False, True, True): 5,
    (False, True, False): 6,
    (True, False, False): 7,
    (False, False, False): 8,
}
PREDICATES_OF = {v: k for k, v in REGION_OF.items()}


@dataclass(frozen=True)
class RegionLabel:
    predicates: tuple[bool, bool, bool]
    region_index: int

    @property
    def circled(self) -> tuple[int, int, int]:
        """The predicate numbers 1-6 that hold, e.g. (2, 3, 5)."""
        xz, yz, xy = self.predicates
        return (1 if xz else 2, 3 if yz else 4, 5 if xy else 6)


@dataclass(frozen=True)
class TradeoffPoint:
    d_xz: float
    d_yz: float
    d_xy: float

    @property
    def d_sum(self) -> float:
        return self.d_xz + self.d_yz + self.d_xy

    @property
    def d_sq_sum(self) -> float:
        return self.d_xz**2 + self.d_yz**2 + self.d_xy**2

    @property
    def d_min(self) -> float:
        return min(self.d_xz, self.d_yz, self.d_xy)


@dataclass(frozen=True)
class UncertaintyReport:
    variance_sum: float
    half_abs_sum: float
    tau: float
    holds_half_bound: bool
    holds_tau_bound: bool


def classify(p: QubitParams) -> RegionLabel:
    preds = tuple(case_branch(p, b).case is Case.I for b in B2_BASES)
    return RegionLabel(preds, REGION_OF[preds])


def tradeoff(p: QubitParams) -> TradeoffPoint:
    return TradeoffPoint(*(b2_distance(p, b).value for b in B2_BASES))


def uncertainty_check(p: QubitParams) -> UncertaintyReport:
    r = bloch_from_params(p)
    variance_sum = sum((1 - c * c) / 4 for c in r)
    half_abs_sum = sum(abs(c) / 2 for c in r)
    return UncertaintyReport(
        variance_sum=variance_sum,
        half_abs_sum=half_abs_sum,
        tau=TAU,
        holds_half_bound=variance_sum >= 0.5 - 1e-12,
        holds_tau_bound=variance_sum >= TAU / 2 * half_abs_sum - 1e-12,
    )


# -- vectorized scans -------------------------------------------------------

def region_index_array(a, k, phi) -> np.ndarray:
    xz, yz, xy = (margin_array(a, k, phi, b) >= 0.0 for b in B2_BASES)
    lookup = np.zeros(8, dtype=np.int8)
    for (p1, p2, p3), idx in REGION_OF.items():
        lookup[int(p1) * 4 + int(p2) * 2 + int(p3)] = idx
    return lookup[xz.astype(int) * 4 + yz.astype(int) * 2 + xy.astype(int)]


def distances_array(a, k, phi) -> np.ndarray:
    """Stack of the three B2 distances, shape (3, ...)."""
    return np.stack([b2_distance_array(a, k, phi, b) for b in B2_BASES])


@dataclass(frozen=True)
class ScanGrid:
    """Inclusive linear grids over the canonical cube."""

    n_a: int = 101
    n_k: int = 201
    n_phi: int = 201
    a_range: tuple[float, float] = (0.0, 0.5)
    k_range: tuple[float, float] = (0.0, 1.0)
    phi_range: tuple[float, float] = (0.0, math.pi / 2)

    def __post_init__(self):
        if min(self.n_a, self.n_k, self.n_phi) < 1:
            raise DomainError("scan grid has no points")
        lo_a, hi_a = self.a_range
        lo_p, hi_p = self.phi_range
        if not (0 <= lo_a <= hi_a <= 0.5 and 0 <= lo_p <= hi_p <= math.pi / 2):
            raise DomainError("scan grid leaves the canonical domain")

    def axes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (
            np.linspace(*self.a_range, self.n_a),
            np.linspace(*self.k_range, self.n_k),
            np.linspace(*self.phi_range, self.n_phi),
        )

    @property
    def size(self) -> int:
        return self.n_a * self.n_k * self.n_phi


@dataclass(frozen=True)
class RegionRange:
    region: int
    d_sum_min: float
    d_sum_max: float
    d_sq_min: float
    d_sq_max: float
    samples: int


@dataclass(frozen=True)
class RangeTable:
    grid: ScanGrid
    rows: tuple[RegionRange, ...]

    def row(self, region: int) -> RegionRange:
        return self.rows[region - 1]


def _scan_chunk(a_axis, k_axis, phis):
    a, k, phi = np.meshgrid(a_axis, k_axis, phis, indexing="ij")
    d = distances_array(a, k, phi)
    region = region_index_array(a, k, phi).ravel()
    d_sum = d.sum(axis=0).ravel()
    d_sq = (d**2).sum(axis=0).ravel()
    stats = np.full((8, 4), np.nan)
    counts = np.zeros(8, dtype=np.int64)
    for r in range(1, 9):
        sel = region == r
        counts[r - 1] = sel.sum()
        if counts[r - 1]:
            stats[r - 1] = d_sum[sel].min(), d_sum[sel].max(), d_sq[sel].min(), d_sq[sel].max()
    return stats, counts


def scan_ranges(grid: ScanGrid | None = None, threads: int = 1) -> RangeTable:
    """Observed ranges of the distance sum and squared sum in each region.

    Work is split over phi slices; min/max reductions are order independent,
    so the table does not depend on ``threads``.
    """
    grid = grid or ScanGrid()
    a_axis, k_axis, phi_axis = grid.axes()
    chunks = np.array_split(phi_axis, max(1, min(len(phi_axis), 16)))
    chunks = [c for c in chunks if len(c)]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        parts = list(pool.map(lambda c: _scan_chunk(a_axis, k_axis, c), chunks))
    stats = np.stack([s for s, _ in parts])
    counts = sum(c for _, c in parts)
    rows = []
    for r in range(8):
        if counts[r] == 0:
            rows.append(RegionRange(r + 1, math.nan, math.nan, math.nan, math.nan, 0))
            continue
        s = stats[:, r]
        rows.append(RegionRange(
            r + 1,
            float(np.nanmin(s[:, 0])),
            float(np.nanmax(s[:, 1])),
            float(np.nanmin(s[:, 2])),
            float(np.nanmax(s[:, 3])),
            int(counts[r]),
        ))
    return RangeTable(grid, tuple(rows))
