"""Distance to mixtures of all six Pauli eigenstates and its comparison with
the best of the three B2 distances."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .oracle import hull_distance
from .qubit import BasisId, DomainError, QubitParams, bloch_from_params
from .regions import distances_array


def b3_distance(p: QubitParams) -> float:
    """Euclidean distance from the Bloch vector to the octahedron |x|+|y|+|z| <= 1."""
    return float(hull_distance(bloch_from_params(p), BasisId.B3)[0])


def b3_distance_array(a, k, phi) -> np.ndarray:
    a, k, phi = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a, k, phi)))
    c2 = 2 * k * np.sqrt(a * (1 - a))
    pts = np.column_stack([(c2 * np.cos(phi)).ravel(), (c2 * np.sin(phi)).ravel(), (1 - 2 * a).ravel()])
    return hull_distance(pts, BasisId.B3).reshape(a.shape)


@dataclass(frozen=True, eq=False)
class ComparisonResult:
    k: float
    a: np.ndarray          # grid axis
    phi: np.ndarray        # grid axis
    min_d_b2: np.ndarray   # shape (len(a), len(phi))
    d_b3: np.ndarray
    equality_tol: float

    @property
    def gap(self) -> np.ndarray:
        return self.min_d_b2 - self.d_b3

    @property
    def equality_fraction(self) -> float:
        return float(np.mean(self.gap <= self.equality_tol))

    @property
    def max_gap(self) -> float:
        return float(self.gap.max())

    @property
    def argmax(self) -> tuple[float, float]:
        # first maximum in (a, phi) row-major order
        i, j = np.unravel_index(int(np.argmax(self.gap)), self.gap.shape)
        return float(self.a[i]), float(self.phi[j])

    def records(self):
        """Per-point rows (a, phi, min_d_b2, d_b3, gap)."""
        gap = self.gap
        for i, a in enumerate(self.a):
            for j, phi in enumerate(self.phi):
                yield float(a), float(phi), float(self.min_d_b2[i, j]), float(self.d_b3[i, j]), float(gap[i, j])


def compare_scan(
    k: float,
    n_a: int = 200,
    n_phi: int = 200,
    equality_tol: float = 1e-6,
) -> ComparisonResult:
    """min of the B2 distances against the B3 distance on an (a, phi) grid
    covering [0, 1/2] x [0, pi/2] at fixed ``k``."""
    if not 0.0 <= k <= 1.0:
        raise DomainError(f"k must lie in [0, 1], got {k!r}")
    if n_a < 1 or n_phi < 1:
        raise DomainError("comparison grid has no points")
    if equality_tol <= 0:
        raise DomainError("equality_tol must be positive")
    a_axis = np.linspace(0.0, 0.5, n_a)
    phi_axis = np.linspace(0.0, math.pi / 2, n_phi)
    a, phi = np.meshgrid(a_axis, phi_axis, indexing="ij")
    min_b2 = distances_array(a, k, phi).min(axis=0)
    d_b3 = b3_distance_array(a, k, phi)
    return ComparisonResult(k, a_axis, phi_axis, min_b2, d_b3, equality_tol)
