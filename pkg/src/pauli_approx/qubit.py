"""Qubit states in the (a, k, phi) parameterization, Pauli eigenstate bases and
Bloch-vector algebra.

A qubit density matrix is written as

    rho = [[1 - a,                      k sqrt(a(1-a)) e^{-i phi}],
           [k sqrt(a(1-a)) e^{i phi},   a                        ]]

with a, k in [0, 1] and phi in [0, 2 pi).  Its Bloch vector is

    (<sx>, <sy>, <sz>) = (2k sqrt(a(1-a)) cos phi, 2k sqrt(a(1-a)) sin phi, 1 - 2a).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

EXACT_TOL = 1e-12
NORM_TOL = 1e-9

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)


class DomainError(ValueError):
    """Raised when an input lies outside the domain an operation accepts."""


class UnsupportedBasisError(ValueError):
    """Raised when an operation is asked for a basis set it does not handle."""


class BlochVector(NamedTuple):
    x: float
    y: float
    z: float

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)


@dataclass(frozen=True)
class QubitParams:
    """Parameters (a, k, phi) of a qubit density matrix."""

    a: float
    k: float
    phi: float

    def __post_init__(self):
        for name in ("a", "k", "phi"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite, got {getattr(self, name)!r}")
        if not 0.0 <= self.a <= 1.0:
            raise DomainError(f"a must lie in [0, 1], got {self.a!r}")
        if not 0.0 <= self.k <= 1.0:
            raise DomainError(f"k must lie in [0, 1], got {self.k!r}")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise DomainError(f"phi must lie in [0, 2pi), got {self.phi!r}")

    @classmethod
    def wrapped(cls, a: float, k: float, phi: float) -> "QubitParams":
        """Build parameters after reducing ``phi`` modulo 2 pi."""
        phi = math.fmod(phi, 2 * math.pi)
        if phi < 0:
            phi += 2 * math.pi
        if phi >= 2 * math.pi:
            phi = 0.0
        return cls(a, k, phi)

    @property
    def coherence(self) -> float:
        """Off-diagonal magnitude k sqrt(a(1-a))."""
        return self.k * math.sqrt(self.a * (1.0 - self.a))

    @property
    def is_degenerate(self) -> bool:
        """True when a is 0 or 1, so k and phi do not affect the state."""
        return self.a == 0.0 or self.a == 1.0

    @property
    def is_canonical(self) -> bool:
        return self.a <= 0.5 + EXACT_TOL and self.phi <= math.pi / 2 + EXACT_TOL


class BasisId(enum.Enum):
    B2_XZ = "xz"
    B2_YZ = "yz"
    B2_XY = "xy"
    B3 = "b3"

    @property
    def indices(self) -> tuple[int, ...]:
        return _BASIS_INDICES[self]

    @property
    def is_b2(self) -> bool:
        return self is not BasisId.B3


_BASIS_INDICES = {
    BasisId.B2_XZ: (0, 1, 2, 3),
    BasisId.B2_YZ: (0, 1, 4, 5),
    BasisId.B2_XY: (2, 3, 4, 5),
    BasisId.B3: (0, 1, 2, 3, 4, 5),
}

# Eigenstates |0>,|1> of sz, |2>,|3> of sx, |4>,|5> of sy.
_S = 1 / math.sqrt(2)
KETS = (
    np.array([1, 0], dtype=complex),
    np.array([0, 1], dtype=complex),
    np.array([_S, _S], dtype=complex),
    np.array([_S, -_S], dtype=complex),
    np.array([_S, 1j * _S], dtype=complex),
    np.array([_S, -1j * _S], dtype=complex),
)

BLOCH_POINTS = (
    BlochVector(0.0, 0.0, 1.0),
    BlochVector(0.0, 0.0, -1.0),
    BlochVector(1.0, 0.0, 0.0),
    BlochVector(-1.0, 0.0, 0.0),
    BlochVector(0.0, 1.0, 0.0),
    BlochVector(0.0, -1.0, 0.0),
)


class BasisState(NamedTuple):
    index: int
    bloch: BlochVector


def basis_states(basis: BasisId) -> list[BasisState]:
    """Member states of ``basis`` in fixed index order."""
    return [BasisState(i, BLOCH_POINTS[i]) for i in basis.indices]


def projector(index: int) -> np.ndarray:
    """|i><i| for the Pauli eigenstate with the given index."""
    ket = KETS[index]
    return np.outer(ket, ket.conj())


def density_matrix(p: QubitParams) -> np.ndarray:
    c = p.coherence
    return np.array(
        [[1.0 - p.a, c * np.exp(-1j * p.phi)], [c * np.exp(1j * p.phi), p.a]],
        dtype=complex,
    )


def bloch_from_params(p: QubitParams) -> BlochVector:
    c2 = 2.0 * p.coherence
    return BlochVector(c2 * math.cos(p.phi), c2 * math.sin(p.phi), 1.0 - 2.0 * p.a)


def bloch_from_matrix(rho: np.ndarray) -> BlochVector:
    """Pauli expectations tr(rho sigma) of a 2x2 density matrix."""
    rho = np.asarray(rho)
    return BlochVector(
        2.0 * rho[0, 1].real,
        -2.0 * rho[0, 1].imag,
        float((rho[0, 0] - rho[1, 1]).real),
    )


def matrix_from_bloch(r) -> np.ndarray:
    x, y, z = r
    return 0.5 * (IDENTITY + x * SIGMA_X + y * SIGMA_Y + z * SIGMA_Z)


def validate_density_matrix(rho: np.ndarray, tol: float = EXACT_TOL) -> np.ndarray:
    """Check that ``rho`` is a 2x2 Hermitian, unit-trace, positive matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise DomainError(f"expected a 2x2 matrix, got shape {rho.shape}")
    if abs(rho[1, 0] - np.conj(rho[0, 1])) > tol or abs(rho[0, 0].imag) > tol or abs(rho[1, 1].imag) > tol:
        raise DomainError("matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise DomainError(f"trace is {np.trace(rho).real!r}, expected 1")
    eigs = np.linalg.eigvalsh(rho)
    if eigs.min() < -tol or eigs.max() > 1.0 + tol:
        raise DomainError(f"eigenvalues {eigs} outside [0, 1]")
    return rho


def trace_distance(rho1: np.ndarray, rho2: np.ndarray) -> float:
    """Trace norm ||rho1 - rho2||_1 of two qubit density matrices.

    The difference of two unit-trace Hermitian 2x2 matrices is traceless, so
    its eigenvalues are +-e and the trace norm equals 2 sqrt(|det|).
    """
    d = np.asarray(rho1) - np.asarray(rho2)
    det = d[0, 0] * d[1, 1] - d[0, 1] * d[1, 0]
    return 2.0 * math.sqrt(abs(det.real))


def bloch_distance(r1, r2) -> float:
    return math.dist(tuple(r1), tuple(r2))


@dataclass(frozen=True)
class SymmetryRecord:
    """Which distance-preserving maps took a state to the canonical domain.

    ``phi_map`` is one of ``"phi"``, ``"pi - phi"``, ``"phi - pi"`` and
    ``"2pi - phi"``.  Each of these flips the sign of <sx> and/or <sy>; the
    a -> 1 - a map flips <sz>.  All B2 squares and the B3 octahedron are
    symmetric under these sign flips, so every distance is unchanged.
    """

    flipped_a: bool
    phi_map: str
    flip_x: bool
    flip_y: bool

    @property
    def identity(self) -> bool:
        return not (self.flipped_a or self.flip_x or self.flip_y)

    def relabel(self, index: int) -> int:
        """Map a canonical basis-state index to the original state's frame."""
        pairs = ((self.flipped_a, 0), (self.flip_x, 2), (self.flip_y, 4))
        for flipped, low in pairs:
            if flipped and index in (low, low + 1):
                return low + 1 if index == low else low
        return index

    def relabel_weights(self, basis: BasisId, weights: np.ndarray) -> np.ndarray:
        """Permute weights given in canonical labels into original labels."""
        order = basis.indices
        pos = {idx: j for j, idx in enumerate(order)}
        out = np.empty_like(np.asarray(weights, dtype=float))
        for j, idx in enumerate(order):
            out[pos[self.relabel(idx)]] = weights[j]
        return out


def canonicalize(p: QubitParams) -> tuple[QubitParams, SymmetryRecord]:
    """Reduce to a in [0, 1/2], phi in [0, pi/2] with one sign-flip map per axis."""
    flipped_a = p.a > 0.5
    a = 1.0 - p.a if flipped_a else p.a
    half = math.pi / 2
    phi = p.phi
    if phi <= half:
        phi_map, flip_x, flip_y = "phi", False, False
    elif phi <= math.pi:
        phi, phi_map, flip_x, flip_y = math.pi - phi, "pi - phi", True, False
    elif phi <= 3 * half:
        phi, phi_map, flip_x, flip_y = phi - math.pi, "phi - pi", True, True
    else:
        phi, phi_map, flip_x, flip_y = 2 * math.pi - phi, "2pi - phi", False, True
    phi = min(max(phi, 0.0), half)
    return QubitParams(a, p.k, phi), SymmetryRecord(flipped_a, phi_map, flip_x, flip_y)
