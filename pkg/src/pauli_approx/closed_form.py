"""Closed-form B2 distances and their complete families of optimal decompositions.

For a canonical state (a <= 1/2, phi <= pi/2) each B2 basis has two cases.
In case I the in-plane part of the Bloch vector lies inside the basis square
and the distance is the out-of-plane component; the optimal weights form a
one-parameter family.  In case II the in-plane part lies outside the square,
the optimum sits on the edge joining the two "positive" vertices and is
unique.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .qubit import (
    BLOCH_POINTS,
    EXACT_TOL,
    BasisId,
    BlochVector,
    DomainError,
    QubitParams,
    SymmetryRecord,
    UnsupportedBasisError,
    bloch_from_params,
    canonicalize,
    projector,
)

# Every CaseI family moves weight from the first pair onto the second pair.
FAMILY_DIRECTION = (-1.0, -1.0, 1.0, 1.0)
CLAMP_TOL = 1e-12


class Case(enum.Enum):
    I = "I"
    II = "II"


@dataclass(frozen=True)
class CaseBranch:
    case: Case
    margin: float


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Weights:
    """Probabilities over the members of ``basis`` in its index order."""

    basis: BasisId
    p: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        if p.shape != (len(self.basis.indices),):
            raise DomainError(
                f"{self.basis.name} needs {len(self.basis.indices)} weights, got shape {p.shape}"
            )
        if (p < -CLAMP_TOL).any():
            raise DomainError(f"negative weights {p}")
        if abs(p.sum() - 1.0) > CLAMP_TOL:
            raise DomainError(f"weights sum to {p.sum()!r}, expected 1")
        p[p < 0] = 0.0
        object.__setattr__(self, "p", _frozen(p))

    def as_dict(self) -> dict[int, float]:
        return {i: float(w) for i, w in zip(self.basis.indices, self.p)}


@dataclass(frozen=True, eq=False)
class DecompositionFamily:
    """Optimal weights ``base + t * direction`` for t in [0, t_max]."""

    basis: BasisId
    base: Weights
    direction: np.ndarray = field(default_factory=lambda: _frozen(FAMILY_DIRECTION))
    t_max: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "direction", _frozen(self.direction))

    @property
    def is_singleton(self) -> bool:
        return self.t_max == 0.0

    def at(self, t: float) -> Weights:
        if not -EXACT_TOL <= t <= self.t_max + EXACT_TOL:
            raise DomainError(f"t={t!r} outside [0, {self.t_max!r}]")
        t = min(max(t, 0.0), self.t_max)
        return Weights(self.basis, self.base.p + t * self.direction)


@dataclass(frozen=True, eq=False)
class DistanceResult:
    basis: BasisId
    value: float
    branch: CaseBranch
    family: DecompositionFamily


def mixture_bloch(w: Weights) -> BlochVector:
    pts = np.array([BLOCH_POINTS[i] for i in w.basis.indices])
    return BlochVector(*(w.p @ pts).tolist())


def mixture(w: Weights) -> np.ndarray:
    """Density matrix sum_i p_i |e_i><e_i|."""
    return sum(pi * projector(i) for pi, i in zip(w.p, w.basis.indices))


def _require(p: QubitParams, basis: BasisId) -> None:
    if not basis.is_b2:
        raise UnsupportedBasisError("closed forms exist only for the B2 bases; use b3.b3_distance")
    if not p.is_canonical:
        raise DomainError(f"{p} is not canonical; apply canonicalize() first")


def _trig(p: QubitParams) -> tuple[float, float, float]:
    return p.coherence, math.cos(p.phi), math.sin(p.phi)


def case_branch(p: QubitParams, basis: BasisId) -> CaseBranch:
    _require(p, basis)
    c, cos, sin = _trig(p)
    if basis is BasisId.B2_XZ:
        margin = p.a - c * cos
    elif basis is BasisId.B2_YZ:
        margin = p.a - c * sin
    else:
        margin = 0.5 - c * (sin + cos)
    # Boundary points belong to case I, whose family collapses there.
    return CaseBranch(Case.I if margin >= 0.0 else Case.II, margin)


def _raw_value(p: QubitParams, basis: BasisId, case: Case) -> float:
    """Distance written directly in a, k, phi."""
    a, k = p.a, p.k
    s = math.sqrt(a * (1 - a))
    c, cos, sin = _trig(p)
    if basis is BasisId.B2_XZ:
        if case is Case.I:
            return 2 * k * s * sin
        sq = 2 * (1 + sin**2) * k**2 * a * (1 - a) - 4 * a * cos * k * s + 2 * a**2
    elif basis is BasisId.B2_YZ:
        if case is Case.I:
            return 2 * k * s * cos
        sq = 2 * (1 + cos**2) * k**2 * a * (1 - a) - 4 * a * sin * k * s + 2 * a**2
    else:
        if case is Case.I:
            return 1 - 2 * a
        sq = (1 - 2 * a) ** 2 + 2 * (c * (cos + sin) - 0.5) ** 2
    return math.sqrt(max(sq, 0.0))


def _sigma_value(r: BlochVector, basis: BasisId, case: Case) -> float:
    """Distance written in Pauli expectations."""
    x, y, z = r
    if basis is BasisId.B2_XZ:
        out, u, v = y, x, z
    elif basis is BasisId.B2_YZ:
        out, u, v = x, y, z
    else:
        out, u, v = z, x, y
    if case is Case.I:
        return out
    return math.sqrt(out**2 + 0.5 * (u + v - 1) ** 2)


def optimal_family(p: QubitParams, basis: BasisId) -> DecompositionFamily:
    branch = case_branch(p, basis)
    c, cos, sin = _trig(p)
    a = p.a
    if basis is BasisId.B2_XZ:
        if branch.case is Case.I:
            base = (1 - a - c * cos, a - c * cos, 2 * c * cos, 0.0)
        else:
            base = (1 - a - c * cos, 0.0, a + c * cos, 0.0)
    elif basis is BasisId.B2_YZ:
        if branch.case is Case.I:
            base = (1 - a - c * sin, a - c * sin, 2 * c * sin, 0.0)
        else:
            base = (1 - a - c * sin, 0.0, a + c * sin, 0.0)
    else:
        if branch.case is Case.I:
            base = (0.5 + c * (cos - sin), 0.5 - c * (cos + sin), 2 * c * sin, 0.0)
        else:
            base = (0.5 + c * (cos - sin), 0.0, 0.5 - c * (cos - sin), 0.0)
    base = np.array(base)
    base[(base < 0) & (base >= -CLAMP_TOL)] = 0.0
    t_max = 0.0
    if branch.case is Case.I:
        # tightest nonnegativity bound among the decreasing coordinates
        t_max = max(0.0, float(min(base[0], base[1])))
    return DecompositionFamily(basis, Weights(basis, base), t_max=t_max)


def b2_distance(p: QubitParams, basis: BasisId) -> DistanceResult:
    """Minimal trace distance from the canonical state ``p`` to mixtures of ``basis``.

    The value is evaluated both from the (a, k, phi) expression and from the
    Pauli-expectation expression; the two must agree.
    """
    branch = case_branch(p, basis)
    raw = _raw_value(p, basis, branch.case)
    value = _sigma_value(bloch_from_params(p), basis, branch.case)
    # Compare squares as well: near the case boundary the raw square root
    # amplifies cancellation in its radicand.
    if abs(raw - value) > EXACT_TOL and abs(raw**2 - value**2) > EXACT_TOL:
        raise ArithmeticError(f"closed forms disagree for {p}, {basis.name}: {raw!r} vs {value!r}")
    return DistanceResult(basis, value, branch, optimal_family(p, basis))


@dataclass(frozen=True, eq=False)
class Approximation:
    """Result for an arbitrary state: canonical result plus the family in the
    original state's basis labels."""

    params: QubitParams
    canonical: QubitParams
    symmetry: SymmetryRecord
    result: DistanceResult
    family: DecompositionFamily

    @property
    def value(self) -> float:
        return self.result.value


def optimal_approximation(p: QubitParams, basis: BasisId) -> Approximation:
    canon, sym = canonicalize(p)
    res = b2_distance(canon, basis)
    fam = res.family
    base = Weights(basis, sym.relabel_weights(basis, fam.base.p))
    direction = sym.relabel_weights(basis, fam.direction)
    return Approximation(p, canon, sym, res, DecompositionFamily(basis, base, direction, fam.t_max))


# -- vectorized evaluation for scans ---------------------------------------

def margin_array(a, k, phi, basis: BasisId) -> np.ndarray:
    a, k, phi = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a, k, phi)))
    c = k * np.sqrt(a * (1 - a))
    if basis is BasisId.B2_XZ:
        return a - c * np.cos(phi)
    if basis is BasisId.B2_YZ:
        return a - c * np.sin(phi)
    if basis is BasisId.B2_XY:
        return 0.5 - c * (np.sin(phi) + np.cos(phi))
    raise UnsupportedBasisError(basis.name)


def b2_distance_array(a, k, phi, basis: BasisId) -> np.ndarray:
    """Vectorized B2 distance over broadcast arrays of canonical parameters."""
    a, k, phi = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a, k, phi)))
    c2 = 2 * k * np.sqrt(a * (1 - a))
    x, y, z = c2 * np.cos(phi), c2 * np.sin(phi), 1 - 2 * a
    if basis is BasisId.B2_XZ:
        out, u, v = y, x, z
    elif basis is BasisId.B2_YZ:
        out, u, v = x, y, z
    elif basis is BasisId.B2_XY:
        out, u, v = z, x, y
    else:
        raise UnsupportedBasisError(basis.name)
    case1 = margin_array(a, k, phi, basis) >= 0.0
    return np.where(case1, out, np.sqrt(out**2 + 0.5 * (u + v - 1) ** 2))
