"""Independent checks for the closed forms.

Three routes to the same optimum, each with its own failure modes:

* ``grid_search`` enumerates the probability simplex on an integer lattice and
  evaluates 2 sqrt|det(rho - sum_i p_i rho_i)| on every point.
* ``project_bloch`` projects the Bloch vector onto the convex hull of the
  basis Bloch points (an l1 ball in the spanned coordinates).
* ``kkt_verify`` recovers the Lagrange multipliers of the simplex-constrained
  problem for a candidate weight vector and reports the residuals.

``preimage_family`` solves for every weight vector that produces a given
point of the hull.
"""

from __future__ import annotations

import enum
import functools
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import lsq_linear
from scipy.spatial import cKDTree

from .closed_form import FAMILY_DIRECTION, DecompositionFamily, Weights
from .qubit import (
    BLOCH_POINTS,
    NORM_TOL,
    BasisId,
    BlochVector,
    DomainError,
    QubitParams,
    bloch_from_params,
    density_matrix,
    projector,
)

DEFAULT_CAP = 20_000_000


class ResourceCapError(RuntimeError):
    """Raised when a lattice enumeration would exceed its point budget."""


class Method(enum.Enum):
    GRID_SEARCH = "grid_search"
    POLYTOPE_PROJECTION = "polytope_projection"


@dataclass(frozen=True, eq=False)
class OracleResult:
    value: float
    argmin: Weights
    step: float
    method: Method
    hull_point: BlochVector | None = None


@dataclass(frozen=True)
class KKTReport:
    lam: float
    lam_i: tuple[float, ...]
    stationarity_residual: float
    complementarity_residual: float
    dual_residual: float
    feasible: bool
    tol: float

    @property
    def passed(self) -> bool:
        return (
            self.feasible
            and self.stationarity_residual <= self.tol
            and self.complementarity_residual <= self.tol
            and self.dual_residual <= self.tol
        )


# -- simplex lattice --------------------------------------------------------

def n_compositions(n: int, parts: int) -> int:
    return math.comb(n + parts - 1, parts - 1)


def compositions(n: int, parts: int) -> np.ndarray:
    """All nonnegative integer vectors of length ``parts`` summing to ``n``,
    in lexicographic order."""
    if parts == 1:
        return np.array([[n]], dtype=np.int32)
    if parts == 2:
        first = np.arange(n + 1, dtype=np.int32)
        return np.column_stack([first, n - first])
    blocks = []
    for first in range(n + 1):
        rest = compositions(n - first, parts - 1)
        blocks.append(np.column_stack([np.full(len(rest), first, dtype=np.int32), rest]))
    return np.concatenate(blocks)


def _integer_projectors(basis: BasisId) -> np.ndarray:
    """Rows (2 rho_00, 2 Re rho_01, 2 Im rho_01) for each member state; all
    entries are integers for Pauli eigenstates."""
    rows = []
    for i in basis.indices:
        pr = 2 * projector(i)
        rows.append([pr[0, 0].real, pr[0, 1].real, pr[0, 1].imag])
    rows = np.array(rows)
    ints = np.rint(rows)
    assert np.allclose(rows, ints, atol=1e-12)
    return ints.astype(np.int64)


@dataclass(frozen=True, eq=False)
class Lattice:
    """Distinct mixtures reachable on the simplex lattice with spacing 1/n.

    Many weight vectors give the same mixture matrix; the objective depends on
    the weights only through that matrix, so each distinct matrix is kept once
    together with its lexicographically smallest weight vector.
    """

    basis: BasisId
    n: int
    weights: np.ndarray   # (m, d) integer compositions, lexicographic order
    entries: np.ndarray   # (m, 3) rho_00, Re rho_01, Im rho_01 of each mixture
    n_points: int         # size of the full enumeration

    @property
    def step(self) -> float:
        return 1.0 / self.n

    @functools.cached_property
    def tree(self) -> cKDTree:
        return cKDTree(self.entries)


@functools.lru_cache(maxsize=4)
def lattice(basis: BasisId, n: int) -> Lattice:
    d = len(basis.indices)
    table = _integer_projectors(basis)
    base = 2 * n + 1
    keys, reps = [], []
    # chunk over the first coordinate to bound memory
    for first in range(n + 1):
        rest = compositions(n - first, d - 1)
        comp = np.column_stack([np.full(len(rest), first, dtype=np.int32), rest])
        ent = comp.astype(np.int64) @ table
        key = (ent[:, 0] * base + ent[:, 1] + n) * base + ent[:, 2] + n
        key, idx = np.unique(key, return_index=True)
        keys.append(key)
        reps.append(comp[idx].astype(np.int16 if n < 32000 else np.int32))
    keys = np.concatenate(keys)
    reps = np.concatenate(reps)
    # chunks are in lexicographic order, so the first occurrence of each key
    # is its lexicographically smallest composition
    order = np.argsort(keys, kind="stable")
    keys, reps = keys[order], reps[order]
    first = np.ones(len(keys), dtype=bool)
    first[1:] = keys[1:] != keys[:-1]
    reps = reps[first]
    lex = np.lexsort(reps.T[::-1])
    reps = reps[lex]
    entries = (reps.astype(np.int64) @ table) / (2.0 * n)
    reps.flags.writeable = False
    entries.flags.writeable = False
    return Lattice(basis, n, reps, entries, n_compositions(n, d))


def _resolve_n(step: float, parts: int, cap: int, on_cap: str) -> int:
    if not 0 < step <= 0.1:
        raise DomainError(f"step must lie in (0, 0.1], got {step!r}")
    n = round(1.0 / step)
    if n_compositions(n, parts) <= cap:
        return n
    if on_cap == "raise":
        raise ResourceCapError(
            f"{n_compositions(n, parts)} lattice points at step {step} exceed the cap {cap}"
        )
    coarse = n
    while coarse > 1 and n_compositions(coarse, parts) > cap:
        coarse -= 1
    warnings.warn(
        f"step {step} needs {n_compositions(n, parts)} lattice points (cap {cap}); "
        f"coarsened to {1 / coarse:.6g}",
        RuntimeWarning,
        stacklevel=3,
    )
    return coarse


def lipschitz_bound(basis: BasisId, step: float) -> float:
    """Guaranteed gap between the lattice minimum and the true minimum."""
    return 2.0 * math.sqrt(len(basis.indices)) * step


def grid_search(
    p: QubitParams,
    basis: BasisId,
    step: float,
    cap: int = DEFAULT_CAP,
    on_cap: str = "coarsen",
) -> OracleResult:
    """Brute-force minimum of 2 sqrt|det(rho - mixture)| over the simplex lattice.

    ``on_cap`` is ``"coarsen"`` (warn and use the finest admissible step) or
    ``"raise"`` (``ResourceCapError``).
    """
    n = _resolve_n(step, len(basis.indices), cap, on_cap)
    lat = lattice(basis, n)
    rho = density_matrix(p)
    m00 = lat.entries[:, 0]
    m01 = lat.entries[:, 1] + 1j * lat.entries[:, 2]
    d00 = rho[0, 0].real - m00
    d11 = rho[1, 1].real - (1.0 - m00)
    d01 = rho[0, 1] - m01
    det = d00 * d11 - (d01 * d01.conj()).real
    objective = np.abs(det)
    best = int(np.argmin(objective))  # first hit = lexicographically smallest
    w = Weights(basis, lat.weights[best] / n)
    return OracleResult(2.0 * math.sqrt(objective[best]), w, 1.0 / n, Method.GRID_SEARCH)


def grid_search_many(
    params,
    basis: BasisId,
    step: float,
    cap: int = DEFAULT_CAP,
    on_cap: str = "coarsen",
) -> tuple[np.ndarray, np.ndarray, float]:
    """Lattice minimum for many states at once.

    For two unit-trace Hermitian 2x2 matrices the difference D has
    D_11 = -D_00, so |det D| = D_00^2 + |D_01|^2: the lattice minimum is the
    nearest lattice mixture in (rho_00, Re rho_01, Im rho_01).  Returns the
    values, the argmin weights (rows) and the step actually used.
    """
    n = _resolve_n(step, len(basis.indices), cap, on_cap)
    lat = lattice(basis, n)
    rhos = np.array([density_matrix(p) for p in params]).reshape(-1, 2, 2)
    feats = np.column_stack([rhos[:, 0, 0].real, rhos[:, 0, 1].real, rhos[:, 0, 1].imag])
    _, idx = lat.tree.query(feats)
    diff = feats - lat.entries[idx]
    det = diff[:, 0] ** 2 + diff[:, 1] ** 2 + diff[:, 2] ** 2
    return 2.0 * np.sqrt(det), lat.weights[idx] / n, 1.0 / n


# -- exact projection -------------------------------------------------------

def project_l1_ball(points) -> np.ndarray:
    """Euclidean projection of each row of ``points`` onto {v : ||v||_1 <= 1}.

    Rows outside the ball are mapped to the simplex face selected by their
    sign pattern: |v| is shifted down by the threshold theta that makes the
    positive part sum to one (sort-based active-face search).
    """
    v = np.atleast_2d(np.asarray(points, dtype=float))
    mag = np.abs(v)
    out = v.copy()
    outside = mag.sum(axis=1) > 1.0
    if outside.any():
        u = -np.sort(-mag[outside], axis=1)
        css = np.cumsum(u, axis=1) - 1.0
        ranks = np.arange(1, u.shape[1] + 1)
        active = u - css / ranks > 0
        rho = active.shape[1] - 1 - np.argmax(active[:, ::-1], axis=1)
        theta = css[np.arange(len(u)), rho] / (rho + 1)
        out[outside] = np.sign(v[outside]) * np.maximum(mag[outside] - theta[:, None], 0.0)
    return out


# Bloch coordinates spanned by each basis and the out-of-plane one.
_PLANES = {
    BasisId.B2_XZ: ((0, 2), 1),
    BasisId.B2_YZ: ((1, 2), 0),
    BasisId.B2_XY: ((0, 1), 2),
    BasisId.B3: ((0, 1, 2), None),
}


def hull_projection(target, basis: BasisId) -> np.ndarray:
    """Nearest point of the basis polytope to each Bloch vector (rows)."""
    pts = np.atleast_2d(np.asarray(target, dtype=float))
    axes, _ = _PLANES[basis]
    hull = np.zeros_like(pts)
    hull[:, list(axes)] = project_l1_ball(pts[:, list(axes)])
    return hull


def hull_distance(target, basis: BasisId) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(target, dtype=float))
    return np.linalg.norm(pts - hull_projection(pts, basis), axis=1)


def hull_weights(hull_point, basis: BasisId) -> Weights:
    """One weight vector whose mixture is ``hull_point``.

    Each axis carries |h_j| on the vertex of matching sign; leftover mass is
    split evenly over the +- pairs so it cancels.
    """
    h = np.asarray(hull_point, dtype=float)
    axes, _ = _PLANES[basis]
    w = np.zeros(len(basis.indices))
    pos = {idx: j for j, idx in enumerate(basis.indices)}
    # index of the + vertex on Bloch axis 0,1,2 is 2,4,0
    plus = {0: 2, 1: 4, 2: 0}
    for ax in axes:
        hi = plus[ax]
        if h[ax] >= 0:
            w[pos[hi]] += h[ax]
        else:
            w[pos[hi + 1]] -= h[ax]
    left = 1.0 - w.sum()
    if left < -NORM_TOL:
        raise DomainError(f"{tuple(h)} lies outside the {basis.name} polytope")
    w += max(left, 0.0) / len(w)
    return Weights(basis, w / w.sum())


def project_bloch(target, basis: BasisId) -> OracleResult:
    """Exact distance from a Bloch vector to the convex hull of ``basis``."""
    hull = hull_projection(target, basis)[0]
    value = float(np.linalg.norm(np.asarray(target, dtype=float) - hull))
    return OracleResult(
        value, hull_weights(hull, basis), 0.0, Method.POLYTOPE_PROJECTION, BlochVector(*hull.tolist())
    )


# -- KKT --------------------------------------------------------------------

def objective_gradient(p: QubitParams, w: Weights) -> np.ndarray:
    """d|det(rho - sum_j p_j rho_j)| / dp_i with the p_j treated as free.

    det is nonpositive on the simplex, so |det| = -det and, with
    d det(M) = tr(adj(M) dM), the gradient is tr(adj(M) rho_i).
    """
    rho = density_matrix(p)
    m = rho - sum(pj * projector(j) for pj, j in zip(w.p, w.basis.indices))
    adj = np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])
    return np.array([np.trace(adj @ projector(i)).real for i in w.basis.indices])


def stationarity_xz(p: QubitParams, w: Weights) -> np.ndarray:
    """Left-hand sides of the expanded B2_XZ stationarity system without the
    multiplier terms; equals minus ``objective_gradient``."""
    p0, p1, p2, p3 = w.p
    a = p.a
    cc = p.coherence * math.cos(p.phi)
    return np.array([
        p1 + 0.5 * p2 + 0.5 * p3 - a,
        p0 + 0.5 * p2 + 0.5 * p3 - 1 + a,
        0.5 * p0 + 0.5 * p1 + p3 + cc - 0.5,
        0.5 * p0 + 0.5 * p1 + p2 - cc - 0.5,
    ])


def kkt_verify(p: QubitParams, basis: BasisId, w: Weights, tol: float = 1e-9) -> KKTReport:
    """Check grad_i = lam + lam_i, lam_i >= 0, lam_i p_i = 0 for weights ``w``.

    Coordinates with p_i > tol get lam_i = 0; the rest get bounded
    multipliers.  (lam, lam_i) are fitted by bounded least squares and the
    residuals decide the verdict.
    """
    if w.basis is not basis:
        raise DomainError(f"weights are over {w.basis.name}, expected {basis.name}")
    if tol <= 0:
        raise DomainError("tol must be positive")
    if basis is BasisId.B2_XZ:
        grad = -stationarity_xz(p, w)
    else:
        grad = objective_gradient(p, w)
    d = len(grad)
    active = w.p <= tol
    cols = [np.ones(d)] + [np.eye(d)[i] for i in range(d) if active[i]]
    a_mat = np.column_stack(cols)
    lower = np.array([-np.inf] + [0.0] * (len(cols) - 1))
    upper = np.full(len(cols), np.inf)
    sol = lsq_linear(a_mat, grad, bounds=(lower, upper), method="bvls", tol=1e-15)
    lam = float(sol.x[0])
    lam_i = np.zeros(d)
    lam_i[active] = sol.x[1:]
    resid = grad - lam - lam_i
    feasible = bool((w.p >= -tol).all() and abs(w.p.sum() - 1) <= tol)
    return KKTReport(
        lam=lam,
        lam_i=tuple(lam_i.tolist()),
        stationarity_residual=float(np.abs(resid).max()),
        complementarity_residual=float(np.abs(lam_i * w.p).max()),
        dual_residual=float(max(0.0, -lam_i.min())),
        feasible=feasible,
        tol=tol,
    )


# -- preimage ---------------------------------------------------------------

def preimage_family(hull_point, basis: BasisId, tol: float = NORM_TOL) -> DecompositionFamily:
    """Every weight vector over a B2 basis whose mixture is ``hull_point``."""
    if not basis.is_b2:
        raise DomainError("preimage_family handles the four-state B2 bases only")
    h = np.asarray(hull_point, dtype=float)
    if hull_distance(h, basis)[0] > tol:
        raise DomainError(f"{tuple(h)} lies outside the {basis.name} polytope")
    axes, _ = _PLANES[basis]
    verts = np.array([BLOCH_POINTS[i] for i in basis.indices])[:, list(axes)]
    a_mat = np.vstack([verts.T, np.ones(4)])
    rhs = np.append(h[list(axes)], 1.0)
    part = np.linalg.lstsq(a_mat, rhs, rcond=None)[0]
    null = null_space(a_mat)[:, 0]
    # orient the free direction like the closed-form family
    null = null / null[np.argmax(np.abs(null))]
    null = null * np.sign(null @ np.array(FAMILY_DIRECTION))
    null = np.round(null, 12)
    lo, hi = -np.inf, np.inf
    for pi, di in zip(part, null):
        if di > 0:
            lo = max(lo, -pi / di)
        elif di < 0:
            hi = min(hi, -pi / di)
    if hi < lo - tol:
        raise DomainError(f"{tuple(h)} has no nonnegative preimage")
    hi = max(hi, lo)
    base = part + lo * null
    base[np.abs(base) < 1e-15] = 0.0
    return DecompositionFamily(basis, Weights(basis, base), null, float(hi - lo))
