"""Gridded data behind the distance surfaces, case interfaces and
minimum-distance plots.

Panel ids: ``{1,2,3}{a,b,c}`` for the B2_XZ, B2_YZ and B2_XY distances and
``4a``/``4b`` for the minimum of the three.  ``a`` panels vary (a, k) at fixed
phi, ``b`` panels vary (a, phi) at fixed k, ``c`` panels give the k at which
the case I / case II predicate changes sign for each (a, phi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .closed_form import b2_distance_array
from .qubit import BasisId, DomainError
from .regions import distances_array

FIGURE_IDS = ("1a", "1b", "1c", "2a", "2b", "2c", "3a", "3b", "3c", "4a", "4b")
FIGURE_BASIS = {"1": BasisId.B2_XZ, "2": BasisId.B2_YZ, "3": BasisId.B2_XY}
DEFAULT_PHI = math.pi / 4
DEFAULT_K = 4 / 5


@dataclass(frozen=True, eq=False)
class FigureGrid:
    figure: str
    a: np.ndarray
    k: np.ndarray
    phi: np.ndarray
    value: np.ndarray

    def rows(self):
        for cols in zip(self.a.ravel(), self.k.ravel(), self.phi.ravel(), self.value.ravel()):
            yield tuple(float(c) for c in cols)


def interface_k(a, phi, basis: BasisId) -> np.ndarray:
    """k on the case boundary (margin = 0); NaN where it falls outside [0, 1]."""
    a, phi = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(phi, dtype=float))
    with np.errstate(divide="ignore", invalid="ignore"):
        if basis is BasisId.B2_XZ:
            k = np.sqrt(a / (1 - a)) / np.cos(phi)
        elif basis is BasisId.B2_YZ:
            k = np.sqrt(a / (1 - a)) / np.sin(phi)
        elif basis is BasisId.B2_XY:
            k = 0.5 / (np.sqrt(a * (1 - a)) * (np.sin(phi) + np.cos(phi)))
        else:
            raise DomainError("interfaces exist for the B2 bases only")
    # k = 0 at a = 0 for the XZ/YZ predicates, whose margin vanishes there
    if basis is not BasisId.B2_XY:
        k = np.where(a == 0, 0.0, k)
    return np.where(np.isfinite(k) & (k <= 1.0), k, np.nan)


def scan_figure(
    figure: str,
    n_a: int = 200,
    n_k: int = 200,
    n_phi: int = 200,
    phi: float = DEFAULT_PHI,
    k: float = DEFAULT_K,
) -> FigureGrid:
    if figure not in FIGURE_IDS:
        raise DomainError(f"unknown figure {figure!r}; expected one of {', '.join(FIGURE_IDS)}")
    if min(n_a, n_k, n_phi) < 1:
        raise DomainError("figure grid has no points")
    if not (0 <= phi <= math.pi / 2 and 0 <= k <= 1):
        raise DomainError("fixed parameters must be canonical")
    a_axis = np.linspace(0.0, 0.5, n_a)
    num, panel = figure[0], figure[1]
    if panel == "a":
        a, kk = np.meshgrid(a_axis, np.linspace(0.0, 1.0, n_k), indexing="ij")
        pp = np.full_like(a, phi)
    else:
        a, pp = np.meshgrid(a_axis, np.linspace(0.0, math.pi / 2, n_phi), indexing="ij")
        kk = np.full_like(a, k)
    if num == "4":
        value = distances_array(a, kk, pp).min(axis=0)
    elif panel == "c":
        value = interface_k(a, pp, FIGURE_BASIS[num])
        kk = value
    else:
        value = b2_distance_array(a, kk, pp, FIGURE_BASIS[num])
    return FigureGrid(figure, a, kk, pp, value)
