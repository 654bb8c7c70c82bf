"""Command-line entry point.

Every subcommand prints one JSON object to stdout (schema_version "1");
scan subcommands with ``--out PATH`` also write CSV to PATH and the JSON
record next to it.  Exit codes: 0 success, 1 verification failure,
2 usage error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .b3 import b3_distance, compare_scan
from .closed_form import Weights, mixture, optimal_approximation
from .figures import DEFAULT_K, DEFAULT_PHI, FIGURE_IDS, scan_figure
from .oracle import ResourceCapError, grid_search, kkt_verify, lipschitz_bound, project_bloch
from .qubit import BasisId, DomainError, QubitParams, bloch_from_params, density_matrix, trace_distance
from .regions import PREDICATES_OF, ScanGrid, scan_ranges

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

CSV_HEADERS = {
    "scan-figures": ("figure", "a", "k", "phi", "value"),
    "regions-table": ("region", "d_sum_min", "d_sum_max", "d_sq_min", "d_sq_max", "samples"),
    "regions-cloud": ("a", "k", "phi", "region"),
    "compare-b3": ("a", "phi", "min_d_b2", "d_b3", "gap"),
}


class UsageError(Exception):
    pass


def _num(x):
    """JSON-safe number; floats keep their shortest round-trip repr."""
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    return x


def _list(arr) -> list:
    return [_num(v) for v in np.asarray(arr).tolist()]


def _record(command: str, args: dict, payload: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": {"name": command, "args": args}, "payload": payload}


def _dumps(record: dict) -> str:
    return json.dumps(record, indent=2, sort_keys=False) + "\n"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8", newline="\n")


def _basis(name: str) -> BasisId:
    try:
        return BasisId(name)
    except ValueError:
        raise UsageError(f"unknown basis {name!r}; expected xz, yz, xy or b3") from None


def _params(ns) -> QubitParams:
    phi = math.radians(ns.phi) if ns.deg else ns.phi
    try:
        return QubitParams.wrapped(ns.a, ns.k, phi)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _state_args(ns) -> dict:
    return {"a": ns.a, "k": ns.k, "phi": ns.phi, "deg": ns.deg}


def _symmetry(approx_or_sym) -> dict:
    sym = approx_or_sym
    return {"flipped_a": sym.flipped_a, "phi_map": sym.phi_map, "flip_x": sym.flip_x, "flip_y": sym.flip_y}


def _family(fam) -> dict:
    return {
        "indices": list(fam.basis.indices),
        "base": _list(fam.base.p),
        "direction": _list(fam.direction),
        "t_max": _num(fam.t_max),
    }


# -- subcommands ------------------------------------------------------------

def cmd_distance(ns) -> tuple[dict, int]:
    p = _params(ns)
    basis = _basis(ns.basis)
    args = {**_state_args(ns), "basis": basis.value}
    if basis is BasisId.B3:
        proj = project_bloch(bloch_from_params(p), basis)
        payload = {
            "basis": basis.value,
            "value": _num(b3_distance(p)),
            "hull_point": _list(proj.hull_point),
            "weights": {"indices": list(basis.indices), "p": _list(proj.argmin.p)},
        }
        return _record("distance", args, payload), EXIT_OK
    approx = optimal_approximation(p, basis)
    res = approx.result
    payload = {
        "basis": basis.value,
        "value": _num(res.value),
        "case": res.branch.case.value,
        "margin": _num(res.branch.margin),
        "canonical": {"a": approx.canonical.a, "k": approx.canonical.k, "phi": approx.canonical.phi},
        "symmetry": _symmetry(approx.symmetry),
        "family": _family(approx.family),
    }
    return _record("distance", args, payload), EXIT_OK


def cmd_verify(ns) -> tuple[dict, int]:
    p = _params(ns)
    basis = _basis(ns.basis)
    if basis is BasisId.B3:
        raise UsageError("verify handles the B2 bases xz, yz, xy")
    approx = optimal_approximation(p, basis)
    fam = approx.family
    if ns.weights is not None:
        try:
            values = [float(v) for v in ns.weights.split(",")]
            w = Weights(basis, values)
        except (ValueError, DomainError) as exc:
            raise UsageError(f"bad --weights: {exc}") from None
    else:
        if not 0.0 <= ns.t <= fam.t_max + 1e-12:
            raise UsageError(f"--t {ns.t} outside [0, {fam.t_max}]")
        w = fam.at(min(ns.t, fam.t_max))
    kkt = kkt_verify(p, basis, w, tol=ns.tol)
    try:
        grid = grid_search(p, basis, ns.step, on_cap="raise")
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    value = approx.value
    member_distance = trace_distance(density_matrix(p), mixture(w))
    bound = lipschitz_bound(basis, grid.step)
    bracket = value <= grid.value + 1e-9 and grid.value <= value + bound
    attains = abs(member_distance - value) <= 1e-9
    passed = kkt.passed and bracket and attains
    args = {**_state_args(ns), "basis": basis.value, "t": ns.t, "weights": ns.weights, "step": ns.step, "tol": ns.tol}
    payload = {
        "passed": passed,
        "value": _num(value),
        "weights": {"indices": list(basis.indices), "p": _list(w.p)},
        "member_distance": _num(member_distance),
        "kkt": {
            "passed": kkt.passed,
            "lambda": kkt.lam,
            "lambda_i": list(kkt.lam_i),
            "stationarity_residual": kkt.stationarity_residual,
            "complementarity_residual": kkt.complementarity_residual,
            "dual_residual": kkt.dual_residual,
            "feasible": kkt.feasible,
        },
        "grid_search": {
            "value": _num(grid.value),
            "step": _num(grid.step),
            "argmin": _list(grid.argmin.p),
            "lipschitz_bound": _num(bound),
            "brackets": bracket,
        },
    }
    return _record("verify", args, payload), EXIT_OK if passed else EXIT_FAIL


def cmd_scan_figures(ns) -> tuple[dict, int, str]:
    phi = math.radians(ns.phi) if (ns.deg and ns.phi is not None) else ns.phi
    phi = DEFAULT_PHI if phi is None else phi
    k = DEFAULT_K if ns.k is None else ns.k
    try:
        fig = scan_figure(ns.figure, ns.grid_a, ns.grid_k, ns.grid_phi, phi=phi, k=k)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    rows = [(fig.figure, *r) for r in fig.rows()]
    args = {"figure": ns.figure, "phi": phi, "k": k, "grid_a": ns.grid_a, "grid_k": ns.grid_k, "grid_phi": ns.grid_phi}
    payload = {
        "figure": fig.figure,
        "columns": list(CSV_HEADERS["scan-figures"][1:]),
        "rows": [[_num(v) for v in r[1:]] for r in rows],
    }
    return _record("scan-figures", args, payload), EXIT_OK, _csv_text(CSV_HEADERS["scan-figures"], rows)


def cmd_regions_table(ns, threads: int) -> tuple[dict, int, str]:
    try:
        grid = ScanGrid(ns.grid_a, ns.grid_k, ns.grid_phi)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    table = scan_ranges(grid, threads=threads)
    definitions = []
    for region in range(1, 9):
        xz, yz, xy = PREDICATES_OF[region]
        definitions.append({"region": region, "predicates": [1 if xz else 2, 3 if yz else 4, 5 if xy else 6]})
    rows = [(r.region, r.d_sum_min, r.d_sum_max, r.d_sq_min, r.d_sq_max, r.samples) for r in table.rows]
    args = {"grid_a": ns.grid_a, "grid_k": ns.grid_k, "grid_phi": ns.grid_phi, "cloud_stride": ns.cloud_stride}
    payload = {
        "definitions": definitions,
        "columns": list(CSV_HEADERS["regions-table"]),
        "ranges": [[_num(v) for v in r] for r in rows],
    }
    return _record("regions-table", args, payload), EXIT_OK, _csv_text(CSV_HEADERS["regions-table"], rows)


def _cloud_rows(grid: ScanGrid, stride: int):
    from .regions import region_index_array

    a_axis, k_axis, phi_axis = grid.axes()
    a, k, phi = np.meshgrid(a_axis[::stride], k_axis[::stride], phi_axis[::stride], indexing="ij")
    region = region_index_array(a, k, phi)
    for row in zip(a.ravel(), k.ravel(), phi.ravel(), region.ravel()):
        yield float(row[0]), float(row[1]), float(row[2]), int(row[3])


def cmd_compare_b3(ns) -> tuple[dict, int, str]:
    try:
        res = compare_scan(ns.k, ns.grid_a, ns.grid_phi, ns.tol)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    rows = list(res.records())
    args = {"k": ns.k, "grid_a": ns.grid_a, "grid_phi": ns.grid_phi, "tol": ns.tol}
    payload = {
        "equality_fraction": res.equality_fraction,
        "equality_tol": res.equality_tol,
        "max_gap": res.max_gap,
        "argmax": {"a": res.argmax[0], "phi": res.argmax[1]},
        "min_gap": float(res.gap.min()),
    }
    return _record("compare-b3", args, payload), EXIT_OK, _csv_text(CSV_HEADERS["compare-b3"], rows)


# -- parser -----------------------------------------------------------------

def _add_state(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a", type=float, required=True, help="population parameter in [0, 1]")
    p.add_argument("--k", type=float, required=True, help="coherence parameter in [0, 1]")
    p.add_argument("--phi", type=float, required=True, help="phase (radians unless --deg)")
    p.add_argument("--deg", action="store_true", help="read --phi in degrees")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pauli-approx",
        description="Optimal convex approximation of qubit states by Pauli eigenstates.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--threads", type=int, default=None, help="worker threads for scans (env QCA_THREADS)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", help="distance and optimal decompositions for one state")
    _add_state(p)
    p.add_argument("--basis", required=True, choices=[b.value for b in BasisId])
    p.add_argument("--out", type=Path)

    p = sub.add_parser("verify", help="check a family member with KKT and a lattice search")
    _add_state(p)
    p.add_argument("--basis", required=True, choices=[b.value for b in BasisId])
    p.add_argument("--t", type=float, default=0.0, help="family parameter")
    p.add_argument("--weights", help="explicit comma-separated weights (overrides --t)")
    p.add_argument("--step", type=float, default=0.01, help="lattice spacing for the grid search")
    p.add_argument("--tol", type=float, default=1e-9, help="KKT tolerance")
    p.add_argument("--out", type=Path)

    p = sub.add_parser("scan-figures", help="gridded surfaces for the distance figures")
    p.add_argument("figure", choices=FIGURE_IDS)
    p.add_argument("--phi", type=float, default=None, help="fixed phi for 'a' panels (default pi/4)")
    p.add_argument("--deg", action="store_true")
    p.add_argument("--k", type=float, default=None, help="fixed k for 'b' panels (default 4/5)")
    p.add_argument("--grid-a", type=int, default=200)
    p.add_argument("--grid-k", type=int, default=200)
    p.add_argument("--grid-phi", type=int, default=200)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("regions-table", help="region definitions and tradeoff ranges")
    p.add_argument("--grid-a", type=int, default=101)
    p.add_argument("--grid-k", type=int, default=201)
    p.add_argument("--grid-phi", type=int, default=201)
    p.add_argument("--cloud-stride", type=int, default=5, help="subsampling of the region point cloud")
    p.add_argument("--out", type=Path)

    p = sub.add_parser("compare-b3", help="min B2 distance against the B3 distance at fixed k")
    p.add_argument("--k", type=float, default=0.8)
    p.add_argument("--grid-a", type=int, default=200)
    p.add_argument("--grid-phi", type=int, default=200)
    p.add_argument("--tol", type=float, default=1e-6, help="equality tolerance")
    p.add_argument("--out", type=Path)
    return parser


def _threads(ns) -> int:
    if ns.threads is not None:
        return max(1, ns.threads)
    env = os.environ.get("QCA_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"QCA_THREADS={env!r} is not an integer") from None
    return 1


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        threads = _threads(ns)
        csv_text = None
        if ns.command == "distance":
            record, code = cmd_distance(ns)
        elif ns.command == "verify":
            record, code = cmd_verify(ns)
        elif ns.command == "scan-figures":
            record, code, csv_text = cmd_scan_figures(ns)
        elif ns.command == "regions-table":
            if ns.cloud_stride < 1:
                raise UsageError("--cloud-stride must be positive")
            record, code, csv_text = cmd_regions_table(ns, threads)
        else:
            record, code, csv_text = cmd_compare_b3(ns)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP

    text = _dumps(record)
    out = getattr(ns, "out", None)
    if out is None:
        sys.stdout.write(text)
        return code
    if csv_text is None:
        _write(out, text)
    else:
        _write(out, csv_text)
        _write(out.with_suffix(".json"), text)
        if ns.command == "regions-table":
            grid = ScanGrid(ns.grid_a, ns.grid_k, ns.grid_phi)
            cloud = _csv_text(CSV_HEADERS["regions-cloud"], _cloud_rows(grid, ns.cloud_stride))
            _write(out.with_name(out.stem + "_cloud.csv"), cloud)
    return code


if __name__ == "__main__":
    sys.exit(main())
