"""Exit criteria.  Each test records one PASS/FAIL line, printed in the
terminal summary."""

import csv
import math
import time

import numpy as np
import pytest

from pauli_approx.b3 import compare_scan
from pauli_approx.cli import main
from pauli_approx.closed_form import Case, b2_distance, case_branch, optimal_family
from pauli_approx.figures import FIGURE_BASIS, FIGURE_IDS
from pauli_approx.oracle import (
    grid_search_many,
    hull_distance,
    hull_projection,
    kkt_verify,
    lipschitz_bound,
    preimage_family,
)
from pauli_approx.qubit import (
    BasisId,
    QubitParams,
    bloch_distance,
    bloch_from_params,
    canonicalize,
    density_matrix,
    trace_distance,
)
from pauli_approx.regions import ScanGrid, scan_ranges, tradeoff, uncertainty_check

from conftest import ACCEPTANCE_LINES, B2, EXAMPLE, random_canonical, random_params


def record(n, ok, detail):
    ACCEPTANCE_LINES.append(f"[{n}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


def test_1_worked_example():
    reps = 200
    t0 = time.perf_counter()
    for _ in range(reps):
        xz = b2_distance(EXAMPLE, BasisId.B2_XZ)
        xy = b2_distance(EXAMPLE, BasisId.B2_XY)
    per_call = (time.perf_counter() - t0) / reps
    errs = [
        abs(xz.value),
        np.abs(xz.family.base.p - [0.3, 0.3, 0.4, 0.0]).max(),
        abs(xz.family.t_max - 0.3),
        abs(xy.value),
        np.abs(xy.family.at(0).p - [0.7, 0.3, 0.0, 0.0]).max(),
    ]
    ok = max(errs) <= 1e-12 and per_call < 1e-3
    record(1, ok, f"worked example max error {max(errs):.2e} (tol 1e-12), {per_call * 1e3:.3f} ms for both bases (limit 1 ms)")


def test_2_oracle_equivalence():
    axes = np.linspace(0, 0.5, 50), np.linspace(0, 1, 50), np.linspace(0, math.pi / 2, 50)
    params = [QubitParams(a, k, phi) for a in axes[0] for k in axes[1] for phi in axes[2]]
    bloch = np.array([bloch_from_params(p) for p in params])
    step = 0.002
    worst_proj, worst_low, worst_high, bound = 0.0, 0.0, -np.inf, 0.0
    for basis in B2:
        closed = np.array([b2_distance(p, basis).value for p in params])
        proj = hull_distance(bloch, basis)
        worst_proj = max(worst_proj, np.abs(closed - proj).max())
        # 21,084,251 compositions at step 0.002 for four weights
        grid, _, used = grid_search_many(params, basis, step, cap=25_000_000, on_cap="raise")
        assert used == step
        bound = lipschitz_bound(basis, step)
        worst_low = max(worst_low, (closed - grid).max())
        worst_high = max(worst_high, (grid - closed).max())
    ok = worst_proj <= 1e-9 and worst_low <= 1e-9 and worst_high <= bound
    record(
        2, ok,
        f"50^3 grid x 3 bases: max |closed - projection| {worst_proj:.2e} (tol 1e-9); "
        f"grid search step {step}: closed - grid <= {worst_low:.2e}, grid - closed <= {worst_high:.4f} (bound {bound:.4f})",
    )


def test_3_kkt_suite(rng):
    failures, checked, worst = 0, 0, 0.0
    for basis in B2:
        for p in random_canonical(rng, 1000):
            fam = optimal_family(p, basis)
            for t in (0.0, fam.t_max / 2, fam.t_max):
                rep = kkt_verify(p, basis, fam.at(t), tol=1e-9)
                worst = max(worst, rep.stationarity_residual, rep.complementarity_residual, rep.dual_residual)
                failures += not rep.passed
                checked += 1
    record(3, failures == 0, f"KKT at tol 1e-9: {checked - failures}/{checked} family members pass, worst residual {worst:.2e}")


def _case1_sample(rng, basis, n):
    out = []
    while len(out) < n:
        for p in random_canonical(rng, n):
            if case_branch(p, basis).case is Case.I and len(out) < n:
                out.append(p)
    return out


def test_4_family_completeness(rng):
    worst = 0.0
    for basis in B2:
        for p in _case1_sample(rng, basis, 1000):
            fam = optimal_family(p, basis)
            hull = hull_projection(bloch_from_params(p), basis)[0]
            pre = preimage_family(hull, basis)
            worst = max(
                worst,
                np.abs(pre.base.p - fam.base.p).max(),
                np.abs(pre.direction - fam.direction).max(),
                abs(pre.t_max - fam.t_max),
            )
    record(4, worst <= 1e-9, f"preimage vs closed-form family on 3x1000 case I states: max deviation {worst:.2e} (tol 1e-9)")


REFERENCE_TABLE = {
    1: ((0.0, 1.742), (0.0, 1.0)),
    2: ((1.006, 1.750), (0.666, 1.068)),
    3: ((1.0, 1.742), (0.501, 1.086)),
    4: ((1.0, 1.742), (0.501, 1.086)),
    5: ((1.0, 1.742), (0.501, 1.086)),
    6: ((1.0, 1.742), (0.666, 1.068)),
    7: ((1.0, 1.742), (0.666, 1.068)),
    8: ((1.5, 1.765), (0.750, 1.060)),
}


def test_5_tradeoff_table():
    table = scan_ranges(ScanGrid(n_a=101, n_k=201, n_phi=201))
    misses = []
    for region, ((s_lo, s_hi), (q_lo, q_hi)) in REFERENCE_TABLE.items():
        row = table.row(region)
        observed = (row.d_sum_min, row.d_sum_max, row.d_sq_min, row.d_sq_max)
        for name, got, want in zip(("d_sum min", "d_sum max", "d_sq min", "d_sq max"), observed, (s_lo, s_hi, q_lo, q_hi)):
            if not abs(got - want) <= 0.03:
                misses.append(f"region {region} {name} {got:.4f} vs {want}")
    detail = "all 32 endpoints within 0.03" if not misses else f"{32 - len(misses)}/32 endpoints within 0.03; off: " + "; ".join(misses)
    record(5, not misses, detail)


def test_6_b3_comparison():
    res = compare_scan(0.8, 200, 200, equality_tol=1e-6)
    a_star, phi_star = res.argmax
    da, dphi = res.a[1] - res.a[0], res.phi[1] - res.phi[0]
    near = abs(a_star - 0.25) <= da and abs(phi_star - math.pi / 4) <= dphi
    value_ok = abs(res.max_gap - 0.213) <= 0.01
    frac_ok = 0.15 <= res.equality_fraction <= 0.25
    dom_ok = res.gap.min() >= -1e-9
    record(
        6, value_ok and near and frac_ok and dom_ok,
        f"max gap {res.max_gap:.4f} (0.213 +- 0.01: {value_ok}) at (a, phi) = ({a_star:.5f}, {phi_star:.5f}), "
        f"{abs(a_star - 0.25) / da:.2f} / {abs(phi_star - math.pi / 4) / dphi:.2f} cells from (1/4, pi/4) (<= 1: {near}); "
        f"equality fraction {res.equality_fraction:.4f} ({frac_ok}); min gap {res.gap.min():.1e} ({dom_ok})",
    )


def test_7_property_suite(rng):
    states = random_params(rng, 100_000)
    unc_fail = sum(not (r.holds_half_bound and r.holds_tau_bound) for r in map(uncertainty_check, states))
    others = random_params(rng, 100_000)
    worst_td = max(
        abs(trace_distance(density_matrix(p), density_matrix(q)) - bloch_distance(bloch_from_params(p), bloch_from_params(q)))
        for p, q in zip(states, others)
    )
    worst_canon = 0.0
    for p in states[:10_000]:
        c, _ = canonicalize(p)
        r = bloch_from_params(p)
        for basis in B2:
            worst_canon = max(worst_canon, abs(hull_distance(r, basis)[0] - b2_distance(c, basis).value))
    ok = unc_fail == 0 and worst_td <= 1e-12 and worst_canon <= 1e-9
    record(
        7, ok,
        f"uncertainty bounds violated on {unc_fail}/100000 states; trace/Bloch identity max error {worst_td:.2e} (tol 1e-12); "
        f"canonicalization max distance change {worst_canon:.2e} over 10^4 states x 3 bases (tol 1e-9)",
    )


def test_8_figure_data(tmp_path):
    worst, rows_checked = 0.0, 0
    for fig in FIGURE_IDS:
        out = tmp_path / f"fig{fig}.csv"
        assert main(["scan-figures", fig, "--out", str(out)]) == 0
        with open(out, newline="") as f:
            reader = csv.DictReader(f)
            for row in reader:
                a, k, phi, v = (float(row[c]) for c in ("a", "k", "phi", "value"))
                rows_checked += 1
                if fig[0] == "4":
                    worst = max(worst, abs(v - tradeoff(QubitParams(a, k, phi)).d_min))
                elif fig[1] == "c":
                    basis = FIGURE_BASIS[fig[0]]
                    if math.isnan(v):
                        # no crossing for k in [0, 1]
                        assert case_branch(QubitParams(a, 1.0, phi), basis).margin > 0
                    else:
                        worst = max(worst, abs(case_branch(QubitParams(a, v, phi), basis).margin))
                else:
                    worst = max(worst, abs(v - b2_distance(QubitParams(a, k, phi), FIGURE_BASIS[fig[0]]).value))
    record(8, worst <= 1e-12, f"{rows_checked} emitted figure values vs scalar closed form: max deviation {worst:.2e} (tol 1e-12)")
