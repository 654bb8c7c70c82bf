import math

import numpy as np
import pytest

from pauli_approx.b3 import b3_distance, b3_distance_array, compare_scan
from pauli_approx.oracle import grid_search_many, lipschitz_bound
from pauli_approx.qubit import BasisId, DomainError, QubitParams, bloch_from_params
from pauli_approx.regions import tradeoff

from conftest import PURE, random_canonical, random_params


def test_b3_examples():
    assert b3_distance(QubitParams(0.5, 0, 1.0)) == 0
    assert b3_distance(PURE) == pytest.approx(math.sqrt(0.08), abs=1e-12)
    p = QubitParams(0.25, 0.8, math.pi / 4)
    # by hand: l1 excess split over three axes, distance sqrt(3) * excess / 3
    r = bloch_from_params(p)
    excess = abs(r.x) + abs(r.y) + abs(r.z) - 1
    assert b3_distance(p) == pytest.approx(excess / math.sqrt(3), abs=1e-12)
    assert tradeoff(p).d_min - b3_distance(p) == pytest.approx(0.213, abs=1e-3)


def test_b3_against_six_weight_lattice(rng):
    ps = random_params(rng, 1000)
    values, _, step = grid_search_many(ps, BasisId.B3, 1 / 60)
    bound = lipschitz_bound(BasisId.B3, step)
    for p, g in zip(ps, values):
        d = b3_distance(p)
        assert d <= g + 1e-9
        assert g <= d + bound


def test_b3_zero_inside_octahedron(rng):
    for p in random_params(rng, 2000):
        r = bloch_from_params(p)
        if abs(r.x) + abs(r.y) + abs(r.z) <= 1:
            assert b3_distance(p) == 0.0


def test_dominance(rng):
    for p in random_canonical(rng, 2000):
        assert b3_distance(p) <= tradeoff(p).d_min + 1e-9


def test_vectorized_b3_matches_scalar(rng):
    ps = random_params(rng, 300)
    a, k, phi = (np.array(v) for v in zip(*[(p.a, p.k, p.phi) for p in ps]))
    np.testing.assert_allclose(b3_distance_array(a, k, phi), [b3_distance(p) for p in ps], atol=1e-14)


def test_compare_scan_on_axis_states():
    res = compare_scan(0.0, 50, 40)
    assert res.equality_fraction == 1.0
    assert res.max_gap == 0.0


def test_compare_scan_records():
    res = compare_scan(0.8, 5, 4)
    rows = list(res.records())
    assert len(rows) == 20
    a, phi, m, d, g = rows[7]
    assert g == pytest.approx(m - d)
    assert m == pytest.approx(tradeoff(QubitParams(a, 0.8, phi)).d_min, abs=1e-12)


def test_compare_scan_rejects_bad_input():
    with pytest.raises(DomainError):
        compare_scan(1.5)
    with pytest.raises(DomainError):
        compare_scan(0.5, 0, 10)
