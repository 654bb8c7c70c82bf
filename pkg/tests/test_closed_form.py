import math

import numpy as np
import pytest

from pauli_approx.closed_form import (
    Case,
    DecompositionFamily,
    Weights,
    _raw_value,
    _sigma_value,
    b2_distance,
    b2_distance_array,
    case_branch,
    mixture,
    mixture_bloch,
    optimal_approximation,
    optimal_family,
)
from pauli_approx.oracle import hull_distance
from pauli_approx.qubit import (
    BasisId,
    DomainError,
    QubitParams,
    UnsupportedBasisError,
    bloch_from_params,
    canonicalize,
    density_matrix,
    trace_distance,
)

from conftest import B2, EXAMPLE, PURE, random_canonical, random_params

XZ, YZ, XY = B2


def test_case_branch_examples():
    br = case_branch(EXAMPLE, XZ)
    assert br.case is Case.I and br.margin == pytest.approx(0.3, abs=1e-15)
    br = case_branch(PURE, XZ)
    assert br.case is Case.II and br.margin == pytest.approx(-0.2, abs=1e-15)
    for b in B2:
        assert case_branch(QubitParams(0, 0.9, 1.0), b).case is Case.I
    assert case_branch(QubitParams(0, 0.9, 1.0), XY).margin == 0.5


def test_case_branch_rejects_bad_input():
    with pytest.raises(DomainError):
        case_branch(QubitParams(0.7, 0.5, 0.1), XZ)
    with pytest.raises(DomainError):
        case_branch(QubitParams(0.3, 0.5, 2.0), XZ)
    with pytest.raises(UnsupportedBasisError):
        case_branch(EXAMPLE, BasisId.B3)


def test_worked_example_distances_and_families():
    res = b2_distance(EXAMPLE, XZ)
    assert res.value == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(res.family.base.p, [0.3, 0.3, 0.4, 0.0], atol=1e-12)
    assert res.family.t_max == pytest.approx(0.3, abs=1e-12)
    res = b2_distance(EXAMPLE, XY)
    assert res.value == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(res.family.at(0).p, [0.7, 0.3, 0.0, 0.0], atol=1e-12)
    # B2_YZ is in case I with distance <sx>
    assert b2_distance(EXAMPLE, YZ).value == pytest.approx(0.4, abs=1e-12)


def test_pure_state_distances():
    # hand evaluation: sqrt(0 + (0.8 + 0.6 - 1)^2 / 2) = sqrt(0.08)
    assert b2_distance(PURE, XZ).value == pytest.approx(math.sqrt(0.08), abs=1e-12)
    assert b2_distance(PURE, XY).value == pytest.approx(0.6, abs=1e-12)
    assert b2_distance(PURE, YZ).value == pytest.approx(0.8, abs=1e-12)
    fam = optimal_family(PURE, XZ)
    assert fam.is_singleton
    np.testing.assert_allclose(fam.base.p, [0.4, 0.0, 0.6, 0.0], atol=1e-12)


def test_mixture_examples():
    assert tuple(mixture_bloch(Weights(XZ, [0.25] * 4))) == pytest.approx((0, 0, 0))
    assert tuple(mixture_bloch(Weights(XZ, [0.3, 0.3, 0.4, 0]))) == pytest.approx((0.4, 0, 0), abs=1e-15)
    np.testing.assert_allclose(mixture(Weights(XZ, [1, 0, 0, 0])), [[1, 0], [0, 0]])
    np.testing.assert_allclose(mixture(Weights(XY, [0.25] * 4)), np.eye(2) / 2, atol=1e-15)


def test_weights_validation():
    with pytest.raises(DomainError):
        Weights(XZ, [0.5, 0.5, 0.1, -0.1])
    with pytest.raises(DomainError):
        Weights(XZ, [0.5, 0.5, 0.1])
    with pytest.raises(DomainError):
        Weights(XZ, [0.5, 0.5, 0.1, 0.1])
    w = Weights(XZ, [0.5, 0.5, 1e-13, -1e-13])
    assert (w.p >= 0).all()


def test_family_rejects_t_outside_range():
    fam = optimal_family(EXAMPLE, XZ)
    with pytest.raises(DomainError):
        fam.at(0.31)


@pytest.mark.parametrize("basis", B2)
def test_sigma_form_equals_raw_form(rng, basis):
    for p in random_canonical(rng, 10_000):
        case = case_branch(p, basis).case
        r = bloch_from_params(p)
        assert _raw_value(p, basis, case) == pytest.approx(_sigma_value(r, basis, case), abs=1e-12)


@pytest.mark.parametrize("basis", B2)
def test_family_members_attain_the_distance(rng, basis):
    for p in random_canonical(rng, 500):
        res = b2_distance(p, basis)
        rho = density_matrix(p)
        fam = res.family
        for t in (0.0, fam.t_max / 2, fam.t_max):
            w = fam.at(t)
            assert (w.p >= 0).all() and w.p.sum() == pytest.approx(1, abs=1e-12)
            assert trace_distance(rho, mixture(w)) == pytest.approx(res.value, abs=1e-12)
        if res.branch.case is Case.II:
            assert fam.t_max == 0.0


@pytest.mark.parametrize("basis", B2)
def test_branch_continuity(rng, basis):
    # states exactly on the case boundary: solve margin = 0 for k
    for a, phi in zip(rng.uniform(0.01, 0.5, 300), rng.uniform(0.01, math.pi / 2 - 0.01, 300)):
        s = math.sqrt(a * (1 - a))
        if basis is XZ:
            k = a / (s * math.cos(phi))
        elif basis is YZ:
            k = a / (s * math.sin(phi))
        else:
            k = 0.5 / (s * (math.sin(phi) + math.cos(phi)))
        if k > 1:
            continue
        p = QubitParams(a, k, phi)
        one = _sigma_value(bloch_from_params(p), basis, Case.I)
        two = _sigma_value(bloch_from_params(p), basis, Case.II)
        assert one == pytest.approx(two, abs=1e-9)
        # the case I family degenerates to the case II singleton
        fam = optimal_family(p, basis)
        assert fam.t_max == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("basis", B2)
def test_monotone_in_k(basis):
    ks = np.linspace(0, 1, 201)
    for a in np.linspace(0, 0.5, 26):
        for phi in np.linspace(0, math.pi / 2, 26):
            d = [b2_distance(QubitParams(a, k, phi), basis).value for k in ks]
            assert (np.diff(d) >= -1e-12).all()


@pytest.mark.parametrize("basis", B2)
def test_zero_iff_inside_polytope(rng, basis):
    for p in random_canonical(rng, 2000):
        d = b2_distance(p, basis).value
        inside = hull_distance(bloch_from_params(p), basis)[0] <= 1e-12
        assert (d <= 1e-12) == inside


@pytest.mark.parametrize("basis", B2)
def test_vectorized_matches_scalar(rng, basis):
    ps = random_canonical(rng, 1000)
    a, k, phi = (np.array(v) for v in zip(*[(p.a, p.k, p.phi) for p in ps]))
    vec = b2_distance_array(a, k, phi, basis)
    scal = [b2_distance(p, basis).value for p in ps]
    np.testing.assert_allclose(vec, scal, atol=1e-12, rtol=0)


@pytest.mark.parametrize("basis", B2)
def test_optimal_approximation_for_any_state(rng, basis):
    for p in random_params(rng, 300):
        approx = optimal_approximation(p, basis)
        rho = density_matrix(p)
        for t in (0.0, approx.family.t_max):
            w = approx.family.at(t)
            assert trace_distance(rho, mixture(w)) == pytest.approx(approx.value, abs=1e-12)


def test_family_stores_direction():
    fam = optimal_family(EXAMPLE, XZ)
    assert isinstance(fam, DecompositionFamily)
    np.testing.assert_array_equal(fam.direction, [-1, -1, 1, 1])
    np.testing.assert_allclose(fam.at(0.3).p, [0.0, 0.0, 0.7, 0.3], atol=1e-12)
