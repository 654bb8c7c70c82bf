import math

import numpy as np
import pytest

from pauli_approx.qubit import BasisId, QubitParams

B2 = [BasisId.B2_XZ, BasisId.B2_YZ, BasisId.B2_XY]

# The worked example [[1/2, 1/5], [1/5, 1/2]].
EXAMPLE = QubitParams(0.5, 0.4, 0.0)
# A pure state with Bloch vector (0.8, 0, 0.6).
PURE = QubitParams(0.2, 1.0, 0.0)


def random_canonical(rng, n):
    a = rng.uniform(0, 0.5, n)
    k = rng.uniform(0, 1, n)
    phi = rng.uniform(0, math.pi / 2, n)
    return [QubitParams(*v) for v in zip(a, k, phi)]


def random_params(rng, n):
    a = rng.uniform(0, 1, n)
    k = rng.uniform(0, 1, n)
    phi = rng.uniform(0, 2 * math.pi, n)
    return [QubitParams(*v) for v in zip(a, k, phi)]


@pytest.fixture
def rng():
    return np.random.default_rng(20190518)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
