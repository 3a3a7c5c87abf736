import json

import numpy as np
import pytest

from shapedtqft import data as bundled_data
from shapedtqft.complexes import from_json_dict
from shapedtqft.params import ModularParameter
from shapedtqft.quadrature import QuadratureConfig

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def mp1():
    return ModularParameter(1.0)


@pytest.fixture(scope="session")
def cfg9():
    return QuadratureConfig(abs_tol=1e-9, rel_tol=1e-9)


@pytest.fixture(scope="session")
def cfg11():
    return QuadratureConfig(abs_tol=1e-11, rel_tol=1e-11)


def load_bundled(name):
    return from_json_dict(json.loads(bundled_data.read_text(name)))


@pytest.fixture(scope="session")
def trefoil():
    return load_bundled("trefoil.json")


@pytest.fixture(scope="session")
def fig8():
    return load_bundled("fig8.json")


@pytest.fixture(scope="session")
def fig8_complement():
    return load_bundled("fig8_complement.json")


def random_bipyramid_angles(rng):
    """Random shape on the standalone bipyramid with a balanced central edge."""
    c = np.full(3, 2 * np.pi / 3) + rng.uniform(-0.25, 0.25, 3)
    c[2] = 2 * np.pi - c[0] - c[1]
    ang = np.zeros((3, 3))
    for t, qc, cv in ((0, 1, c[0]), (1, 2, c[1]), (2, 1, c[2])):
        rest = np.pi - cv
        split = rng.uniform(0.35, 0.65)
        ang[t][qc] = cv
        ang[t][(qc + 1) % 3] = rest * split
        ang[t][(qc + 2) % 3] = rest * (1 - split)
    return ang
