import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import upbw  # noqa: E402
from upbw import epsilon, posmap, states, upb, witness  # noqa: E402
from upbw.kernels import BACKENDS  # noqa: E402

GENTILES_N = (4, 5, 6, 7)

# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def pyramid():
    return upb.build_pyramid()


@pytest.fixture(scope="session")
def gentiles():
    return {n: upb.build_gentiles3n(n) for n in GENTILES_N}


@pytest.fixture(scope="session")
def pyramid_bounds(pyramid):
    return epsilon.epsilon_bounds(pyramid, restarts=64, iters=500, rng_seed=0)


@pytest.fixture(scope="session")
def gentiles_bounds(gentiles):
    return {n: epsilon.epsilon_bounds(s, restarts=32, iters=500, rng_seed=0) for n, s in gentiles.items()}


@pytest.fixture(scope="session")
def pyramid_state(pyramid):
    return states.bound_entangled_state(pyramid)


@pytest.fixture(scope="session")
def pyramid_witness(pyramid, pyramid_bounds, pyramid_state):
    return witness.build_witness(pyramid, bounds=pyramid_bounds, state=pyramid_state)


@pytest.fixture(scope="session")
def pyramid_map(pyramid_witness):
    return posmap.map_from_witness(pyramid_witness)


@pytest.fixture(params=sorted(BACKENDS))
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


__all__ = ["upbw"]
