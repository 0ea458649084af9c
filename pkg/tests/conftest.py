import numpy as np
import pytest

from spinconn import coordinate_frame, make_builtin_spacetime, orthonormal_tetrad


def sample(model, n, seed, shrink=0.05):
    """Seeded points in the model box, pulled in from its edges."""
    box = np.asarray(model.box, dtype=float)
    lo = box[:, 0] + shrink * (box[:, 1] - box[:, 0])
    hi = box[:, 1] - shrink * (box[:, 1] - box[:, 0])
    return lo + (hi - lo) * np.random.default_rng(seed).random((n, 4))


@pytest.fixture(scope="session")
def schw():
    return make_builtin_spacetime("schwarzschild", {"r_s": 1.0})


@pytest.fixture(scope="session")
def poly():
    return make_builtin_spacetime("diag_poly")


@pytest.fixture(scope="session")
def flat():
    return make_builtin_spacetime("minkowski")


@pytest.fixture(scope="session")
def schw_tetrad(schw):
    return orthonormal_tetrad(schw)


@pytest.fixture(scope="session")
def schw_coord(schw):
    return coordinate_frame(schw)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
