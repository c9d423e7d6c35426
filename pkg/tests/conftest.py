import numpy as np
import pytest

from betafrechet import BFParams

# (a, b) grid and the scale/shape values used by the property tests
AB_GRID = (0.5, 1.0, 1.5, 2.0, 2.5, 5.0)
SIGMAS = (0.5, 1.0, 2.0)
LAMS = (1.0, 2.0, 5.0)


# one summary line per acceptance criterion, printed after the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[key])


def grid_thetas(sigmas=SIGMAS, lams=LAMS, ab=AB_GRID):
    return [BFParams(a, b, s, l) for a in ab for b in ab for s in sigmas for l in lams]


@pytest.fixture
def theta_ref():
    return BFParams(1.5, 2.5, 1.0, 5.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def reproduction_report():
    """One reproduction run shared by every test that inspects it."""
    from betafrechet.reproduce import run_reproduction
    return run_reproduction(seed=0)


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="also run the long simulation tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="long simulation; run with --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)
