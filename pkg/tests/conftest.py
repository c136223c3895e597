import warnings

import numpy as np
import pytest

from crystal1d.potential import family

warnings.filterwarnings("ignore", message=".*TBB.*")

# the five potential families used throughout the acceptance checks
FAMILY_SPECS = {
    "abs": ("abs", {}),
    "quadratic": ("power", {"p": 2.0}),
    "piecewise_linear": ("piecewise_linear", {"left": 2.0, "right": 1.0}),
    "one_sided": ("one_sided", {}),
    "exp": ("exp", {}),
}

ALL_ADMISSIBLE = dict(FAMILY_SPECS, zero=("zero", {}), flat_valley=("flat_valley", {}),
                      cubic=("power", {"p": 3.0, "scale": 0.5}))


def make(name):
    fam, params = ALL_ADMISSIBLE[name]
    return family(fam, **params)


@pytest.fixture(params=sorted(FAMILY_SPECS))
def acceptance_potential(request):
    return request.param, make(request.param)


@pytest.fixture(params=sorted(ALL_ADMISSIBLE))
def admissible_potential(request):
    return request.param, make(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = []


@pytest.fixture
def record():
    def _record(criterion, ok, detail=""):
        line = f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
