from __future__ import annotations

import numpy as np
import pytest
from hypothesis import strategies as st

from glab.corpus import bundled_action, bundled_groupoid, bundled_groupoids
from glab.groupoid import group_groupoid, pair_groupoid

BUNDLED = bundled_groupoids()


@pytest.fixture(params=list(BUNDLED), ids=list(BUNDLED))
def bundled(request):
    return BUNDLED[request.param]


@pytest.fixture
def r2():
    return pair_groupoid(["p", "q"])


@pytest.fixture
def z2():
    return group_groupoid(["e", "a"], [[0, 1], [1, 0]])


@pytest.fixture
def z2z3():
    return bundled_groupoid("Z2+Z3")


@pytest.fixture
def swap_action():
    return bundled_action("Z2-swap")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


seeds = st.integers(min_value=0, max_value=2**32 - 1)
groupoid_names = st.sampled_from(sorted(BUNDLED))


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
