import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from kslope.predictor import DegenerationConfig

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# The three configurations every check in the acceptance suite is run against.
WORKED = {
    "reparametrization": ([[1], [0, 1], [0, 0, 1]], [1, 0, -1]),
    "collapse": ([[1], [0, 1], [0, 0, 1]], [2, -1, -1]),
    "infinity_zero": ([[1], [0, 0, 1], [0, 1]], [1, 1, -2]),
}
WORKED_SLOPES = {
    # name: (mabuchi, futaki)
    "reparametrization": (0.0, 0.0),
    "collapse": (1.5, -0.5),
    "infinity_zero": (3.0, -1.0),
}
SCHEDULE = [10.0 ** (-k / 2) for k in range(2, 7)]


def make(sections, weights, d=None):
    d = d if d is not None else len(sections) - 1
    return DegenerationConfig(d, sections, weights)


@pytest.fixture(params=sorted(WORKED))
def worked(request):
    secs, w = WORKED[request.param]
    return request.param, make(secs, w)


@pytest.fixture
def collapse():
    return make(*WORKED["collapse"])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
