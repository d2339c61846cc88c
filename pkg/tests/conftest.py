import math

import numpy as np
import pytest

from qinterference import ModeLabel


def scalar_modes(n, k=(0.0, 0.0, 1.0), phases=None, mass=0.0):
    phases = [0.0] * n if phases is None else phases
    return [ModeLabel(f"m{i}", "scalar-boson", k, mass, p) for i, p in enumerate(phases)]


def photon_modes(n, k=(0.0, 0.0, 1.0), phases=None, index=1):
    phases = [0.0] * n if phases is None else phases
    return [ModeLabel(f"p{i}", "vector-boson", k, 0.0, p, index) for i, p in enumerate(phases)]


def fermion_modes(n, k=(0.0, 0.0, 1.0), phases=None, spin=0.5):
    phases = [0.0] * n if phases is None else phases
    return [ModeLabel(f"f{i}", "spinor-fermion", k, 0.0, p, spin) for i, p in enumerate(phases)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


TWO_PI = 2 * math.pi


# one PASS/FAIL line per acceptance criterion, printed after the run
_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or rep.when != "call" and rep.passed:
        return
    num, title = marker.args
    detail = dict(item.user_properties).get("detail", "")
    status = "PASS" if rep.passed else "FAIL"
    if rep.when == "call" or not rep.passed:
        _CRITERIA[num] = (title, status, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, status, detail = _CRITERIA[num]
        line = f"{status} criterion {num:>2}: {title}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
