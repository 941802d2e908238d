import numpy as np
import pytest

from cohpower.sampling import haar_unitary

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def hadamard():
    return HADAMARD.copy()


def random_unitaries(d, n, seed):
    rng = np.random.default_rng(seed)
    return [haar_unitary(d, rng) for _ in range(n)]


# -- acceptance summary ---------------------------------------------------------

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    crit = dict(report.user_properties).get("criterion")
    if crit is not None:
        _ACCEPTANCE[crit] = (report.passed, dict(report.user_properties).get("title", ""), report.duration)


def pytest_runtest_setup(item):
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        item.user_properties.append(("criterion", marker.args[0]))
        item.user_properties.append(("title", marker.args[1]))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_ACCEPTANCE):
        ok, title, secs = _ACCEPTANCE[crit]
        terminalreporter.write_line(f"criterion {crit:>2}: {'PASS' if ok else 'FAIL'}  {title} ({secs:.2f} s)")
