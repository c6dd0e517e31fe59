import pytest

from spectral_rigidity.spectrum import build_model


@pytest.fixture
def model3():
    return build_model(3, (0.0, 2.0))


@pytest.fixture
def model4():
    return build_model(4, (0.0, 2.0, 0.0))


# -- acceptance summary ------------------------------------------------------------

_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance[report.nodeid.split("::")[-1]] = "PASS" if report.passed else "FAIL"
    elif "test_acceptance.py" in report.nodeid and report.when == "setup" and report.failed:
        _acceptance[report.nodeid.split("::")[-1]] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        terminalreporter.write_line(f"{name}: {_acceptance[name]}")
