import pytest

from shg_entangler.model import CavityParams

_ACCEPTANCE = {}


@pytest.fixture(scope="session")
def fig2():
    """Cavity of the Fig.2 caption: gamma = 0.02, gamma_b = 0.015, gamma0 = 0.002."""
    return CavityParams(gamma_b=0.015, gamma_c=0.005, gamma0=0.002, chi=1.0)


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        _ACCEPTANCE[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in sorted(_ACCEPTANCE.items()):
        terminalreporter.write_line(f"{status}  {name}")
