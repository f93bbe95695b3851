import pytest

from raybench.fixtures import fixture_path
from raybench.scene import load_scene

# (number, title, passed, detail) rows filled in by test_acceptance.py
ACCEPTANCE = []


@pytest.fixture
def simple_scene():
    return load_scene(fixture_path("simple.scene"))


@pytest.fixture
def complex_scene():
    return load_scene(fixture_path("complex.scene"))


@pytest.fixture
def orbit_scene():
    return load_scene(fixture_path("orbit4.scene"))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:>2}. {title}: {detail}")
