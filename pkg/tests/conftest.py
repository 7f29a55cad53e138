from pathlib import Path

import pytest

from spdcwg.dispersion import load_dispersion_file, parse_dispersion_file
from spdcwg.phasematching import WaveguideSpec

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

CONSTANT_TEXT = """\
source = constant test
mode = P
kind = constant
value = 2.0
range_um = 0.3 1.5
mode = D
kind = constant
value = 1.8
range_um = 0.3 1.5
"""

# filled by tests/test_acceptance.py, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def configs_dir():
    return CONFIGS


@pytest.fixture(scope="session")
def synthetic():
    return load_dispersion_file(CONFIGS / "synthetic_waveguide.disp")


@pytest.fixture(scope="session")
def synthetic_wg(synthetic):
    return WaveguideSpec(length=1.3e-3, qpm_period=3.9375e-6, dispersion=synthetic)


@pytest.fixture(scope="session")
def constant():
    return parse_dispersion_file(CONSTANT_TEXT)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
