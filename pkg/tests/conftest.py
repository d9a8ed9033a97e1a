import math
import sys

import pytest

from pauliscatter.species import LITHIUM_6
from pauliscatter.thermo import TrapConfig
from pauliscatter.trap import ProbeBeam


@pytest.fixture(scope="session")
def li6():
    return LITHIUM_6


@pytest.fixture(scope="session")
def methods_trap():
    """34 kHz x 770 Hz trap holding 6e5 atoms."""
    return TrapConfig.from_hz(34e3, 770.0, 6e5)


@pytest.fixture(scope="session")
def fig2_beam():
    return ProbeBeam(waist=110e-6, power=2.35e-3, detuning=-2 * math.pi * 100e9,
                     pulse_duration=25e-3)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
