import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bsvhhg import ARGON, DriverPulse


@pytest.fixture(scope="session")
def pulse():
    """Standard 13 fs, 800 nm sin^2 drive used throughout."""
    return DriverPulse(wavelength_nm=800.0, duration_fs=13.0)


@pytest.fixture(scope="session")
def argon():
    return ARGON
