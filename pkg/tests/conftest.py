"""Pytest configuration and shared fixtures"""
import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from escs.dynamics import VehicleParams  # noqa: E402
from escs.scenario import ScenarioConfig  # noqa: E402


@pytest.fixture
def default_config():
    """Configuration with every key at its default"""
    return ScenarioConfig()


@pytest.fixture
def worked_example_params():
    """Two-occupant vehicle of the braking worked example (1407 kg)"""
    return VehicleParams(mass=1407.0)


@pytest.fixture
def rng():
    """Fixed-seed generator for property suites"""
    return np.random.default_rng(20240229)


@pytest.fixture
def write_config(tmp_path):
    """Write configuration text to a temporary file and return its path"""
    def _write(text: str, name: str = 'scenario.conf') -> Path:
        path = tmp_path / name
        path.write_text(text)
        return path
    return _write
