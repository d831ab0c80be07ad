import os
import sys

import pytest

# Wurzelverzeichnis wie in main.py in den Suchpfad aufnehmen
ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from core.models import StepperConfig  # noqa: E402
from core.phase_space import ConventionalState, lift  # noqa: E402
from core.systems import build_system  # noqa: E402


@pytest.fixture
def kepler_system():
    return build_system("kepler")


@pytest.fixture
def timedep_system():
    return build_system("kepler-timedep")


@pytest.fixture
def eccentric_state(kepler_system):
    """q = (1, 0), p = (0, 1.2), e = -0.28"""
    return lift(ConventionalState(q=[1.0, 0.0], p=[0.0, 1.2], t=0.0), kepler_system.hamiltonian)


@pytest.fixture
def circular_state(kepler_system):
    """q = (1, 0), p = (0, 1), e = -0.5"""
    return lift(ConventionalState(q=[1.0, 0.0], p=[0.0, 1.0], t=0.0), kepler_system.hamiltonian)


@pytest.fixture
def rk4():
    return StepperConfig(step=1e-3)
