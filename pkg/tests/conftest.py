import random

import pytest

from discgrad.hamiltonian import (make_crossterm, make_harmonic, make_pendulum)


@pytest.fixture
def pendulum():
    return make_pendulum()


@pytest.fixture
def harmonic():
    return make_harmonic()


@pytest.fixture
def crossterm():
    return make_crossterm(0.5)


@pytest.fixture
def rng():
    return random.Random(20240817)
