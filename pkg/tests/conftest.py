import numpy as np
import pytest

from qfridge import ReservoirSet, SystemParams

# Fig.-2-style scenario: cold frequency 2*pi*210 GHz anchors the scale.
UNIT_SCALE = 2.0 * np.pi * 210e9
G_FIGURE = 9.0 / 17.0


@pytest.fixture
def params():
    return SystemParams(omega_c=1.0, omega_h=3.0, g=G_FIGURE, gamma=0.6)


@pytest.fixture
def mild_params():
    # away from cooling boundaries and with a modest rate: currents are
    # O(gamma), so relative identities hold to near machine precision
    return SystemParams(omega_c=1.0, omega_h=3.0, g=G_FIGURE, gamma=0.3)


@pytest.fixture
def mild_reservoirs(mild_params):
    return ReservoirSet.from_temperatures(mild_params, t_h=8.0, t_r=3.0, t_c=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def draw_params(rng, gamma_low=0.01, gamma_high=0.3) -> SystemParams:
    """Random valid model numbers with omega_c = 1 as the scale."""
    return SystemParams(
        omega_c=1.0,
        omega_h=rng.uniform(1.6, 4.0),
        g=rng.uniform(0.05, 0.95),
        gamma=rng.uniform(gamma_low, gamma_high),
    )


def draw_reservoirs(rng, params, ordered=True) -> ReservoirSet:
    t_c = rng.uniform(0.3, 1.5)
    t_r = t_c + rng.uniform(0.5, 3.0)
    t_h = t_r + rng.uniform(0.5, 6.0)
    if not ordered:
        temps = rng.permutation([t_c, t_r, t_h])
        t_h, t_r, t_c = temps
        if t_r <= t_c:  # keep the cooling threshold well defined
            t_r, t_c = t_c, t_r
    return ReservoirSet.from_temperatures(params, t_h=t_h, t_r=t_r, t_c=t_c)
