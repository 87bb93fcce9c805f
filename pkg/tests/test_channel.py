"""Fading densities, parameter validation, and SINR arithmetic."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gammainc

from modehop.channel import (
    FadingDraw,
    SystemParams,
    power_gain_pdf,
    power_sum_pdf,
    sample_power_gain,
    sensing_sinr,
    transmission_sinr,
)
from modehop.specfun import integrate_semi_infinite


def test_default_parameters():
    p = SystemParams()
    assert p.n_frequencies == 2
    assert p.n_modes == 8
    assert p.n_sus == 4
    assert p.n_attackers == 2
    assert p.fading_shape == 1
    assert p.fading_mean == 1.0
    assert p.noise_power == 1.0
    assert p.attacker_power == 0.1
    assert p.pu_power == 1.0
    assert p.su_power == 1.0
    assert p.bandwidth == 1e7
    assert p.sensing_threshold == 0.1
    assert p.outage_threshold == 0.3
    assert p.pu_on_to_off == 0.1
    assert p.pu_off_to_on == 0.1
    assert p.n_channels == 16
    assert p.mean_channel_sinr == 1.0


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n_frequencies": 0},
        {"n_modes": 0},
        {"n_sus": -1},
        {"n_attackers": -2},
        {"fading_shape": 0},
        {"fading_shape": 1.5},
        {"fading_mean": 0.0},
        {"noise_power": -1.0},
        {"attacker_power": -0.1},
        {"pu_power": 0.0},
        {"su_power": math.inf},
        {"bandwidth": 0.0},
        {"sensing_threshold": 0.0},
        {"outage_threshold": -0.3},
        {"pu_on_to_off": 1.5},
        {"pu_off_to_on": -0.2},
    ],
)
def test_parameter_validation(kwargs):
    with pytest.raises((ValueError, TypeError)):
        SystemParams(**kwargs)


def test_power_gain_pdf_values():
    assert power_gain_pdf(0.5, 1, 1.0) == pytest.approx(math.exp(-0.5), rel=1e-14)
    assert power_gain_pdf(0.0, 1, 1.0) == 1.0
    assert power_gain_pdf(0.0, 2, 1.0) == 0.0
    assert power_gain_pdf(-1.0, 1, 1.0) == 0.0
    # shape 2, unit mean: 4 x exp(-2x)
    assert power_gain_pdf(0.5, 2, 1.0) == pytest.approx(2.0 * math.exp(-1.0), rel=1e-13)


@pytest.mark.parametrize("m,alpha", [(1, 1.0), (2, 0.7), (4, 3.0)])
def test_power_gain_pdf_normalizes(m, alpha):
    mass = integrate_semi_infinite(lambda x: power_gain_pdf(x, m, alpha), 0.0)
    assert mass == pytest.approx(1.0, rel=1e-9)


def test_power_sum_pdf_values():
    # two unit-mean exponential gains: density x exp(-x)
    assert power_sum_pdf(1.0, 2, 1, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-13)
    assert power_sum_pdf(0.5, 1, 1, 1.0) == power_gain_pdf(0.5, 1, 1.0)
    with pytest.raises(ValueError):
        power_sum_pdf(1.0, 0, 1, 1.0)


@pytest.mark.parametrize("m,alpha", [(1, 1.0), (2, 1.5)])
def test_power_sum_pdf_matches_convolution(m, alpha):
    # the two-gain density must equal the numeric self-convolution of one gain
    grid = np.linspace(0.0, 12.0, 24001)
    single = np.array([power_gain_pdf(x, m, alpha) for x in grid])
    dx = grid[1] - grid[0]
    for target in (0.5, 1.0, 2.0):
        idx = int(round(target / dx))
        window = single[: idx + 1] * single[idx::-1]
        conv = np.trapezoid(window, dx=dx)
        assert conv == pytest.approx(power_sum_pdf(target, 2, m, alpha), abs=2e-4)


def test_sampler_moments_and_cdf():
    rng = np.random.default_rng(2024)
    m, alpha, n = 2, 1.5, 1_000_000
    draws = np.array([sample_power_gain(rng, m, alpha) for _ in range(2000)])
    assert draws.min() >= 0.0
    # vectorized equivalent of the scalar sampler for the big run
    big = rng.gamma(m, alpha / m, n)
    assert big.mean() == pytest.approx(alpha, abs=5 * alpha / math.sqrt(m * n))
    # empirical CDF against the Gamma CDF on a fixed grid
    grid = np.linspace(0.05, 6.0, 40)
    emp = np.searchsorted(np.sort(big), grid) / n
    ref = gammainc(m, m * grid / alpha)
    assert float(np.abs(emp - ref).max()) < 0.005


def test_fading_draw_validation():
    with pytest.raises(ValueError):
        FadingDraw(attacker_powers=(-0.1,), pu_power_gain=1.0, su_power_gain=1.0)
    with pytest.raises(ValueError):
        FadingDraw(attacker_powers=(), pu_power_gain=-1.0, su_power_gain=1.0)


def test_sinr_arithmetic():
    p = SystemParams()
    draw = FadingDraw(attacker_powers=(0.5, 0.3), pu_power_gain=1.0, su_power_gain=0.8)
    # sensing: (0.1 * 0.8 + 1.0) / 1.0 with the PU, 0.08 without
    assert sensing_sinr(draw, True, p) == pytest.approx(1.08, rel=1e-14)
    assert sensing_sinr(draw, False, p) == pytest.approx(0.08, rel=1e-14)
    # transmission: 1.0 * 0.8 / (0.1 * 0.8 + 1.0)
    assert transmission_sinr(draw, p) == pytest.approx(0.8 / 1.08, rel=1e-14)


@given(
    scale=st.floats(min_value=1e-3, max_value=1e3),
    atk=st.lists(st.floats(min_value=0.0, max_value=10.0), min_size=0, max_size=4),
    pu=st.floats(min_value=0.0, max_value=10.0),
    su=st.floats(min_value=0.0, max_value=10.0),
)
@settings(max_examples=100, deadline=None)
def test_sinr_power_scaling_invariance(scale, atk, pu, su):
    # multiplying every power and the noise floor by one factor changes nothing
    base = SystemParams()
    scaled = SystemParams(
        attacker_power=base.attacker_power * scale,
        pu_power=base.pu_power * scale,
        su_power=base.su_power * scale,
        noise_power=base.noise_power * scale,
    )
    draw = FadingDraw(attacker_powers=tuple(atk), pu_power_gain=pu, su_power_gain=su)
    for pu_present in (True, False):
        assert sensing_sinr(draw, pu_present, scaled) == pytest.approx(
            sensing_sinr(draw, pu_present, base), rel=1e-12
        )
    assert transmission_sinr(draw, scaled) == pytest.approx(
        transmission_sinr(draw, base), rel=1e-12
    )
