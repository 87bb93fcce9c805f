"""System parameters, fading model, and per-slot SINR formulas.

Power gains follow a gamma law: shape is the integer fading figure m, mean
is alpha, so m = 1 is Rayleigh fading of the underlying amplitude.  Sums of
independent gains stay gamma with the shape scaled by the count, which the
analytics and the simulator both rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from modehop.specfun import log_gamma

__all__ = [
    "SystemParams",
    "FadingDraw",
    "power_gain_pdf",
    "power_sum_pdf",
    "sample_power_gain",
    "sensing_sinr",
    "transmission_sinr",
]


@dataclass(frozen=True)
class SystemParams:
    """Static configuration of the hopping system and its radio environment.

    Defaults reproduce the reference evaluation setup: 2 frequencies times
    8 vortex modes, 4 secondary users, 2 attackers, Rayleigh fading, 0.1 W
    per attacker, unit primary and secondary transmit power, 10 MHz band.
    """

    n_frequencies: int = 2
    n_modes: int = 8
    n_sus: int = 4
    n_attackers: int = 2
    fading_shape: int = 1
    fading_mean: float = 1.0
    noise_power: float = 1.0
    attacker_power: float = 0.1
    pu_power: float = 1.0
    su_power: float = 1.0
    bandwidth: float = 1e7
    sensing_threshold: float = 0.1
    outage_threshold: float = 0.3
    pu_on_to_off: float = 0.1
    pu_off_to_on: float = 0.1

    def __post_init__(self) -> None:
        for name in ("n_frequencies", "n_modes"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be an integer >= 1, got {v!r}")
        for name in ("n_sus", "n_attackers"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ValueError(f"{name} must be an integer >= 0, got {v!r}")
        if not isinstance(self.fading_shape, int) or self.fading_shape < 1:
            # closed forms expand finite sums over the shape, so it must be
            # a positive integer
            raise ValueError(
                f"fading_shape must be an integer >= 1, got {self.fading_shape!r}"
            )
        for name in (
            "fading_mean",
            "noise_power",
            "pu_power",
            "su_power",
            "bandwidth",
            "sensing_threshold",
            "outage_threshold",
        ):
            v = getattr(self, name)
            if not (v > 0.0) or not math.isfinite(v):
                raise ValueError(f"{name} must be finite and > 0, got {v!r}")
        # zero attacker power is the jamming-free baseline, so only reject
        # negatives here
        if self.attacker_power < 0.0 or not math.isfinite(self.attacker_power):
            raise ValueError(
                f"attacker_power must be finite and >= 0, got {self.attacker_power!r}"
            )
        for name in ("pu_on_to_off", "pu_off_to_on"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {v!r}")

    @property
    def n_channels(self) -> int:
        """Number of logical hop channels (frequencies times modes)."""
        return self.n_frequencies * self.n_modes

    @property
    def mean_channel_sinr(self) -> float:
        """Mean SU receive SINR with no attacker collision, alpha Pc / sigma^2."""
        return self.fading_mean * self.su_power / self.noise_power


@dataclass(frozen=True)
class FadingDraw:
    """One slot's power gains: colliding attackers, the PU link, the SU link."""

    attacker_powers: tuple[float, ...]
    pu_power_gain: float
    su_power_gain: float

    def __post_init__(self) -> None:
        gains = (*self.attacker_powers, self.pu_power_gain, self.su_power_gain)
        if any(g < 0.0 or not math.isfinite(g) for g in gains):
            raise ValueError("power gains must be finite and >= 0")


def power_gain_pdf(x: float, m: int, alpha: float) -> float:
    """Density of a single squared channel gain, gamma with shape m and mean alpha."""
    _check_fading(m, alpha)
    if x < 0.0:
        return 0.0
    if x == 0.0:
        return 1.0 / alpha if m == 1 else 0.0
    rate = m / alpha
    return math.exp(
        m * math.log(rate) + (m - 1) * math.log(x) - rate * x - log_gamma(m)
    )


def power_sum_pdf(h: float, count: int, m: int, alpha: float) -> float:
    """Density of the sum of `count` independent gains: gamma, shape m*count, mean count*alpha."""
    _check_fading(m, alpha)
    if not isinstance(count, int) or count < 1:
        raise ValueError(f"count must be an integer >= 1, got {count!r}")
    if h < 0.0:
        return 0.0
    shape = m * count
    if h == 0.0:
        return m / alpha if shape == 1 else 0.0
    rate = m / alpha
    return math.exp(
        shape * math.log(rate) + (shape - 1) * math.log(h) - rate * h - log_gamma(shape)
    )


def sample_power_gain(rng: np.random.Generator, m: int, alpha: float) -> float:
    """Draw one squared gain from the fading law (exact, no approximation)."""
    _check_fading(m, alpha)
    return float(rng.gamma(m, alpha / m))


def sensing_sinr(draw: FadingDraw, pu_present: bool, params: SystemParams) -> float:
    """Energy-detector test statistic for one sensing slot.

    Attacker power plus, when the PU signal lands in the sensed channel, the
    PU's contribution, all over the noise floor.
    """
    interference = params.attacker_power * sum(draw.attacker_powers)
    if pu_present:
        interference += params.pu_power * draw.pu_power_gain
    return interference / params.noise_power


def transmission_sinr(draw: FadingDraw, params: SystemParams) -> float:
    """SU receive SINR for one transmission slot: signal over jamming plus noise."""
    jam = params.attacker_power * sum(draw.attacker_powers)
    return params.su_power * draw.su_power_gain / (jam + params.noise_power)


def _check_fading(m: int, alpha: float) -> None:
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"fading shape must be an integer >= 1, got {m!r}")
    if not (alpha > 0.0) or not math.isfinite(alpha):
        raise ValueError(f"fading mean must be finite and > 0, got {alpha!r}")
