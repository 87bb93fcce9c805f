"""Seeded Monte Carlo simulation of the slotted hopping protocol.

The simulator draws hop choices and fading gains directly from the channel
model and counts events, sharing no derivation with the closed forms, so it
serves as the final arbiter when the analytic routes disagree.

Determinism contract: trials are split into fixed-size blocks, each block's
generator is derived from the run seed and the block index, and block
results are merged in index order.  Identical (params, trials, seed) give a
bit-identical summary no matter how many workers execute the blocks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from modehop.channel import SystemParams

__all__ = [
    "BLOCK_SIZE",
    "HopAssignment",
    "PuChannelState",
    "SlotTrace",
    "SimulationSummary",
    "generate_hop",
    "run_sensing_trials",
    "run_transmission_trials",
    "run_full_protocol",
    "trace_slots",
]

BLOCK_SIZE = 65536


@dataclass(frozen=True)
class HopAssignment:
    """One entity's hop for one phase: a frequency index and a mode index."""

    frequency: int
    mode: int

    def __post_init__(self) -> None:
        if self.frequency < 0 or self.mode < 0:
            raise ValueError("hop indices must be >= 0")


@dataclass(frozen=True)
class PuChannelState:
    """Per-frequency PU occupancy at one slot."""

    occupied: tuple[bool, ...]


@dataclass(frozen=True)
class SlotTrace:
    """Full record of one protocol slot, for small-scale inspection."""

    index: int
    su_hop: HopAssignment
    sensing_hops: tuple[HopAssignment, ...]
    sensing_collisions: int
    pu_state: PuChannelState
    pu_sensed: bool
    sensed_busy: bool
    transmitted: bool
    transmission_hops: tuple[HopAssignment, ...]
    transmission_collisions: int
    sinr: float
    outage: bool
    success: bool


@dataclass(frozen=True)
class SimulationSummary:
    """Event rates from one simulation run, with 3-sigma half-widths.

    Fields not produced by a given run type are None.  half_widths is keyed
    by estimate name ("false_alarm", "outage", "success", "capacity_bps",
    "pmf_<k>", "outage_kd_<k>"); probability half-widths are binomial
    3 sigma, the capacity half-width is 3 standard errors of the mean.
    """

    slots: int
    false_alarm: float | None
    collision_pmf: dict[int, float]
    outage: float | None
    outage_by_kd: dict[int, float]
    success: float | None
    capacity_bps: float | None
    half_widths: dict[str, float]


def generate_hop(
    rng: np.random.Generator, n_frequencies: int, n_modes: int
) -> HopAssignment:
    """Draw one uniform hop over the frequency-mode grid."""
    if n_frequencies < 1 or n_modes < 1:
        raise ValueError("hop grid needs at least one frequency and one mode")
    cell = int(rng.integers(0, n_frequencies * n_modes))
    return HopAssignment(cell // n_modes, cell % n_modes)


def _block_rng(seed: int, block: int, stream: int) -> np.random.Generator:
    # stable sub-seed: same (seed, block, stream) always yields the same
    # generator, independent of execution order
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block, stream)))


def _block_sizes(trials: int) -> list[int]:
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials!r}")
    full, rest = divmod(trials, BLOCK_SIZE)
    return [BLOCK_SIZE] * full + ([rest] if rest else [])


def _binom_hw(p: float, n: int) -> float:
    return 3.0 * math.sqrt(max(p * (1.0 - p), 0.0) / n)


def _map_blocks(fn, n_blocks: int, workers: int) -> list:
    if workers <= 1 or n_blocks <= 1:
        return [fn(b) for b in range(n_blocks)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n_blocks)))


def run_sensing_trials(
    params: SystemParams,
    trials: int,
    seed: int,
    *,
    pu_present: bool,
    zero_mode: bool = True,
    workers: int = 1,
) -> SimulationSummary:
    """Simulate independent sensing slots on a forced mode branch.

    Each slot the SU and every attacker hop uniformly; the detector reads
    attacker power from colliding attackers plus, when pu_present and the
    forced branch is the plane-wave (zero) mode, the PU's faded power.
    Returns the busy rate and the empirical collision PMF.
    """
    sizes = _block_sizes(trials)
    m = params.fading_shape
    scale = params.fading_mean / m
    with_pu = pu_present and zero_mode

    def one_block(b: int) -> tuple[int, np.ndarray]:
        rng = _block_rng(seed, b, 0)
        n = sizes[b]
        su = rng.integers(0, params.n_channels, n)
        atk = rng.integers(0, params.n_channels, (n, params.n_attackers))
        k_s = (atk == su[:, None]).sum(axis=1)
        jam = params.attacker_power * rng.gamma(m * k_s, scale)
        pu_gain = rng.gamma(m, scale, n)
        level = jam + (params.pu_power * pu_gain if with_pu else 0.0)
        busy = level / params.noise_power >= params.sensing_threshold
        return int(busy.sum()), np.bincount(k_s, minlength=params.n_attackers + 1)

    results = _map_blocks(one_block, len(sizes), workers)
    busy_total = sum(r[0] for r in results)
    counts = sum(r[1] for r in results)
    rate = busy_total / trials
    pmf = {k: float(counts[k]) / trials for k in range(params.n_attackers + 1)}
    hw = {"false_alarm": _binom_hw(rate, trials)}
    for k, p in pmf.items():
        hw[f"pmf_{k}"] = _binom_hw(p, trials)
    return SimulationSummary(
        slots=trials,
        false_alarm=rate,
        collision_pmf=pmf,
        outage=None,
        outage_by_kd={},
        success=None,
        capacity_bps=None,
        half_widths=hw,
    )


def run_transmission_trials(
    params: SystemParams,
    trials: int,
    seed: int,
    *,
    workers: int = 1,
) -> SimulationSummary:
    """Simulate independent transmission slots (every slot transmits).

    Returns unconditional and per-collision-count outage rates plus the
    per-SU empirical capacity: bandwidth times log2(1 + SINR) averaged over
    slots with the success indicator as weight.
    """
    sizes = _block_sizes(trials)
    m = params.fading_shape
    scale = params.fading_mean / m
    kmax = params.n_attackers

    def one_block(b: int):
        rng = _block_rng(seed, b, 0)
        n = sizes[b]
        su = rng.integers(0, params.n_channels, n)
        atk = rng.integers(0, params.n_channels, (n, kmax))
        k_d = (atk == su[:, None]).sum(axis=1)
        jam = params.attacker_power * rng.gamma(m * k_d, scale)
        gain = rng.gamma(m, scale, n)
        sinr = params.su_power * gain / (jam + params.noise_power)
        out = sinr <= params.outage_threshold
        cap = params.bandwidth * np.log2(1.0 + sinr) * ~out
        return (
            np.bincount(k_d, minlength=kmax + 1),
            np.bincount(k_d, weights=out, minlength=kmax + 1),
            float(cap.sum()),
            float((cap * cap).sum()),
        )

    results = _map_blocks(one_block, len(sizes), workers)
    counts = sum(r[0] for r in results)
    out_counts = sum(r[1] for r in results)
    cap_sum = math.fsum(r[2] for r in results)
    cap_sq = math.fsum(r[3] for r in results)
    out_rate = float(out_counts.sum()) / trials
    pmf = {k: float(counts[k]) / trials for k in range(kmax + 1)}
    by_kd = {
        k: float(out_counts[k]) / int(counts[k])
        for k in range(kmax + 1)
        if counts[k] > 0
    }
    cap_mean = cap_sum / trials
    cap_var = max(cap_sq / trials - cap_mean**2, 0.0)
    hw = {
        "outage": _binom_hw(out_rate, trials),
        "capacity_bps": 3.0 * math.sqrt(cap_var / trials),
    }
    for k, p in pmf.items():
        hw[f"pmf_{k}"] = _binom_hw(p, trials)
    for k, p in by_kd.items():
        hw[f"outage_kd_{k}"] = _binom_hw(p, int(counts[k]))
    return SimulationSummary(
        slots=trials,
        false_alarm=None,
        collision_pmf=pmf,
        outage=out_rate,
        outage_by_kd=by_kd,
        success=None,
        capacity_bps=cap_mean,
        half_widths=hw,
    )


def _occupancy_block(
    rng: np.random.Generator,
    n: int,
    n_freq: int,
    rho: float,
    varrho: float,
    state: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    # geometric sojourn lengths instead of per-slot coin flips; truncating a
    # sojourn at the block edge and redrawing next block is exact because
    # the geometric law is memoryless
    occ = np.empty((n, n_freq), dtype=bool)
    end = state.copy()
    for c in range(n_freq):
        s = bool(state[c])
        t = 0
        while t < n:
            leave = rho if s else varrho
            if leave <= 0.0:
                occ[t:, c] = s
                t = n
                continue
            run = int(rng.geometric(leave))
            if run > n - t:
                occ[t:, c] = s
                t = n
            else:
                occ[t : t + run, c] = s
                t += run
                s = not s
        end[c] = s
    return occ, end


def _initial_state(
    params: SystemParams, seed: int, initial_pu_on: bool | None
) -> np.ndarray:
    if initial_pu_on is not None:
        return np.full(params.n_frequencies, initial_pu_on, dtype=bool)
    total = params.pu_on_to_off + params.pu_off_to_on
    stationary = params.pu_off_to_on / total if total > 0.0 else 0.0
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0, 2)))
    return rng.random(params.n_frequencies) < stationary


def _protocol_block(
    params: SystemParams, n: int, rng: np.random.Generator, occ: np.ndarray
) -> dict[str, np.ndarray]:
    m = params.fading_shape
    scale = params.fading_mean / m
    nl = params.n_channels
    kmax = params.n_attackers
    su = rng.integers(0, nl, n)
    freq = su // params.n_modes
    mode = su % params.n_modes
    sense_hops = rng.integers(0, nl, (n, kmax))
    k_s = (sense_hops == su[:, None]).sum(axis=1)
    jam_s = params.attacker_power * rng.gamma(m * k_s, scale)
    pu_gain = rng.gamma(m, scale, n)
    pu_on = occ[np.arange(n), freq]
    pu_sensed = pu_on & (mode == 0)
    detector = (jam_s + np.where(pu_sensed, params.pu_power * pu_gain, 0.0)) / (
        params.noise_power
    )
    busy = detector >= params.sensing_threshold
    tx_hops = rng.integers(0, nl, (n, kmax))
    k_d = (tx_hops == su[:, None]).sum(axis=1)
    jam_d = params.attacker_power * rng.gamma(m * k_d, scale)
    gain = rng.gamma(m, scale, n)
    sinr = params.su_power * gain / (jam_d + params.noise_power)
    outage = sinr <= params.outage_threshold
    transmitted = ~busy
    success = transmitted & ~outage
    cap = (
        params.n_sus
        * params.bandwidth
        * np.log2(1.0 + sinr)
        * success
    )
    return {
        "su": su,
        "sense_hops": sense_hops,
        "k_s": k_s,
        "pu_on": pu_on,
        "pu_sensed": pu_sensed,
        "busy": busy,
        "tx_hops": tx_hops,
        "k_d": k_d,
        "sinr": sinr,
        "outage": outage,
        "transmitted": transmitted,
        "success": success,
        "cap": cap,
        "occ": occ,
    }


def run_full_protocol(
    params: SystemParams,
    slots: int,
    seed: int,
    *,
    initial_pu_on: bool | None = None,
    workers: int = 1,
) -> SimulationSummary:
    """Simulate the end-to-end slotted protocol.

    Per slot: PU occupancy evolves per frequency (on to off with
    pu_on_to_off, off to on with pu_off_to_on), the SU hops once, senses
    (seeing the PU only when its frequency is occupied and its mode is the
    plane-wave mode), defers if busy, otherwise transmits on the same hop
    while attackers re-hop independently for each phase.

    initial_pu_on=None draws the stationary occupancy; True or False force
    every frequency's starting state.

    The slot-average analytics assume a PU signal whenever the SU sits on
    the plane-wave mode; under Markov occupancy part of that mass is
    absent, so summaries deviate from the analytic mixture and the summary
    simply reports what the protocol did.  Capacity here is system-wide:
    n_sus * bandwidth * log2(1 + SINR) averaged with the success indicator.
    """
    sizes = _block_sizes(slots)
    state = _initial_state(params, seed, initial_pu_on)
    occs = []
    for b in range(len(sizes)):
        occ, state = _occupancy_block(
            _block_rng(seed, b, 0),
            sizes[b],
            params.n_frequencies,
            params.pu_on_to_off,
            params.pu_off_to_on,
            state,
        )
        occs.append(occ)

    kmax = params.n_attackers

    def one_block(b: int):
        r = _protocol_block(params, sizes[b], _block_rng(seed, b, 1), occs[b])
        tx = r["transmitted"]
        return (
            int(r["busy"].sum()),
            int(r["success"].sum()),
            float(r["cap"].sum()),
            float((r["cap"] * r["cap"]).sum()),
            np.bincount(r["k_d"], minlength=kmax + 1),
            np.bincount(r["k_d"][tx], minlength=kmax + 1),
            np.bincount(r["k_d"][tx], weights=r["outage"][tx], minlength=kmax + 1),
        )

    results = _map_blocks(one_block, len(sizes), workers)
    busy_total = sum(r[0] for r in results)
    success_total = sum(r[1] for r in results)
    cap_sum = math.fsum(r[2] for r in results)
    cap_sq = math.fsum(r[3] for r in results)
    counts = sum(r[4] for r in results)
    tx_counts = sum(r[5] for r in results)
    out_counts = sum(r[6] for r in results)
    busy_rate = busy_total / slots
    success_rate = success_total / slots
    tx_total = int(tx_counts.sum())
    out_rate = float(out_counts.sum()) / tx_total if tx_total else 0.0
    pmf = {k: float(counts[k]) / slots for k in range(kmax + 1)}
    by_kd = {
        k: float(out_counts[k]) / int(tx_counts[k])
        for k in range(kmax + 1)
        if tx_counts[k] > 0
    }
    cap_mean = cap_sum / slots
    cap_var = max(cap_sq / slots - cap_mean**2, 0.0)
    hw = {
        "false_alarm": _binom_hw(busy_rate, slots),
        "success": _binom_hw(success_rate, slots),
        "capacity_bps": 3.0 * math.sqrt(cap_var / slots),
        "outage": _binom_hw(out_rate, tx_total) if tx_total else 0.0,
    }
    for k, p in pmf.items():
        hw[f"pmf_{k}"] = _binom_hw(p, slots)
    for k, p in by_kd.items():
        hw[f"outage_kd_{k}"] = _binom_hw(p, int(tx_counts[k]))
    return SimulationSummary(
        slots=slots,
        false_alarm=busy_rate,
        collision_pmf=pmf,
        outage=out_rate,
        outage_by_kd=by_kd,
        success=success_rate,
        capacity_bps=cap_mean,
        half_widths=hw,
    )


def trace_slots(
    params: SystemParams,
    slots: int,
    seed: int,
    *,
    initial_pu_on: bool | None = None,
) -> list[SlotTrace]:
    """Replay the protocol and return one SlotTrace per slot.

    Runs the same block computation as run_full_protocol with the same seed
    derivation, so the traced slots are exactly the summarized ones.  Meant
    for small slot counts; every slot becomes a Python object.
    """
    sizes = _block_sizes(slots)
    state = _initial_state(params, seed, initial_pu_on)
    traces: list[SlotTrace] = []
    base = 0
    for b in range(len(sizes)):
        occ, state = _occupancy_block(
            _block_rng(seed, b, 0),
            sizes[b],
            params.n_frequencies,
            params.pu_on_to_off,
            params.pu_off_to_on,
            state,
        )
        r = _protocol_block(params, sizes[b], _block_rng(seed, b, 1), occ)
        for i in range(sizes[b]):
            su_cell = int(r["su"][i])
            traces.append(
                SlotTrace(
                    index=base + i,
                    su_hop=_to_hop(su_cell, params.n_modes),
                    sensing_hops=tuple(
                        _to_hop(int(c), params.n_modes) for c in r["sense_hops"][i]
                    ),
                    sensing_collisions=int(r["k_s"][i]),
                    pu_state=PuChannelState(tuple(bool(x) for x in occ[i])),
                    pu_sensed=bool(r["pu_sensed"][i]),
                    sensed_busy=bool(r["busy"][i]),
                    transmitted=bool(r["transmitted"][i]),
                    transmission_hops=tuple(
                        _to_hop(int(c), params.n_modes) for c in r["tx_hops"][i]
                    ),
                    transmission_collisions=int(r["k_d"][i]),
                    sinr=float(r["sinr"][i]),
                    outage=bool(r["outage"][i]),
                    success=bool(r["success"][i]),
                )
            )
        base += sizes[b]
    return traces


def _to_hop(cell: int, n_modes: int) -> HopAssignment:
    return HopAssignment(cell // n_modes, cell % n_modes)
