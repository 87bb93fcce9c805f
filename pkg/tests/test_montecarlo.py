"""Simulator consistency: hop statistics, rate estimates, determinism.

Rate comparisons use the simulator's own reported half widths (3 binomial
standard errors), so a failure means a real disagreement, not noise.
"""

import math
from dataclasses import replace

import numpy as np
import pytest

from modehop.analytics import avg_false_alarm, collision_pmf, outage_numeric
from modehop.channel import SystemParams
from modehop.montecarlo import (
    generate_hop,
    run_full_protocol,
    run_sensing_trials,
    run_transmission_trials,
    trace_slots,
)

DEFAULTS = SystemParams()

NO_PU_MIXTURE = 0.04598493014643029
AVG_FALSE_ALARM = 0.15425698797593322
# busy probability on the plane-wave branch per collision count, shape 1
LOUD_BRANCH = {
    0: 0.90483741803595957,
    1: 0.96449941546535038,
    2: 0.98991503025673546,
}
SUCCESS_PU_ALWAYS_ON = 0.62426281065687922
SUCCESS_PU_NEVER_ON = 0.70418096330527058
OUTAGE_BY_COUNT = {
    0: 0.25918177931828213,
    1: 0.28075900904687586,
    2: 0.30170777577366588,
}
# bandwidth-normalized capacity with no interference: E[log2(1+g); g > 0.3]
TRUNCATED_RATE = 0.81159978821162152


def always_on(params: SystemParams) -> SystemParams:
    return replace(params, pu_on_to_off=0.0, pu_off_to_on=1.0)


def forced_collisions(count: int, m: int = 1) -> SystemParams:
    return replace(
        DEFAULTS, n_frequencies=1, n_modes=1, n_attackers=count, fading_shape=m
    )


def test_generate_hop_uniformity():
    rng = np.random.default_rng(11)
    n = 200_000
    counts = np.zeros((2, 8), dtype=int)
    for _ in range(n):
        hop = generate_hop(rng, 2, 8)
        assert 0 <= hop.frequency < 2
        assert 0 <= hop.mode < 8
        counts[hop.frequency, hop.mode] += 1
    p = 1.0 / 16.0
    band = 4.0 * math.sqrt(p * (1.0 - p) / n)
    assert np.all(np.abs(counts / n - p) < band)


def test_sensing_no_attackers_no_pu_is_exactly_zero():
    quiet = replace(DEFAULTS, n_attackers=0)
    summary = run_sensing_trials(quiet, 50_000, 3, pu_present=False)
    assert summary.false_alarm == 0.0


def test_sensing_rates_match_analytics():
    no_pu = run_sensing_trials(DEFAULTS, 1_000_000, 5, pu_present=False)
    assert abs(no_pu.false_alarm - NO_PU_MIXTURE) <= no_pu.half_widths["false_alarm"]
    # pu_present forces the plane-wave branch, so the counterpart is the
    # collision-weighted loud-branch rate, not the hop-averaged mixture
    with_pu = run_sensing_trials(DEFAULTS, 1_000_000, 6, pu_present=True)
    loud = math.fsum(collision_pmf(k, DEFAULTS) * LOUD_BRANCH[k] for k in range(3))
    assert abs(with_pu.false_alarm - loud) <= with_pu.half_widths["false_alarm"]
    for k in range(3):
        expected = collision_pmf(k, DEFAULTS)
        assert abs(with_pu.collision_pmf[k] - expected) <= with_pu.half_widths[f"pmf_{k}"]


def test_sensing_pmf_estimates_tighten():
    worst = {}
    for trials in (10_000, 100_000, 1_000_000):
        summary = run_sensing_trials(DEFAULTS, trials, 8, pu_present=False)
        errs = [
            abs(summary.collision_pmf[k] - collision_pmf(k, DEFAULTS)) for k in range(3)
        ]
        for k in range(3):
            assert errs[k] <= summary.half_widths[f"pmf_{k}"] + 3.0 / trials
        worst[trials] = max(errs)
    assert worst[1_000_000] < 2e-3


def test_transmission_outage_matches_mixture():
    summary = run_transmission_trials(DEFAULTS, 1_000_000, 9)
    expected = math.fsum(
        collision_pmf(k, DEFAULTS) * OUTAGE_BY_COUNT[k] for k in range(3)
    )
    assert abs(summary.outage - expected) <= summary.half_widths["outage"]


@pytest.mark.parametrize("count", [0, 1, 2])
def test_transmission_outage_forced_collision_counts(count):
    summary = run_transmission_trials(forced_collisions(count), 1_000_000, 10 + count)
    assert set(summary.outage_by_kd) == {count}
    assert (
        abs(summary.outage_by_kd[count] - OUTAGE_BY_COUNT[count])
        <= summary.half_widths[f"outage_kd_{count}"]
    )


def test_transmission_outage_jam_free_ignores_attackers():
    quiet = replace(DEFAULTS, attacker_power=0.0)
    for count, seed in ((0, 21), (5, 22)):
        summary = run_transmission_trials(
            replace(quiet, n_attackers=count), 400_000, seed
        )
        assert (
            abs(summary.outage - OUTAGE_BY_COUNT[0]) <= summary.half_widths["outage"]
        )


def test_transmission_capacity_without_interference():
    summary = run_transmission_trials(forced_collisions(0), 1_000_000, 12)
    expected = DEFAULTS.bandwidth * TRUNCATED_RATE
    assert abs(summary.capacity_bps - expected) <= summary.half_widths["capacity_bps"]


def test_protocol_success_with_pu_held_on():
    summary = run_full_protocol(
        always_on(DEFAULTS), 1_000_000, 14, initial_pu_on=True
    )
    assert abs(summary.success - SUCCESS_PU_ALWAYS_ON) <= summary.half_widths["success"]
    assert abs(summary.false_alarm - AVG_FALSE_ALARM) <= summary.half_widths["false_alarm"]


def test_protocol_success_with_pu_never_on():
    silent = replace(DEFAULTS, pu_off_to_on=0.0)
    summary = run_full_protocol(silent, 1_000_000, 15, initial_pu_on=False)
    assert abs(summary.success - SUCCESS_PU_NEVER_ON) <= summary.half_widths["success"]
    assert abs(summary.false_alarm - NO_PU_MIXTURE) <= summary.half_widths["false_alarm"]


def test_protocol_single_mode_tiny_threshold_never_transmits():
    choked = replace(
        always_on(DEFAULTS), n_frequencies=1, n_modes=1, sensing_threshold=1e-12
    )
    summary = run_full_protocol(choked, 50_000, 16, initial_pu_on=True)
    assert summary.false_alarm == 1.0
    assert summary.success == 0.0


def test_protocol_matched_seed_mode_count_ordering():
    lone = replace(always_on(DEFAULTS), n_modes=1)
    summary_1 = run_full_protocol(lone, 300_000, 17, initial_pu_on=True)
    summary_8 = run_full_protocol(always_on(DEFAULTS), 300_000, 17, initial_pu_on=True)
    assert summary_8.success - summary_1.success > 0.3


def test_protocol_occupancy_tracks_stationary_split():
    params = replace(DEFAULTS, pu_on_to_off=0.2, pu_off_to_on=0.2)
    traces = trace_slots(params, 5_000, 18)
    on_rate = sum(sum(t.pu_state.occupied) for t in traces) / (
        len(traces) * params.n_frequencies
    )
    assert abs(on_rate - 0.5) < 0.07


def test_trace_invariants_and_summary_agreement():
    params = DEFAULTS
    traces = trace_slots(params, 20_000, 19)
    summary = run_full_protocol(params, 20_000, 19)
    for t in traces:
        assert 0 <= t.su_hop.frequency < params.n_frequencies
        assert 0 <= t.su_hop.mode < params.n_modes
        assert 0 <= t.sensing_collisions <= params.n_attackers
        if t.sensed_busy:
            assert not t.transmitted
        if t.success:
            assert t.transmitted and not t.outage
        if t.pu_sensed:
            assert t.pu_state.occupied[t.su_hop.frequency]
            assert t.su_hop.mode == 0
        if t.transmitted:
            assert t.sinr >= 0.0
            assert 0 <= t.transmission_collisions <= params.n_attackers
    busy = sum(t.sensed_busy for t in traces) / len(traces)
    success = sum(t.success for t in traces) / len(traces)
    assert busy == summary.false_alarm
    assert success == summary.success


def test_protocol_determinism_and_worker_invariance():
    base = run_full_protocol(DEFAULTS, 200_000, 20)
    again = run_full_protocol(DEFAULTS, 200_000, 20)
    assert base == again
    parallel = run_full_protocol(DEFAULTS, 200_000, 20, workers=4)
    assert base == parallel


def test_sensing_and_transmission_worker_invariance():
    sense_1 = run_sensing_trials(DEFAULTS, 300_000, 23, pu_present=True)
    sense_4 = run_sensing_trials(DEFAULTS, 300_000, 23, pu_present=True, workers=4)
    assert sense_1 == sense_4
    tx_1 = run_transmission_trials(DEFAULTS, 300_000, 24)
    tx_4 = run_transmission_trials(DEFAULTS, 300_000, 24, workers=4)
    assert tx_1 == tx_4


def test_seed_changes_move_the_estimates():
    a = run_transmission_trials(DEFAULTS, 100_000, 30)
    b = run_transmission_trials(DEFAULTS, 100_000, 31)
    assert a.outage != b.outage
