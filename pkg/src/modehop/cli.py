"""Scenario configs, sweep orchestration, CSV output, and the command line.

Commands:
  analyze   sweep the configured variable, analytic columns only
  simulate  same sweep plus Monte Carlo capacity from the full protocol
  validate  closed form vs quadrature oracle vs Monte Carlo on a small grid
  figure    reproduce one of the three reference figure families

Every command is a pure function of (config file, flags): identical inputs
produce byte-identical output.  Exit codes: 0 success, 1 usage or config
error, 2 quadrature convergence failure, 3 oracle vs Monte Carlo
disagreement (validate only).
"""

from __future__ import annotations

import argparse
import math
import sys
from contextlib import contextmanager
from dataclasses import dataclass, replace
from decimal import Decimal
from functools import lru_cache
from pathlib import Path

import numpy as np

from modehop.analytics import (
    avg_false_alarm,
    collision_pmf,
    ergodic_log_capacity,
    false_alarm_no_pu,
    false_alarm_report,
    false_alarm_with_pu_numeric,
    outage_closed,
    outage_numeric,
    outage_report,
)
from modehop.channel import SystemParams, power_sum_pdf
from modehop.montecarlo import (
    run_full_protocol,
    run_sensing_trials,
    run_transmission_trials,
)
from modehop.specfun import ConvergenceError, integrate_finite

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "SweepRow",
    "SweepResult",
    "ValidationCell",
    "parse_config",
    "emit_csv",
    "build_rows",
    "figure_curves",
    "validate_cells",
    "cmd_figure",
    "cmd_validate",
    "main",
]

CSV_HEADER = (
    "sweep_value,analytic_capacity_bps,mc_capacity_bps,"
    "mc_half_width_bps,false_alarm,outage,success_prob"
)

_SWEEP_VARIABLES = ("epsilon", "eta", "gamma-bar", "attackers", "modes")
_ORACLE_CHOICES = ("closed-form", "numeric", "both")


class ConfigError(ValueError):
    """Configuration or usage problem; maps to exit code 1."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Parsed scenario: system parameters plus sweep and run settings."""

    params: SystemParams
    sweep_variable: str = "gamma-bar"
    sweep_values: tuple[float, ...] = tuple(float(v) for v in range(31))
    seed: int = 42
    trials: int = 1_000_000
    oracle: str = "numeric"

    def __post_init__(self) -> None:
        if self.sweep_variable not in _SWEEP_VARIABLES:
            raise ConfigError(
                f"sweep must be one of {_SWEEP_VARIABLES}, got {self.sweep_variable!r}"
            )
        if self.oracle not in _ORACLE_CHOICES:
            raise ConfigError(
                f"oracle must be one of {_ORACLE_CHOICES}, got {self.oracle!r}"
            )
        if self.seed < 0:
            raise ConfigError(f"seed must be >= 0, got {self.seed}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not self.sweep_values:
            raise ConfigError("sweep_values must not be empty")
        if any(not math.isfinite(v) for v in self.sweep_values):
            raise ConfigError("sweep_values must be finite")
        if any(b <= a for a, b in zip(self.sweep_values, self.sweep_values[1:])):
            raise ConfigError("sweep_values must be strictly increasing")
        _check_sweep_domain(self.sweep_variable, self.sweep_values)


def _check_sweep_domain(variable: str, values: tuple[float, ...]) -> None:
    if variable in ("epsilon", "eta") and values[0] <= 0.0:
        raise ConfigError(f"{variable} sweep values must be > 0")
    if variable in ("attackers", "modes"):
        if any(not float(v).is_integer() for v in values):
            raise ConfigError(f"{variable} sweep values must be integers")
        low = 0 if variable == "attackers" else 1
        if values[0] < low:
            raise ConfigError(f"{variable} sweep values must be >= {low}")


# config keys: canonical name -> (SystemParams attribute, kind)
# kind: "int1" >= 1, "int0" >= 0, "pos" > 0, "nonneg" >= 0, "unit" in [0, 1]
_PARAM_FIELDS = {
    "frequencies": ("n_frequencies", "int1"),
    "modes": ("n_modes", "int1"),
    "sus": ("n_sus", "int0"),
    "attackers": ("n_attackers", "int0"),
    "fading_shape": ("fading_shape", "int1"),
    "fading_mean": ("fading_mean", "pos"),
    "noise_power": ("noise_power", "pos"),
    "attacker_power": ("attacker_power", "nonneg"),
    "pu_power": ("pu_power", "pos"),
    "su_power": ("su_power", "pos"),
    "bandwidth": ("bandwidth", "pos"),
    "epsilon": ("sensing_threshold", "pos"),
    "eta": ("outage_threshold", "pos"),
    "rho": ("pu_on_to_off", "unit"),
    "varrho": ("pu_off_to_on", "unit"),
}

_ALIASES = {
    "N": "frequencies",
    "L": "modes",
    "M": "sus",
    "K": "attackers",
    "m": "fading_shape",
    "alpha": "fading_mean",
    "sigma2": "noise_power",
    "P_J": "attacker_power",
    "P_p": "pu_power",
    "P_c": "su_power",
    "B": "bandwidth",
    "sensing_threshold": "epsilon",
    "outage_threshold": "eta",
    "pu_on_to_off": "rho",
    "pu_off_to_on": "varrho",
    "Q": "pus",
    "gamma_bar": "gamma-bar",
}


def _parse_number(raw: str, key: str, line: int) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"line {line}: {key} must be a number, got {raw!r}") from None


def _parse_int(raw: str, key: str, line: int, minimum: int) -> int:
    x = _parse_number(raw, key, line)
    if not float(x).is_integer():
        raise ConfigError(f"line {line}: {key} must be an integer, got {raw!r}")
    v = int(x)
    if v < minimum:
        raise ConfigError(f"line {line}: {key} must be >= {minimum}, got {v}")
    return v


def _parse_float(raw: str, key: str, line: int, kind: str) -> float:
    v = _parse_number(raw, key, line)
    if not math.isfinite(v):
        raise ConfigError(f"line {line}: {key} must be finite, got {raw!r}")
    if kind == "pos" and v <= 0.0:
        raise ConfigError(f"line {line}: {key} must be > 0, got {raw}")
    if kind == "nonneg" and v < 0.0:
        raise ConfigError(f"line {line}: {key} must be >= 0, got {raw}")
    if kind == "unit" and not (0.0 <= v <= 1.0):
        raise ConfigError(f"line {line}: {key} must lie in [0, 1], got {raw}")
    return v


def parse_config(text: str) -> ScenarioConfig:
    """Parse a flat `key = value` scenario file.

    `#` starts a comment, blank lines are skipped, unknown and duplicate
    keys are rejected with their line number.  Single-letter symbol aliases
    (N, L, M, K, m, B, P_J, P_p, P_c, sigma2, alpha, Q) are accepted next to
    the descriptive names.  The key `pus`/`Q` is accepted for documentation
    but the PU population size does not enter any formula.
    """
    params_kw: dict[str, object] = {}
    seen: dict[str, tuple[int, str]] = {}
    extras: dict[str, object] = {}
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        body = raw_line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {line_no}: expected 'key = value', got {body!r}")
        key, _, raw = body.partition("=")
        key = key.strip()
        raw = raw.strip()
        if not key or not raw:
            raise ConfigError(f"line {line_no}: expected 'key = value', got {body!r}")
        canonical = _ALIASES.get(key, key)
        if canonical not in _PARAM_FIELDS and canonical not in (
            "pus",
            "seed",
            "trials",
            "sweep",
            "sweep_values",
            "oracle",
        ):
            raise ConfigError(f"line {line_no}: unknown key {key!r}")
        if canonical in seen:
            first_line, first_key = seen[canonical]
            raise ConfigError(
                f"line {line_no}: {key!r} already set at line {first_line}"
                + (f" as {first_key!r}" if first_key != key else "")
            )
        seen[canonical] = (line_no, key)
        if canonical in _PARAM_FIELDS:
            attr, kind = _PARAM_FIELDS[canonical]
            if kind == "int1":
                params_kw[attr] = _parse_int(raw, key, line_no, 1)
            elif kind == "int0":
                params_kw[attr] = _parse_int(raw, key, line_no, 0)
            else:
                params_kw[attr] = _parse_float(raw, key, line_no, kind)
        elif canonical == "pus":
            _parse_int(raw, key, line_no, 0)  # accepted, documented, unused
        elif canonical == "seed":
            extras["seed"] = _parse_int(raw, key, line_no, 0)
        elif canonical == "trials":
            extras["trials"] = _parse_int(raw, key, line_no, 1)
        elif canonical == "sweep":
            value = _ALIASES.get(raw, raw)
            if value not in _SWEEP_VARIABLES:
                raise ConfigError(
                    f"line {line_no}: sweep must be one of {_SWEEP_VARIABLES}, "
                    f"got {raw!r}"
                )
            extras["sweep_variable"] = value
        elif canonical == "sweep_values":
            tokens = [t.strip() for t in raw.split(",")]
            if any(not t for t in tokens):
                raise ConfigError(f"line {line_no}: empty entry in sweep_values")
            extras["sweep_values"] = tuple(
                _parse_number(t, "sweep_values", line_no) for t in tokens
            )
        elif canonical == "oracle":
            value = "closed-form" if raw == "closed" else raw
            if value not in _ORACLE_CHOICES:
                raise ConfigError(
                    f"line {line_no}: oracle must be one of {_ORACLE_CHOICES}, "
                    f"got {raw!r}"
                )
            extras["oracle"] = value
    try:
        params = SystemParams(**params_kw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return ScenarioConfig(params=params, **extras)


@dataclass(frozen=True)
class SweepRow:
    """One sweep point: analytic columns plus optional Monte Carlo capacity."""

    sweep_value: float
    analytic_capacity_bps: float
    mc_capacity_bps: float | None
    mc_half_width_bps: float | None
    false_alarm: float
    outage: float
    success_prob: float


@dataclass(frozen=True)
class SweepResult:
    """Ordered sweep rows for one curve."""

    label: str
    rows: tuple[SweepRow, ...]

    def __post_init__(self) -> None:
        values = [r.sweep_value for r in self.rows]
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("sweep rows must be strictly increasing in sweep_value")
        for r in self.rows:
            for p in (r.false_alarm, r.outage, r.success_prob):
                if not (0.0 <= p <= 1.0):
                    raise ValueError(f"probability column outside [0, 1]: {p!r}")


# sensing probabilities do not depend on the SU transmit side, and outage
# does not depend on the hop grid or PU power; normalizing the irrelevant
# fields lets sweeps share cached values across rows
def _sense_key(params: SystemParams) -> SystemParams:
    return replace(
        params,
        n_sus=1,
        su_power=1.0,
        bandwidth=1.0,
        outage_threshold=1.0,
        pu_on_to_off=0.0,
        pu_off_to_on=0.0,
    )


def _outage_key(params: SystemParams) -> SystemParams:
    return replace(
        params,
        n_frequencies=1,
        n_modes=1,
        n_sus=1,
        bandwidth=1.0,
        pu_power=1.0,
        sensing_threshold=1.0,
        pu_on_to_off=0.0,
        pu_off_to_on=0.0,
    )


@lru_cache(maxsize=None)
def _cached_false_alarm(key_params: SystemParams, mode: str) -> float:
    return avg_false_alarm(key_params.sensing_threshold, key_params, mode)


@lru_cache(maxsize=None)
def _cached_outage(key_params: SystemParams, k_d: int, mode: str) -> float:
    if mode == "numeric":
        return outage_numeric(key_params.outage_threshold, k_d, key_params)
    return outage_closed(key_params.outage_threshold, k_d, key_params)


@lru_cache(maxsize=None)
def _cached_rate(mean_sinr: float, m: int) -> float:
    return ergodic_log_capacity(mean_sinr, m)


def _row_params(params: SystemParams, variable: str, value: float) -> SystemParams:
    if variable == "epsilon":
        return replace(params, sensing_threshold=value)
    if variable == "eta":
        return replace(params, outage_threshold=value)
    if variable == "gamma-bar":
        # the x axis is mean channel SINR in dB; realize it by scaling the
        # SU transmit power so analytics and simulation move together
        linear = 10.0 ** (value / 10.0)
        return replace(
            params,
            su_power=linear * params.noise_power / params.fading_mean,
        )
    if variable == "attackers":
        return replace(params, n_attackers=int(value))
    return replace(params, n_modes=int(value))


def build_rows(
    params: SystemParams,
    variable: str,
    values: tuple[float, ...],
    oracle: str,
    mc_runner=None,
) -> tuple[SweepRow, ...]:
    """Evaluate the analytic columns (and optionally Monte Carlo) per sweep value."""
    if oracle == "both":
        raise ConfigError(
            "oracle 'both' applies to the validate command; "
            "pick closed-form or numeric for sweeps"
        )
    rows = []
    for index, value in enumerate(values):
        p_row = _row_params(params, variable, value)
        idle = 1.0 - _cached_false_alarm(_sense_key(p_row), oracle)
        out_key = _outage_key(p_row)
        decoded = 0.0
        dropped = 0.0
        for k_d in range(p_row.n_attackers + 1):
            weight = collision_pmf(k_d, p_row)
            if weight == 0.0:
                continue
            drop = _cached_outage(out_key, k_d, oracle)
            decoded += weight * (1.0 - drop)
            dropped += weight * drop
        rate = _cached_rate(p_row.mean_channel_sinr, p_row.fading_shape)
        capacity = p_row.n_sus * p_row.bandwidth * idle * decoded * rate
        mc_cap = mc_hw = None
        if mc_runner is not None:
            mc_cap, mc_hw = mc_runner(p_row, index)
        rows.append(
            SweepRow(
                sweep_value=float(value),
                analytic_capacity_bps=capacity,
                mc_capacity_bps=mc_cap,
                mc_half_width_bps=mc_hw,
                false_alarm=_clamp(1.0 - idle),
                outage=_clamp(dropped),
                success_prob=_clamp(idle * decoded),
            )
        )
    return tuple(rows)


def _clamp(p: float) -> float:
    return min(1.0, max(0.0, p))


def _cell_seed(base: int, *key: int) -> int:
    return int(np.random.SeedSequence(base, spawn_key=key).generate_state(1)[0])


def _fmt(x) -> str:
    if x is None:
        return ""
    if x == 0:
        return "0"
    s = f"{x:.12g}"
    if "e" in s or "E" in s:
        s = format(Decimal(s), "f")
    return s


def emit_csv(result: SweepResult, stream) -> None:
    """Write one sweep as CSV: fixed header, 12 significant digits, LF endings."""
    stream.write(CSV_HEADER + "\n")
    for r in result.rows:
        cells = (
            r.sweep_value,
            r.analytic_capacity_bps,
            r.mc_capacity_bps,
            r.mc_half_width_bps,
            r.false_alarm,
            r.outage,
            r.success_prob,
        )
        stream.write(",".join(_fmt(c) for c in cells) + "\n")


def _always_on(params: SystemParams) -> SystemParams:
    return replace(params, pu_on_to_off=0.0, pu_off_to_on=1.0)


def _protocol_mc(cfg: ScenarioConfig, analytic_matched: bool, namespace: tuple[int, ...]):
    def runner(p_row: SystemParams, index: int):
        seed = _cell_seed(cfg.seed, *namespace, index)
        if analytic_matched:
            summary = run_full_protocol(
                _always_on(p_row), cfg.trials, seed, initial_pu_on=True
            )
        else:
            summary = run_full_protocol(p_row, cfg.trials, seed)
        return summary.capacity_bps, summary.half_widths["capacity_bps"]

    return runner


def cmd_analyze(cfg: ScenarioConfig, stream) -> int:
    rows = build_rows(cfg.params, cfg.sweep_variable, cfg.sweep_values, cfg.oracle)
    emit_csv(SweepResult(f"analyze {cfg.sweep_variable}", rows), stream)
    return 0


def cmd_simulate(cfg: ScenarioConfig, stream) -> int:
    rows = build_rows(
        cfg.params,
        cfg.sweep_variable,
        cfg.sweep_values,
        cfg.oracle,
        mc_runner=_protocol_mc(cfg, analytic_matched=False, namespace=(1,)),
    )
    emit_csv(SweepResult(f"simulate {cfg.sweep_variable}", rows), stream)
    return 0


_FIGURES = {
    # family: (sweep variable, curve label, curve values, pinned params, index)
    "fig2": (
        "epsilon",
        "eta",
        (0.2, 0.25, 0.3, 0.35),
        {"n_attackers": 2, "n_modes": 8},
        2,
    ),
    "fig3": (
        "gamma-bar",
        "attackers",
        (0, 2, 4, 8, 16),
        {"sensing_threshold": 0.1, "outage_threshold": 0.3, "n_modes": 2},
        3,
    ),
    "fig4": (
        "gamma-bar",
        "modes",
        (1, 2, 4, 8),
        {"n_attackers": 2, "sensing_threshold": 0.1, "outage_threshold": 0.3},
        4,
    ),
}

_FIG2_EPSILONS = tuple(round(0.02 * i, 10) for i in range(1, 31))


def figure_curves(
    family: str, cfg: ScenarioConfig, with_mc: bool = True
) -> list[tuple[str, SweepResult]]:
    """Build the named figure family, one (curve name, sweep) pair per curve.

    Family-defining parameters are pinned; everything else comes from the
    config.  The Monte Carlo column runs the protocol with the PU signal
    held on so the empirical averages target the same mixture the analytic
    columns integrate.
    """
    if family not in _FIGURES:
        raise ConfigError(f"unknown figure family {family!r}")
    variable, curve_key, curve_values, pinned, fig_index = _FIGURES[family]
    if cfg.sweep_variable == variable:
        x_values = cfg.sweep_values
    elif variable == "epsilon":
        x_values = _FIG2_EPSILONS
    else:
        x_values = tuple(float(v) for v in range(31))
    curve_attr = {"eta": "outage_threshold", "attackers": "n_attackers", "modes": "n_modes"}
    out = []
    for curve_no, curve_value in enumerate(curve_values):
        params = replace(cfg.params, **pinned)
        params = replace(params, **{curve_attr[curve_key]: curve_value})
        runner = (
            _protocol_mc(cfg, analytic_matched=True, namespace=(fig_index, curve_no))
            if with_mc
            else None
        )
        rows = build_rows(params, variable, x_values, cfg.oracle, mc_runner=runner)
        name = f"{family}_{curve_key}{curve_value}"
        out.append((name, SweepResult(f"{family} {curve_key}={curve_value}", rows)))
    return out


def cmd_figure(family: str, cfg: ScenarioConfig, out_path: str | None) -> int:
    curves = figure_curves(family, cfg)
    if out_path is None:
        for name, result in curves:
            sys.stdout.write(f"# {result.label}\n")
            emit_csv(result, sys.stdout)
        return 0
    directory = Path(out_path)
    directory.mkdir(parents=True, exist_ok=True)
    for name, result in curves:
        with open(directory / f"{name}.csv", "w", encoding="utf-8", newline="") as f:
            emit_csv(result, f)
    return 0


@dataclass(frozen=True)
class ValidationCell:
    """One validation grid cell: both analytic routes plus the simulator."""

    quantity: str
    fading_shape: int
    collisions: int
    closed_form: float | None
    numeric_oracle: float
    mc_estimate: float
    mc_half_width: float
    trials: int

    @property
    def closed_gap(self) -> float | None:
        if self.closed_form is None:
            return None
        return abs(self.closed_form - self.numeric_oracle)

    @property
    def flag(self) -> str:
        if self.closed_form is None:
            return "closed-form-unavailable"
        if self.closed_gap > 1e-4:
            return "closed-form-divergent"
        return "ok"

    @property
    def mc_consistent(self) -> bool:
        # 3 sigma binomial band around the oracle with a small-count floor
        # so degenerate rates (0 or 1 observed hits) are judged sanely
        band = 3.0 * math.sqrt(
            self.numeric_oracle * (1.0 - self.numeric_oracle) / self.trials
        ) + 3.0 / self.trials
        return abs(self.numeric_oracle - self.mc_estimate) <= band


def _no_pu_oracle(epsilon: float, k_s: int, params: SystemParams) -> float:
    # quadrature route for the no-PU false alarm, independent of the
    # incomplete-gamma route used by the closed form
    if k_s == 0 or params.attacker_power == 0.0:
        return 0.0
    limit = epsilon * params.noise_power / params.attacker_power
    mass = integrate_finite(
        lambda h: power_sum_pdf(h, k_s, params.fading_shape, params.fading_mean),
        0.0,
        limit,
    )
    return 1.0 - min(1.0, mass)


def validate_cells(cfg: ScenarioConfig) -> list[ValidationCell]:
    """Run the validation grid: both fading shapes 1 and 2 plus the configured one."""
    cells: list[ValidationCell] = []
    shapes = sorted({1, 2, cfg.params.fading_shape})
    for shape_no, m in enumerate(shapes):
        for count in (0, 1, 2):
            forced = replace(
                cfg.params,
                n_frequencies=1,
                n_modes=1,
                n_attackers=count,
                fading_shape=m,
            )
            eps = forced.sensing_threshold
            eta = forced.outage_threshold
            if count > 0:
                mc = run_sensing_trials(
                    forced,
                    cfg.trials,
                    _cell_seed(cfg.seed, 9, shape_no, count, 0),
                    pu_present=False,
                )
                cells.append(
                    ValidationCell(
                        "sensing_no_pu",
                        m,
                        count,
                        false_alarm_no_pu(eps, count, forced),
                        _no_pu_oracle(eps, count, forced),
                        mc.false_alarm,
                        mc.half_widths["false_alarm"],
                        cfg.trials,
                    )
                )
            report = false_alarm_report(eps, count, forced)
            mc = run_sensing_trials(
                forced,
                cfg.trials,
                _cell_seed(cfg.seed, 9, shape_no, count, 1),
                pu_present=True,
            )
            cells.append(
                ValidationCell(
                    "sensing_with_pu",
                    m,
                    count,
                    report.closed_form,
                    report.numeric_oracle,
                    mc.false_alarm,
                    mc.half_widths["false_alarm"],
                    cfg.trials,
                )
            )
            report = outage_report(eta, count, forced)
            mc = run_transmission_trials(
                forced, cfg.trials, _cell_seed(cfg.seed, 9, shape_no, count, 2)
            )
            cells.append(
                ValidationCell(
                    "outage",
                    m,
                    count,
                    report.closed_form,
                    report.numeric_oracle,
                    mc.outage,
                    mc.half_widths["outage"],
                    cfg.trials,
                )
            )
    return cells


def cmd_validate(cfg: ScenarioConfig, stream) -> int:
    cells = validate_cells(cfg)
    stream.write(
        "quantity,fading_shape,collisions,closed_form,numeric_oracle,"
        "mc_estimate,mc_half_width,closed_gap,flag\n"
    )
    failures = 0
    for c in cells:
        if not c.mc_consistent:
            failures += 1
        row = (
            c.quantity,
            str(c.fading_shape),
            str(c.collisions),
            _fmt(c.closed_form),
            _fmt(c.numeric_oracle),
            _fmt(c.mc_estimate),
            _fmt(c.mc_half_width),
            _fmt(c.closed_gap),
            c.flag,
        )
        stream.write(",".join(row) + "\n")
    flagged = sum(1 for c in cells if c.flag != "ok")
    print(
        f"validate: {len(cells)} cells, {failures} oracle-vs-mc failures, "
        f"{flagged} closed-form flags",
        file=sys.stderr,
    )
    return 3 if failures else 0


@contextmanager
def _out_stream(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as f:
            yield f


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modehop",
        description="Anti-jamming analysis for mode-frequency hopping links",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = [
        ("analyze", "sweep the configured variable, analytic columns only"),
        ("simulate", "sweep with Monte Carlo capacity from the full protocol"),
        ("validate", "closed form vs oracle vs Monte Carlo on a parameter grid"),
        ("figure", "reproduce one reference figure family (one CSV per curve)"),
    ]
    for name, help_text in specs:
        p = sub.add_parser(name, help=help_text)
        if name == "figure":
            p.add_argument("family", choices=sorted(_FIGURES))
        p.add_argument("config", help="path to a 'key = value' scenario file")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--trials", type=_trials_arg, help="override Monte Carlo trials")
        p.add_argument(
            "--out",
            help="output file (figure: output directory); default standard output",
        )
        p.add_argument(
            "--oracle",
            choices=_ORACLE_CHOICES,
            help="analytic route for probability columns",
        )
    return parser


def _trials_arg(raw: str) -> int:
    v = float(raw)
    if not v.is_integer() or v < 1:
        raise argparse.ArgumentTypeError(f"trials must be a positive integer, got {raw}")
    return int(v)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 1
    try:
        cfg = parse_config(text)
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.trials is not None:
            overrides["trials"] = args.trials
        if args.oracle is not None:
            overrides["oracle"] = args.oracle
        if overrides:
            cfg = replace(cfg, **overrides)
        if args.command == "figure":
            return cmd_figure(args.family, cfg, args.out)
        with _out_stream(args.out) as stream:
            if args.command == "analyze":
                return cmd_analyze(cfg, stream)
            if args.command == "simulate":
                return cmd_simulate(cfg, stream)
            return cmd_validate(cfg, stream)
    except ConvergenceError as exc:
        print(f"error: numeric convergence failure: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
