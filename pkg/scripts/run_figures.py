#!/usr/bin/env python3
"""Regenerate every figure family as CSV curves in one run.

Example:
    python scripts/run_figures.py --out results/ --trials 100000
"""

import argparse
import sys
from pathlib import Path

from modehop.channel import SystemParams
from modehop.cli import ScenarioConfig, cmd_figure, parse_config


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="figures", help="output directory")
    parser.add_argument("--config", help="optional scenario file for the base system")
    parser.add_argument("--trials", type=int, default=100_000)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    if args.config:
        cfg = parse_config(Path(args.config).read_text(encoding="utf-8"))
        cfg = ScenarioConfig(
            params=cfg.params,
            sweep_variable=cfg.sweep_variable,
            sweep_values=cfg.sweep_values,
            seed=args.seed,
            trials=args.trials,
            oracle=cfg.oracle,
        )
    else:
        cfg = ScenarioConfig(params=SystemParams(), seed=args.seed, trials=args.trials)

    out = Path(args.out)
    for family in ("fig2", "fig3", "fig4"):
        cmd_figure(family, cfg, str(out / family))
        print(f"{family}: wrote curves under {out / family}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
