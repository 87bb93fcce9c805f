#!/usr/bin/env python3
"""Print the closed-form vs quadrature vs Monte Carlo validation grid.

Exit status 3 signals an oracle vs simulation disagreement, matching the
`modehop validate` command.
"""

import argparse
import sys

from modehop.channel import SystemParams
from modehop.cli import ScenarioConfig, validate_cells


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=200_000)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--fading-shape", type=int, default=1)
    args = parser.parse_args()

    cfg = ScenarioConfig(
        params=SystemParams(fading_shape=args.fading_shape),
        seed=args.seed,
        trials=args.trials,
    )
    cells = validate_cells(cfg)
    width = max(len(c.quantity) for c in cells)
    failures = 0
    for c in cells:
        closed = "unavailable" if c.closed_form is None else f"{c.closed_form:.9f}"
        verdict = "ok" if c.mc_consistent else "MC-MISMATCH"
        if not c.mc_consistent:
            failures += 1
        print(
            f"{c.quantity:<{width}}  m={c.fading_shape}  k={c.collisions}  "
            f"closed={closed:>12}  oracle={c.numeric_oracle:.9f}  "
            f"mc={c.mc_estimate:.6f}±{c.mc_half_width:.6f}  "
            f"[{c.flag}] {verdict}"
        )
    print(f"{len(cells)} cells, {failures} oracle vs Monte Carlo failures")
    return 3 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
