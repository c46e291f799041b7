#!/usr/bin/env python3
"""Run every analysis pipeline over the bundled datasets.

Writes one subdirectory per subcommand under out/ (override with the first
argument).  Rerunning produces byte-identical files; that property is also
enforced by the acceptance suite.
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from bayeskit.cli import main  # noqa: E402

DATA = ROOT / "data"


def run(out_root: Path) -> int:
    jobs = [
        ["compare-outcomes",
         "--data", DATA / "project_outcomes.csv",
         "--baselines", DATA / "outcome_baselines.csv",
         "--simplex-step", "0.01",
         "--out", out_root / "outcomes"],
        ["compare-performance",
         "--primary", DATA / "demo_primary.csv",
         "--calib", DATA / "demo_bench.csv",
         "--metric", "time", "--plots",
         "--out", out_root / "performance_time"],
        ["compare-performance",
         "--primary", DATA / "demo_primary.csv",
         "--calib", DATA / "demo_bench.csv",
         "--metric", "memory",
         "--out", out_root / "performance_memory"],
        ["fit-defects",
         "--data", DATA / "demo_bugs.csv",
         "--pareto-xmax", "60",
         "--out", out_root / "defect_fit"],
        ["estimate-total-bugs",
         "--data", DATA / "demo_bugs.csv",
         "--out", out_root / "total_bugs"],
        ["derived-plots",
         "--data", DATA / "demo_bugs.csv",
         "--at-most", "5",
         "--out", out_root / "derived"],
    ]
    for job in jobs:
        argv = [str(a) for a in job]
        print("$ bayeskit " + " ".join(argv))
        code = main(argv)
        if code != 0:
            return code
    print(f"\nall outputs under {out_root}")
    return 0


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else ROOT / "out"
    sys.exit(run(target))
