#!/usr/bin/env python3
"""Regenerate the bundled datasets under data/.

Everything here is deterministic: synthetic measurements come from a fixed
linear-congruential stream, so rerunning the script reproduces the committed
files byte for byte.

The two outcome files are not synthetic.  The baseline distributions are
published survey aggregates (percentage of failed/challenged/successful
projects per process family).  The per-project outcome table was
reconstructed by exhaustive search over integer category counts (29 agile
plus 18 structured projects) for the assignment that best reproduces the
published 4x9 Bayes-factor grid; see scripts/recover_outcome_counts.py.
"""

from __future__ import annotations

import math
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "data"


class Lcg:
    """32-bit linear congruential stream (Numerical Recipes constants)."""

    def __init__(self, seed: int):
        self.state = seed & 0xFFFFFFFF

    def next_float(self) -> float:
        self.state = (1664525 * self.state + 1013904223) & 0xFFFFFFFF
        return self.state / 2**32

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.next_float()


def write(path: Path, lines):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    print(f"wrote {path.relative_to(ROOT)} ({len(lines) - 1} rows)")


# -- outcome survey fixtures -------------------------------------------------

BASELINES = {
    "A": (0.07, 0.30, 0.63),
    "AIL": (0.08, 0.27, 0.65),
    "AILT": (0.10, 0.28, 0.62),
    "AIT": (0.11, 0.29, 0.60),
    "AL": (0.07, 0.27, 0.66),
    "ALT": (0.11, 0.29, 0.60),
    "AT": (0.12, 0.31, 0.57),
    "IT": (0.12, 0.29, 0.59),
    "T": (0.18, 0.32, 0.50),
}

AGILE_COUNTS = (1, 6, 22)
STRUCTURED_COUNTS = (0, 5, 13)


def make_outcomes():
    lines = ["category,k,probability"]
    for name, probs in BASELINES.items():
        for k, p in enumerate(probs):
            lines.append(f"{name},{k},{p:.2f}")
    write(DATA / "outcome_baselines.csv", lines)

    lines = ["project_id,group,category"]
    idx = 1
    for group, counts in (("agile", AGILE_COUNTS), ("structured", STRUCTURED_COUNTS)):
        prefix = group[0]
        for category, n in enumerate(counts):
            for _ in range(n):
                lines.append(f"{prefix}{idx:02d},{group},{category}")
                idx += 1
    write(DATA / "project_outcomes.csv", lines)


# -- benchmark fixtures --------------------------------------------------------

LANGUAGES = ["C", "C#", "F#", "Go", "Haskell", "Java", "Python", "Ruby"]

TIME_FACTOR = {
    "C": 1.0, "Go": 1.6, "Haskell": 2.1, "C#": 3.0,
    "Java": 3.4, "F#": 16.0, "Python": 28.0, "Ruby": 34.0,
}
MEMORY_FACTOR = {
    "C": 1.0, "Go": 1.3, "C#": 2.8, "Haskell": 3.6,
    "Java": 4.5, "F#": 5.0, "Python": 6.5, "Ruby": 8.0,
}

BENCH_TASKS = {"b1": 0.5, "b2": 1.0, "b3": 2.0, "b4": 4.0, "b5": 8.0, "b6": 1.5}
PRIMARY_TASKS = {"p1": 0.8, "p2": 1.6, "p3": 3.2, "p4": 6.0, "p5": 2.4}
SIZES = (1000, 2000)
VARIANTS = ("v1", "v2")


def make_benchmarks():
    rng = Lcg(20260808)
    lines = ["language,task,input_size,variant,metric,value"]
    for lang in LANGUAGES:
        for task, scale in BENCH_TASKS.items():
            slowdown = {v: 1.0 if v == "v1" else rng.uniform(1.1, 1.6) for v in VARIANTS}
            for size in SIZES:
                growth = (size / 1000) ** rng.uniform(1.0, 1.15)
                for variant in VARIANTS:
                    t = TIME_FACTOR[lang] * scale * growth * slowdown[variant] * rng.uniform(0.92, 1.08)
                    lines.append(f"{lang},{task},{size},{variant},time,{t:.4f}")
                    m = MEMORY_FACTOR[lang] * 8.0 * (size / 1000) ** 0.5 * slowdown[variant] ** 0.3 * rng.uniform(0.95, 1.05)
                    lines.append(f"{lang},{task},{size},{variant},memory,{m:.2f}")
    write(DATA / "demo_bench.csv", lines)

    rng = Lcg(20260809)
    lines = ["language,task,metric,value"]
    for lang in LANGUAGES:
        for task, scale in PRIMARY_TASKS.items():
            t = TIME_FACTOR[lang] * scale * rng.uniform(0.85, 1.15)
            lines.append(f"{lang},{task},time,{t:.4f}")
            m = MEMORY_FACTOR[lang] * 9.0 * rng.uniform(0.9, 1.1)
            lines.append(f"{lang},{task},memory,{m:.2f}")
    write(DATA / "demo_primary.csv", lines)


# -- defect-count fixture -------------------------------------------------------


def make_bug_counts():
    rng = Lcg(20260810)
    lines = ["class_id,found_simple,found_strong,public_methods,loc"]
    for i in range(1, 22):
        u = rng.next_float()
        strong = int(8.0 * (-math.log(1.0 - u)) ** (1.0 / 0.9))
        simple = int(strong * rng.uniform(0.2, 0.6))
        methods = 3 + int(rng.next_float() * 57)
        loc = methods * (20 + int(rng.next_float() * 30))
        lines.append(f"c{i:02d},{simple},{strong},{methods},{loc}")
    write(DATA / "demo_bugs.csv", lines)


if __name__ == "__main__":
    make_outcomes()
    make_benchmarks()
    make_bug_counts()
