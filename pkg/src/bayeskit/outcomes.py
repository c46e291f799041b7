"""Bayes-factor comparison of categorical project outcomes.

Two groups of projects are compared by asking how strongly the observed
per-category counts support "the first group draws from better outcome
distributions than a baseline" over "both groups draw from the same family".
Both hypotheses are families of discretized outcome distributions, weighted
by a scheme that optionally down-weights distributions far from the baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .errors import (
    DimensionMismatch,
    EmptyCategorySet,
    InvalidStep,
    NonPositiveK,
    OutOfRange,
    ZeroDenominator,
)

WEIGHT_SCHEMES = ("uniform", "triangle", "power", "exp")

#: mean differences below this are treated as exact ties (the rational
#: arithmetic behind grid distributions never produces smaller true gaps)
MEAN_TIE_TOL = 1e-12


@dataclass(frozen=True)
class OutcomeDistribution:
    """Probability vector over K ordered outcome categories 0..K-1."""

    probs: tuple[float, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        if not probs:
            raise DimensionMismatch("outcome distribution needs at least one category")
        if any(p < 0 for p in probs):
            raise ValueError(f"negative probability in {probs}")
        total = sum(probs)
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"probabilities sum to {total}, not 1")
        object.__setattr__(self, "probs", tuple(p / total for p in probs))

    @property
    def k(self) -> int:
        return len(self.probs)

    def mean(self) -> float:
        """Category-index expectation: sum of k * probs[k]."""
        return sum(k * p for k, p in enumerate(self.probs))


@dataclass(frozen=True)
class OutcomeCounts:
    """Per-category project counts for the two groups under comparison.

    `counts_a` is the group hypothesized to produce better outcomes.
    """

    counts_a: tuple[int, ...]
    counts_b: tuple[int, ...]
    label_a: str = "A"
    label_b: str = "B"

    def __post_init__(self):
        for counts in (self.counts_a, self.counts_b):
            if any(int(c) != c or c < 0 for c in counts):
                raise ValueError(f"counts must be nonnegative integers, got {counts}")
        if len(self.counts_a) != len(self.counts_b):
            raise DimensionMismatch(
                f"groups disagree on K: {len(self.counts_a)} vs {len(self.counts_b)}"
            )
        object.__setattr__(self, "counts_a", tuple(int(c) for c in self.counts_a))
        object.__setattr__(self, "counts_b", tuple(int(c) for c in self.counts_b))

    @property
    def k(self) -> int:
        return len(self.counts_a)


def rescale_outcome(raw: int, lower_bound: int = 1, top_category: int = 2) -> int:
    """Map a raw 1..10 outcome onto 0..top_category via nearest anchor point.

    Anchors are evenly spaced over [lower_bound, 10]; ties go to the smaller
    category.  Comparisons run in exact rational arithmetic so tie-breaking
    never depends on floating-point rounding.
    """
    if int(raw) != raw or not 1 <= raw <= 10:
        raise OutOfRange(f"raw outcome must be an integer in 1..10, got {raw!r}")
    b, r = int(lower_bound), int(top_category)
    if not 1 <= b < 10:
        raise OutOfRange(f"lower bound must be in 1..9, got {lower_bound!r}")
    if r < 1:
        raise OutOfRange(f"need at least one category step, got {top_category!r}")
    best_k, best_gap = 0, None
    for k in range(r + 1):
        anchor = Fraction(b) + Fraction(k * (10 - b), r)
        gap = abs(anchor - raw)
        if best_gap is None or gap < best_gap:
            best_k, best_gap = k, gap
    return best_k


def baseline_distribution(
    categories: Iterable[str], singletons: Mapping[str, OutcomeDistribution]
) -> OutcomeDistribution:
    """Unweighted average of the singleton distributions named in `categories`."""
    names = sorted(set(categories))
    if not names:
        raise EmptyCategorySet("baseline over an empty category set")
    dists = [singletons[name] for name in names]
    k = dists[0].k
    if any(d.k != k for d in dists):
        raise DimensionMismatch("singleton distributions disagree on K")
    return OutcomeDistribution(
        tuple(sum(d.probs[i] for d in dists) / len(dists) for i in range(k))
    )


def better_than(p: OutcomeDistribution, q: OutcomeDistribution) -> bool:
    """True when p's mean outcome strictly exceeds q's; ties are not better."""
    if p.k != q.k:
        raise DimensionMismatch(f"cannot compare K={p.k} against K={q.k}")
    return p.mean() > q.mean() + MEAN_TIE_TOL


def multinomial_pmf(counts, p: OutcomeDistribution) -> float:
    """Probability of the category counts under outcome distribution p (0**0 = 1)."""
    counts = tuple(int(c) for c in counts)
    if len(counts) != p.k:
        raise DimensionMismatch(f"{len(counts)} counts against K={p.k}")
    if any(c < 0 for c in counts):
        raise ValueError(f"counts must be nonnegative, got {counts}")
    log_coeff = math.lgamma(sum(counts) + 1) - sum(math.lgamma(c + 1) for c in counts)
    log_prob = 0.0
    for c, pk in zip(counts, p.probs):
        if c == 0:
            continue
        if pk == 0.0:
            return 0.0
        log_prob += c * math.log(pk)
    return math.exp(log_coeff + log_prob)


@lru_cache(maxsize=None)
def enumerate_simplex(k: int, step: float) -> tuple[OutcomeDistribution, ...]:
    """All K-category distributions whose entries are multiples of `step`.

    `1/step` must be an integer (within 1e-9).  The order is lexicographic
    in the category counts, which makes downstream sums reproducible.
    """
    if k < 1:
        raise InvalidStep(f"need at least one category, got K={k}")
    if not 0 < step <= 1:
        raise InvalidStep(f"step must be in (0, 1], got {step!r}")
    n = round(1.0 / step)
    if abs(n * step - 1.0) > 1e-9:
        raise InvalidStep(f"1/{step} is not an integer")

    out: list[OutcomeDistribution] = []

    def fill(prefix: list[int], remaining: int, slots: int):
        if slots == 1:
            out.append(OutcomeDistribution(tuple((c / n) for c in prefix + [remaining])))
            return
        for c in range(remaining + 1):
            fill(prefix + [c], remaining - c, slots - 1)

    fill([], n, k)
    return tuple(out)


def scheme_weight(p: OutcomeDistribution, baseline: OutcomeDistribution, scheme: str) -> float:
    """Prior weight of p under the named scheme, from its mean gap to the baseline.

    With delta = |mean(p) - mean(baseline)|: uniform ignores delta; triangle
    falls off linearly, hitting zero at the largest possible gap K-1; power
    decays like 1/(1+delta); exp like exp(-delta).
    """
    if p.k != baseline.k:
        raise DimensionMismatch(f"K={p.k} against baseline K={baseline.k}")
    delta = abs(p.mean() - baseline.mean())
    if scheme == "uniform":
        return 1.0
    if scheme == "triangle":
        return max(0.0, 1.0 - delta / (p.k - 1)) if p.k > 1 else 1.0
    if scheme == "power":
        return 1.0 / (1.0 + delta)
    if scheme == "exp":
        return math.exp(-delta)
    raise ValueError(f"unknown weight scheme {scheme!r}; expected one of {WEIGHT_SCHEMES}")


def likelihood_better(
    data: OutcomeCounts,
    baseline: OutcomeDistribution,
    scheme: str = "uniform",
    step: float = 0.05,
) -> float:
    """Likelihood of the data when group A beats the baseline and group B does not.

    Group A's counts are weighed over all grid distributions better than the
    baseline, group B's over the rest; the two sums multiply.
    """
    if data.k != baseline.k:
        raise DimensionMismatch(f"counts K={data.k} against baseline K={baseline.k}")
    sum_a = 0.0
    sum_b = 0.0
    for p in enumerate_simplex(data.k, step):
        w = scheme_weight(p, baseline, scheme)
        if better_than(p, baseline):
            sum_a += w * multinomial_pmf(data.counts_a, p)
        else:
            sum_b += w * multinomial_pmf(data.counts_b, p)
    return sum_a * sum_b


def likelihood_equal(
    data: OutcomeCounts,
    baseline: OutcomeDistribution,
    scheme: str = "uniform",
    step: float = 0.05,
) -> float:
    """Likelihood of the data when both groups draw from the full family.

    The baseline only shapes the weights; with the uniform scheme it has no
    effect on the value.
    """
    if data.k != baseline.k:
        raise DimensionMismatch(f"counts K={data.k} against baseline K={baseline.k}")
    sum_a = 0.0
    sum_b = 0.0
    for p in enumerate_simplex(data.k, step):
        w = scheme_weight(p, baseline, scheme)
        sum_a += w * multinomial_pmf(data.counts_a, p)
        sum_b += w * multinomial_pmf(data.counts_b, p)
    return sum_a * sum_b


def bayes_factor(
    data: OutcomeCounts,
    baseline: OutcomeDistribution,
    scheme: str = "uniform",
    step: float = 0.05,
) -> float:
    """How much the data favors "group A is better than baseline" over "no difference"."""
    denom = likelihood_equal(data, baseline, scheme, step)
    if denom <= 0.0:
        raise ZeroDenominator("likelihood under the no-difference hypothesis is zero")
    return likelihood_better(data, baseline, scheme, step) / denom


def jeffreys_label(k: float) -> str:
    """Conventional verbal band for a Bayes factor (left-exclusive bands)."""
    if not k > 0:
        raise NonPositiveK(f"Bayes factor must be positive, got {k!r}")
    if k <= 1.0:
        return "negative"
    if k <= 3.0:
        return "barely"
    if k <= 10.0:
        return "substantial"
    if k <= 32.0:
        return "strong"
    if k <= 100.0:
        return "very strong"
    return "decisive"
