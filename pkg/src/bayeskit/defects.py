"""Weibull modeling of per-class bug counts and hierarchical total-bug estimation.

Counts found by a strong testing configuration pin down a Weibull
shape/scale posterior on a 2-D grid.  Totals per class are then estimated in
two layers: for fixed detection effectiveness values (e, E) a scaled-Weibull
prior meets a binomial likelihood, and a second update over an effectiveness
grid absorbs the uncertainty about (e, E) into a posterior mixture.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import AllZeroMass, InvalidProbability, NonPositiveParams
from .pmf import JointPmf2D, Pmf

#: evaluation point standing in for x = 0 where the density diverges (shape < 1)
PDF_ZERO_EPS = 1e-12

DEFAULT_ALPHA_RANGE = (0.1, 40.0)
DEFAULT_BETA_RANGE = (0.1, 3.0)
DEFAULT_GRID_STEPS = (400, 300)

DEFAULT_E_RANGE = (0.15, 0.5)
DEFAULT_STRONG_RANGE = (0.7, 0.95)
DEFAULT_E_STEPS = (8, 6)


@dataclass(frozen=True)
class WeibullParams:
    """Scale alpha and shape beta, both strictly positive."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise NonPositiveParams(f"alpha and beta must be positive, got {self}")


@dataclass(frozen=True)
class BugCounts:
    """Bugs found in one class by the two testing configurations."""

    class_id: str
    found_simple: int
    found_strong: int
    public_methods: int | None = None
    loc: int | None = None

    def __post_init__(self):
        if self.found_simple < 0 or self.found_strong < 0:
            raise ValueError(f"bug counts must be nonnegative: {self}")
        if self.public_methods is not None and self.public_methods <= 0:
            raise ValueError(f"public method count must be positive: {self}")
        if self.loc is not None and self.loc <= 0:
            raise ValueError(f"loc must be positive: {self}")


@dataclass(frozen=True)
class EffectivenessGrid:
    """Grid of detection-effectiveness pairs: e (simple specs) by E (strong specs).

    A degenerate axis (lo == hi) takes exactly one step, which is how the
    e = E = 1 sanity case is expressed.
    """

    e_range: tuple[float, float] = DEFAULT_E_RANGE
    strong_range: tuple[float, float] = DEFAULT_STRONG_RANGE
    e_steps: int = DEFAULT_E_STEPS[0]
    strong_steps: int = DEFAULT_E_STEPS[1]

    def __post_init__(self):
        for (lo, hi), steps in (
            (self.e_range, self.e_steps),
            (self.strong_range, self.strong_steps),
        ):
            if not (0.0 < lo <= hi <= 1.0):
                raise InvalidProbability(
                    f"effectiveness range must satisfy 0 < lo <= hi <= 1, got ({lo}, {hi})"
                )
            if (lo < hi and steps < 2) or (lo == hi and steps != 1):
                raise InvalidProbability(
                    f"range ({lo}, {hi}) is incompatible with {steps} grid steps"
                )

    def e_points(self) -> np.ndarray:
        return np.linspace(self.e_range[0], self.e_range[1], self.e_steps)

    def strong_points(self) -> np.ndarray:
        return np.linspace(self.strong_range[0], self.strong_range[1], self.strong_steps)


# -- Weibull primitives ----------------------------------------------------


def weibull_pdf(x: float, params: WeibullParams) -> float:
    """Weibull density (beta/alpha)(x/alpha)^(beta-1) exp(-(x/alpha)^beta).

    At x = 0 the limit convention applies: 0 for beta > 1, 1/alpha for
    beta = 1, and for beta < 1 (where the density diverges) the value at
    x = PDF_ZERO_EPS, keeping grid computations finite.
    """
    a, b = params.alpha, params.beta
    if x < 0:
        return 0.0
    if x == 0:
        if b > 1:
            return 0.0
        if b == 1:
            return 1.0 / a
        x = PDF_ZERO_EPS
    z = x / a
    return (b / a) * z ** (b - 1.0) * math.exp(-(z**b))


def weibull_cdf(x: float, params: WeibullParams) -> float:
    """P[X <= x] = 1 - exp(-(x/alpha)^beta); 0 for x <= 0."""
    if x <= 0:
        return 0.0
    return 1.0 - math.exp(-((x / params.alpha) ** params.beta))


def _log_weibull_pdf_grid(x: float, alphas: np.ndarray, betas: np.ndarray) -> np.ndarray:
    """log pdf(x) over an (alpha, beta) grid, honoring the x = 0 convention."""
    a = alphas[:, None]
    b = betas[None, :]
    shape = (alphas.size, betas.size)
    if x < 0:
        return np.full(shape, -np.inf)
    if x == 0:
        logz_eps = math.log(PDF_ZERO_EPS) - np.log(a)
        diverging = np.log(b) - np.log(a) + (b - 1.0) * logz_eps - np.exp(b * logz_eps)
        at_one = np.broadcast_to(-np.log(a), shape)
        out = np.where(b > 1.0, -np.inf, np.where(b < 1.0, diverging, at_one))
        return np.broadcast_to(out, shape).copy()
    logz = math.log(x) - np.log(a)
    return np.log(b) - np.log(a) + (b - 1.0) * logz - np.exp(b * logz)


def fit_weibull_posterior(counts, prior_kind: str = "uniform", grid=None) -> JointPmf2D:
    """Grid posterior over (alpha, beta) given per-class bug counts.

    Each count d contributes a likelihood factor pdf(d + 1); the shift by
    one lets zero-bug classes carry information.  `grid` is a triple
    ``(alpha_range, beta_range, (n_alpha, n_beta))`` and alpha is
    log-spaced.  The prior is flat or the reference prior proportional to
    1/(alpha*beta).
    """
    data = [float(c) for c in counts]
    if not data:
        raise ValueError("need at least one bug count")
    if any(c < 0 for c in data):
        raise ValueError(f"bug counts must be nonnegative, got {counts!r}")
    if prior_kind not in ("uniform", "jeffreys"):
        raise ValueError(f"prior must be 'uniform' or 'jeffreys', got {prior_kind!r}")
    if grid is None:
        grid = (DEFAULT_ALPHA_RANGE, DEFAULT_BETA_RANGE, DEFAULT_GRID_STEPS)
    (a_lo, a_hi), (b_lo, b_hi), (n_a, n_b) = grid
    if not (0 < a_lo <= a_hi and 0 < b_lo <= b_hi) or n_a < 1 or n_b < 1:
        raise NonPositiveParams(f"bad parameter grid {grid!r}")
    alphas = np.geomspace(a_lo, a_hi, int(n_a))
    betas = np.linspace(b_lo, b_hi, int(n_b))

    logw = np.zeros((alphas.size, betas.size))
    if prior_kind == "jeffreys":
        logw -= np.log(alphas)[:, None] + np.log(betas)[None, :]
    for d in data:
        logw += _log_weibull_pdf_grid(d + 1.0, alphas, betas)
    return JointPmf2D.from_log_weights(alphas, betas, logw)


def pareto_fraction(params: WeibullParams, x_max: float) -> float:
    """Fraction of `x_max` below which 80% of the distribution falls.

    Solves cdf(b) = 0.8 by bisection to 1e-9 and returns b / x_max.
    """
    if not x_max > 0:
        raise NonPositiveParams(f"x_max must be positive, got {x_max!r}")
    hi = params.alpha
    while weibull_cdf(hi, params) < 0.8:
        hi *= 2.0
    lo = 0.0
    while hi - lo > 1e-9:
        mid = (lo + hi) / 2.0
        if weibull_cdf(mid, params) < 0.8:
            lo = mid
        else:
            hi = mid
    return ((lo + hi) / 2.0) / x_max


# -- hierarchical total-bug estimation --------------------------------------


def binomial_pmf(h: int, e: float, d: int) -> float:
    """Probability of d detections out of h bugs at per-bug detection rate e."""
    if not 0.0 < e <= 1.0:
        raise InvalidProbability(f"effectiveness must be in (0, 1], got {e!r}")
    if h < 0 or d < 0:
        raise ValueError(f"counts must be nonnegative, got h={h}, d={d}")
    if d > h:
        return 0.0
    return math.comb(h, d) * e**d * (1.0 - e) ** (h - d)


def _log_binomial_vec(h: np.ndarray, e: float, d: int) -> np.ndarray:
    """log C(h, d) e^d (1-e)^(h-d) over an integer vector h; -inf where h < d."""
    out = np.full(h.shape, -np.inf)
    ok = h >= d
    hh = h[ok].astype(float)
    log_coeff = gammaln(hh + 1.0) - math.lgamma(d + 1) - gammaln(hh - d + 1.0)
    if e == 1.0:
        tail = np.where(hh == d, 0.0, -np.inf)
    else:
        tail = (hh - d) * math.log1p(-e)
    out[ok] = log_coeff + d * math.log(e) + tail
    return out


def _log_scaled_prior(params: WeibullParams, strong_e: float, n_max: int) -> np.ndarray:
    """log pdf(h * strong_e) for h = 0..n_max: the prior over true totals."""
    h = np.arange(1, n_max + 1, dtype=float)
    a, b = params.alpha, params.beta
    logz = np.log(h * strong_e) - math.log(a)
    body = math.log(b) - math.log(a) + (b - 1.0) * logz - np.exp(b * logz)
    at_zero = weibull_pdf(0.0, params)
    head = math.log(at_zero) if at_zero > 0 else -np.inf
    return np.concatenate(([head], body))


def _normalize_log(logw: np.ndarray) -> np.ndarray:
    top = logw.max()
    if not np.isfinite(top):
        raise AllZeroMass("all log-weights are -inf")
    w = np.exp(logw - top)
    return w / w.sum()


def total_bugs_posterior(
    params: WeibullParams, d: int, e: float, strong_e: float, n_max: int
) -> Pmf:
    """Posterior over a class's total bugs given d found at detection rate e.

    The prior over totals h follows the fitted Weibull evaluated at
    h * strong_e (the scale at which the fit's own detections were made);
    the likelihood of finding d of h bugs is binomial with rate e.
    """
    if d < 0:
        raise ValueError(f"found-bug count must be nonnegative, got {d}")
    if n_max < d:
        raise ValueError(f"n_max={n_max} cannot be below the observed count {d}")
    if not 0.0 < e <= 1.0:
        raise InvalidProbability(f"effectiveness must be in (0, 1], got {e!r}")
    if not 0.0 < strong_e <= 1.0:
        raise InvalidProbability(f"strong effectiveness must be in (0, 1], got {strong_e!r}")
    h = np.arange(n_max + 1)
    logw = _log_scaled_prior(params, strong_e, n_max) + _log_binomial_vec(h, e, d)
    return Pmf.from_log_weights(list(range(n_max + 1)), logw)


def _total_bug_cells(params: WeibullParams, d: int, grid: EffectivenessGrid, n_max: int):
    """Shared core: per-cell total posteriors plus the (e, E) log-likelihood."""
    if d < 0:
        raise ValueError(f"found-bug count must be nonnegative, got {d}")
    if n_max < d:
        raise ValueError(f"n_max={n_max} cannot be below the observed count {d}")
    e_pts = grid.e_points()
    s_pts = grid.strong_points()
    h = np.arange(n_max + 1)
    log_binoms = [_log_binomial_vec(h, float(e), d) for e in e_pts]
    log_priors = [_log_scaled_prior(params, float(s), n_max) for s in s_pts]
    cells = np.empty((e_pts.size, s_pts.size, n_max + 1))
    loglik = np.empty((e_pts.size, s_pts.size))
    for i, log_binom in enumerate(log_binoms):
        binom = np.exp(log_binom)
        for j, log_prior in enumerate(log_priors):
            probs = _normalize_log(log_prior + log_binom)
            cells[i, j] = probs
            total = float(np.dot(binom, probs))
            loglik[i, j] = math.log(total) if total > 0 else -np.inf
    return e_pts, s_pts, cells, loglik


def effectiveness_posterior(
    params: WeibullParams, d: int, grid: EffectivenessGrid, n_max: int
) -> JointPmf2D:
    """Posterior over (e, E) cells from a uniform prior.

    A cell's likelihood is the chance that testing at rate e finds d bugs
    when totals follow that very cell's total-bug posterior.
    """
    e_pts, s_pts, _, loglik = _total_bug_cells(params, d, grid, n_max)
    return JointPmf2D.from_log_weights(e_pts, s_pts, loglik)


def class_total_bugs(params: WeibullParams, d: int, grid: EffectivenessGrid, n_max: int) -> Pmf:
    """Total-bug estimate for one class: effectiveness-weighted posterior mixture."""
    _, _, cells, loglik = _total_bug_cells(params, d, grid, n_max)
    weights = _normalize_log(loglik)
    mix = np.tensordot(weights, cells, axes=2)
    return Pmf(list(range(n_max + 1)), mix)


def derived_prob_at_most(n: int, joint: JointPmf2D, bins: int | None = None) -> Pmf:
    """Distribution of cdf(n + 1) values induced by a parameter posterior.

    Each (alpha, beta) cell contributes its probability that a class has at
    most n bugs (under the same shift-by-one convention as the fit), weighted
    by the cell mass.  With `bins` the values are aggregated onto an even
    [0, 1] grid of bin centers; otherwise exact value spikes are returned.
    """
    a = joint.x_grid[:, None]
    b = joint.y_grid[None, :]
    values = 1.0 - np.exp(-(((n + 1.0) / a) ** b))
    flat_vals = values.ravel()
    flat_mass = joint.probs.ravel()
    if bins is None:
        return Pmf(flat_vals.tolist(), flat_mass)
    edges = np.linspace(0.0, 1.0, bins + 1)
    centers = (edges[:-1] + edges[1:]) / 2.0
    idx = np.clip(np.searchsorted(edges, flat_vals, side="right") - 1, 0, bins - 1)
    mass = np.zeros(bins)
    np.add.at(mass, idx, flat_mass)
    return Pmf(centers.tolist(), mass)


def default_n_max(d: int) -> int:
    """Per-class ceiling on total bugs: max(100, 10 * d)."""
    return max(100, 10 * d)


@dataclass(frozen=True)
class ClassEstimate:
    """Summary row for one class's total-bug posterior."""

    class_id: str
    found: int
    median: float
    ci_low: float
    ci_high: float
    per_method: float | None


def estimate_class_totals(
    classes,
    params: WeibullParams,
    grid: EffectivenessGrid,
    n_max: int | None = None,
    ci_mass: float = 0.9,
) -> list[ClassEstimate]:
    """Per-class total-bug summaries from simple-spec detection counts."""
    out = []
    for rec in classes:
        d = rec.found_simple
        cap = default_n_max(d) if n_max is None else n_max
        post = class_total_bugs(params, d, grid, cap)
        ci = post.credible_interval(ci_mass)
        median = float(post.median())
        per_method = median / rec.public_methods if rec.public_methods else None
        out.append(
            ClassEstimate(rec.class_id, d, median, float(ci.low), float(ci.high), per_method)
        )
    return out
