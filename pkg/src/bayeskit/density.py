"""Gaussian-kernel density estimation on uniform grids.

Densities are discretized onto evenly spaced grids and normalized so the
Riemann sum (density times spacing) is 1.  The one domain-specific twist is
`exclude_interval`, which zeroes an interval of impossible values and
renormalizes the remainder.
"""

from __future__ import annotations

import numpy as np

from .errors import EmptySamples, EverythingExcluded, InvalidGrid
from .pmf import Pmf

AUTO = "auto"

#: smallest usable bandwidth / standard deviation for degenerate samples
SIGMA_FLOOR = 1e-6

DEFAULT_GRID_POINTS = 2048


class DensityGrid:
    """Nonnegative density sampled on a uniform grid, normalized to unit mass."""

    __slots__ = ("_grid", "_density")

    def __init__(self, grid, density):
        g = np.asarray(grid, dtype=float)
        d = np.asarray(density, dtype=float)
        if g.ndim != 1 or g.size < 2:
            raise InvalidGrid("grid needs at least two points")
        steps = np.diff(g)
        if (steps <= 0).any():
            raise InvalidGrid("grid must be strictly increasing")
        scale = max(abs(float(g[0])), abs(float(g[-1])), 1.0)
        if not np.allclose(steps, steps[0], rtol=1e-6, atol=1e-9 * scale):
            raise InvalidGrid("grid spacing must be uniform")
        if d.shape != g.shape or (d < 0).any() or not np.isfinite(d).all():
            raise InvalidGrid("density must be finite, nonnegative, and match the grid")
        total = d.sum() * steps[0]
        if total <= 0.0:
            raise InvalidGrid("density holds no mass on this grid")
        d = d / total
        for arr in (g, d):
            arr.flags.writeable = False
        self._grid = g
        self._density = d

    @property
    def grid(self) -> np.ndarray:
        return self._grid

    @property
    def density(self) -> np.ndarray:
        return self._density

    @property
    def spacing(self) -> float:
        return float(self._grid[1] - self._grid[0])


def scott_bandwidth(samples) -> float:
    """Scott's rule n**(-1/5) * sigma, with sigma floored for degenerate data."""
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise EmptySamples("bandwidth of an empty sample set")
    sigma = x.std(ddof=1) if x.size > 1 else 0.0
    return max(float(sigma), SIGMA_FLOOR) * x.size ** (-1.0 / 5.0)


def gaussian_mixture_density(points, samples, bandwidth: float) -> np.ndarray:
    """Unnormalized Gaussian-kernel mixture evaluated at `points`.

    Returns sums of kernels without the 1/(n*bw*sqrt(2pi)) constant; callers
    that need a proper density normalize afterwards.
    """
    x = np.atleast_1d(np.asarray(points, dtype=float))
    s = np.asarray(samples, dtype=float)
    z = (x[:, None] - s[None, :]) / bandwidth
    return np.exp(-0.5 * z * z).sum(axis=1)


def default_grid(samples, bandwidth: float, n_points: int = DEFAULT_GRID_POINTS):
    """Grid covering the samples plus three bandwidths of kernel tail."""
    x = np.asarray(samples, dtype=float)
    return float(x.min() - 3.0 * bandwidth), float(x.max() + 3.0 * bandwidth), n_points


def kde(samples, bandwidth=AUTO, grid_spec=None) -> DensityGrid:
    """Gaussian-kernel density estimate of `samples` on a uniform grid.

    `bandwidth` is a positive float or AUTO (Scott's rule).  `grid_spec` is a
    ``(lo, hi, n_points)`` triple; when omitted the grid spans the samples
    plus three bandwidths on each side with 2048 points.
    """
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise EmptySamples("kde of an empty sample set")
    bw = scott_bandwidth(x) if bandwidth == AUTO or bandwidth is None else float(bandwidth)
    if bw <= 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth!r}")
    if grid_spec is None:
        grid_spec = default_grid(x, bw)
    lo, hi, n_points = grid_spec
    if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi) or int(n_points) < 2:
        raise InvalidGrid(f"bad grid spec {grid_spec!r}")
    grid = np.linspace(lo, hi, int(n_points))
    dens = gaussian_mixture_density(grid, x, bw)
    if dens.sum() <= 0.0:
        raise InvalidGrid("grid does not overlap the sample support")
    return DensityGrid(grid, dens)


def exclude_interval(d: DensityGrid, lo: float, hi: float, half_open: bool = True) -> DensityGrid:
    """Zero out density on an interval of impossible values and renormalize.

    With `half_open` the interval is left-open/right-closed ``(lo, hi]``;
    otherwise it is closed ``[lo, hi]``.
    """
    if half_open:
        cut = (d.grid > lo) & (d.grid <= hi)
    else:
        cut = (d.grid >= lo) & (d.grid <= hi)
    kept = np.where(cut, 0.0, d.density)
    if kept.sum() <= 0.0:
        raise EverythingExcluded(f"excluding [{lo}, {hi}] removes the whole support")
    return DensityGrid(d.grid, kept)


def to_pmf(d: DensityGrid) -> Pmf:
    """Discretize a density grid: mass at each grid point is density * spacing."""
    return Pmf(d.grid.tolist(), d.density * d.spacing)
