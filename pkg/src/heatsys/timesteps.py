"""Time grids and quadrature node layouts shared by the solvers.

Mild-solution integrals concentrate their variation near t = 0 (data
singularities relax) and near s = t (the semigroup factor turns on), so
time grids here are geometric and Duhamel segments are refined toward both
endpoints.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["geometric_times", "duhamel_segments"]


def geometric_times(
    horizon: float,
    nodes_per_decade: int = 64,
    decades: float = 3.0,
    include_zero: bool = False,
) -> np.ndarray:
    """Geometric grid from horizon * 10^-decades up to horizon."""
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    if nodes_per_decade < 4:
        raise ValueError("need at least 4 nodes per decade")
    count = max(2, int(round(nodes_per_decade * decades)) + 1)
    grid = np.geomspace(horizon * 10.0 ** (-decades), horizon, count)
    grid[-1] = horizon
    if include_zero:
        grid = np.concatenate([[0.0], grid])
    return grid


def duhamel_segments(t: float, n_segments: int = 48) -> tuple[np.ndarray, np.ndarray]:
    """Midpoints and weights of a composite midpoint rule on (0, t).

    Segment boundaries crowd geometrically toward both endpoints: toward
    s = t where the undamped semigroup factor lives, and toward s = 0 where
    relaxing data vary fastest. Weights sum to t exactly.
    """
    if t <= 0:
        raise ValueError("integration endpoint must be positive")
    if n_segments < 2:
        raise ValueError("need at least 2 segments")
    half = n_segments // 2 + 1
    # geometric offsets spanning about 4 decades into each endpoint
    frac = np.geomspace(1e-4, 0.5, half)
    cuts = np.unique(np.concatenate([frac, 1.0 - frac, [0.0, 1.0]]))
    edges = t * cuts
    mids = 0.5 * (edges[1:] + edges[:-1])
    weights = np.diff(edges)
    return mids, weights
