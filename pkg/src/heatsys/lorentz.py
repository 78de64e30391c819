"""Weak-Lebesgue norms via exact rearrangement of grid step functions.

A grid field is identified with the step function taking value |f_i| on a
cell of volume h^N around each grid point. Its distribution function,
nonincreasing rearrangement f*, and running average

    f**(s) = (1/s) * integral of f* over (0, s]

are then computed exactly by sorting cell values. The weak norm used here is

    ||f||_{r,weak} = sup_{s>0} s^(1/r) f**(s),

the average-based variant that is an actual norm for r > 1. On each
interval where f* is constant, s^(1/r) f**(s) has no interior maximum
(its derivative changes sign from - to + at most once), so the supremum is
attained at a step boundary s_k = k h^N and scanning those is exact, not an
approximation. For r = infinity the norm degrades to the sup norm; for
r = 1 it equals the total integral, attained in the s -> infinity limit and
already reached at the last step boundary.

The uniformly-local variant takes the same weak norm on the intersection of
the domain with balls of a fixed radius rho and maximizes over ball centers
(every grid point). A cell belongs to a ball when its center does. Padding
a restriction with empty cells changes nothing: f* is extended by zeros and
the running average only decays, so the ball restriction can be gathered
cheaply by index offsets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fields import Domain, Field, linf_norm

__all__ = [
    "RearrangementTable",
    "distribution_function",
    "rearrange",
    "lp_norm",
    "weak_norm",
    "weak_norm_detail",
    "uloc_norm",
    "uloc_norm_detail",
]


@dataclass(frozen=True)
class RearrangementTable:
    """Sorted-cell view of a field: f* and f** at the step boundaries.

    `measures[k]` = (k+1) * cell_volume, `decreasing[k]` = f* on the k-th
    cell interval, `averaged[k]` = f**(measures[k]).
    """

    measures: np.ndarray
    decreasing: np.ndarray
    averaged: np.ndarray
    cell_volume: float

    def fstar(self, s: float) -> float:
        """f*(s) = inf{lam > 0 : mu(lam) <= s}; zero past the last cell."""
        if s <= 0:
            raise ValueError("rearrangement argument must be positive")
        k = int(np.searchsorted(self.measures, s, side="left"))
        if k >= self.decreasing.size:
            return 0.0
        return float(self.decreasing[k])

    def fstarstar(self, s: float) -> float:
        """f**(s), extending f* by zero beyond the grid's total measure."""
        if s <= 0:
            raise ValueError("rearrangement argument must be positive")
        total = float(self.measures[-1]) if self.measures.size else 0.0
        if self.measures.size == 0:
            return 0.0
        if s >= total:
            return float(self.averaged[-1]) * total / s
        k = int(np.searchsorted(self.measures, s, side="left"))
        prev_measure = self.measures[k - 1] if k > 0 else 0.0
        prev_integral = (
            self.averaged[k - 1] * self.measures[k - 1] if k > 0 else 0.0
        )
        return float(prev_integral + (s - prev_measure) * self.decreasing[k]) / s


def _sorted_cells(values: np.ndarray) -> np.ndarray:
    flat = np.abs(np.asarray(values, dtype=np.float64)).ravel()
    if flat.size == 0:
        raise ValueError("cannot rearrange an empty field")
    return np.sort(flat)[::-1]


def rearrange(f: Field | np.ndarray, cell_volume: float | None = None) -> RearrangementTable:
    """Exact rearrangement table of a field (or raw cell values)."""
    if isinstance(f, Field):
        if f.blown_up:
            raise ValueError("cannot rearrange a blown-up field")
        values, cell_volume = f.values, f.domain.cell_volume
    else:
        if cell_volume is None:
            raise ValueError("cell_volume required for raw arrays")
        values = f
    dec = _sorted_cells(values)
    w = float(cell_volume)
    measures = w * np.arange(1, dec.size + 1, dtype=np.float64)
    averaged = np.cumsum(dec) * w / measures
    return RearrangementTable(measures, dec, averaged, w)


def distribution_function(f: Field, level: float) -> float:
    """mu(level) = total volume of cells with |f| > level."""
    if level < 0:
        raise ValueError("distribution level must be nonnegative")
    if f.blown_up:
        raise ValueError("cannot measure a blown-up field")
    return float(np.count_nonzero(np.abs(f.values) > level)) * f.domain.cell_volume


def lp_norm(f: Field, r: float) -> float:
    """Cell-weighted L^r norm; r = inf gives the sup norm."""
    if math.isinf(r):
        return linf_norm(f)
    if r < 1:
        raise ValueError("integrability index must be >= 1")
    if f.blown_up:
        return float("inf")
    return float(
        (np.sum(np.abs(f.values) ** r) * f.domain.cell_volume) ** (1.0 / r)
    )


def _weak_from_table(table: RearrangementTable, r: float) -> tuple[float, float]:
    candidates = table.measures ** (1.0 / r) * table.averaged
    k = int(np.argmax(candidates))
    return float(candidates[k]), float(table.measures[k])


def weak_norm(f: Field, r: float) -> float:
    value, _ = weak_norm_detail(f, r)
    return value


def weak_norm_detail(f: Field, r: float) -> tuple[float, float]:
    """Weak-L^r norm and the measure s at which the supremum is attained.

    For r = inf returns (sup norm, 0): the supremum lives at s -> 0.
    """
    if math.isinf(r):
        return linf_norm(f), 0.0
    if r < 1:
        raise ValueError("integrability index must be >= 1")
    if f.blown_up:
        return float("inf"), 0.0
    table = rearrange(f)
    return _weak_from_table(table, r)


def _ball_offsets(domain: Domain, rho: float) -> np.ndarray:
    """Index offsets whose grid displacement has length < rho."""
    reach = [int(math.floor(rho / h)) for h in domain.spacings]
    ranges = [np.arange(-k, k + 1) for k in reach]
    grids = np.meshgrid(*ranges, indexing="ij")
    disp = np.zeros(grids[0].shape)
    for g, h in zip(grids, domain.spacings):
        disp += (g * h) ** 2
    inside = disp < rho**2
    return np.stack([g[inside] for g in grids], axis=-1).reshape(-1, domain.dim)


def uloc_norm(f: Field, r: float, rho: float) -> float:
    value, _ = uloc_norm_detail(f, r, rho)
    return value


def uloc_norm_detail(f: Field, r: float, rho: float) -> tuple[float, tuple[float, ...]]:
    """Uniformly-local weak-L^r norm with ball radius rho.

    Returns (norm, center of the worst ball). Radii below one grid spacing
    are rejected: no cell would be seen. When the ball covers the whole box
    from every center the global weak norm is returned directly.
    """
    if rho <= 0:
        raise ValueError("ball radius must be positive")
    domain = f.domain
    if rho < max(domain.spacings):
        raise ValueError(
            f"ball radius {rho} is below the grid spacing {max(domain.spacings)}"
        )
    if math.isinf(r):
        center = tuple(float(np.mean(b)) for b in domain.bounds)
        return linf_norm(f), center
    if r < 1:
        raise ValueError("integrability index must be >= 1")
    if f.blown_up:
        return float("inf"), tuple(float(np.mean(b)) for b in domain.bounds)

    diameter = math.sqrt(sum((hi - lo) ** 2 for lo, hi in domain.bounds))
    if rho >= diameter:
        # every ball sees the whole box: the local norm is the global one
        value, _ = weak_norm_detail(f, r)
        return value, tuple(float(np.mean(b)) for b in domain.bounds)

    offsets = _ball_offsets(domain, rho)
    n = domain.points_per_axis
    vals = f.values
    w = domain.cell_volume
    best = -1.0
    best_center: tuple[float, ...] = tuple(float(b[0]) for b in domain.bounds)
    # loop over ball centers; gather member cells by offset, drop out-of-box
    for center_idx in np.ndindex(domain.shape):
        pts = offsets + np.asarray(center_idx)
        keep = np.all((pts >= 0) & (pts < n), axis=1)
        pts = pts[keep]
        cells = vals[tuple(pts.T)]
        if cells.size == 0:
            continue
        table = rearrange(cells, cell_volume=w)
        value, _ = _weak_from_table(table, r)
        if value > best:
            best = value
            best_center = tuple(
                float(ax[i]) for ax, i in zip(domain.axes, center_idx)
            )
    return best, best_center
