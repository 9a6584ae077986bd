"""Window/ball index plans for lattice sweeps.

A *plan* fixes the geometry of a sliding-ball computation on the lattice: a
window of base points, the set of ball (or annulus) offsets, and the padded
bounding box that contains every ``base + offset``.  Function values are then
evaluated once on the padded box and every sweep becomes a flat gather that
``_kernels.ball_sums`` can chew through.

Dimension-agnostic by construction: coordinates are linearized with C-order
strides, so the same plan code serves d = 1, 2, 3, ...
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .space import Space


def window_points(space: Space, radius: int) -> np.ndarray:
    """All lattice points with sup-norm at most ``radius`` (shape (N, d))."""
    r = int(radius)
    axes = [np.arange(0, r + 1)] * space.m + [np.arange(-r, r + 1)] * (space.d - space.m)
    grids = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)


@dataclass
class GatherPlan:
    space: Space
    base_points: np.ndarray      # (N, d) window points
    offsets: np.ndarray          # (K, d) ball/annulus offsets
    padded_points: np.ndarray    # (P, d) every point the sweep touches
    base_idx: np.ndarray         # (N,) flat indices of base points
    lin_offsets: np.ndarray      # (K,) linearized offsets

    @property
    def n_base(self) -> int:
        return self.base_points.shape[0]


def make_plan(space: Space, window_radius: int, offsets: np.ndarray) -> GatherPlan:
    """Build the padded-box index plan for ``{x + u : x in window, u in offsets}``."""
    offsets = np.asarray(offsets, dtype=np.int64).reshape(-1, space.d)
    d, m = space.d, space.m
    r = int(window_radius)
    win_lo = np.array([0] * m + [-r] * (d - m), dtype=np.int64)
    win_hi = np.full(d, r, dtype=np.int64)
    off_lo = offsets.min(axis=0)
    off_hi = offsets.max(axis=0)
    pad_lo = win_lo + np.minimum(0, off_lo)
    pad_hi = win_hi + np.maximum(0, off_hi)
    shape = (pad_hi - pad_lo + 1).astype(np.int64)

    strides = np.ones(d, dtype=np.int64)
    for i in range(d - 2, -1, -1):
        strides[i] = strides[i + 1] * shape[i + 1]

    base_points = window_points(space, r)
    base_idx = (base_points - pad_lo) @ strides
    lin_offsets = offsets @ strides

    axes = [np.arange(pad_lo[i], pad_hi[i] + 1) for i in range(d)]
    grids = np.meshgrid(*axes, indexing="ij")
    padded_points = np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)

    return GatherPlan(
        space=space,
        base_points=base_points,
        offsets=offsets,
        padded_points=padded_points,
        base_idx=base_idx,
        lin_offsets=lin_offsets,
    )


def evaluate_padded(plan: GatherPlan, evaluator) -> np.ndarray:
    """Evaluate a batch evaluator on the plan's padded points (float64 flat)."""
    vals = np.asarray(evaluator(plan.padded_points.astype(np.float64)), dtype=np.float64)
    return np.ascontiguousarray(vals.ravel())
