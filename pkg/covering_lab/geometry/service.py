from typing import Optional, Sequence

import numpy as np

from covering_lab.common.exceptions import InvalidConfigError
from covering_lab.geometry.schemas import (AxisRect, Ball, BoxExtent, GeneratingShape, RotatedRect, ShapeFamily,
                                           SnowflakeExponents)
from covering_lab.geometry.torus import torus_delta, wrap
from covering_lab.grid import OccupancyGrid

# upper bound on (shapes x candidate cells) evaluated in one vectorized block
CANDIDATE_BUDGET = 1 << 22
BLOCK_SHAPES = 4096

__all__ = [
    "wrap", "torus_delta", "kappa_dist", "kappa_ball_as_rect", "shape_extent", "shape_cell_intersects",
    "cells_touched", "predicate_is_exact",
]


def kappa_dist(x, y, H: SnowflakeExponents) -> float:
    """Snowflake distance max_i 2^H_i |x_i - y_i|^H_i with torus coordinate distances."""
    delta = np.abs(torus_delta(x, y))
    if delta.shape != (H.d,):
        raise InvalidConfigError(f"points of dimension {delta.shape} do not match {H.d} exponents")
    h = H.array
    return float(np.max(np.power(2.0, h) * np.power(delta, h)))


def kappa_ball_as_rect(center, r: float, H: SnowflakeExponents) -> BoxExtent:
    """The closed snowflake ball of radius r is the box with sides r^(1/H_i)."""
    if not 0 < r < 1:
        raise InvalidConfigError(f"radius must lie in (0, 1), got {r}")
    return BoxExtent(center=wrap(center), half_sides=np.power(r, 1.0 / H.array) / 2)


def shape_extent(shape: GeneratingShape, d: Optional[int] = None) -> tuple[np.ndarray, float]:
    """Axis-aligned half extents of the placed shape and the radius of its bounding ball."""
    if isinstance(shape, Ball):
        if d is None:
            raise InvalidConfigError("ball extents need the ambient dimension")
        return np.full(d, shape.r), shape.r
    half = shape.half_sides
    radius = float(np.linalg.norm(half))
    if isinstance(shape, RotatedRect):
        return np.abs(shape.rotation) @ half, radius
    return half, radius


def predicate_is_exact(kind: str, d: int, rotated: bool = False) -> bool:
    """False only for rotated rectangles in d >= 3, which use a bounding-ball test."""
    return not ((rotated or kind == "rotated_rect") and d >= 3)


def _hits(kind: str, rotated: bool, x: np.ndarray, lower: np.ndarray, cell: float, radii: np.ndarray,
          aabb_half: np.ndarray, rect_half: Optional[np.ndarray], rotations: Optional[np.ndarray]) -> np.ndarray:
    """
    Closed shape-versus-closed-cell test for a block of shapes.

    x is (B, 1, d), lower holds lower cell corners (B, P, d) in the same lift as x.
    Returns a (B, P) boolean mask.
    """
    d = x.shape[-1]
    upper = lower + cell
    hit = np.all((lower <= x + aabb_half[:, None, :]) & (upper >= x - aabb_half[:, None, :]), axis=-1)

    if kind == "ball":
        nearest = np.clip(x, lower, upper)
        return hit & (np.sum((nearest - x) ** 2, axis=-1) <= radii[:, None] ** 2)
    if not rotated or d == 1:
        return hit
    if d == 2:
        # separating axes: the cell axes are covered by the bounding box, the rectangle axes here
        offset = lower + cell / 2 - x
        for j in range(d):
            axis = rotations[:, :, j]
            projection = np.abs(np.einsum("bpi,bi->bp", offset, axis))
            reach = rect_half[:, j][:, None] + (cell / 2) * np.abs(axis).sum(axis=-1)[:, None]
            hit &= projection <= reach
        return hit
    # conservative for d >= 3
    nearest = np.clip(x, lower, upper)
    bound = np.linalg.norm(rect_half, axis=-1)
    return hit & (np.sum((nearest - x) ** 2, axis=-1) <= bound[:, None] ** 2)


def _shape_arrays(kind: str, H: SnowflakeExponents, radii: np.ndarray, rotations: Optional[np.ndarray], d: int):
    if kind == "ball":
        return np.repeat(radii[:, None], d, axis=1), None
    rect_half = np.power(radii[:, None], 1.0 / H.array[None, :]) / 2
    if rotations is None:
        return rect_half, rect_half
    return np.einsum("nij,nj->ni", np.abs(rotations), rect_half), rect_half


def shape_cell_intersects(shape: GeneratingShape, x, cell: Sequence[int], depth: int) -> bool:
    """TRUE iff the closed shape placed at x meets the closed depth-m cell, with torus wrap-around."""
    if depth < 0:
        raise InvalidConfigError(f"depth must be >= 0, got {depth}")
    x = wrap(np.atleast_1d(x))
    d = x.shape[0]
    cell_index = np.asarray(cell, dtype=np.int64)
    if cell_index.shape != (d,):
        raise InvalidConfigError(f"cell index must have {d} coordinates")

    if isinstance(shape, Ball):
        kind, H, rotations = "ball", SnowflakeExponents.isotropic(d), None
    elif isinstance(shape, RotatedRect):
        kind, H, rotations = "rotated_rect", shape.H, shape.rotation[None, :, :]
    else:
        kind, H, rotations = "axis_rect", shape.H, None
    if H.d != d:
        raise InvalidConfigError(f"shape of dimension {H.d} placed in dimension {d}")

    radii = np.array([shape.r])
    aabb_half, rect_half = _shape_arrays(kind, H, radii, rotations, d)
    scale = 1 << depth
    shifts = np.stack(np.meshgrid(*([np.array([-1, 0, 1])] * d), indexing="ij"), axis=-1).reshape(-1, d)
    lower = -0.5 + (cell_index[None, :] % scale + shifts * scale) / scale
    hit = _hits(kind, rotations is not None, x[None, None, :], lower[None, :, :], 1.0 / scale, radii,
                aabb_half, rect_half, rotations)
    return bool(hit.any())


def cells_touched(shape: ShapeFamily, centers, radii, depth: int,
                  rotations: Optional[np.ndarray] = None) -> OccupancyGrid:
    """Occupancy grid of the union of shapes of the family placed at centers with the given radii."""
    centers = wrap(np.atleast_2d(np.asarray(centers, dtype=np.float64)))
    n, d = centers.shape
    radii = np.asarray(radii, dtype=np.float64).reshape(n)
    grid = OccupancyGrid.empty(d, depth)
    if n == 0:
        return grid
    if shape.kind == "rotated_rect" and rotations is None:
        raise InvalidConfigError("rotated rectangles need rotations")
    rotated = rotations is not None and shape.kind != "ball"
    if rotated:
        rotations = np.asarray(rotations, dtype=np.float64).reshape(n, d, d)

    H = shape.exponents(d)
    if H.d != d:
        raise InvalidConfigError(f"shape exponents of dimension {H.d} used in dimension {d}")
    aabb_half, rect_half = _shape_arrays(shape.kind, H, radii, rotations if rotated else None, d)

    scale = float(1 << depth)
    cell = 1.0 / scale
    lo = np.ceil((centers - aabb_half + 0.5) * scale).astype(np.int64) - 1
    hi = np.floor((centers + aabb_half + 0.5) * scale).astype(np.int64)
    span = hi - lo + 1

    start = 0
    while start < n:
        stop = min(n, start + BLOCK_SHAPES)
        while True:
            box = span[start:stop].max(axis=0)
            if (stop - start) * int(np.prod(box)) <= CANDIDATE_BUDGET or stop - start == 1:
                break
            stop = start + max(1, (stop - start) // 2)

        block = slice(start, stop)
        offsets = np.stack(np.meshgrid(*[np.arange(s) for s in box], indexing="ij"), axis=-1).reshape(-1, d)
        index = lo[block, None, :] + offsets[None, :, :]
        valid = np.all(offsets[None, :, :] < span[block, None, :], axis=-1)
        hit = _hits(shape.kind, rotated, centers[block, None, :], -0.5 + index * cell, cell, radii[block],
                    aabb_half[block], None if rect_half is None else rect_half[block],
                    rotations[block] if rotated else None)
        marked = index[hit & valid] % (1 << depth)
        grid.mark(marked)
        start = stop
    return grid
