import math
from typing import Iterable, Sequence, Union

import numpy as np
from scipy import stats

from covering_lab.common.exceptions import InvalidConfigError, UnsupportedTargetError
from covering_lab.geometry.schemas import SnowflakeExponents
from covering_lab.grid import OccupancyGrid, check_grid_size
from covering_lab.targets.schemas import AffineSlice, DigitCantor, TargetSet, TargetUnion

# extra cylinder levels examined past the grid resolution before a straddling
# cylinder is marked on both sides of a cell boundary
EXTRA_LEVELS = 40


def target_dims(F: TargetSet) -> tuple[float, float]:
    """(dim_h, dim_p); the families here have equal Hausdorff and packing dimension."""
    return F.dim, F.dim


def axis_dimensions(F: TargetSet) -> tuple[float, ...]:
    """Dimension of each coordinate factor of a product target."""
    if isinstance(F, DigitCantor):
        return tuple(math.log(len(allowed)) / math.log(F.base) for allowed in F.digits)
    if isinstance(F, AffineSlice):
        return tuple(0.0 if axis in F.fixed else 1.0 for axis in range(1, F.d + 1))
    raise UnsupportedTargetError(F.kind)


def _cantor_axis_cells(base: int, allowed: tuple[int, ...], depth: int) -> np.ndarray:
    scale = 1 << depth
    if len(allowed) == base:
        return np.arange(scale, dtype=np.int64)
    max_level = math.ceil(depth * math.log(2) / math.log(base)) + EXTRA_LEVELS
    marked = set()
    # cylinder [N / width, (N + 1) / width] at the given level, width = base^level
    stack = [(0, 0, 1)]
    while stack:
        level, N, width = stack.pop()
        lo = (N * scale) // width
        hi = max(lo, -((-(N + 1) * scale) // width) - 1)
        if lo == hi or level == max_level:
            marked.update(range(lo, hi + 1))
            continue
        for digit in allowed:
            stack.append((level + 1, N * base + digit, width * base))
    return np.array(sorted(marked), dtype=np.int64)


def _slice_axis_cells(value: float, depth: int) -> np.ndarray:
    scale = 1 << depth
    position = (value + 0.5) * scale
    cell = int(math.floor(position))
    if position == cell:
        # on a cell boundary: both closed neighbours meet the slice
        return np.unique(np.array([(cell - 1) % scale, cell % scale], dtype=np.int64))
    return np.array([cell % scale], dtype=np.int64)


def target_axis_cells(F: TargetSet, axis: int, depth: int) -> np.ndarray:
    """Sorted depth-m cell indices occupied by coordinate ``axis`` (0-based) of a product target."""
    if isinstance(F, TargetUnion):
        raise UnsupportedTargetError(F.kind)
    if not 0 <= axis < F.d:
        raise InvalidConfigError(f"axis {axis} outside 0..{F.d - 1}")
    if depth < 0:
        raise InvalidConfigError(f"depth must be >= 0, got {depth}")
    if isinstance(F, DigitCantor):
        return _cantor_axis_cells(F.base, F.digits[axis], depth)
    if axis + 1 in F.fixed:
        return _slice_axis_cells(F.fixed[axis + 1], depth)
    return np.arange(1 << depth, dtype=np.int64)


def rasterize_target(F: TargetSet, depth: Union[int, Sequence[int]]) -> OccupancyGrid:
    """Grid of depth-m cells meeting F; a sequence of depths gives an anisotropic grid."""
    depths = (int(depth),) * F.d if isinstance(depth, int) else tuple(int(m) for m in depth)
    if len(depths) != F.d:
        raise InvalidConfigError(f"{len(depths)} depths given for a target in dimension {F.d}")
    check_grid_size(depths)
    if isinstance(F, TargetUnion):
        grid = OccupancyGrid.empty_anisotropic(depths)
        for part in F.parts:
            grid = grid | rasterize_target(part, depths)
        return grid
    grid = OccupancyGrid.empty_anisotropic(depths)
    axes = [target_axis_cells(F, i, m) for i, m in enumerate(depths)]
    grid.mark_product(axes)
    return grid


def _check_exponents(F: TargetSet, H: SnowflakeExponents):
    if isinstance(F, TargetUnion):
        raise UnsupportedTargetError(F.kind)
    if H.d != F.d:
        raise InvalidConfigError(f"{H.d} exponents given for a target in dimension {F.d}")


def target_dim_snowflake(F: TargetSet, H: SnowflakeExponents) -> tuple[float, float]:
    """Snowflake dimensions of a product target: sum of s_i / H_i over its coordinate factors."""
    _check_exponents(F, H)
    value = float(sum(s / h for s, h in zip(axis_dimensions(F), H.H)))
    return value, value


def snowflake_depths(level: int, H: SnowflakeExponents) -> tuple[int, ...]:
    return tuple(int(math.floor(level / h + 0.5)) for h in H.H)


def snowflake_box_counts(F: TargetSet, H: SnowflakeExponents, levels: Iterable[int]) -> dict[int, int]:
    """Occupied cells of the snowflake-adapted grid (depth round(l / H_i) on axis i) per level l."""
    _check_exponents(F, H)
    counts = {}
    for level in levels:
        depths = snowflake_depths(level, H)
        counts[level] = math.prod(len(target_axis_cells(F, i, m)) for i, m in enumerate(depths))
    return counts


def snowflake_box_dim(F: TargetSet, H: SnowflakeExponents, levels: Iterable[int]) -> float:
    counts = snowflake_box_counts(F, H, levels)
    fit = stats.linregress(list(counts), np.log2(list(counts.values())))
    return float(fit.slope)
