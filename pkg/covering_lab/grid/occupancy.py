from dataclasses import dataclass
from typing import Sequence

import numpy as np

from covering_lab.common.exceptions import GridMismatchError, ResourceCapError
from covering_lab.utils.config import get_grid_cells_cap


def check_grid_size(depths: Sequence[int]):
    """Fail fast when a grid of 2^(sum of depths) bits exceeds the configured cap."""
    total = int(sum(depths))
    cap = get_grid_cells_cap()
    if 2 ** total > cap:
        d = len(depths)
        max_depth = (cap.bit_length() - 1) // d
        raise ResourceCapError(
            f"grid of 2^{total} bits exceeds the cap of {cap} bits; "
            f"use depth <= {max_depth} for d={d} or raise COVERING_GRID_BITS_CAP",
            requested=2 ** total, cap=cap)


def _row_bytes(depth: int) -> int:
    return max(1, (1 << depth) >> 3)


def _bit_masks(positions: np.ndarray) -> np.ndarray:
    # packbits order: cell 0 of a byte is its most significant bit
    return (0x80 >> (positions & 7)).astype(np.uint8)


def _merge_table(levels: int) -> np.ndarray:
    """Byte -> the 8 / 2^levels bits obtained by OR-ing runs of 2^levels adjacent bits."""
    groups = np.unpackbits(np.arange(256, dtype=np.uint8)[:, None], axis=1).reshape(256, -1, 1 << levels).any(-1)
    weights = 1 << np.arange(groups.shape[1] - 1, -1, -1)
    return (groups @ weights).astype(np.uint8)


MERGE_TABLES = {1: _merge_table(1), 2: _merge_table(2)}


def _coarsen_rows(bits: np.ndarray, old: int, new: int) -> np.ndarray:
    """Coarsen the packed last axis from depth old to depth new without unpacking whole rows."""
    levels = old - new
    lead = bits.shape[:-1]
    if levels == 0:
        return bits
    if levels >= 3:
        block = 1 << (levels - 3)
        merged = bits.reshape(lead + (1 << new, block)).any(axis=-1)
        return np.packbits(merged, axis=-1)
    if new >= 3:
        factor = 1 << levels
        width = 8 // factor
        table = MERGE_TABLES[levels]
        groups = bits.reshape(lead + (_row_bytes(new), factor))
        out = np.zeros(lead + (_row_bytes(new),), dtype=np.uint8)
        for j in range(factor):
            out |= table[groups[..., j]] << np.uint8(width * (factor - 1 - j))
        return out
    # rows of at most 16 cells
    dense = np.unpackbits(bits, axis=-1, count=1 << old).reshape(lead + (1 << new, 1 << levels)).any(axis=-1)
    return np.packbits(dense, axis=-1)


@dataclass(frozen=True, eq=False)
class OccupancyGrid:
    """
    Occupied dyadic cells of the torus [-1/2, 1/2)^d, one bit per cell.

    Axis i is split into 2^depths[i] cells; cell j covers
    [-1/2 + j 2^-m, -1/2 + (j + 1) 2^-m]. The last axis is packed eight
    cells to a byte (np.packbits order). Isotropic grids share one depth,
    anisotropic ones back the snowflake-adapted box counts.
    """
    depths: tuple[int, ...]
    bits: np.ndarray

    def __post_init__(self):
        expected = tuple(1 << m for m in self.depths[:-1]) + (_row_bytes(self.depths[-1]),)
        if self.bits.shape != expected or self.bits.dtype != np.uint8:
            raise ValueError(f"bits must be a uint8 array of shape {expected}, got {self.bits.dtype}{self.bits.shape}")

    @classmethod
    def empty(cls, d: int, depth: int) -> "OccupancyGrid":
        return cls.empty_anisotropic((depth,) * d)

    @classmethod
    def full(cls, d: int, depth: int) -> "OccupancyGrid":
        check_grid_size((depth,) * d)
        if depth >= 3:
            row = np.full(_row_bytes(depth), 0xFF, dtype=np.uint8)
        else:
            row = np.packbits(np.ones(1 << depth, dtype=bool))
        shape = (1 << depth,) * (d - 1) + (_row_bytes(depth),)
        return cls((depth,) * d, np.broadcast_to(row, shape).copy())

    @classmethod
    def empty_anisotropic(cls, depths: Sequence[int]) -> "OccupancyGrid":
        depths = tuple(int(m) for m in depths)
        check_grid_size(depths)
        shape = tuple(1 << m for m in depths[:-1]) + (_row_bytes(depths[-1]),)
        return cls(depths, np.zeros(shape, dtype=np.uint8))

    @classmethod
    def from_dense(cls, cells: np.ndarray) -> "OccupancyGrid":
        cells = np.asarray(cells, dtype=bool)
        depths = tuple(int(n).bit_length() - 1 for n in cells.shape)
        if any(1 << m != n for m, n in zip(depths, cells.shape)):
            raise ValueError(f"grid sides must be powers of two, got {cells.shape}")
        check_grid_size(depths)
        return cls(depths, np.packbits(cells, axis=-1))

    @classmethod
    def from_indices(cls, d: int, depth: int, indices) -> "OccupancyGrid":
        """Grid with the given (n, d) integer cell indices occupied; indices wrap mod 2^depth."""
        grid = cls.empty(d, depth)
        grid.mark(np.asarray(indices, dtype=np.int64).reshape(-1, d) % (1 << depth))
        return grid

    def mark(self, indices: np.ndarray):
        """Set the cells of an (n, d) array of in-range indices."""
        idx = np.asarray(indices, dtype=np.int64).reshape(-1, self.d)
        last = idx[:, -1]
        np.bitwise_or.at(self.bits, tuple(idx[:, :-1].T) + (last >> 3,), _bit_masks(last))

    def mark_product(self, axes: Sequence[np.ndarray]):
        """Set every cell of the product of per-axis sorted, distinct index arrays."""
        row = np.zeros(_row_bytes(self.depths[-1]), dtype=np.uint8)
        last = np.asarray(axes[-1], dtype=np.int64)
        np.bitwise_or.at(row, last >> 3, _bit_masks(last))
        self.bits[np.ix_(*axes[:-1])] |= row

    def _row_slice(self, start: int, stop: int) -> slice:
        return slice(start, stop) if self.d > 1 else slice(start >> 3, (stop + 7) >> 3)

    def dense_rows(self, start: int, stop: int) -> np.ndarray:
        """Cells whose first index lies in [start, stop) as booleans; start is a multiple of 8 when d = 1."""
        count = (1 << self.depths[-1]) if self.d > 1 else stop - start
        return np.unpackbits(self.bits[self._row_slice(start, stop)], axis=-1, count=count).astype(bool)

    def write_rows(self, start: int, stop: int, cells: np.ndarray):
        self.bits[self._row_slice(start, stop)] = np.packbits(cells, axis=-1)

    @property
    def cells(self) -> np.ndarray:
        """Dense boolean copy, one byte per cell."""
        return np.unpackbits(self.bits, axis=-1, count=1 << self.depths[-1]).astype(bool)

    @property
    def d(self) -> int:
        return len(self.depths)

    @property
    def is_isotropic(self) -> bool:
        return len(set(self.depths)) <= 1

    @property
    def depth(self) -> int:
        if not self.is_isotropic:
            raise ValueError(f"anisotropic grid {self.depths} has no single depth")
        return self.depths[0]

    def count(self) -> int:
        return int(np.bitwise_count(self.bits).sum(dtype=np.int64))

    def is_empty(self) -> bool:
        return not self.bits.any()

    def occupied(self) -> np.ndarray:
        return np.argwhere(self.cells)

    def coarsen_to(self, depths: Sequence[int]) -> "OccupancyGrid":
        depths = tuple(int(m) for m in depths)
        if len(depths) != self.d or any(new > old or new < 0 for new, old in zip(depths, self.depths)):
            raise GridMismatchError(self.depths, depths)
        bits = self.bits
        if self.d > 1:
            shape = []
            for old, new in zip(self.depths[:-1], depths[:-1]):
                shape += [1 << new, 1 << (old - new)]
            shape.append(bits.shape[-1])
            bits = np.bitwise_or.reduce(bits.reshape(shape), axis=tuple(range(1, 2 * (self.d - 1), 2)))
        return OccupancyGrid(depths, _coarsen_rows(bits, self.depths[-1], depths[-1]))

    def coarsen(self, levels: int = 1) -> "OccupancyGrid":
        return self.coarsen_to(tuple(m - levels for m in self.depths))

    def counts(self, jmin: int, jmax: int) -> dict[int, int]:
        """Occupied-cell counts N_j after coarsening to depth j, for j in [jmin, jmax]."""
        depth = self.depth
        if not 0 <= jmin <= jmax <= depth:
            raise ValueError(f"need 0 <= jmin <= jmax <= {depth}, got [{jmin}, {jmax}]")
        counts = {}
        current = self if jmax == depth else self.coarsen(depth - jmax)
        for j in range(jmax, jmin - 1, -1):
            counts[j] = current.count()
            if j > jmin:
                current = current.coarsen()
        return dict(sorted(counts.items()))

    def _check_compatible(self, other: "OccupancyGrid"):
        if self.depths != other.depths:
            raise GridMismatchError(self.depths, other.depths)

    def __and__(self, other: "OccupancyGrid") -> "OccupancyGrid":
        self._check_compatible(other)
        return OccupancyGrid(self.depths, self.bits & other.bits)

    def __or__(self, other: "OccupancyGrid") -> "OccupancyGrid":
        self._check_compatible(other)
        return OccupancyGrid(self.depths, self.bits | other.bits)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OccupancyGrid):
            return NotImplemented
        return self.depths == other.depths and bool(np.array_equal(self.bits, other.bits))

    __hash__ = None

    def meets(self, other: "OccupancyGrid") -> bool:
        self._check_compatible(other)
        return bool(np.any(self.bits & other.bits))

    def issubset(self, other: "OccupancyGrid") -> bool:
        self._check_compatible(other)
        return not (self.bits & ~other.bits).any()
