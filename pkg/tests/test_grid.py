import numpy as np
import pytest

from covering_lab.common.exceptions import GridMismatchError, ResourceCapError
from covering_lab.grid import OccupancyGrid
from covering_lab.utils.config import set_grid_cells_cap


def test_empty_and_full():
    assert OccupancyGrid.empty(2, 3).count() == 0
    assert OccupancyGrid.empty(2, 3).is_empty()
    assert OccupancyGrid.full(1, 4).count() == 16


def test_counts_follow_coarsening():
    grid = OccupancyGrid.from_indices(1, 3, [[0], [1], [5]])
    assert grid.counts(0, 3) == {0: 1, 1: 2, 2: 2, 3: 3}
    assert grid.coarsen().count() == 2
    assert np.array_equal(grid.coarsen().occupied().ravel(), [0, 2])


def test_coarsen_marks_parent_iff_a_child_is_marked():
    rng = np.random.default_rng(3)
    cells = rng.random((16, 16)) < 0.1
    grid = OccupancyGrid.from_dense(cells)
    coarse = grid.coarsen()
    for i in range(8):
        for j in range(8):
            assert coarse.cells[i, j] == cells[2 * i:2 * i + 2, 2 * j:2 * j + 2].any()


def test_from_indices_wraps():
    grid = OccupancyGrid.from_indices(2, 2, [[-1, 4]])
    assert grid.cells[3, 0]
    assert grid.count() == 1


def test_set_operations():
    a = OccupancyGrid.from_indices(1, 3, [[1], [2]])
    b = OccupancyGrid.from_indices(1, 3, [[2], [6]])
    assert (a & b) == OccupancyGrid.from_indices(1, 3, [[2]])
    assert (a | b).count() == 3
    assert (a & b).issubset(a)
    assert not a.issubset(b)


def test_mismatched_depths_rejected():
    with pytest.raises(GridMismatchError):
        OccupancyGrid.empty(1, 3) & OccupancyGrid.empty(1, 4)
    with pytest.raises(GridMismatchError):
        OccupancyGrid.empty(1, 3).issubset(OccupancyGrid.empty(2, 3))


def test_anisotropic_grid_has_no_single_depth():
    grid = OccupancyGrid.empty_anisotropic((2, 3))
    assert grid.cells.shape == (4, 8)
    assert not grid.is_isotropic
    with pytest.raises(ValueError):
        grid.depth


def test_grid_cap_fails_fast_with_advice():
    set_grid_cells_cap(2 ** 10)
    OccupancyGrid.empty(2, 5)
    with pytest.raises(ResourceCapError, match="depth <= 5"):
        OccupancyGrid.empty(2, 6)


def test_one_bit_per_cell():
    assert OccupancyGrid.empty(1, 16).bits.nbytes == 2 ** 13
    assert OccupancyGrid.empty(2, 8).bits.nbytes == 2 ** 13
    assert OccupancyGrid.full(2, 2).count() == 16


@pytest.mark.parametrize("depth", [2, 3, 4, 5, 6, 9, 12])
def test_coarsening_agrees_with_dense_reduction(depth):
    rng = np.random.default_rng(depth)
    cells = rng.random(1 << depth) < 0.05
    grid = OccupancyGrid.from_dense(cells)
    for new in range(depth + 1):
        expected = cells.reshape(1 << new, -1).any(axis=1)
        coarse = grid.coarsen_to((new,))
        assert np.array_equal(coarse.cells, expected)
        assert coarse.count() == expected.sum()


def test_anisotropic_coarsening():
    rng = np.random.default_rng(11)
    cells = rng.random((8, 64)) < 0.02
    coarse = OccupancyGrid.from_dense(cells).coarsen_to((1, 4))
    assert np.array_equal(coarse.cells, cells.reshape(2, 4, 16, 4).any(axis=(1, 3)))


def test_row_blocks_round_trip():
    grid = OccupancyGrid.from_indices(1, 6, [[3], [17], [40]])
    block = grid.dense_rows(16, 32)
    assert np.flatnonzero(block).tolist() == [1]
    copy = OccupancyGrid.empty(1, 6)
    copy.write_rows(0, 64, grid.dense_rows(0, 64))
    assert copy == grid


def test_product_marking():
    grid = OccupancyGrid.empty(2, 4)
    grid.mark_product([np.array([1, 5]), np.array([0, 9, 15])])
    assert grid.count() == 6
    assert grid.cells[5, 9] and not grid.cells[5, 8]
