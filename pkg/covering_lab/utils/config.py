# Process-wide resource caps. Environment values apply unless overridden in-process.
from covering_lab.utils.env import env_var

INDEX_CAP: int | None = None
GRID_CELLS_CAP: int | None = None
THREADS: int | None = None


def set_index_cap(cap: int):
    global INDEX_CAP
    if cap < 1:
        raise RuntimeError("Index cap must be positive.")
    INDEX_CAP = cap


def get_index_cap() -> int:
    if INDEX_CAP is not None:
        return INDEX_CAP
    return env_var('COVERING_INDEX_CAP', cast=int, default=10 ** 9)


def set_grid_cells_cap(cap: int):
    global GRID_CELLS_CAP
    if cap < 1:
        raise RuntimeError("Grid cap must be positive.")
    GRID_CELLS_CAP = cap


def get_grid_cells_cap() -> int:
    if GRID_CELLS_CAP is not None:
        return GRID_CELLS_CAP
    return env_var('COVERING_GRID_BITS_CAP', cast=int, default=2 ** 31)


def set_threads(threads: int):
    global THREADS
    if threads < 1:
        raise RuntimeError("Thread count must be at least 1.")
    THREADS = threads


def get_threads() -> int:
    if THREADS is not None:
        return THREADS
    return max(1, env_var('COVERING_THREADS', cast=int, default=1))


def reset_overrides():
    global INDEX_CAP, GRID_CELLS_CAP, THREADS
    INDEX_CAP = None
    GRID_CELLS_CAP = None
    THREADS = None
