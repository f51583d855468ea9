from typing import Optional

import numpy as np
from scipy import optimize

from covering_lab.common.exceptions import GridMismatchError, InvalidConfigError
from covering_lab.coversim.pool import run_replicas
from covering_lab.coversim.schemas import HitFrequency, ReplicaOutcome
from covering_lab.coversim.service import box_dim_estimate, summarize_slopes, wilson_interval
from covering_lab.grid import OccupancyGrid
from covering_lab.percolation.schemas import PercIntersection, PercOutcome, PercParams
from covering_lab.sampler.schemas import RngStream
from covering_lab.sampler.service import uniform_at
from covering_lab.utils.error_logging import log_debug

FIXED_POINT_TOL = 1e-12
MAX_ITERATIONS = 10 ** 6
# children expanded per block when refining one level
CHUNK_CELLS = 1 << 20


def _refine(parent: OccupancyGrid, level: int, p: float, stream: RngStream) -> OccupancyGrid:
    """
    Split every live cell of the level-1 grid into its 2^d children and keep
    each with probability p. A child's coin is keyed by its row-major index
    in the level grid, so runs at different p sharing a stream are
    monotonically coupled.
    """
    d = parent.d
    child = OccupancyGrid.empty(d, level)
    rows = 1 << level
    row_cells = 1 << (level * (d - 1))
    # even multiples of 8 keep parent row blocks byte-aligned when d = 1
    step = max(16, CHUNK_CELLS // row_cells)
    for start in range(0, rows, step):
        stop = min(rows, start + step)
        children = parent.dense_rows(start // 2, (stop + 1) // 2)
        if not children.any():
            continue
        for axis in range(d):
            children = np.repeat(children, 2, axis=axis)
        if p < 1:
            live = np.flatnonzero(children)
            counters = np.uint64(start * row_cells) + live.astype(np.uint64)
            np.put(children, live[uniform_at(stream, counters) >= p], False)
        child.write_rows(start, stop, children)
    return child


def _survivors(params: PercParams, rng: RngStream) -> OccupancyGrid:
    grid = OccupancyGrid.full(params.d, 0)
    for level in range(1, params.depth + 1):
        grid = _refine(grid, level, params.p, rng.derive(level))
        if grid.is_empty():
            return OccupancyGrid.empty(params.d, params.depth)
    return grid


def percolate(params: PercParams, rng: RngStream) -> PercOutcome:
    params.check_resources()
    return PercOutcome(grid=_survivors(params, rng))


def _offspring_generating(p: float, arity: int):
    return lambda q: (1 - p + p * q) ** arity


def _check_branching(p: float, arity: int):
    if not 0 < p <= 1:
        raise InvalidConfigError(f"p must lie in (0, 1], got {p}")
    if arity < 2:
        raise InvalidConfigError(f"arity must be >= 2, got {arity}")


def extinction_prob_oracle(p: float, arity: int) -> float:
    """Smallest fixed point of q = (1 - p + p q)^arity."""
    _check_branching(p, arity)
    if p == 1:
        return 0.0
    if p * arity <= 1:
        return 1.0
    f = _offspring_generating(p, arity)
    q = 0.0
    for _ in range(MAX_ITERATIONS):
        nxt = f(q)
        if nxt - q < FIXED_POINT_TOL:
            q = nxt
            break
        q = nxt
    # iterates stay below the root, where f(q) > q; above it f(q) < q until 1
    lower = max(0.0, q - 1e-6)
    return float(optimize.brentq(lambda x: f(x) - x, lower, (q + 1) / 2, xtol=1e-15))


def survival_prob_at_depth(p: float, arity: int, m: int) -> float:
    """P(some depth-m cell survives) = 1 - f^m(0)."""
    _check_branching(p, arity)
    if m < 0:
        raise InvalidConfigError(f"depth must be >= 0, got {m}")
    f = _offspring_generating(p, arity)
    q = 0.0
    for _ in range(m):
        q = f(q)
    return 1.0 - q


def survival_frequency(params: PercParams, replicas: int, rng: RngStream,
                       threads: Optional[int] = None) -> HitFrequency:
    if replicas < 1:
        raise InvalidConfigError(f"replicas must be >= 1, got {replicas}")
    params.check_resources()

    def replica(r: int) -> ReplicaOutcome:
        cells = _survivors(params, rng.derive(r)).count()
        return ReplicaOutcome(replica=r, cells=cells, hit=cells > 0)

    outcomes = run_replicas(replica, replicas, threads)
    survived = sum(1 for outcome in outcomes if outcome.hit)
    low, high = wilson_interval(survived, replicas)
    log_debug("percolation survived %d/%d at s=%s depth=%d", survived, replicas, params.s, params.depth)
    return HitFrequency(hits=survived, trials=replicas, frequency=survived / replicas, ci_low=low, ci_high=high,
                        empty_proxies=replicas - survived, outcomes=outcomes)


def perc_intersect_dim(params: PercParams, E_grid: OccupancyGrid, replicas: int, rng: RngStream,
                       threads: Optional[int] = None) -> PercIntersection:
    """Intersect percolation with E per replica; slopes over j in [m/2, m] of the non-empty intersections."""
    if replicas < 1:
        raise InvalidConfigError(f"replicas must be >= 1, got {replicas}")
    if E_grid.depths != (params.depth,) * params.d:
        raise GridMismatchError(E_grid.depths, (params.depth,) * params.d)
    jmin, jmax = params.depth // 2, params.depth

    def replica(r: int) -> ReplicaOutcome:
        intersection = percolate(params, rng.derive(r)).grid & E_grid
        hit = not intersection.is_empty()
        estimate = box_dim_estimate(intersection, jmin, jmax) if hit else None
        return ReplicaOutcome(replica=r, cells=intersection.count(), hit=hit, estimate=estimate)

    outcomes = run_replicas(replica, replicas, threads)
    hits = sum(1 for outcome in outcomes if outcome.hit)
    low, high = wilson_interval(hits, replicas)
    frequency = HitFrequency(hits=hits, trials=replicas, frequency=hits / replicas, ci_low=low, ci_high=high,
                             empty_proxies=replicas - hits, outcomes=outcomes)
    return PercIntersection(intersection=frequency, dimension=summarize_slopes(outcomes, replicas))
