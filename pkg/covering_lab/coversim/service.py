import math
from typing import Iterable, Optional

import numpy as np
from scipy import stats

from covering_lab.common.exceptions import (DegenerateOutcomeError, EmptySetError, GridMismatchError,
                                            InvalidConfigError, RegimeMismatchError, ResourceCapError)
from covering_lab.coversim.pool import run_replicas
from covering_lab.coversim.schemas import DimEstimate, DimSummary, GenerationDraw, HitFrequency, ReplicaOutcome, \
    SimWindow
from covering_lab.geometry.service import cells_touched
from covering_lab.geometry.torus import torus_delta
from covering_lab.grid import OccupancyGrid
from covering_lab.predictor.schemas import RegimeVerdict
from covering_lab.predictor.service import (classify_hitting, rotated_lower, s0_rotated, snowflake_profile,
                                            torus_upper)
from covering_lab.radii.schemas import BucketTable
from covering_lab.radii.service import (alpha_of, bucket_index, buckets, condition_c_check, generation_indices,
                                        radii_at)
from covering_lab.sampler.schemas import RngStream
from covering_lab.sampler.service import haar_rotations, uniform_points
from covering_lab.targets.schemas import AffineSlice, TargetSet
from covering_lab.targets.service import rasterize_target, target_dim_snowflake, target_dims
from covering_lab.utils.config import get_index_cap
from covering_lab.utils.enums import Verdict
from covering_lab.utils.error_logging import log_debug

# stream children below rng.derive(k): centers and rotations of generation k
CENTERS_STREAM = 0
ROTATIONS_STREAM = 1


def draw_generation(k: int, window: SimWindow, rng: RngStream, table: Optional[BucketTable] = None) -> GenerationDraw:
    if not window.m0 <= k <= window.m1:
        raise InvalidConfigError(f"generation {k} outside the window [{window.m0}, {window.m1}]")
    table = table or buckets(window.seq, window.m1)
    size = table.counts[k]
    cap = get_index_cap()
    if size > cap:
        raise ResourceCapError(f"generation {k} has {size} generators, cap is {cap}", requested=size, cap=cap)
    indices = generation_indices(table, k)
    stream = rng.derive(k)
    centers = uniform_points(stream.derive(CENTERS_STREAM), size, window.d)
    rotations = haar_rotations(stream.derive(ROTATIONS_STREAM), size, window.d) if window.rotated else None
    radii = radii_at(window.seq, indices) if size else np.empty(0)
    return GenerationDraw(k=k, indices=indices, centers=centers, radii=radii, rotations=rotations)


def rasterize_generation(draw: GenerationDraw, window: SimWindow) -> OccupancyGrid:
    return cells_touched(window.shape, draw.centers, draw.radii, window.depth, rotations=draw.rotations)


def generation_rasterize(k: int, window: SimWindow, rng: RngStream,
                         table: Optional[BucketTable] = None) -> OccupancyGrid:
    """Union of the generation-k shapes at grid depth m."""
    window.check_resources()
    return rasterize_generation(draw_generation(k, window, rng, table), window)


def limsup_from_generations(draws: Iterable[GenerationDraw], window: SimWindow) -> OccupancyGrid:
    """AND over generations of their rasterized unions; stops once the result is empty."""
    window.check_resources()
    proxy = None
    for draw in sorted(draws, key=lambda draw: draw.k):
        layer = rasterize_generation(draw, window)
        proxy = layer if proxy is None else proxy & layer
        if proxy.is_empty():
            break
    return proxy if proxy is not None else OccupancyGrid.empty(window.d, window.depth)


def _proxy(window: SimWindow, rng: RngStream, table: BucketTable) -> OccupancyGrid:
    draws = (draw_generation(k, window, rng, table) for k in range(window.m0, window.m1 + 1))
    return limsup_from_generations(draws, window)


def limsup_proxy(window: SimWindow, rng: RngStream) -> OccupancyGrid:
    """
    Finite-depth proxy of the covering set: the intersection over k = m0..m1
    of the union of generation-k shapes.

    With an unbounded window this is a subset of the covering set, while each
    truncated factor over-covers its infinite-tail counterpart.
    """
    window.check_resources()
    return _proxy(window, rng, buckets(window.seq, window.m1))


def box_dim_estimate(grid: OccupancyGrid, jmin: int, jmax: int) -> DimEstimate:
    """Least-squares slope of log2 N_j against j."""
    if not 0 <= jmin < jmax <= grid.depth:
        raise InvalidConfigError(f"need 0 <= jmin < jmax <= {grid.depth}, got [{jmin}, {jmax}]")
    if grid.is_empty():
        raise EmptySetError()
    counts = grid.counts(jmin, jmax)
    scales = np.array(list(counts), dtype=np.float64)
    logs = np.log2(np.array(list(counts.values()), dtype=np.float64))
    fit = stats.linregress(scales, logs)
    residual = float(np.sqrt(np.mean((logs - (fit.intercept + fit.slope * scales)) ** 2)))
    return DimEstimate(slope=float(fit.slope), intercept=float(fit.intercept), residual=residual,
                       counts=counts, jmin=jmin, jmax=jmax)


def hit_test(E_grid: OccupancyGrid, F_grid: OccupancyGrid) -> bool:
    if E_grid.depths != F_grid.depths:
        raise GridMismatchError(E_grid.depths, F_grid.depths)
    return E_grid.meets(F_grid)


def wilson_interval(hits: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    if trials < 1:
        raise InvalidConfigError("Wilson interval needs at least one trial")
    z = float(stats.norm.ppf(0.5 + level / 2))
    p = hits / trials
    denominator = 1 + z * z / trials
    center = (p + z * z / (2 * trials)) / denominator
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denominator
    return max(0.0, center - half), min(1.0, center + half)


def predicted_verdict(window: SimWindow, F: TargetSet) -> RegimeVerdict:
    """Regime of the target under the window's generator family, from the predictor."""
    d = window.d
    dim_h, dim_p = target_dims(F)
    if window.shape.kind == "ball":
        alpha = alpha_of(window.seq, float(d))
        holds = condition_c_check(window.seq, float(d)).holds
        return classify_hitting(float(d), alpha, dim_h, dim_p, holds)

    H = window.shape.exponents(d)
    if window.rotated:
        s0 = s0_rotated(H, window.seq, d)
        lower = rotated_lower(s0, d, dim_h)
        if torus_upper(s0, d, dim_p).kind == "EmptyAS":
            verdict = Verdict.AVOID_AS
        elif lower.kind == "LowerBound" and lower.value > 0:
            verdict = Verdict.HIT_AS_HAUSDORFF
        else:
            verdict = Verdict.INDETERMINATE
        return RegimeVerdict(verdict=verdict, t=float(d), alpha=alpha_of(window.seq, float(d)), dim_h=dim_h,
                             dim_p=dim_p, s0=s0)

    # aligned rectangles are balls of the snowflake metric
    profile = snowflake_profile(H, window.seq)
    return profile.classify(*target_dim_snowflake(F, H))


def _check_target(window: SimWindow, F: TargetSet):
    if F.d != window.d:
        raise InvalidConfigError(f"target dimension {F.d} does not match d = {window.d}")


def summarize_slopes(outcomes: list[ReplicaOutcome], replicas: int) -> Optional[DimSummary]:
    slopes = [outcome.slope for outcome in outcomes if outcome.estimate is not None]
    if not slopes:
        return None
    q1, median, q3 = np.percentile(slopes, [25, 50, 75])
    return DimSummary(median=float(median), q1=float(q1), q3=float(q3), nonempty=len(slopes),
                      replicas=replicas, outcomes=outcomes)


def _scale_range(window: SimWindow, jmin: Optional[int], jmax: Optional[int]) -> tuple[int, int]:
    return (window.depth // 2 if jmin is None else jmin), (window.depth if jmax is None else jmax)


def hitting_frequency(window: SimWindow, F: TargetSet, replicas: int, rng: RngStream,
                      threads: Optional[int] = None) -> HitFrequency:
    """Fraction of replicas whose proxy meets the rasterized target, with a Wilson 95% interval."""
    if replicas < 1:
        raise InvalidConfigError(f"replicas must be >= 1, got {replicas}")
    _check_target(window, F)
    window.check_resources()
    target = rasterize_target(F, window.depth)
    table = buckets(window.seq, window.m1)

    def replica(r: int) -> ReplicaOutcome:
        proxy = _proxy(window, rng.derive(r), table)
        return ReplicaOutcome(replica=r, cells=proxy.count(), hit=hit_test(proxy, target))

    outcomes = run_replicas(replica, replicas, threads)
    hits = sum(1 for outcome in outcomes if outcome.hit)
    low, high = wilson_interval(hits, replicas)
    log_debug("hitting frequency %d/%d", hits, replicas)
    return HitFrequency(hits=hits, trials=replicas, frequency=hits / replicas, ci_low=low, ci_high=high,
                        empty_proxies=sum(1 for outcome in outcomes if outcome.cells == 0), outcomes=outcomes)


def proxy_dimension(window: SimWindow, replicas: int, rng: RngStream, jmin: Optional[int] = None,
                    jmax: Optional[int] = None, threads: Optional[int] = None) -> DimSummary:
    """Median and quartiles of the proxy's box-counting slope over replicas with a non-empty proxy."""
    if replicas < 1:
        raise InvalidConfigError(f"replicas must be >= 1, got {replicas}")
    window.check_resources()
    jmin, jmax = _scale_range(window, jmin, jmax)
    table = buckets(window.seq, window.m1)

    def replica(r: int) -> ReplicaOutcome:
        proxy = _proxy(window, rng.derive(r), table)
        estimate = None if proxy.is_empty() else box_dim_estimate(proxy, jmin, jmax)
        return ReplicaOutcome(replica=r, cells=proxy.count(), estimate=estimate)

    summary = summarize_slopes(run_replicas(replica, replicas, threads), replicas)
    if summary is None:
        raise DegenerateOutcomeError("all covering-set proxies are empty; widen the window or deepen the grid")
    return summary


def intersection_dim(window: SimWindow, F: TargetSet, replicas: int, rng: RngStream,
                     threads: Optional[int] = None, require_hitting: bool = True,
                     jmin: Optional[int] = None, jmax: Optional[int] = None) -> DimSummary:
    """Box-counting slope of proxy AND target, aggregated over replicas with a non-empty intersection."""
    if replicas < 1:
        raise InvalidConfigError(f"replicas must be >= 1, got {replicas}")
    _check_target(window, F)
    if require_hitting:
        verdict = predicted_verdict(window, F)
        if not verdict.hits:
            raise RegimeMismatchError(verdict.verdict.value)
    window.check_resources()
    jmin, jmax = _scale_range(window, jmin, jmax)
    target = rasterize_target(F, window.depth)
    table = buckets(window.seq, window.m1)

    def replica(r: int) -> ReplicaOutcome:
        intersection = _proxy(window, rng.derive(r), table) & target
        hit = not intersection.is_empty()
        estimate = box_dim_estimate(intersection, jmin, jmax) if hit else None
        return ReplicaOutcome(replica=r, cells=intersection.count(), hit=hit, estimate=estimate)

    summary = summarize_slopes(run_replicas(replica, replicas, threads), replicas)
    if summary is None:
        raise DegenerateOutcomeError()
    return summary


def _horizontal_line(window: SimWindow, F: TargetSet) -> float:
    if window.d != 2 or window.shape.kind != "axis_rect" or window.rotated:
        raise InvalidConfigError("projection counts need aligned rectangles in d = 2")
    if not isinstance(F, AffineSlice) or F.d != 2 or set(F.fixed) != {2}:
        raise InvalidConfigError("projection counts need a horizontal line target")
    return F.fixed[2]


def projection_hit_count(window: SimWindow, F: TargetSet, rng: RngStream, n_max: int, kmin: int = 0) -> int:
    """
    Number of n <= n_max (in generations k >= kmin) whose rectangle's vertical
    shadow covers the line height b. Uses the same centers as the 2-d run.
    """
    b = _horizontal_line(window, F)
    if n_max < 1:
        raise InvalidConfigError(f"n_max must be >= 1, got {n_max}")
    exponent = 1.0 / window.shape.H[1]
    kmax = int(bucket_index(radii_at(window.seq, [n_max])[0]))
    table = buckets(window.seq, kmax)
    count = 0
    for k in range(max(0, kmin), kmax + 1):
        start = table.starts[k]
        size = min(table.counts[k], n_max - start + 1)
        if size <= 0:
            continue
        heights = uniform_points(rng.derive(k).derive(CENTERS_STREAM), size, 2)[:, 1]
        shadows = np.power(radii_at(window.seq, np.arange(start, start + size)), exponent)
        count += int(np.count_nonzero(np.abs(torus_delta(b, heights)) <= shadows / 2))
    return count


def projection_hit_counts(window: SimWindow, F: TargetSet, replicas: int, rng: RngStream, n_max: int,
                          kmin: int = 0, threads: Optional[int] = None) -> list[int]:
    if replicas < 1:
        raise InvalidConfigError(f"replicas must be >= 1, got {replicas}")
    return run_replicas(lambda r: projection_hit_count(window, F, rng.derive(r), n_max, kmin), replicas, threads)
