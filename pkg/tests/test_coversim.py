import numpy as np
import pytest
from pydantic import ValidationError

from covering_lab.common.exceptions import (DegenerateOutcomeError, EmptySetError, GridMismatchError,
                                            InvalidConfigError, RegimeMismatchError, ResourceCapError)
from covering_lab.coversim import (GenerationDraw, SimWindow, box_dim_estimate, draw_generation, generation_rasterize,
                                   hit_test, hitting_frequency, intersection_dim, limsup_from_generations, limsup_proxy,
                                   predicted_verdict, projection_hit_counts, proxy_dimension, run_replicas,
                                   wilson_interval)
from covering_lab.geometry import AxisRectFamily, RotatedRectFamily, SnowflakeExponents, torus_delta
from covering_lab.grid import OccupancyGrid
from covering_lab.predictor import expected_projection_hits
from covering_lab.radii import PowerLaw, buckets, radii_at
from covering_lab.targets import AffineSlice, DigitCantor, rasterize_target
from covering_lab.utils.config import set_grid_cells_cap, set_index_cap
from covering_lab.utils.enums import Verdict

CANTOR = DigitCantor(base=3, digits=((0, 2),))
HITTING = PowerLaw(c=0.9, a=1.0)
SPARSE = PowerLaw(c=0.5, a=0.2)


def window(m0, m1, depth, seq=HITTING, **kwargs):
    return SimWindow(m0=m0, m1=m1, depth=depth, seq=seq, **kwargs)


def _ball_meets_cell(center, r, j, depth):
    lo = j / 2 ** depth - 0.5
    hi = lo + 2.0 ** -depth
    if lo <= center <= hi:
        return True
    return min(abs(torus_delta(center, lo)), abs(torus_delta(center, hi))) <= r


def test_proxy_matches_brute_force(rng):
    w = window(2, 4, 6, seq=PowerLaw(c=0.5, a=1.0))
    expected = np.ones(64, dtype=bool)
    for k in range(2, 5):
        draw = draw_generation(k, w, rng)
        assert np.array_equal(draw.radii, radii_at(w.seq, draw.indices))
        assert np.all(draw.radii < 2.0 ** -k)
        assert np.all(draw.radii >= 2.0 ** -(k + 1))
        layer = [any(_ball_meets_cell(x[0], r, j, 6) for x, r in zip(draw.centers, draw.radii)) for j in range(64)]
        assert np.array_equal(generation_rasterize(k, w, rng).cells, layer)
        expected &= np.array(layer)
    assert np.array_equal(limsup_proxy(w, rng).cells, expected)


HAND_CENTERS = {2: (12.1, 35.3, 58.1), 3: (13.3, 33.1, 61.3), 4: (14.1, 36.3, 0.3)}


def test_hand_placed_proxy_matches_brute_force():
    w = window(2, 4, 6)
    draws = []
    for k, units in HAND_CENTERS.items():
        radii = np.array([1.0, 0.875, 0.75]) * 0.75 * 2.0 ** -k
        centers = np.array(units)[:, None] / 64 - 0.5
        draws.append(GenerationDraw(k=k, indices=np.arange(3), centers=centers, radii=radii))
    expected = np.ones(64, dtype=bool)
    for draw in draws:
        expected &= np.array([any(_ball_meets_cell(x[0], r, j, 6) for x, r in zip(draw.centers, draw.radii))
                              for j in range(64)])
    assert expected.any()
    assert np.array_equal(limsup_from_generations(draws, w).cells, expected)


def test_generations_are_combined_in_order(rng):
    w = window(2, 4, 8)
    draws = [draw_generation(k, w, rng) for k in (4, 2, 3)]
    assert limsup_from_generations(draws, w) == limsup_proxy(w, rng)


def test_generation_draws_do_not_depend_on_the_window(rng):
    a = draw_generation(4, window(4, 6, 8), rng)
    b = draw_generation(4, window(2, 10, 12), rng)
    assert np.array_equal(a.centers, b.centers)
    assert np.array_equal(a.indices, b.indices)


def test_longer_windows_give_smaller_proxies(rng):
    short = limsup_proxy(window(4, 8, 12), rng)
    longer = limsup_proxy(window(4, 10, 12), rng)
    assert longer.issubset(short)


def test_draw_outside_window_rejected(rng):
    with pytest.raises(InvalidConfigError):
        draw_generation(9, window(4, 8, 12), rng)


def test_window_validation():
    with pytest.raises(ValidationError):
        window(6, 4, 8)
    with pytest.raises(ValidationError):
        window(4, 8, 6)
    with pytest.raises(ValidationError):
        window(2, 4, 6, rotations=True)
    with pytest.raises(ValidationError):
        window(2, 4, 6, d=3, shape=AxisRectFamily(H=(1.0, 0.5)))
    assert window(2, 4, 6, d=2, shape=RotatedRectFamily(H=(1.0, 0.5))).rotated
    assert window(2, 4, 6, d=2, shape=RotatedRectFamily(H=(1.0, 0.5))).exact_predicate
    assert not window(2, 3, 5, d=3, shape=RotatedRectFamily(H=(1.0, 1.0, 1.0))).exact_predicate


def test_resource_caps(rng):
    set_grid_cells_cap(2 ** 10)
    with pytest.raises(ResourceCapError):
        limsup_proxy(window(2, 4, 6, d=2), rng)
    w = window(4, 8, 8)
    table = buckets(w.seq, w.m1)
    set_index_cap(5)
    with pytest.raises(ResourceCapError, match="generation 6"):
        draw_generation(6, w, rng, table)
    with pytest.raises(ResourceCapError, match="bucket enumeration too large"):
        draw_generation(6, w, rng)


def test_replicas_come_back_in_order():
    assert run_replicas(lambda r: r * r, 10, threads=3) == [r * r for r in range(10)]
    assert run_replicas(lambda r: r, 0, threads=1) == []


def test_box_dimension_estimates():
    full = box_dim_estimate(OccupancyGrid.full(1, 8), 4, 8)
    assert full.slope == pytest.approx(1.0)
    assert full.residual == pytest.approx(0.0, abs=1e-12)
    assert box_dim_estimate(OccupancyGrid.from_indices(1, 8, [[3]]), 4, 8).slope == pytest.approx(0.0)
    cantor = rasterize_target(DigitCantor(base=4, digits=((0, 2),)), 12)
    assert box_dim_estimate(cantor, 6, 12).slope == pytest.approx(0.5)
    outer = rasterize_target(DigitCantor(base=4, digits=((0, 3),)), 20)
    assert box_dim_estimate(outer, 4, 20).slope == pytest.approx(0.5, abs=0.02)
    with pytest.raises(EmptySetError):
        box_dim_estimate(OccupancyGrid.empty(1, 8), 4, 8)
    with pytest.raises(InvalidConfigError):
        box_dim_estimate(OccupancyGrid.full(1, 8), 4, 9)


def test_hit_test():
    a = OccupancyGrid.from_indices(1, 4, [[3]])
    assert hit_test(a, OccupancyGrid.from_indices(1, 4, [[3], [7]]))
    assert not hit_test(a, OccupancyGrid.from_indices(1, 4, [[4]]))
    with pytest.raises(GridMismatchError):
        hit_test(a, OccupancyGrid.empty(1, 5))


def test_wilson_interval():
    low, high = wilson_interval(5, 10)
    assert low == pytest.approx(0.2366, abs=1e-4)
    assert high == pytest.approx(0.7634, abs=1e-4)
    assert wilson_interval(0, 10)[0] == pytest.approx(0.0, abs=1e-12)
    assert wilson_interval(10, 10)[1] == pytest.approx(1.0)
    with pytest.raises(InvalidConfigError):
        wilson_interval(0, 0)


def test_predicted_verdicts():
    assert predicted_verdict(window(6, 10, 12), CANTOR).verdict == Verdict.HIT_AS_HAUSDORFF
    assert predicted_verdict(window(6, 14, 16, seq=SPARSE), CANTOR).verdict == Verdict.AVOID_AS
    line = AffineSlice(d=2, fixed={2: 0.1})
    seq = PowerLaw(c=0.5, a=2.0)
    rotated = window(2, 4, 6, seq=seq, d=2, shape=RotatedRectFamily(H=(1.0, 1 / 3)))
    aligned = window(2, 4, 6, seq=seq, d=2, shape=AxisRectFamily(H=(1.0, 1 / 3)))
    assert predicted_verdict(rotated, line).verdict == Verdict.INDETERMINATE
    assert predicted_verdict(rotated, line).s0 == pytest.approx(4 / 3)
    assert predicted_verdict(rotated, line).alpha == pytest.approx(1.0)
    assert predicted_verdict(aligned, line).s0 is None
    assert predicted_verdict(aligned, line).verdict == Verdict.AVOID_AS


def test_avoiding_target_is_rarely_hit(rng):
    frequency = hitting_frequency(window(6, 14, 16, seq=SPARSE), CANTOR, 20, rng)
    assert frequency.frequency <= 0.2
    assert frequency.trials == 20


def test_hitting_target_is_usually_hit(rng):
    frequency = hitting_frequency(window(6, 10, 12), CANTOR, 20, rng)
    assert frequency.frequency >= 0.5
    assert frequency.ci_low <= frequency.frequency <= frequency.ci_high


@pytest.mark.slow
def test_rotations_let_thin_rectangles_hit_a_horizontal_line(rng):
    aligned = window(5, 8, 10, seq=PowerLaw(c=0.9, a=2.0), d=2, shape=AxisRectFamily(H=(1.0, 1 / 3)))
    rotated = aligned.with_rotations(True)
    line = AffineSlice(d=2, fixed={2: 0.37})
    aligned_frequency = hitting_frequency(aligned, line, 50, rng)
    rotated_frequency = hitting_frequency(rotated, line, 50, rng)
    assert aligned_frequency.frequency <= 0.25
    assert rotated_frequency.frequency >= 0.6
    assert rotated_frequency.frequency - aligned_frequency.frequency >= 0.3


@pytest.mark.slow
def test_finer_grids_only_remove_hits(rng):
    for seq, floor, ceiling in ((HITTING, 0.3, 1.0), (SPARSE, 0.0, 0.05)):
        runs = [hitting_frequency(window(6, 10, depth, seq=seq), CANTOR, 50, rng) for depth in (12, 14, 16)]
        for coarse, fine in zip(runs, runs[1:]):
            assert all(a.hit or not b.hit for a, b in zip(coarse.outcomes, fine.outcomes))
            assert fine.frequency <= coarse.frequency
        assert all(floor <= run.frequency <= ceiling for run in runs)


def test_full_torus_is_always_hit(rng):
    frequency = hitting_frequency(window(4, 6, 10), AffineSlice(d=1), 20, rng)
    assert frequency.frequency == 1.0
    assert frequency.empty_proxies == 0


def test_results_do_not_depend_on_thread_count(rng):
    w = window(4, 8, 10)
    assert hitting_frequency(w, CANTOR, 8, rng, threads=1) == hitting_frequency(w, CANTOR, 8, rng, threads=4)


def test_target_dimension_must_match(rng):
    with pytest.raises(InvalidConfigError):
        hitting_frequency(window(4, 6, 8), AffineSlice(d=2), 2, rng)


def test_intersection_with_full_torus_is_the_proxy(rng):
    w = window(4, 8, 10)
    proxy = proxy_dimension(w, 10, rng)
    intersection = intersection_dim(w, AffineSlice(d=1), 10, rng)
    assert intersection.median == proxy.median
    assert intersection.nonempty == proxy.nonempty
    assert proxy.q1 <= proxy.median <= proxy.q3
    slopes = [outcome.slope for outcome in proxy.outcomes if outcome.slope is not None]
    assert all(-1e-9 <= slope <= 1 + 1e-9 for slope in slopes)


def test_intersection_needs_hitting_regime(rng):
    with pytest.raises(RegimeMismatchError, match="AvoidAS"):
        intersection_dim(window(6, 14, 16, seq=SPARSE), CANTOR, 4, rng)


def test_empty_proxies_are_degenerate(rng):
    w = window(6, 14, 16, seq=SPARSE)
    with pytest.raises(DegenerateOutcomeError):
        intersection_dim(w, CANTOR, 4, rng, require_hitting=False)
    with pytest.raises(DegenerateOutcomeError):
        proxy_dimension(w, 4, rng)


PROJECTION_H = SnowflakeExponents(H=(1.0, 1 / 3))
PROJECTION_SEQ = PowerLaw(c=0.9, a=2.0)


def projection_window():
    return window(1, 8, 8, seq=PROJECTION_SEQ, d=2, shape=AxisRectFamily(H=PROJECTION_H.H))


@pytest.mark.slow
def test_projection_hits_match_expectation(rng):
    line = AffineSlice(d=2, fixed={2: 0.1})
    counts = projection_hit_counts(projection_window(), line, 10 ** 4, rng, 10 ** 4)
    expected = expected_projection_hits(PROJECTION_SEQ, PROJECTION_H, 10 ** 4)
    assert abs(np.mean(counts) - expected) <= 0.05


@pytest.mark.slow
def test_projection_tail_hits_vanish(rng):
    line = AffineSlice(d=2, fixed={2: 0.1})
    counts = projection_hit_counts(projection_window(), line, 200, rng, 10 ** 5, kmin=8)
    assert np.mean(counts) <= 0.02


def test_projection_needs_a_horizontal_line(rng):
    with pytest.raises(InvalidConfigError):
        projection_hit_counts(projection_window(), AffineSlice(d=2, fixed={1: 0.1}), 2, rng, 100)
    with pytest.raises(InvalidConfigError):
        projection_hit_counts(window(2, 4, 6), AffineSlice(d=1, fixed={1: 0.1}), 2, rng, 100)
