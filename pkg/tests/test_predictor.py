import numpy as np
import pytest
from scipy import special

from covering_lab.common.exceptions import ArgumentOrderError, InvalidConfigError
from covering_lab.geometry import SnowflakeExponents
from covering_lab.predictor import (classify_hitting, expected_projection_hits, intersect_bounds,
                                    intersection_value, rotated_bounds, rotated_lower, s0_from_limsup, s0_rect,
                                    s0_rotated, s0_series_crosscheck, snowflake_profile, svf_exponent, svf_phi,
                                    torus_upper)
from covering_lab.radii import Explicit, Geometric, PowerLaw, alpha_of
from covering_lab.utils.enums import ConditionStatus, Verdict


def epsilon_family(eps):
    """Rectangles with sides r and r^(1 + 1/eps) at radii r_n = n^-eps / 2."""
    return SnowflakeExponents(H=(1.0, eps / (1 + eps))), PowerLaw(c=0.5, a=1 / eps)


@pytest.mark.parametrize("eps", [0.25, 0.5, 0.8])
def test_epsilon_family(eps):
    H, seq = epsilon_family(eps)
    assert s0_rect(H, seq) == pytest.approx(1 + (1 - eps) / (1 + eps), abs=1e-12)
    assert s0_rotated(H, seq) == s0_rect(H, seq)
    profile = snowflake_profile(H, seq)
    assert profile.t == pytest.approx((1 + 2 * eps) / eps)
    assert profile.alpha == pytest.approx(1 / eps)
    assert profile.condition_c == ConditionStatus.HOLDS


def test_s0_is_capped_at_the_dimension():
    H = SnowflakeExponents(H=(1.0, 0.5))
    assert s0_from_limsup(H, 0.5) == pytest.approx(0.5)
    assert s0_from_limsup(H, 2.0) == pytest.approx(1.5)
    assert s0_from_limsup(H, 10.0) == 2.0
    assert s0_rect(H, Geometric(lam=0.5)) == 0.0
    with pytest.raises(InvalidConfigError):
        s0_rect(H, Explicit(values=(0.4, 0.2)))
    with pytest.raises(InvalidConfigError):
        s0_rect(H, PowerLaw(a=1.0), d=3)


def test_svf_phi_examples():
    H = SnowflakeExponents(H=(1.0, 1 / 3))
    assert svf_phi(H, 0.25, 1.0) == pytest.approx(1 / 4)
    assert svf_phi(H, 0.25, 1.5) == pytest.approx(1 / 32)
    assert svf_phi(H, 0.25, 2.0) == pytest.approx(1 / 256)
    assert svf_exponent(H, 0.0) == 0.0
    with pytest.raises(InvalidConfigError):
        svf_phi(H, 0.25, 2.5)
    with pytest.raises(InvalidConfigError):
        svf_phi(H, 1.0, 1.0)


def test_svf_phi_matches_singular_values():
    H = SnowflakeExponents(H=(1.0, 1 / 3))
    r = 0.3
    sides = sorted(np.power(r, 1 / np.asarray(H.H)), reverse=True)
    for s in np.linspace(0, 2, 50):
        whole = min(int(np.floor(s)), 1)
        expected = np.prod(sides[:whole]) * sides[whole] ** (s - whole)
        assert svf_phi(H, r, s) == pytest.approx(expected, rel=1e-12)


@pytest.mark.slow
@pytest.mark.parametrize("H, seq", [
    epsilon_family(0.5),
    (SnowflakeExponents(H=(1.0,)), PowerLaw(c=0.5, a=0.7)),
])
def test_series_crosscheck_agrees_with_s0(H, seq):
    assert abs(s0_series_crosscheck(H, seq) - s0_rect(H, seq)) <= 0.02


def test_series_crosscheck_needs_power_law():
    with pytest.raises(InvalidConfigError):
        s0_series_crosscheck(SnowflakeExponents(H=(1.0,)), Geometric(lam=0.5))


@pytest.mark.parametrize("args, verdict", [
    ((1.0, 0.5, 0.2, 0.4), Verdict.AVOID_AS),
    ((1.0, 0.5, 0.6, 0.7), Verdict.HIT_AS_HAUSDORFF),
    ((1.0, 0.5, 0.2, 0.9, True), Verdict.HIT_AS_PACKING),
    ((1.0, 0.5, 0.2, 0.9, False), Verdict.INDETERMINATE),
    ((1.0, 0.5, 0.5, 0.5, True), Verdict.INDETERMINATE),
    ((2.0, 0.0, 1.0, 2.0), Verdict.INDETERMINATE),
])
def test_classify_hitting(args, verdict):
    result = classify_hitting(*args)
    assert result.verdict == verdict
    assert result.hits == (verdict in (Verdict.HIT_AS_HAUSDORFF, Verdict.HIT_AS_PACKING))


@pytest.mark.parametrize("args", [(1.0, 1.5, 0.2, 0.4), (1.0, 0.5, 0.6, 0.4), (1.0, 0.5, 0.2, 1.4), (0.0, 0.0, 0.0, 0.0)])
def test_argument_order_violations(args):
    with pytest.raises(ArgumentOrderError, match="Argument ordering violated"):
        classify_hitting(*args)


def test_intersection_bounds():
    bounds = intersect_bounds(1.0, 0.7, 0.6309, 0.6309)
    assert bounds.exact == pytest.approx(0.3309)
    assert bounds.lower == bounds.upper
    assert intersection_value(1.0, 0.9, 0.5) == pytest.approx(0.4)
    assert intersection_value(1.0, 0.2, 0.5) == 0.0
    general = intersect_bounds(1.0, 0.9, 0.3, 0.6)
    assert (general.lower, general.upper) == pytest.approx((0.2, 0.5))
    assert general.exact is None


def test_torus_upper():
    bound = torus_upper(4 / 3, 2, 1.0)
    assert bound.kind == "UpperBound"
    assert bound.value == pytest.approx(1 / 3)
    assert torus_upper(0.5, 2, 1.0).kind == "EmptyAS"
    with pytest.raises(ArgumentOrderError):
        torus_upper(2.5, 2, 1.0)


def test_rotated_lower():
    assert rotated_lower(5 / 3, 2, 1.0).value == pytest.approx(2 / 3)
    assert rotated_lower(2.0, 2, 0.5).value == pytest.approx(0.5)
    failed = rotated_lower(4 / 3, 2, 1.0)
    assert failed.kind == "HypothesisFails"
    assert failed.reason == "max{s0R, dim_h F} = 4/3 ≤ 3/2"
    assert rotated_lower(1.5, 2, 0.4).kind == "HypothesisFails"


def test_rotated_bounds():
    bounds = rotated_bounds(5 / 3, 2, 1.0, 1.0)
    assert bounds.applicable
    assert bounds.exact == pytest.approx(2 / 3)
    skipped = rotated_bounds(4 / 3, 2, 1.0, 1.0)
    assert not skipped.applicable
    assert skipped.upper == pytest.approx(1 / 3)


def test_snowflake_profile_classifies_snowflake_dimensions():
    profile = snowflake_profile(SnowflakeExponents(H=(1.0, 1.0)), PowerLaw(c=0.5, a=1.0))
    assert (profile.t, profile.alpha) == (2.0, 1.0)
    assert profile.classify(1.0, 1.0).verdict == Verdict.INDETERMINATE
    assert profile.classify(1.5, 1.5).verdict == Verdict.HIT_AS_HAUSDORFF
    assert profile.classify(0.5, 0.5).verdict == Verdict.AVOID_AS
    assert profile.bounds(1.5, 1.5).exact == pytest.approx(0.5)


def test_expected_projection_hits():
    H = SnowflakeExponents(H=(1.0, 1 / 3))
    seq = PowerLaw(c=0.9, a=2.0)
    # 0.729 n^-3/2 summed to 10^6; the tail beyond is about 2 / sqrt(10^6)
    expected = 0.729 * (special.zeta(1.5) - 2e-3)
    assert expected_projection_hits(seq, H, 10 ** 6) == pytest.approx(expected, abs=1e-3)
    assert expected_projection_hits(seq, H, 1) == pytest.approx(0.729)
    assert expected_projection_hits(seq, H, 10 ** 4, kmin=8) < expected_projection_hits(seq, H, 10 ** 4)
    with pytest.raises(InvalidConfigError):
        expected_projection_hits(seq, H, 0)


def test_s0_is_piecewise_linear_in_the_growth_exponent():
    H = SnowflakeExponents(H=(1.0, 0.5, 0.25))
    # kinks at the partial sums of 1 / H_i
    kinks = [0.0, 1.0, 3.0, 7.0]
    limsups = np.linspace(0.0, 9.0, 901)
    values = [s0_from_limsup(H, limsup) for limsup in limsups]
    assert all(b >= a for a, b in zip(values, values[1:]))
    for k, (lo, hi) in enumerate(zip(kinks, kinks[1:])):
        assert s0_from_limsup(H, hi) == pytest.approx(k + 1.0)
        mid, step = (lo + hi) / 2, (hi - lo) / 4
        slope = (s0_from_limsup(H, mid + step) - s0_from_limsup(H, mid - step)) / (2 * step)
        assert slope == pytest.approx(H.H[k])
    assert s0_from_limsup(H, 8.0) == 3.0
    for a in (0.5, 2.0, 5.0):
        assert s0_rect(H, PowerLaw(a=a)) == pytest.approx(s0_from_limsup(H, a))


@pytest.mark.parametrize("d", [1, 2, 3])
def test_isotropic_rectangles_reduce_to_the_ball_exponent(d):
    H = SnowflakeExponents(H=(1.0,) * d)
    for a in (0.3, 0.8, 1.7, 2.5, 4.0):
        seq = PowerLaw(c=0.5, a=a)
        assert s0_rect(H, seq) == pytest.approx(min(d, alpha_of(seq, float(d))))
        assert s0_rect(H, seq) == pytest.approx(min(d, a))


@pytest.mark.parametrize("d", [2, 3])
def test_rotated_lower_bound_never_exceeds_the_torus_upper_bound(d):
    for s0 in np.linspace(0.0, d, 31):
        for dim in np.linspace(0.0, d, 31):
            lower = rotated_lower(float(s0), d, float(dim))
            upper = torus_upper(float(s0), d, float(dim))
            if lower.kind == "LowerBound":
                assert upper.kind == "UpperBound"
                assert lower.value <= upper.value + 1e-12
