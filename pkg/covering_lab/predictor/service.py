import math
from fractions import Fraction

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy import stats

from covering_lab.common.exceptions import ArgumentOrderError, InvalidConfigError
from covering_lab.geometry.schemas import SnowflakeExponents
from covering_lab.predictor.schemas import IntersectBounds, RegimeVerdict, RotatedLower, TorusUpper
from covering_lab.radii.schemas import Explicit, PowerLaw, RadiusSequence
from covering_lab.radii.service import bucket_index, condition_c_check, limsup_exponent, radii_at
from covering_lab.utils.enums import ConditionStatus, Verdict

TOL = 1e-12
CHECKPOINTS = (10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6)
SUM_CHUNK = 1 << 20


def _fmt(x: float) -> str:
    fraction = Fraction(x).limit_denominator(1000)
    if abs(float(fraction) - x) < 1e-9:
        return str(fraction)
    return f"{x:.6g}"


def svf_exponent(H: SnowflakeExponents, s: float) -> float:
    """Exponent g(s) with Phi^s = r^g(s) for the rectangle with sides r^(1/H_i)."""
    d = H.d
    if not -TOL <= s <= d + TOL:
        raise InvalidConfigError(f"s must lie in [0, {d}], got {s}")
    s = min(max(s, 0.0), float(d))
    whole = int(math.floor(s))
    inverse = [1.0 / h for h in H.H]
    exponent = sum(inverse[:whole])
    if whole < d:
        exponent += (s - whole) * inverse[whole]
    return exponent


def svf_phi(H: SnowflakeExponents, r: float, s: float) -> float:
    if not 0 < r < 1:
        raise InvalidConfigError(f"r must lie in (0, 1), got {r}")
    return r ** svf_exponent(H, s)


def s0_from_limsup(H: SnowflakeExponents, limsup: float) -> float:
    d = H.d
    cumulative = [0.0]
    for h in H.H:
        cumulative.append(cumulative[-1] + 1.0 / h)
    k0 = max(k for k in range(d + 1) if cumulative[k] <= limsup)
    if k0 == d:
        return float(d)
    return min(float(d), k0 + H.H[k0] * (limsup - cumulative[k0]))


def s0_rect(H: SnowflakeExponents, seq: RadiusSequence, d: int = None) -> float:
    """Almost-sure dimension of the covering set generated by axis-parallel rectangles r_n^(1/H_i)."""
    if d is not None and d != H.d:
        raise InvalidConfigError(f"ambient dimension {d} does not match {H.d} exponents")
    if isinstance(seq, Explicit):
        raise InvalidConfigError("s0 needs a generative radius sequence")
    # uncapped limsup; the cap at d is applied by s0_from_limsup
    return s0_from_limsup(H, limsup_exponent(seq).value)


def s0_rotated(H: SnowflakeExponents, seq: RadiusSequence, d: int = None) -> float:
    """Random rotations do not change the dimension of the covering set itself."""
    return s0_rect(H, seq, d)


def _growth_exponent(log_r: np.ndarray, H: SnowflakeExponents, s: float) -> float:
    g = svf_exponent(H, s)
    terms = np.exp(g * log_r)
    first = CHECKPOINTS[0]
    increments = [terms[lo - first:hi - first].sum() for lo, hi in zip(CHECKPOINTS, CHECKPOINTS[1:])]
    fit = stats.linregress(np.log10(CHECKPOINTS[1:]), np.log10(increments))
    return float(fit.slope)


def s0_series_crosscheck(H: SnowflakeExponents, seq: RadiusSequence, s_grid=None, iterations: int = 30) -> float:
    """
    Estimate inf{s : sum Phi^s(A_n) < inf} from truncated series.

    The growth exponent is the slope of log10 of the decade increments of the
    partial sums at N = 10^3..10^6; the series is taken to diverge while it is
    non-negative. ``s_grid`` brackets the sign change, bisection refines it.
    """
    if not isinstance(seq, PowerLaw):
        raise InvalidConfigError("series cross-check needs a power-law radius sequence")
    d = H.d
    grid = sorted(float(s) for s in (s_grid if s_grid is not None else np.linspace(0, d, 9)))
    log_r = np.log(radii_at(seq, np.arange(CHECKPOINTS[0] + 1, CHECKPOINTS[-1] + 1)))

    diverging = [_growth_exponent(log_r, H, s) >= 0 for s in grid]
    if diverging[-1]:
        return grid[-1]
    if not diverging[0]:
        return grid[0]
    i = max(i for i in range(len(grid) - 1) if diverging[i] and not diverging[i + 1])
    lo, hi = grid[i], grid[i + 1]
    for _ in range(iterations):
        mid = (lo + hi) / 2
        if _growth_exponent(log_r, H, mid) >= 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def _check_order(t: float, alpha: float, dim_h: float, dim_p: float):
    if t <= 0:
        raise ArgumentOrderError(f"t = {t} must be positive")
    if not -TOL <= alpha <= t + TOL:
        raise ArgumentOrderError(f"0 <= alpha <= t (alpha = {alpha}, t = {t})")
    if not (-TOL <= dim_h <= dim_p + TOL and dim_p <= t + TOL):
        raise ArgumentOrderError(f"0 <= dim_h F <= dim_p F <= t (dim_h = {dim_h}, dim_p = {dim_p}, t = {t})")


def classify_hitting(t: float, alpha: float, dim_h: float, dim_p: float, condition_c: bool = False) -> RegimeVerdict:
    """Hitting regime of a target F; boundary equalities are Indeterminate."""
    _check_order(t, alpha, dim_h, dim_p)
    threshold = t - alpha
    if dim_p < threshold - TOL:
        verdict = Verdict.AVOID_AS
    elif dim_h > threshold + TOL:
        verdict = Verdict.HIT_AS_HAUSDORFF
    elif dim_p > threshold + TOL and condition_c:
        verdict = Verdict.HIT_AS_PACKING
    else:
        verdict = Verdict.INDETERMINATE
    return RegimeVerdict(verdict=verdict, t=t, alpha=alpha, dim_h=dim_h, dim_p=dim_p, condition_c=condition_c)


def intersection_value(t: float, alpha: float, dim: float) -> float:
    _check_order(t, alpha, dim, dim)
    return max(0.0, alpha + dim - t)


def intersect_bounds(t: float, alpha: float, dim_h: float, dim_p: float) -> IntersectBounds:
    _check_order(t, alpha, dim_h, dim_p)
    lower = max(0.0, alpha + dim_h - t)
    upper = max(0.0, alpha + dim_p - t)
    if abs(dim_h - dim_p) <= TOL:
        return IntersectBounds(lower=lower, upper=upper, exact=lower, reason="dim_h F = dim_p F")
    return IntersectBounds(lower=lower, upper=upper, reason="general bounds")


def torus_upper(s0: float, d: int, dim_p: float) -> TorusUpper:
    if not -TOL <= s0 <= d + TOL:
        raise ArgumentOrderError(f"0 <= s0 <= d (s0 = {s0}, d = {d})")
    if dim_p < d - s0 - TOL:
        return TorusUpper(kind="EmptyAS")
    return TorusUpper(kind="UpperBound", value=max(0.0, s0 + dim_p - d))


def rotated_lower(s0R: float, d: int, dim_h: float) -> RotatedLower:
    if not -TOL <= s0R <= d + TOL:
        raise ArgumentOrderError(f"0 <= s0R <= d (s0R = {s0R}, d = {d})")
    if not dim_h > d - s0R + TOL:
        return RotatedLower(kind="HypothesisFails", reason=f"dim_h F = {_fmt(dim_h)} ≤ d - s0R = {_fmt(d - s0R)}")
    top, half = max(s0R, dim_h), (d + 1) / 2
    if not top > half + TOL:
        return RotatedLower(kind="HypothesisFails", reason=f"max{{s0R, dim_h F}} = {_fmt(top)} ≤ {_fmt(half)}")
    return RotatedLower(kind="LowerBound", value=s0R + dim_h - d)


def rotated_bounds(s0R: float, d: int, dim_h: float, dim_p: float) -> IntersectBounds:
    """Two-sided bounds for rotated covering sets; not applicable when the lower-bound hypotheses fail."""
    lower = rotated_lower(s0R, d, dim_h)
    upper = max(0.0, s0R + dim_p - d)
    if lower.kind == "HypothesisFails":
        return IntersectBounds(lower=0.0, upper=upper, applicable=False, reason=lower.reason)
    exact = lower.value if abs(dim_h - dim_p) <= TOL else None
    return IntersectBounds(lower=lower.value, upper=upper, exact=exact, reason="rotated covering set")


def expected_projection_hits(seq: RadiusSequence, H: SnowflakeExponents, n_max: int, kmin: int = 0,
                             axis: int = 1) -> float:
    """Sum of min(1, r_n^(1/H_axis)) over n <= n_max in generations k >= kmin."""
    if n_max < 1:
        raise InvalidConfigError(f"n_max must be >= 1, got {n_max}")
    exponent = 1.0 / H.H[axis]
    partial = []
    for lo in range(1, n_max + 1, SUM_CHUNK):
        r = radii_at(seq, np.arange(lo, min(lo + SUM_CHUNK, n_max + 1)))
        r = r[bucket_index(r) >= kmin]
        partial.extend(np.minimum(1.0, np.power(r, exponent)).tolist())
    return math.fsum(partial)


class SnowflakeProfile(BaseModel):
    """Snowflake-metric regularity t and alpha, with classifiers for snowflake dimension pairs."""
    model_config = ConfigDict(frozen=True)

    t: float
    alpha: float
    condition_c: ConditionStatus

    def classify(self, dim_h: float, dim_p: float) -> RegimeVerdict:
        return classify_hitting(self.t, self.alpha, dim_h, dim_p, self.condition_c == ConditionStatus.HOLDS)

    def bounds(self, dim_h: float, dim_p: float) -> IntersectBounds:
        return intersect_bounds(self.t, self.alpha, dim_h, dim_p)


def snowflake_profile(H: SnowflakeExponents, seq: RadiusSequence, kmax: int = 32) -> SnowflakeProfile:
    t = H.t
    alpha = min(t, limsup_exponent(seq).value)
    status = condition_c_check(seq, t, kmax).status
    return SnowflakeProfile(t=t, alpha=alpha, condition_c=status)
