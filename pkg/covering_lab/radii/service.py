import itertools
import math

import numpy as np

from covering_lab.common.exceptions import InsufficientDataError, InvalidConfigError, ResourceCapError
from covering_lab.radii.schemas import (AlphaEstimate, BucketTable, ConditionCResult, Explicit, Geometric, PowerLaw,
                                        RadiusSequence)
from covering_lab.utils.config import get_index_cap
from covering_lab.utils.enums import ConditionStatus

MIN_EXPLICIT_LENGTH = 8
CONDITION_C_MIN_KMAX = 16
SUM_CHUNK = 1 << 20


def radii_at(seq: RadiusSequence, indices) -> np.ndarray:
    """Radii r_n for 1-based indices n."""
    n = np.asarray(indices, dtype=np.int64)
    if n.size and n.min() < 1:
        raise InvalidConfigError("radius indices start at 1")
    if isinstance(seq, PowerLaw):
        return seq.c * np.power(n.astype(np.float64), -1.0 / seq.a)
    if isinstance(seq, Geometric):
        return np.power(seq.lam, n.astype(np.float64))
    values = np.asarray(seq.values, dtype=np.float64)
    if n.size and n.max() > len(values):
        raise InvalidConfigError(f"index {int(n.max())} is beyond the explicit list of {len(values)} radii")
    return values[n - 1]


def _radius(seq: RadiusSequence, n: int) -> float:
    return float(radii_at(seq, [n])[0])


def bucket_index(r):
    """k with 2^-(k+1) <= r < 2^-k, exact in binary floating point."""
    if np.ndim(r) == 0:
        return -math.frexp(float(r))[1]
    return -np.frexp(np.asarray(r, dtype=np.float64))[1].astype(np.int64)


def _estimated_count(seq: RadiusSequence, tau: float) -> float:
    if isinstance(seq, PowerLaw):
        return (seq.c / tau) ** seq.a
    if isinstance(seq, Geometric):
        return math.log(tau) / math.log(seq.lam)
    return float(len(seq.values))


def _count_at_least(seq: RadiusSequence, tau: float) -> int:
    """M(tau) = #{n : r_n >= tau}; closed-form guess corrected against the radii themselves."""
    if isinstance(seq, Explicit):
        return int(np.count_nonzero(np.asarray(seq.values) >= tau))
    count = max(0, int(math.floor(_estimated_count(seq, tau))))
    while _radius(seq, count + 1) >= tau:
        count += 1
    while count > 0 and _radius(seq, count) < tau:
        count -= 1
    return count


def buckets(seq: RadiusSequence, kmax: int) -> BucketTable:
    if kmax < 0:
        raise InvalidConfigError(f"kmax must be >= 0, got {kmax}")
    cap = get_index_cap()
    floor_radius = math.ldexp(1.0, -(kmax + 1))
    if not isinstance(seq, Explicit) and _estimated_count(seq, floor_radius) > cap:
        raise ResourceCapError(
            f"bucket enumeration too large: about {_estimated_count(seq, floor_radius):.3g} indices "
            f"needed for kmax={kmax}, cap is {cap} (COVERING_INDEX_CAP)",
            cap=cap)

    at_least = [_count_at_least(seq, math.ldexp(1.0, -k)) for k in range(kmax + 2)]
    if at_least[-1] > cap:
        raise ResourceCapError(f"bucket enumeration too large: {at_least[-1]} indices, cap is {cap}",
                               requested=at_least[-1], cap=cap)
    counts = tuple(at_least[k + 1] - at_least[k] for k in range(kmax + 1))
    starts = tuple(at_least[k] + 1 for k in range(kmax + 1))

    exhausted = False
    truncation = at_least[-1] + 1
    if isinstance(seq, Explicit) and at_least[-1] == len(seq.values):
        exhausted = True
        truncation = len(seq.values)
    return BucketTable(kmax=kmax, counts=counts, starts=starts, truncation=truncation, exhausted=exhausted)


def generation_indices(table: BucketTable, k: int) -> np.ndarray:
    if not 0 <= k <= table.kmax:
        raise InvalidConfigError(f"generation {k} outside the bucket table (kmax={table.kmax})")
    return np.arange(table.starts[k], table.starts[k] + table.counts[k], dtype=np.int64)


def series_sum(seq: RadiusSequence, s: float, N: int, start: int = 1) -> float:
    """Correctly rounded sum of r_n^s for start <= n <= N (explicit lists stop at their last entry)."""
    if N < 1:
        raise InvalidConfigError(f"N must be >= 1, got {N}")
    if s < 0:
        raise InvalidConfigError(f"s must be non-negative, got {s}")
    if isinstance(seq, Explicit):
        N = min(N, len(seq.values))
    chunks = (
        np.power(radii_at(seq, np.arange(lo, min(lo + SUM_CHUNK, N + 1))), s).tolist()
        for lo in range(max(1, start), N + 1, SUM_CHUNK)
    )
    return math.fsum(itertools.chain.from_iterable(chunks))


def limsup_exponent(seq: RadiusSequence) -> AlphaEstimate:
    """Uncapped limsup of log n / (-log r_n); a tail estimate for explicit lists."""
    if isinstance(seq, PowerLaw):
        return AlphaEstimate(seq.a)
    if isinstance(seq, Geometric):
        return AlphaEstimate(0.0)
    length = len(seq.values)
    if length < MIN_EXPLICIT_LENGTH:
        raise InsufficientDataError(length, MIN_EXPLICIT_LENGTH)
    n = np.arange((length + 1) // 2, length + 1)
    ratios = np.log(n) / -np.log(radii_at(seq, n))
    return AlphaEstimate(float(ratios.max()), truncated=True)


def alpha_estimate(seq: RadiusSequence, t: float) -> AlphaEstimate:
    if t <= 0:
        raise InvalidConfigError(f"t must be positive, got {t}")
    limsup = limsup_exponent(seq)
    return AlphaEstimate(min(t, limsup.value), truncated=limsup.truncated)


def alpha_of(seq: RadiusSequence, t: float) -> float:
    return alpha_estimate(seq, t).value


def condition_c_check(seq: RadiusSequence, t: float, kmax: int = 32, tol: float = 0.1) -> ConditionCResult:
    """Finite-data check for a subsequence k_i with k_(i+1)/k_i <= 1 + tol and log2 n_(k_i) / k_i within tol of alpha."""
    if kmax < CONDITION_C_MIN_KMAX:
        raise InvalidConfigError(f"condition check needs kmax >= {CONDITION_C_MIN_KMAX}, got {kmax}")
    alpha = alpha_estimate(seq, t)

    if isinstance(seq, PowerLaw):
        diagnostics = {"alpha": alpha.value, "limit": seq.a}
        if seq.a <= t:
            return ConditionCResult(ConditionStatus.HOLDS, tuple(range(1, kmax + 1)), diagnostics)
        return ConditionCResult(ConditionStatus.FAILS, (), diagnostics)

    table = buckets(seq, kmax)
    if isinstance(seq, Geometric):
        witness = tuple(k for k in range(1, kmax + 1) if table.counts[k] >= 1)
        return ConditionCResult(ConditionStatus.HOLDS, witness, {"alpha": 0.0})

    last = seq.values[-1]
    complete = [k for k in range(1, kmax + 1) if last < math.ldexp(1.0, -(k + 1))]
    diagnostics = {"alpha": alpha.value, "tolerance": tol}
    if not complete:
        return ConditionCResult(ConditionStatus.INCONCLUSIVE, (), {**diagnostics, "reason": "no complete bucket"})
    top = complete[-1]
    truncated = top < kmax
    tail = range(max(1, top // 2), top + 1)
    matches = [k for k in tail
               if table.counts[k] >= 1 and abs(math.log2(table.counts[k]) / k - alpha.value) <= tol]
    diagnostics.update({"complete_kmax": top, "matches": matches, "truncated": truncated})

    chained = (
        len(matches) >= 2
        and all(b / a <= 1 + tol + 1e-12 for a, b in zip(matches, matches[1:]))
        and matches[-1] * (1 + tol) >= top
    )
    if chained:
        return ConditionCResult(ConditionStatus.HOLDS, tuple(matches), diagnostics)
    if truncated or matches:
        return ConditionCResult(ConditionStatus.INCONCLUSIVE, (), diagnostics)
    return ConditionCResult(ConditionStatus.FAILS, (), diagnostics)
