from dataclasses import dataclass, field
from statistics import fmean
from typing import Any, Callable, Optional

from covering_lab.commands.config import ExperimentConfig
from covering_lab.coversim.schemas import DimSummary, HitFrequency, ReplicaOutcome, SimWindow
from covering_lab.coversim.service import (hitting_frequency, intersection_dim, predicted_verdict,
                                           projection_hit_counts, proxy_dimension)
from covering_lab.geometry.schemas import SnowflakeExponents
from covering_lab.grid import OccupancyGrid
from covering_lab.percolation.service import (extinction_prob_oracle, perc_intersect_dim, survival_frequency,
                                              survival_prob_at_depth)
from covering_lab.predictor.service import (classify_hitting, expected_projection_hits, intersect_bounds,
                                            rotated_bounds, rotated_lower, s0_rect, s0_rotated, s0_series_crosscheck,
                                            snowflake_profile, torus_upper)
from covering_lab.radii.schemas import PowerLaw
from covering_lab.radii.service import alpha_of, condition_c_check, limsup_exponent
from covering_lab.sampler.schemas import RngStream
from covering_lab.targets.schemas import TargetUnion
from covering_lab.targets.service import rasterize_target, target_dim_snowflake, target_dims
from covering_lab.utils.enums import Command
from covering_lab.utils.error_logging import log_message, log_warning


@dataclass
class RunResult:
    theory: dict[str, Any] = field(default_factory=dict)
    empirical: dict[str, Any] = field(default_factory=dict)
    outcomes: list[ReplicaOutcome] = field(default_factory=list)


def _frequency_fields(frequency: HitFrequency, prefix: str = "") -> dict[str, Any]:
    return {
        f"{prefix}frequency": frequency.frequency,
        f"{prefix}ci_low": frequency.ci_low,
        f"{prefix}ci_high": frequency.ci_high,
        f"{prefix}hits": frequency.hits,
        f"{prefix}trials": frequency.trials,
    }


def _dimension_fields(summary: Optional[DimSummary]) -> dict[str, Any]:
    if summary is None:
        return {"median_slope": None, "nonempty": 0}
    return {"median_slope": summary.median, "q1": summary.q1, "q3": summary.q3, "iqr": summary.iqr,
            "nonempty": summary.nonempty}


def _exponents(config: ExperimentConfig) -> Optional[SnowflakeExponents]:
    if config.shape.kind == "ball":
        return None
    return config.shape.exponents(config.d)


def _occupancy_fields(window: SimWindow) -> dict[str, Any]:
    """Cells are marked when they meet a shape, so every proxy over-covers; d >= 3 rotations also use bounding balls."""
    if not window.exact_predicate:
        log_warning("rotated rectangles in d=%d are rasterized through their bounding balls", window.d)
    return {"occupancy": "conservative", "exact_predicate": window.exact_predicate}


def _covering_dimension(config: ExperimentConfig) -> dict[str, Any]:
    H = _exponents(config)
    if H is None:
        return {"alpha": alpha_of(config.seq, float(config.d))}
    return {"s0": s0_rect(H, config.seq, config.d)}


def _predict(config: ExperimentConfig, rng: RngStream, threads: Optional[int]) -> RunResult:
    d, seq = config.d, config.seq
    t = float(d)
    condition = condition_c_check(seq, t)
    theory = {
        "t": t,
        "alpha": alpha_of(seq, t),
        "limsup": limsup_exponent(seq).value,
        "condition_c": condition.status.value,
    }
    dims = target_dims(config.target) if config.target is not None else None
    H = _exponents(config)
    if H is None:
        if dims is not None:
            theory["verdict"] = classify_hitting(t, theory["alpha"], *dims, condition.holds).verdict.value
            theory["bounds"] = intersect_bounds(t, theory["alpha"], *dims).model_dump()
        return RunResult(theory=theory)

    s0 = s0_rect(H, seq, d)
    profile = snowflake_profile(H, seq)
    theory.update({
        "H": list(H.H),
        "s0": s0,
        "s0_rotated": s0_rotated(H, seq, d),
        "snowflake_t": profile.t,
        "snowflake_alpha": profile.alpha,
        "snowflake_condition_c": profile.condition_c.value,
    })
    if isinstance(seq, PowerLaw):
        theory["s0_series"] = s0_series_crosscheck(H, seq)
    if dims is not None:
        theory["torus_upper"] = torus_upper(s0, d, dims[1]).model_dump()
        theory["rotated_lower"] = rotated_lower(theory["s0_rotated"], d, dims[0]).model_dump()
        theory["rotated_bounds"] = rotated_bounds(theory["s0_rotated"], d, *dims).model_dump()
        if not isinstance(config.target, TargetUnion):
            snowflake_dims = target_dim_snowflake(config.target, H)
            theory["snowflake_dims"] = list(snowflake_dims)
            theory["verdict"] = profile.classify(*snowflake_dims).verdict.value
            theory["snowflake_bounds"] = profile.bounds(*snowflake_dims).model_dump()
    return RunResult(theory=theory)


def _cover_dim(config: ExperimentConfig, rng: RngStream, threads: Optional[int]) -> RunResult:
    window = config.sim_window()
    summary = proxy_dimension(window, config.replicas, rng, config.jmin, config.jmax, threads)
    return RunResult(theory={**_covering_dimension(config), **_occupancy_fields(window)},
                     empirical=_dimension_fields(summary),
                     outcomes=summary.outcomes)


def _verdict_fields(window: SimWindow, config: ExperimentConfig) -> dict[str, Any]:
    verdict = predicted_verdict(window, config.target)
    fields = {"verdict": verdict.verdict.value, "t": verdict.t, "alpha": verdict.alpha,
              "dim_h": verdict.dim_h, "dim_p": verdict.dim_p, **_occupancy_fields(window)}
    if verdict.s0 is not None:
        fields["s0_rotated"] = verdict.s0
    return fields


def _hit(config: ExperimentConfig, rng: RngStream, threads: Optional[int]) -> RunResult:
    window = config.sim_window()
    frequency = hitting_frequency(window, config.target, config.replicas, rng, threads)
    empirical = {**_frequency_fields(frequency), "empty_proxies": frequency.empty_proxies}
    return RunResult(theory=_verdict_fields(window, config), empirical=empirical, outcomes=frequency.outcomes)


def _intersect_dim(config: ExperimentConfig, rng: RngStream, threads: Optional[int]) -> RunResult:
    window = config.sim_window()
    theory = _verdict_fields(window, config)
    H = _exponents(config)
    dims = target_dims(config.target)
    if H is None:
        theory["bounds"] = intersect_bounds(theory["t"], theory["alpha"], *dims).model_dump()
    elif window.rotated:
        theory["bounds"] = rotated_bounds(theory["s0_rotated"], config.d, *dims).model_dump()
    else:
        theory["bounds"] = snowflake_profile(H, config.seq).bounds(theory["dim_h"], theory["dim_p"]).model_dump()
    summary = intersection_dim(window, config.target, config.replicas, rng, threads,
                               jmin=config.jmin, jmax=config.jmax)
    return RunResult(theory=theory, empirical=_dimension_fields(summary), outcomes=summary.outcomes)


def _bad_case(config: ExperimentConfig, rng: RngStream, threads: Optional[int]) -> RunResult:
    """Aligned 2-d run, its 1-d projection counts and the snowflake reclassification."""
    window = config.sim_window().with_rotations(False)
    H = window.shape.exponents(2)
    profile = snowflake_profile(H, config.seq)
    snowflake_dims = target_dim_snowflake(config.target, H)
    theory = {
        "s0": s0_rect(H, config.seq, 2),
        "snowflake_t": profile.t,
        "snowflake_alpha": profile.alpha,
        "snowflake_dim_p": snowflake_dims[1],
        "snowflake_threshold": profile.t - profile.alpha,
        "verdict": profile.classify(*snowflake_dims).verdict.value,
        "expected_projection_hits": expected_projection_hits(config.seq, H, config.n_max),
        "expected_tail_hits": expected_projection_hits(config.seq, H, config.n_max, kmin=config.tail_kmin),
        **_occupancy_fields(window),
    }
    frequency = hitting_frequency(window, config.target, config.replicas, rng, threads)
    counts = projection_hit_counts(window, config.target, config.replicas, rng, config.n_max, threads=threads)
    tail = projection_hit_counts(window, config.target, config.replicas, rng, config.n_max,
                                 kmin=config.tail_kmin, threads=threads)
    empirical = {
        **_frequency_fields(frequency),
        "mean_projection_hits": fmean(counts),
        "mean_tail_hits": fmean(tail),
    }
    return RunResult(theory=theory, empirical=empirical, outcomes=frequency.outcomes)


def _rotate(config: ExperimentConfig, rng: RngStream, threads: Optional[int]) -> RunResult:
    """Aligned and rotated runs on shared streams."""
    aligned = config.sim_window().with_rotations(False)
    rotated = config.sim_window().with_rotations(True)
    H = aligned.shape.exponents(2)
    dims = target_dims(config.target)
    s0R = s0_rotated(H, config.seq, 2)
    theory = {
        "aligned_verdict": predicted_verdict(aligned, config.target).verdict.value,
        "rotated_verdict": predicted_verdict(rotated, config.target).verdict.value,
        "s0_rotated": s0R,
        "rotated_bounds": rotated_bounds(s0R, 2, *dims).model_dump(),
        **_occupancy_fields(rotated),
    }
    aligned_frequency = hitting_frequency(aligned, config.target, config.replicas, rng, threads)
    rotated_frequency = hitting_frequency(rotated, config.target, config.replicas, rng, threads)
    empirical = {
        **_frequency_fields(aligned_frequency, "aligned_"),
        **_frequency_fields(rotated_frequency, "rotated_"),
        "difference": rotated_frequency.frequency - aligned_frequency.frequency,
    }
    return RunResult(theory=theory, empirical=empirical, outcomes=rotated_frequency.outcomes)


def _percolate(config: ExperimentConfig, rng: RngStream, threads: Optional[int]) -> RunResult:
    params = config.perc_params()
    q = extinction_prob_oracle(params.p, params.arity)
    if config.target is not None:
        E_grid = rasterize_target(config.target, params.depth)
        dim_E = target_dims(config.target)[0]
    else:
        E_grid = OccupancyGrid.full(params.d, params.depth)
        dim_E = float(params.d)
    theory = {
        "p": params.p,
        "arity": params.arity,
        "extinction": q,
        "survival_limit": 1.0 - q,
        "survival_at_depth": survival_prob_at_depth(params.p, params.arity, params.depth),
        "intersection_dim": max(0.0, dim_E - params.s),
        "avoids": dim_E < params.s,
    }
    survival = survival_frequency(params, config.replicas, rng, threads)
    intersection = perc_intersect_dim(params, E_grid, config.replicas, rng, threads)
    empirical = {
        **_frequency_fields(survival, "survival_"),
        **_frequency_fields(intersection.intersection, "intersection_"),
        **_dimension_fields(intersection.dimension),
    }
    return RunResult(theory=theory, empirical=empirical, outcomes=intersection.intersection.outcomes)


RUNNERS: dict[Command, Callable[[ExperimentConfig, RngStream, Optional[int]], RunResult]] = {
    Command.PREDICT: _predict,
    Command.COVER_DIM: _cover_dim,
    Command.HIT: _hit,
    Command.INTERSECT_DIM: _intersect_dim,
    Command.BAD_CASE: _bad_case,
    Command.ROTATE: _rotate,
    Command.PERCOLATE: _percolate,
}


def run_command(config: ExperimentConfig, threads: Optional[int] = None) -> RunResult:
    log_message("running %s with seed %d", config.command.value, config.seed)
    return RUNNERS[config.command](config, RngStream(config.seed), threads)
