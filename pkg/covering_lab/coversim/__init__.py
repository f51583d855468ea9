from covering_lab.coversim.pool import run_replicas
from covering_lab.coversim.schemas import (DimEstimate, DimSummary, GenerationDraw, HitFrequency, ReplicaOutcome,
                                           SimWindow)
from covering_lab.coversim.service import (box_dim_estimate, draw_generation, generation_rasterize, hit_test,
                                           hitting_frequency, intersection_dim, limsup_from_generations,
                                           limsup_proxy, predicted_verdict, projection_hit_count,
                                           projection_hit_counts, proxy_dimension, rasterize_generation,
                                           summarize_slopes, wilson_interval)

__all__ = [
    "DimEstimate", "DimSummary", "GenerationDraw", "HitFrequency", "ReplicaOutcome", "SimWindow",
    "box_dim_estimate", "draw_generation", "generation_rasterize", "hit_test", "hitting_frequency",
    "intersection_dim", "limsup_from_generations", "limsup_proxy", "predicted_verdict", "projection_hit_count",
    "projection_hit_counts", "proxy_dimension", "rasterize_generation", "run_replicas", "summarize_slopes",
    "wilson_interval",
]
