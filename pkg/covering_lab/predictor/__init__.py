from covering_lab.predictor.schemas import IntersectBounds, RegimeVerdict, RotatedLower, TorusUpper
from covering_lab.predictor.service import (SnowflakeProfile, classify_hitting, expected_projection_hits,
                                            intersect_bounds, intersection_value, rotated_bounds, rotated_lower,
                                            s0_from_limsup, s0_rect, s0_rotated, s0_series_crosscheck,
                                            snowflake_profile, svf_exponent, svf_phi, torus_upper)

__all__ = [
    "IntersectBounds", "RegimeVerdict", "RotatedLower", "SnowflakeProfile", "TorusUpper",
    "classify_hitting", "expected_projection_hits", "intersect_bounds", "intersection_value", "rotated_bounds",
    "rotated_lower", "s0_from_limsup", "s0_rect", "s0_rotated", "s0_series_crosscheck", "snowflake_profile",
    "svf_exponent", "svf_phi", "torus_upper",
]
