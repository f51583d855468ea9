from covering_lab.radii.schemas import (AlphaEstimate, BucketTable, ConditionCResult, Explicit, Geometric, PowerLaw,
                                        RadiusSequence)
from covering_lab.radii.service import (alpha_estimate, alpha_of, bucket_index, buckets, condition_c_check,
                                        generation_indices, limsup_exponent, radii_at, series_sum)

__all__ = [
    "AlphaEstimate", "BucketTable", "ConditionCResult", "Explicit", "Geometric", "PowerLaw", "RadiusSequence",
    "alpha_estimate", "alpha_of", "bucket_index", "buckets", "condition_c_check", "generation_indices",
    "limsup_exponent", "radii_at", "series_sum",
]
