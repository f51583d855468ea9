from covering_lab.targets.schemas import AffineSlice, DigitCantor, TargetSet, TargetUnion
from covering_lab.targets.service import (axis_dimensions, rasterize_target, snowflake_box_counts,
                                          snowflake_box_dim, target_axis_cells, target_dim_snowflake, target_dims)

__all__ = [
    "AffineSlice", "DigitCantor", "TargetSet", "TargetUnion",
    "axis_dimensions", "rasterize_target", "snowflake_box_counts", "snowflake_box_dim", "target_axis_cells",
    "target_dim_snowflake", "target_dims",
]
