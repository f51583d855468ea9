from covering_lab.geometry.schemas import (AxisRect, AxisRectFamily, Ball, BallFamily, BoxExtent, GeneratingShape,
                                           RotatedRect, RotatedRectFamily, ShapeFamily, SnowflakeExponents)
from covering_lab.geometry.service import (cells_touched, kappa_ball_as_rect, kappa_dist, predicate_is_exact,
                                           shape_cell_intersects, shape_extent, torus_delta, wrap)

__all__ = [
    "AxisRect", "AxisRectFamily", "Ball", "BallFamily", "BoxExtent", "GeneratingShape", "RotatedRect",
    "RotatedRectFamily", "ShapeFamily", "SnowflakeExponents",
    "cells_touched", "kappa_ball_as_rect", "kappa_dist", "predicate_is_exact", "shape_cell_intersects",
    "shape_extent", "torus_delta", "wrap",
]
