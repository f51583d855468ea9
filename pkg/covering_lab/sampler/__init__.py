from covering_lab.sampler.schemas import RngStream
from covering_lab.sampler.service import (derive, haar_rotation, haar_rotations, uniform_at, uniform_point,
                                          uniform_points)

__all__ = ["RngStream", "derive", "haar_rotation", "haar_rotations", "uniform_at", "uniform_point", "uniform_points"]
