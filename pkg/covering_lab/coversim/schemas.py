from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from covering_lab.geometry.schemas import BallFamily, ShapeFamily
from covering_lab.geometry.service import predicate_is_exact
from covering_lab.grid import check_grid_size
from covering_lab.radii.schemas import RadiusSequence
from covering_lab.sampler.service import HAAR_DIMENSIONS


class SimWindow(BaseModel):
    """Generations m0..m1 rasterized on a depth-m grid of the d-torus."""
    model_config = ConfigDict(frozen=True)

    d: int = Field(default=1, ge=1, le=3)
    m0: int = Field(ge=1)
    m1: int
    depth: int
    seq: RadiusSequence
    shape: ShapeFamily = Field(default_factory=BallFamily)
    rotations: bool = False

    @model_validator(mode="after")
    def check_window(self):
        if self.m1 < self.m0:
            raise ValueError(f"m1 = {self.m1} must be >= m0 = {self.m0}")
        if self.depth < self.m1:
            raise ValueError(f"depth = {self.depth} must be >= m1 = {self.m1}")
        if self.shape.kind != "ball" and len(self.shape.H) != self.d:
            raise ValueError(f"shape has {len(self.shape.H)} exponents but d = {self.d}")
        if self.rotated and self.shape.kind == "ball":
            raise ValueError("rotations need rectangle generators")
        if self.rotated and self.d not in HAAR_DIMENSIONS:
            raise ValueError(f"rotations are supported for d in {HAAR_DIMENSIONS}")
        return self

    @property
    def rotated(self) -> bool:
        return self.rotations or self.shape.kind == "rotated_rect"

    @property
    def exact_predicate(self) -> bool:
        return predicate_is_exact(self.shape.kind, self.d, self.rotated)

    def check_resources(self):
        check_grid_size((self.depth,) * self.d)

    def with_rotations(self, rotations: bool) -> "SimWindow":
        data = self.model_dump()
        data["rotations"] = rotations
        if not rotations and self.shape.kind == "rotated_rect":
            data["shape"] = {"kind": "axis_rect", "H": self.shape.H}
        return SimWindow.model_validate(data)


@dataclass(frozen=True, eq=False)
class GenerationDraw:
    """Placements of the generators n in bucket k."""
    k: int
    indices: np.ndarray
    centers: np.ndarray
    radii: np.ndarray
    rotations: Optional[np.ndarray] = None

    @property
    def size(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class DimEstimate:
    slope: float
    intercept: float
    residual: float
    counts: dict[int, int]
    jmin: int
    jmax: int


@dataclass(frozen=True)
class ReplicaOutcome:
    replica: int
    cells: int
    hit: Optional[bool] = None
    estimate: Optional[DimEstimate] = None

    @property
    def slope(self) -> Optional[float]:
        return None if self.estimate is None else self.estimate.slope


@dataclass(frozen=True)
class HitFrequency:
    hits: int
    trials: int
    frequency: float
    ci_low: float
    ci_high: float
    empty_proxies: int
    outcomes: list[ReplicaOutcome] = field(default_factory=list)


@dataclass(frozen=True)
class DimSummary:
    median: float
    q1: float
    q3: float
    nonempty: int
    replicas: int
    outcomes: list[ReplicaOutcome] = field(default_factory=list)

    @property
    def iqr(self) -> float:
        return self.q3 - self.q1
