from dataclasses import dataclass
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from covering_lab.coversim.schemas import DimSummary, HitFrequency
from covering_lab.grid import OccupancyGrid, check_grid_size


class PercParams(BaseModel):
    """Fractal percolation on the dyadic tree of the d-torus, each child kept with probability p = 2^-s."""
    model_config = ConfigDict(frozen=True)

    d: int = Field(default=1, ge=1, le=3)
    s: float = Field(ge=0)
    depth: int = Field(ge=1)

    @property
    def p(self) -> float:
        return 2.0 ** -self.s

    @property
    def arity(self) -> int:
        return 1 << self.d

    def check_resources(self):
        check_grid_size((self.depth,) * self.d)


@dataclass(frozen=True, eq=False)
class PercOutcome:
    grid: OccupancyGrid

    @property
    def survived(self) -> bool:
        return not self.grid.is_empty()


@dataclass(frozen=True)
class PercIntersection:
    """Frequency of a non-empty intersection with E, and slopes over the replicas where it is non-empty."""
    intersection: HitFrequency
    dimension: Optional[DimSummary] = None
