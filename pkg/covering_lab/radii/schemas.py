from dataclasses import dataclass, field
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from covering_lab.utils.enums import ConditionStatus


class PowerLaw(BaseModel):
    """r_n = c n^(-1/a); c < 1 keeps r_1 inside bucket 0."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["power_law"] = "power_law"
    c: float = Field(default=0.5, gt=0, lt=1)
    a: float = Field(gt=0)


class Geometric(BaseModel):
    """r_n = lam^n."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["geometric"] = "geometric"
    lam: float = Field(gt=0, lt=1)


class Explicit(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["explicit"] = "explicit"
    values: tuple[float, ...] = Field(min_length=2)

    @field_validator("values")
    @classmethod
    def check_values(cls, values):
        for n, r in enumerate(values, start=1):
            if not 0 < r < 1:
                raise ValueError(f"r_{n} = {r} is outside (0, 1)")
        for n in range(1, len(values)):
            if values[n] > values[n - 1]:
                raise ValueError(f"radii must be non-increasing: r_{n + 1} = {values[n]} > r_{n} = {values[n - 1]}")
        if not values[-1] < values[0]:
            raise ValueError("last radius must be smaller than the first")
        return values


RadiusSequence = Annotated[Union[PowerLaw, Geometric, Explicit], Field(discriminator="kind")]


@dataclass(frozen=True)
class BucketTable:
    """
    Counts n_k = #{n : 2^-(k+1) <= r_n < 2^-k} for k = 0..kmax.

    Buckets of a non-increasing sequence are contiguous index ranges, so each
    is stored as its first index and its size. ``truncation`` is the largest
    index enumerated; ``exhausted`` is set when an explicit list ended before
    reaching 2^-(kmax+1).
    """
    kmax: int
    counts: tuple[int, ...]
    starts: tuple[int, ...]
    truncation: int
    exhausted: bool = False

    def indices(self, k: int) -> range:
        return range(self.starts[k], self.starts[k] + self.counts[k])

    @property
    def total(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True)
class AlphaEstimate:
    value: float
    truncated: bool = False


@dataclass(frozen=True)
class ConditionCResult:
    status: ConditionStatus
    witness: tuple[int, ...] = ()
    diagnostics: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status == ConditionStatus.HOLDS
