import math
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class DigitCantor(BaseModel):
    """Product of digit-restricted Cantor sets: coordinate i uses base-b digits from D_i."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["digit_cantor"] = "digit_cantor"
    base: int = Field(ge=2)
    digits: tuple[tuple[int, ...], ...] = Field(min_length=1)

    @field_validator("digits")
    @classmethod
    def normalize_digits(cls, digits):
        for i, allowed in enumerate(digits, start=1):
            if not allowed:
                raise ValueError(f"digit set D_{i} is empty")
        return tuple(tuple(sorted(set(allowed))) for allowed in digits)

    @model_validator(mode="after")
    def check_digits(self):
        for i, allowed in enumerate(self.digits, start=1):
            if any(not 0 <= digit < self.base for digit in allowed):
                raise ValueError(f"digit set D_{i} has digits outside 0..{self.base - 1}")
        return self

    @property
    def d(self) -> int:
        return len(self.digits)

    @property
    def dim(self) -> float:
        return sum(math.log(len(allowed)) / math.log(self.base) for allowed in self.digits)


class AffineSlice(BaseModel):
    """Coordinates listed in ``fixed`` (1-based) are held at their values; the others are free."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["affine_slice"] = "affine_slice"
    d: int = Field(ge=1)
    fixed: dict[int, float] = Field(default_factory=dict)

    @field_validator("fixed")
    @classmethod
    def check_fixed(cls, fixed):
        for axis, value in fixed.items():
            if not -0.5 <= value < 0.5:
                raise ValueError(f"fixed value {value} for coordinate {axis} is outside [-1/2, 1/2)")
        return dict(sorted(fixed.items()))

    @model_validator(mode="after")
    def check_axes(self):
        if any(not 1 <= axis <= self.d for axis in self.fixed):
            raise ValueError(f"fixed coordinates must lie in 1..{self.d}")
        return self

    @property
    def dim(self) -> float:
        return float(self.d - len(self.fixed))


ProductTarget = Annotated[Union[DigitCantor, AffineSlice], Field(discriminator="kind")]


class TargetUnion(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["union"] = "union"
    parts: tuple[ProductTarget, ...] = Field(min_length=1)

    @model_validator(mode="after")
    def check_dimensions(self):
        if len({part.d for part in self.parts}) != 1:
            raise ValueError("union parts must share the ambient dimension")
        return self

    @property
    def d(self) -> int:
        return self.parts[0].d

    @property
    def dim(self) -> float:
        return max(part.dim for part in self.parts)


TargetSet = Annotated[Union[DigitCantor, AffineSlice, TargetUnion], Field(discriminator="kind")]
