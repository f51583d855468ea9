from dataclasses import dataclass
from typing import Annotated, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from covering_lab.common.exceptions import InvalidConfigError
from covering_lab.geometry.torus import torus_delta

ORTHOGONALITY_TOL = 1e-12


class SnowflakeExponents(BaseModel):
    """Exponents 1 = H_1 >= H_2 >= ... >= H_d > 0."""
    model_config = ConfigDict(frozen=True)

    H: tuple[float, ...] = Field(min_length=1)

    @field_validator("H")
    @classmethod
    def check_order(cls, H):
        if H[0] != 1:
            raise ValueError(f"H_1 must equal 1, got {H[0]}")
        if any(h <= 0 for h in H):
            raise ValueError("exponents must be positive")
        if any(b > a for a, b in zip(H, H[1:])):
            raise ValueError("exponents must be non-increasing")
        return H

    @property
    def d(self) -> int:
        return len(self.H)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.H, dtype=np.float64)

    @property
    def t(self) -> float:
        """Regularity exponent of the torus under the snowflake metric."""
        return float(sum(1.0 / h for h in self.H))

    @classmethod
    def isotropic(cls, d: int) -> "SnowflakeExponents":
        return cls(H=(1.0,) * d)


def _check_radius(r: float):
    if not 0 < r < 1:
        raise InvalidConfigError(f"shape radius must lie in (0, 1), got {r}")


def _check_fits(half_sides: np.ndarray):
    # placed shapes must sit inside the open ball U(0, 1/2)
    if float(np.sqrt(np.sum(half_sides ** 2))) >= 0.5:
        raise InvalidConfigError("rectangle does not fit inside the ball of radius 1/2")


@dataclass(frozen=True)
class Ball:
    r: float

    def __post_init__(self):
        _check_radius(self.r)


@dataclass(frozen=True)
class AxisRect:
    """Rectangle with side r^(1/H_i) along axis i, centred at the origin."""
    H: SnowflakeExponents
    r: float

    def __post_init__(self):
        _check_radius(self.r)
        _check_fits(self.half_sides)

    @property
    def sides(self) -> np.ndarray:
        return np.power(self.r, 1.0 / self.H.array)

    @property
    def half_sides(self) -> np.ndarray:
        return self.sides / 2


@dataclass(frozen=True, eq=False)
class RotatedRect:
    H: SnowflakeExponents
    r: float
    rotation: np.ndarray

    def __post_init__(self):
        _check_radius(self.r)
        _check_fits(self.half_sides)
        d = self.H.d
        if self.rotation.shape != (d, d):
            raise InvalidConfigError(f"rotation must be {d}x{d}, got {self.rotation.shape}")
        error = np.abs(self.rotation.T @ self.rotation - np.eye(d)).max()
        if error > ORTHOGONALITY_TOL:
            raise InvalidConfigError(f"rotation is not orthogonal: |R^T R - I|_max = {error:.3g}")

    @property
    def sides(self) -> np.ndarray:
        return np.power(self.r, 1.0 / self.H.array)

    @property
    def half_sides(self) -> np.ndarray:
        return self.sides / 2


GeneratingShape = Union[Ball, AxisRect, RotatedRect]


@dataclass(frozen=True)
class BoxExtent:
    """Closed torus box [center - half, center + half]."""
    center: np.ndarray
    half_sides: np.ndarray

    @property
    def sides(self) -> np.ndarray:
        return 2 * self.half_sides

    def contains(self, y) -> bool:
        return bool(np.all(np.abs(torus_delta(self.center, y)) <= self.half_sides))


class BallFamily(BaseModel):
    model_config = ConfigDict(frozen=True)
    kind: Literal["ball"] = "ball"

    def exponents(self, d: int) -> SnowflakeExponents:
        return SnowflakeExponents.isotropic(d)

    def at(self, r: float, rotation: Optional[np.ndarray] = None) -> GeneratingShape:
        return Ball(r)


class AxisRectFamily(BaseModel):
    model_config = ConfigDict(frozen=True)
    kind: Literal["axis_rect"] = "axis_rect"
    H: tuple[float, ...] = Field(min_length=1)

    @field_validator("H")
    @classmethod
    def check_exponents(cls, H):
        SnowflakeExponents(H=H)
        return H

    def exponents(self, d: int) -> SnowflakeExponents:
        return SnowflakeExponents(H=self.H)

    def at(self, r: float, rotation: Optional[np.ndarray] = None) -> GeneratingShape:
        if rotation is not None:
            return RotatedRect(self.exponents(len(self.H)), r, rotation)
        return AxisRect(self.exponents(len(self.H)), r)


class RotatedRectFamily(AxisRectFamily):
    kind: Literal["rotated_rect"] = "rotated_rect"

    def at(self, r: float, rotation: Optional[np.ndarray] = None) -> GeneratingShape:
        if rotation is None:
            raise InvalidConfigError("rotated rectangles need a rotation")
        return RotatedRect(self.exponents(len(self.H)), r, rotation)


ShapeFamily = Annotated[Union[BallFamily, AxisRectFamily, RotatedRectFamily], Field(discriminator="kind")]
