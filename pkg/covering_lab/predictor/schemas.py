from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict

from covering_lab.utils.enums import Verdict


class RegimeVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    verdict: Verdict
    t: float
    alpha: float
    dim_h: float
    dim_p: float
    condition_c: bool = False
    # covering-set dimension of a rotated family, when the verdict comes from s0 rather than alpha
    s0: Optional[float] = None

    @property
    def hits(self) -> bool:
        return self.verdict.hits


class IntersectBounds(BaseModel):
    model_config = ConfigDict(frozen=True)

    lower: float
    upper: float
    applicable: bool = True
    reason: str = ""
    # set when dim_h F = dim_p F and the two bounds coincide
    exact: Optional[float] = None


class TorusUpper(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["EmptyAS", "UpperBound"]
    value: Optional[float] = None


class RotatedLower(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["LowerBound", "HypothesisFails"]
    value: Optional[float] = None
    reason: str = ""
