from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class ErrorDetail(BaseModel):
    field: str
    message: str

    def __init__(self, field: str, message: str, **kwargs):
        super().__init__(field=field, message=message, **kwargs)


class TheoryBlock(BaseModel):
    """Closed-form values from the predictor."""
    model_config = ConfigDict(extra="allow")
    provenance: Literal["theory"] = "theory"


class EmpiricalBlock(BaseModel):
    """Values measured by simulation."""
    model_config = ConfigDict(extra="allow")
    provenance: Literal["empirical"] = "empirical"


class ExperimentReport(BaseModel):
    command: str
    seed: int
    status: bool = True
    code: int = 0
    message: str = "ok"
    errors: Optional[List[ErrorDetail]] = None
    config: Dict[str, Any] = Field(default_factory=dict)
    theory: TheoryBlock = Field(default_factory=TheoryBlock)
    empirical: EmpiricalBlock = Field(default_factory=EmpiricalBlock)
