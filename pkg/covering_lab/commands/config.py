from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic import ValidationError as PydanticValidationError

from covering_lab.common.exceptions import InvalidConfigError
from covering_lab.common.response.schemas import ErrorDetail
from covering_lab.common.validation import ConfigValidator, FieldRules, ValidationError
from covering_lab.coversim.schemas import SimWindow
from covering_lab.geometry.schemas import BallFamily, ShapeFamily
from covering_lab.percolation.schemas import PercParams
from covering_lab.radii.schemas import RadiusSequence
from covering_lab.targets.schemas import TargetSet
from covering_lab.utils.enums import Command
from covering_lab.utils.file import read_json

SEED_MAX = (1 << 64) - 1

# sections each command cannot run without
REQUIRED_SECTIONS = {
    Command.PREDICT: ("seq",),
    Command.COVER_DIM: ("seq", "window"),
    Command.HIT: ("seq", "window", "target"),
    Command.INTERSECT_DIM: ("seq", "window", "target"),
    Command.BAD_CASE: ("seq", "window", "target"),
    Command.ROTATE: ("seq", "window", "target"),
    Command.PERCOLATE: ("percolation",),
}


class WindowSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    m0: int
    m1: int
    depth: int


class PercolationSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    s: float
    depth: int


class ExperimentConfig(BaseModel):
    """One experiment; every resolved field is echoed into the report."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Command
    d: int = 1
    seq: Optional[RadiusSequence] = None
    shape: ShapeFamily = Field(default_factory=BallFamily)
    rotations: bool = False
    target: Optional[TargetSet] = None
    window: Optional[WindowSpec] = None
    jmin: Optional[int] = None
    jmax: Optional[int] = None
    replicas: int = 20
    seed: int = 0
    n_max: int = 10 ** 5
    tail_kmin: int = 8
    percolation: Optional[PercolationSpec] = None

    @model_validator(mode="after")
    def check_dimensions(self):
        if self.target is not None and self.target.d != self.d:
            raise ValueError(f"target dimension {self.target.d} does not match d = {self.d}")
        if self.shape.kind != "ball" and len(self.shape.H) != self.d:
            raise ValueError(f"shape has {len(self.shape.H)} exponents but d = {self.d}")
        return self

    def sim_window(self) -> SimWindow:
        return SimWindow(d=self.d, m0=self.window.m0, m1=self.window.m1, depth=self.window.depth, seq=self.seq,
                         shape=self.shape, rotations=self.rotations)

    def perc_params(self) -> PercParams:
        return PercParams(d=self.d, s=self.percolation.s, depth=self.percolation.depth)


def config_rules(command: Command) -> list[FieldRules]:
    rules = [
        FieldRules('command').required().in_list([c.value for c in Command]),
        FieldRules('d').nullable().integer().min(1).max(3),
        FieldRules('replicas').nullable().integer().min(1),
        FieldRules('seed').nullable().integer().min(0).max(SEED_MAX),
        FieldRules('n_max').nullable().integer().min(1),
        FieldRules('tail_kmin').nullable().integer().min(0),
        FieldRules('jmin').nullable().integer().min(0),
        FieldRules('jmax').nullable().integer().gte_field('jmin').lte_field('window.depth'),
        FieldRules('window.m0').nullable().integer().min(1),
        FieldRules('window.m1').nullable().integer().gte_field('window.m0'),
        FieldRules('window.depth').nullable().integer().gte_field('window.m1'),
        FieldRules('percolation.s').nullable().min(0),
        FieldRules('percolation.depth').nullable().integer().min(1),
    ]
    for section in REQUIRED_SECTIONS[command]:
        rules.append(FieldRules(section).required())
    if section_needs_window(command):
        rules += [FieldRules('window.m0').required(), FieldRules('window.m1').required(),
                  FieldRules('window.depth').required()]
    if command == Command.PERCOLATE:
        rules += [FieldRules('percolation.s').required(), FieldRules('percolation.depth').required()]
    if command in (Command.BAD_CASE, Command.ROTATE):
        rules += [
            FieldRules('d').required().in_list([2]),
            FieldRules('shape.kind').required().in_list(['axis_rect', 'rotated_rect']),
        ]
    return rules


def section_needs_window(command: Command) -> bool:
    return "window" in REQUIRED_SECTIONS[command]


def _pydantic_errors(error: PydanticValidationError, prefix: str = "") -> list[ErrorDetail]:
    details = []
    for item in error.errors():
        field = ".".join(str(part) for part in (prefix, *item["loc"]) if part != "")
        details.append(ErrorDetail(field or "config", item["msg"]))
    return details


def parse_config(data: dict[str, Any]) -> ExperimentConfig:
    """Validate a raw config dict; every failing field is named in the raised InvalidConfigError."""
    if not isinstance(data, dict):
        raise InvalidConfigError("Experiment config must be a JSON object")
    try:
        command = Command(data.get("command"))
    except ValueError:
        raise InvalidConfigError("Invalid experiment config",
                                 [ErrorDetail("command", f"Command must be one of {', '.join(c.value for c in Command)}")])
    try:
        ConfigValidator().validate(data, config_rules(command))
    except ValidationError as e:
        raise InvalidConfigError(str(e), e.errors)

    try:
        config = ExperimentConfig.model_validate(data)
    except PydanticValidationError as e:
        raise InvalidConfigError("Invalid experiment config", _pydantic_errors(e))
    errors = []
    if config.window is not None and config.seq is not None:
        try:
            config.sim_window()
        except PydanticValidationError as e:
            errors += _pydantic_errors(e, "window")
    if config.percolation is not None:
        try:
            config.perc_params()
        except PydanticValidationError as e:
            errors += _pydantic_errors(e, "percolation")
    if errors:
        raise InvalidConfigError("Invalid experiment config", errors)
    return config


def load_config(path: str, command: Optional[str] = None, **overrides) -> ExperimentConfig:
    """Read a JSON config; the subcommand and non-None flag values override the file."""
    try:
        data = read_json(path)
    except FileNotFoundError:
        raise InvalidConfigError(f"Config file '{path}' not found")
    except ValueError as e:
        raise InvalidConfigError(f"Config file '{path}' is not valid JSON: {e}")
    if not isinstance(data, dict):
        raise InvalidConfigError("Experiment config must be a JSON object")
    if command is not None:
        data["command"] = command
    data.update({key: value for key, value in overrides.items() if value is not None})
    return parse_config(data)
