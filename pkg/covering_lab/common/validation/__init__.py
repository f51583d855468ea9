from covering_lab.common.validation.field_validator import ConfigValidator, ValidationError
from covering_lab.common.validation.rules import FieldRules

__all__ = ["ConfigValidator", "FieldRules", "ValidationError"]
