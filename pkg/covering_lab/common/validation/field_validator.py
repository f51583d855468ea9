from typing import Any, Optional

from covering_lab.common.response.schemas import ErrorDetail
from covering_lab.common.validation.rules import FieldRules


class ValidationError(Exception):
    def __init__(self, message: str, errors: list = None):
        """
        Initialize the ValidationError with a message and optional errors.

        Args:
            message (str): The main error message.
            errors (list): A list of ErrorDetail records, one per failing field.
        """
        super().__init__(message)
        self.errors = errors if errors else []

    def __str__(self):
        return self.args[0]


_MISSING = object()


def to_title_case(field: str) -> str:
    return field.split('.')[-1].replace('_', ' ').title()


class ConfigValidator:

    def field_value(self, field: str, data: Optional[dict]) -> Any:
        value = data
        for part in field.split('.'):
            if isinstance(value, dict) and part in value:
                value = value[part]
            else:
                return _MISSING
        return value

    def validate_field(self, field_rule: FieldRules, data: dict):
        field = field_rule.field
        value = self.field_value(field, data)
        field_name = to_title_case(field)

        for rule, param in field_rule.rules:
            if rule == 'nullable' and (value is _MISSING or value is None):
                return

            if rule == 'required' and (value is _MISSING or value is None):
                raise ValidationError(f"Field '{field_name}' is required")

            if value is _MISSING or value is None:
                continue

            if rule == 'integer' and (isinstance(value, bool) or not isinstance(value, int)):
                raise ValidationError(f"{field_name} must be an integer")

            if rule in ('min', 'max') and not isinstance(value, (int, float)):
                raise ValidationError(f"{field_name} must be a number")

            if rule == 'min' and value < param:
                raise ValidationError(f"{field_name} must be at least {param}")

            if rule == 'max' and value > param:
                raise ValidationError(f"{field_name} must not exceed {param}")

            if rule == 'in_list' and value not in param:
                raise ValidationError(f"{field_name} must be one of {', '.join(map(str, param))}")

            if rule in ('lte_field', 'gte_field'):
                other = self.field_value(param, data)
                if other is _MISSING or other is None:
                    continue
                if rule == 'lte_field' and value > other:
                    raise ValidationError(f"{field_name} must not exceed {to_title_case(param)}")
                if rule == 'gte_field' and value < other:
                    raise ValidationError(f"{field_name} must be at least {to_title_case(param)}")

    def validate(self, data: dict, all_rules: list[FieldRules]):
        errors = []
        for field_rule in all_rules:
            try:
                self.validate_field(field_rule, data)
            except ValidationError as ve:
                errors.append(ErrorDetail(field_rule.field, str(ve)))

        if errors:
            raise ValidationError("Invalid experiment config", errors)
