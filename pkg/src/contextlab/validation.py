"""Validation utilities for parsed JSON payloads."""

import math
import numbers


def validate_json_object(data, what):
    """
    Validate that a parsed payload is a JSON object.

    Args:
        data: Parsed JSON value
        what: Name of the payload, used in the message

    Returns:
        tuple: (data: dict|None, error: str|None)
    """
    if not isinstance(data, dict):
        return None, f"{what} must be a JSON object"
    return data, None


def validate_required_int(data, field_name, minimum=None):
    """
    Validate and extract a required integer field.

    Args:
        data: Dictionary containing the payload
        field_name: Name of the field to validate
        minimum: Smallest accepted value (None for no minimum)

    Returns:
        tuple: (value: int|None, error: str|None)
    """
    value = data.get(field_name)
    if value is None:
        return None, f"{field_name} is required"
    if isinstance(value, bool) or not isinstance(value, int):
        return None, f"{field_name} must be an integer"
    if minimum is not None and value < minimum:
        return None, f"{field_name} must be at least {minimum}"
    return value, None


def validate_required_list(data, field_name):
    """
    Validate and extract a required list field.

    Returns:
        tuple: (value: list|None, error: str|None)
    """
    value = data.get(field_name)
    if value is None:
        return None, f"{field_name} is required"
    if not isinstance(value, list):
        return None, f"{field_name} must be a list"
    return value, None


def validate_number(value, field_name):
    """
    Validate a finite real number.

    Returns:
        tuple: (value: float|None, error: str|None)
    """
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        return None, f"{field_name} must be a number"
    if not math.isfinite(value):
        return None, f"{field_name} must be finite"
    return float(value), None


def validate_probability_list(data, field_name):
    """
    Validate a list of probabilities in [0, 1].

    Returns:
        tuple: (values: list[float]|None, error: str|None)
    """
    values, error = validate_required_list(data, field_name)
    if error is not None:
        return None, error
    result = []
    for index, value in enumerate(values):
        number, error = validate_number(value, f"{field_name}[{index}]")
        if error is not None:
            return None, error
        if not 0.0 <= number <= 1.0:
            return None, f"{field_name}[{index}] must lie in [0, 1]"
        result.append(number)
    return result, None


def validate_label_pair(value, field_name):
    """
    Validate a pair of 1-based vertex labels.

    Returns:
        tuple: (pair: tuple[int, int]|None, error: str|None)
    """
    if not isinstance(value, list) or len(value) != 2:
        return None, f"{field_name} must be a pair of vertex labels"
    for label in value:
        if isinstance(label, bool) or not isinstance(label, int) or label < 1:
            return None, f"{field_name} must hold positive integer labels"
    return (value[0], value[1]), None


def validate_complex(value, field_name):
    """
    Validate a complex amplitude, written as a number or as [re, im].

    Returns:
        tuple: (value: complex|None, error: str|None)
    """
    if isinstance(value, list):
        if len(value) != 2:
            return None, f"{field_name} must be a number or [re, im]"
        real, error = validate_number(value[0], field_name)
        if error is None:
            imag, error = validate_number(value[1], field_name)
        if error is not None:
            return None, error
        return complex(real, imag), None
    number, error = validate_number(value, field_name)
    if error is not None:
        return None, error
    return complex(number, 0.0), None


def validate_outcome(value, n, field_name):
    """
    Validate an outcome tuple of n entries from {-1, +1}.

    Returns:
        tuple: (outcome: tuple|None, error: str|None)
    """
    if not isinstance(value, list) or len(value) != n:
        return None, f"{field_name} must list {n} outcomes"
    if any(isinstance(a, bool) or a not in (-1, 1) for a in value):
        return None, f"{field_name} entries must be -1 or 1"
    return tuple(value), None
