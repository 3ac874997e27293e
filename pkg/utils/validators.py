"""
Input validation utilities for command-line flags
"""

import os
from typing import Any, Dict, List, Optional, Tuple

from models.errors import NominalError
from models.results import Strategy
from utils.constants import GENERIC_COMMANDS, MAX_DEPTH, MAX_FUEL


class ValidationError(NominalError):
    """Invalid command-line flags"""
    pass


class FlagValidator:
    """Validators for individual flags"""

    @staticmethod
    def validate_depth(depth: Any) -> Tuple[bool, Optional[str]]:
        """
        Validate an observation depth

        Args:
            depth: Requested truncation depth

        Returns:
            Tuple of (is_valid, error_message)
        """
        if not isinstance(depth, int) or isinstance(depth, bool):
            return False, "Depth must be an integer"

        if depth < 0:
            return False, f"Depth cannot be negative, got {depth}"

        if depth > MAX_DEPTH:
            return False, f"Depth cannot exceed {MAX_DEPTH}"

        return True, None

    @staticmethod
    def validate_fuel(fuel: Any) -> Tuple[bool, Optional[str]]:
        """Validate a reduction fuel"""
        if not isinstance(fuel, int) or isinstance(fuel, bool):
            return False, "Fuel must be an integer"

        if fuel < 1:
            return False, f"Fuel must be at least 1, got {fuel}"

        if fuel > MAX_FUEL:
            return False, f"Fuel cannot exceed {MAX_FUEL}"

        return True, None

    @staticmethod
    def validate_probe(probe: Optional[int], depth: int) -> Tuple[bool, Optional[str]]:
        """Validate the support probe depth of limit-rep"""
        if probe is None:
            return True, None

        if probe < 1:
            return False, f"Probe depth must be at least 1, got {probe}"

        if probe < depth:
            return False, f"Probe depth {probe} is below the requested depth {depth}"

        return True, None

    @staticmethod
    def validate_strategy(strategy: Any) -> Tuple[bool, Optional[str]]:
        """Validate a reduction strategy name"""
        allowed = [s.value for s in Strategy]
        if strategy not in allowed:
            return False, f"Strategy must be one of {', '.join(allowed)}"

        return True, None

    @staticmethod
    def validate_file(path: Optional[str], label: str) -> Tuple[bool, Optional[str]]:
        """Validate that an optional input file exists"""
        if path is None:
            return True, None

        if not os.path.isfile(path):
            return False, f"{label} file not found: {path}"

        return True, None


def validate_flags(command: str, flags: Dict[str, Any]) -> Dict[str, Any]:
    """
    Validate the flags of one command

    Args:
        command: Command name
        flags: Parsed flag values

    Returns:
        Dictionary with validation results
    """
    errors: Dict[str, List[str]] = {}
    validator = FlagValidator()

    if flags.get('depth') is not None:
        is_valid, error = validator.validate_depth(flags['depth'])
        if not is_valid:
            errors.setdefault('depth', []).append(error)

    if flags.get('fuel') is not None:
        is_valid, error = validator.validate_fuel(flags['fuel'])
        if not is_valid:
            errors.setdefault('fuel', []).append(error)

    if flags.get('strategy') is not None:
        is_valid, error = validator.validate_strategy(flags['strategy'])
        if not is_valid:
            errors.setdefault('strategy', []).append(error)

    if flags.get('probe') is not None and flags.get('depth') is not None:
        is_valid, error = validator.validate_probe(flags['probe'], flags['depth'])
        if not is_valid:
            errors.setdefault('probe', []).append(error)

    for key, label in (('defs', 'Definitions'), ('sig', 'Signature')):
        is_valid, error = validator.validate_file(flags.get(key), label)
        if not is_valid:
            errors.setdefault(key, []).append(error)

    if flags.get('sig') is not None and command not in GENERIC_COMMANDS:
        errors.setdefault('sig', []).append(
            f"--sig is only supported by {', '.join(GENERIC_COMMANDS)}")

    return {
        'errors': errors,
        'is_valid': len(errors) == 0
    }


def require_valid_flags(command: str, flags: Dict[str, Any]) -> None:
    """Raise ValidationError listing every invalid flag"""
    result = validate_flags(command, flags)
    if not result['is_valid']:
        messages = [message for found in result['errors'].values() for message in found]
        raise ValidationError("; ".join(messages))
