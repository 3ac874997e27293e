"""
Configuration module for the nominal terms toolkit
Manages observation depths, reduction fuel and caching settings
"""

import os
import sys
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _env_int(name: str, default: int) -> int:
    return int(os.getenv(name, str(default)))


class Config:
    """Application configuration"""

    # Observation defaults (CLI --depth / --fuel)
    DEFAULT_DEPTH = _env_int("NOMINAL_DEFAULT_DEPTH", 8)
    DEFAULT_FUEL = _env_int("NOMINAL_DEFAULT_FUEL", 256)

    # top_step normalizes the operator with this multiple of the outer fuel
    TOP_INNER_FUEL_FACTOR = _env_int("NOMINAL_TOP_INNER_FUEL_FACTOR", 10)

    # represent_limit probes chain supports up to this depth unless told otherwise
    LIMIT_PROBE_DEPTH = _env_int("NOMINAL_LIMIT_PROBE_DEPTH", 12)

    # Longest head spine walked on an infinitary term within one step
    SPINE_LIMIT = _env_int("NOMINAL_SPINE_LIMIT", 4096)

    # Cache Configuration
    ENABLE_CACHE = os.getenv("NOMINAL_ENABLE_CACHE", "True").lower() == "true"
    CACHE_MAX_SIZE = _env_int("NOMINAL_CACHE_MAX_SIZE", 2048)

    # Reduction traces of growing terms nest deeply
    RECURSION_LIMIT = _env_int("NOMINAL_RECURSION_LIMIT", 20000)

    # Output Configuration
    UNICODE_OUTPUT = os.getenv("NOMINAL_UNICODE", "False").lower() == "true"

    LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING")

    @classmethod
    def top_inner_fuel(cls, fuel: int) -> int:
        """Fuel for the weak-head normalization inside one top step"""
        return max(1, fuel * cls.TOP_INNER_FUEL_FACTOR)


def validate_settings():
    """Validate that numeric settings are usable"""
    positive = ['DEFAULT_DEPTH', 'DEFAULT_FUEL', 'TOP_INNER_FUEL_FACTOR',
                'LIMIT_PROBE_DEPTH', 'SPINE_LIMIT', 'CACHE_MAX_SIZE']

    bad = [name for name in positive if getattr(Config, name) <= 0]
    if bad:
        raise ValueError(f"Settings must be positive: {bad}")

    return True


def raise_recursion_limit():
    """Deep terms are walked recursively; make room for them"""
    if sys.getrecursionlimit() < Config.RECURSION_LIMIT:
        sys.setrecursionlimit(Config.RECURSION_LIMIT)
