"""
Application constants and enumerations
"""

from enum import Enum, IntEnum
from typing import Dict, List


class Command(Enum):
    """CLI command enumeration"""
    PARSE = "parse"
    CANON = "canon"
    FV = "fv"
    TRUNCATE = "truncate"
    SUBST = "subst"
    REDUCE = "reduce"
    BT = "bt"
    LLT = "llt"
    BET = "bet"
    ALPHA_EQ = "alpha-eq"
    DIST = "dist"
    LIMIT_REP = "limit-rep"


class ExitCode(IntEnum):
    """Process exit codes"""
    SUCCESS = 0
    INPUT_ERROR = 1
    SUPPORT_VIOLATION = 2
    INCONCLUSIVE = 3
    DOMAIN_ERROR = 4


class TreeKind(Enum):
    """Infinite normal forms computed by the tree commands"""
    BOHM = "bt"
    LEVY_LONGO = "llt"
    BERARDUCCI = "bet"


# Commands accepting terms over a custom signature (--sig)
GENERIC_COMMANDS: List[str] = [
    Command.PARSE.value, Command.CANON.value, Command.FV.value, Command.TRUNCATE.value,
    Command.ALPHA_EQ.value, Command.DIST.value,
]

# Printer glyphs
ASCII_GLYPHS: Dict[str, str] = {
    'lambda': '\\',
    'bottom': '_|_',
    'unknown': '_|_?',
    'star': '*',
}

UNICODE_GLYPHS: Dict[str, str] = {
    'lambda': 'λ',
    'bottom': '⊥',
    'unknown': '⊥?',
    'star': '*',
}

# Standard prelude, parsed in order; later entries may use earlier ones
PRELUDE: Dict[str, str] = {
    'I': r'\x. x',
    'K': r'\x y. x',
    'Omega': r'(\x. x x) (\x. x x)',
    'Y': r'\f. (\x. f (x x)) (\x. f (x x))',
    'fix': r'\f. (\x. f (x x)) (\x. f (x x))',
}

# Validation limits for CLI flags
MAX_DEPTH = 512
MAX_FUEL = 1_000_000
