"""Result models returned by reductions, metrics and tree computations"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, List, Optional, Tuple, Union

from pydantic import BaseModel, Field


class Strategy(str, Enum):
    """Reduction strategy"""
    HEAD = "head"
    WHEAD = "whead"
    TOP = "top"


class ZeroVerdict(str, Enum):
    """Three-valued answer of the zero-term test"""
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Reached:
    """Normal form for the strategy was hit"""
    term: Any
    steps: int = 0


@dataclass(frozen=True)
class Diverges:
    """An alpha-equal term recurred in the reduction trace"""
    term: Any
    steps: int = 0


@dataclass(frozen=True)
class FuelExhausted:
    """Fuel ran out before a normal form or a cycle showed up"""
    term: Any
    steps: int


ReductionOutcome = Union[Reached, Diverges, FuelExhausted]


@dataclass(frozen=True)
class Exact:
    """Distance known exactly"""
    value: Fraction

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class AtMost:
    """All observed truncations agree; the distance is at most this bound"""
    value: Fraction

    def __str__(self) -> str:
        return f"<= {self.value}"


DistanceBound = Union[Exact, AtMost]


@dataclass(frozen=True)
class Resolved:
    """Tree node decided by the reduction"""

    def __str__(self) -> str:
        return "resolved"


@dataclass(frozen=True)
class Unknown:
    """Tree node left open after spending `fuel` steps"""
    fuel: int

    def __str__(self) -> str:
        return "unknown"


TreeNodeStatus = Union[Resolved, Unknown]

# Path of argument indices from the root to a node
Position = Tuple[int, ...]


class CommandResult(BaseModel):
    """Envelope of every JSON rendering produced by the CLI"""
    kind: str
    term: Optional[Any] = None
    status: str = Field("resolved", pattern=r'^(resolved|unknown)$')
    value: Optional[Any] = None
    unknown_positions: List[List[int]] = []
