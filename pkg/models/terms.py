"""Term data models: binding signatures, raw terms, truncations and alpha classes

A raw term is `Var(atom)` or `Op(name, args)`; each argument carries the tuple of
atoms it binds. The same `Op`/`Arg` classes describe one unfolding layer of an
infinitary term, whose argument bodies are then infinitary terms themselves.
"""

import re
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Generic, Iterable, Optional, Tuple, TypeVar, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from models.atoms import Atom
from models.errors import SignatureError

R = TypeVar('R')

_OP_NAME = re.compile(r'^#?[A-Za-z_][A-Za-z0-9_?]*$')


@dataclass(frozen=True)
class Var:
    """Variable occurrence"""
    atom: Atom

    def __str__(self) -> str:
        return str(self.atom)


@dataclass(frozen=True, eq=False)
class Arg(Generic[R]):
    """One argument of an operation: binders plus the body they scope over"""
    binders: Tuple[Atom, ...]
    body: R
    _hash: int = field(default=0, init=False, repr=False)

    def __post_init__(self):
        binders = tuple(self.binders)
        if len(set(binders)) != len(binders):
            raise SignatureError(f"Repeated binder in {[str(a) for a in binders]}")
        object.__setattr__(self, 'binders', binders)
        object.__setattr__(self, '_hash', hash((binders, self.body)))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: Any) -> bool:
        if self is other:
            return True
        if not isinstance(other, Arg) or self._hash != other._hash:
            return False
        return self.binders == other.binders and self.body == other.body


@dataclass(frozen=True, eq=False)
class Op(Generic[R]):
    """Operation node; for infinitary terms this is one unfolding layer"""
    name: str
    args: Tuple[Arg[R], ...] = ()
    _hash: int = field(default=0, init=False, repr=False)

    def __post_init__(self):
        args = tuple(self.args)
        object.__setattr__(self, 'args', args)
        object.__setattr__(self, '_hash', hash((self.name, args)))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: Any) -> bool:
        if self is other:
            return True
        if not isinstance(other, Op) or self._hash != other._hash:
            return False
        return self.name == other.name and self.args == other.args

    @property
    def arity(self) -> Tuple[int, ...]:
        return tuple(len(arg.binders) for arg in self.args)

    @property
    def children(self) -> Tuple[R, ...]:
        return tuple(arg.body for arg in self.args)


@dataclass(frozen=True)
class Star:
    """Truncation leaf"""

    def __str__(self) -> str:
        return "*"


STAR = Star()

RawTerm = Union[Var, Op]
TruncTerm = Union[Var, Op, Star]
Layer = Union[Var, Op]


@dataclass(frozen=True)
class AlphaClass:
    """Alpha-equivalence class, held through its canonical representative"""
    canonical: TruncTerm

    def __str__(self) -> str:
        return f"[{self.canonical}]"


class BindingSignature(BaseModel):
    """Operation names with their binding arities.

    An operation of arity [n1, ..., nk] takes k arguments, the i-th binding ni atoms.
    Names starting with `constant_prefix` are accepted as constants (arity []).
    """
    model_config = ConfigDict(frozen=True)

    name: str = "custom"
    ops: Dict[str, Tuple[int, ...]] = Field(default_factory=dict)
    constant_prefix: Optional[str] = None

    @field_validator('ops')
    @classmethod
    def validate_ops(cls, v):
        for op_name, arity in v.items():
            if not _OP_NAME.match(op_name):
                raise ValueError(f"Invalid operation name: {op_name!r}")
            if any(n < 0 for n in arity):
                raise ValueError(f"Binding arity of {op_name} must be natural numbers")
        return v

    @property
    def constants(self) -> FrozenSet[str]:
        return frozenset(name for name, arity in self.ops.items() if not arity)

    def accepts(self, name: str) -> bool:
        if name in self.ops:
            return True
        return bool(self.constant_prefix) and name.startswith(self.constant_prefix)

    def arity(self, name: str) -> Tuple[int, ...]:
        if name in self.ops:
            return self.ops[name]
        if self.constant_prefix and name.startswith(self.constant_prefix):
            return ()
        raise SignatureError(f"Unknown operation {name!r} in signature {self.name}")

    def make(self, name: str, *args: Arg) -> Op:
        """Construct an operation node, checking the binding arity"""
        expected = self.arity(name)
        actual = tuple(len(arg.binders) for arg in args)
        if actual != expected:
            raise SignatureError(
                f"{name} expects binding arity {list(expected)}, got {list(actual)}")
        return Op(name, args)

    def check_layer(self, layer: Layer) -> None:
        """Check one node against the signature"""
        if isinstance(layer, Op):
            expected = self.arity(layer.name)
            if layer.arity != expected:
                raise SignatureError(
                    f"{layer.name} expects binding arity {list(expected)}, got {list(layer.arity)}")

    def check(self, term: TruncTerm) -> TruncTerm:
        """Check a finite term against the signature, returning it unchanged"""
        stack = [term]
        while stack:
            node = stack.pop()
            if isinstance(node, Op):
                self.check_layer(node)
                stack.extend(node.children)
        return term

    def extend(self, ops: Dict[str, Iterable[int]], name: Optional[str] = None) -> 'BindingSignature':
        merged = dict(self.ops)
        merged.update({op_name: tuple(arity) for op_name, arity in ops.items()})
        return BindingSignature(name=name or self.name, ops=merged,
                                constant_prefix=self.constant_prefix)


# Lambda calculus with bottom and constants
ABS = "abs"
APP = "app"
BOTTOM = "bot"
UNKNOWN = "unknown"
CONSTANT_PREFIX = "#"

LAMBDA_SIGNATURE = BindingSignature(
    name="lambda",
    ops={ABS: (1,), APP: (0, 0), BOTTOM: ()},
    constant_prefix=CONSTANT_PREFIX,
)

# Tree outputs additionally mark nodes left unresolved by fuel exhaustion
TREE_SIGNATURE = LAMBDA_SIGNATURE.extend({UNKNOWN: ()}, name="lambda-tree")


def var(a: Atom) -> Var:
    return Var(a)


def lam(*parts) -> Op:
    """lam(x, y, body) == λx.λy.body"""
    *binders, body = parts
    if not binders:
        raise SignatureError("lam needs at least one binder")
    for a in reversed(binders):
        body = Op(ABS, (Arg((a,), body),))
    return body


def app(head, *args) -> Any:
    """Left-associated application head a1 ... an"""
    term = head
    for a in args:
        term = Op(APP, (Arg((), term), Arg((), a)))
    return term


BOT = Op(BOTTOM)
UNKNOWN_LEAF = Op(UNKNOWN)


def const(name: str) -> Op:
    if not name.startswith(CONSTANT_PREFIX):
        name = CONSTANT_PREFIX + name
    return Op(name)


def is_abs(layer: Any) -> bool:
    return isinstance(layer, Op) and layer.name == ABS


def is_app(layer: Any) -> bool:
    return isinstance(layer, Op) and layer.name == APP


def is_bot(layer: Any) -> bool:
    return isinstance(layer, Op) and layer.name == BOTTOM


def is_unknown(layer: Any) -> bool:
    return isinstance(layer, Op) and layer.name == UNKNOWN


def is_const(layer: Any) -> bool:
    return isinstance(layer, Op) and layer.name.startswith(CONSTANT_PREFIX)


def spine(t: TruncTerm) -> Tuple[TruncTerm, Tuple[TruncTerm, ...]]:
    """Split a finite term into its application head and arguments"""
    args = []
    while is_app(t):
        t, arg = t.children
        args.append(arg)
    return t, tuple(reversed(args))


def abstractions(t: TruncTerm) -> Tuple[Tuple[Atom, ...], TruncTerm]:
    """Split a finite term into its binder prefix and the body below it"""
    binders = []
    while is_abs(t):
        arg = t.args[0]
        binders.append(arg.binders[0])
        t = arg.body
    return tuple(binders), t
