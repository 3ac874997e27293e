"""
Nominal values: permutation action, support, freshness, name-abstraction and concretion

Every concrete type takes part in the contract by registering an implementation of
`act` and `supp`. Atoms, tuples, lists and frozensets are handled here; terms register
themselves in the signature and infinite modules.
"""

import logging
from dataclasses import dataclass
from functools import singledispatch
from typing import Any, FrozenSet, Generic, TypeVar

from models.atoms import Atom, Perm, apply, fresh_atom, swap
from models.errors import NotFresh

logger = logging.getLogger(__name__)

X = TypeVar('X')


@singledispatch
def _action(x: Any, p: Perm) -> Any:
    raise TypeError(f"{type(x).__name__} is not a nominal value")


@singledispatch
def _support(x: Any) -> FrozenSet[Atom]:
    raise TypeError(f"{type(x).__name__} is not a nominal value")


def act(p: Perm, x: Any) -> Any:
    """Permutation action p . x"""
    if not p:
        return x
    return _action(x, p)


def supp(x: Any) -> FrozenSet[Atom]:
    """Least finite support, computed per type"""
    return _support(x)


def register(cls, action, support):
    """Make `cls` a nominal value: action(p, x) and support(x)"""
    _action.register(cls)(lambda x, p: action(p, x))
    _support.register(cls)(support)


register(Atom, lambda p, a: apply(p, a), lambda a: frozenset((a,)))
register(tuple, lambda p, xs: tuple(act(p, x) for x in xs),
         lambda xs: frozenset().union(*(supp(x) for x in xs)))
register(list, lambda p, xs: [act(p, x) for x in xs],
         lambda xs: frozenset().union(*(supp(x) for x in xs)))
register(frozenset, lambda p, xs: frozenset(act(p, x) for x in xs),
         lambda xs: frozenset().union(*(supp(x) for x in xs)))
# Strings and numbers are equivariant constants
register(str, lambda p, s: s, lambda s: frozenset())
register(int, lambda p, n: n, lambda n: frozenset())


def is_fresh(a: Atom, x: Any) -> bool:
    """a # x"""
    return a not in supp(x)


@dataclass(frozen=True)
class Abstraction(Generic[X]):
    """Name-abstraction <binder>body, stored in canonical form.

    The canonical binder is fresh_atom(supp(body) minus the binder), so structural
    equality of two canonical abstractions is alpha-equality.
    """
    binder: Atom
    body: X

    def __str__(self) -> str:
        return f"<{self.binder}>{self.body}"


def abs_new(a: Atom, x: X) -> Abstraction[X]:
    """Canonical representative of <a>x"""
    b = fresh_atom(supp(x) - {a})
    return Abstraction(b, act(swap(a, b), x))


def abs_eq(left: Abstraction, right: Abstraction) -> bool:
    """(x1 z).u1 == (x2 z).u2 for some z fresh for both sides"""
    z = fresh_atom(supp(left.body) | supp(right.body) | {left.binder, right.binder})
    return act(swap(left.binder, z), left.body) == act(swap(right.binder, z), right.body)


def abs_supp(ab: Abstraction) -> FrozenSet[Atom]:
    return supp(ab.body) - {ab.binder}


def abs_act(p: Perm, ab: Abstraction[X]) -> Abstraction[X]:
    """p . <x>u == <p(x)>(p . u), re-canonicalized"""
    return abs_new(apply(p, ab.binder), act(p, ab.body))


def concretion(ab: Abstraction[X], z: Atom) -> X:
    """<y>u @ z == (z y) . u, defined for z fresh for the abstraction"""
    if z in abs_supp(ab):
        raise NotFresh(z)
    return act(swap(z, ab.binder), ab.body)


register(Abstraction, abs_act, abs_supp)
