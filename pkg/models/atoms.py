"""Atoms (names) and finitely supported permutations"""

import threading
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Tuple


@dataclass(frozen=True, order=True)
class Atom:
    """A name from the countably infinite set of atoms.

    Identity and order are the index alone; `display` is only used for printing.
    """
    index: int
    display: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"Atom index must be a natural number, got {self.index}")

    def __str__(self) -> str:
        return self.display or f"x{self.index}"

    def __repr__(self) -> str:
        return f"Atom({self.index}{', ' + repr(self.display) if self.display else ''})"


@dataclass(frozen=True)
class Perm:
    """Permutation of atoms stored sparsely as its non-fixed points"""
    moved: Tuple[Tuple[Atom, Atom], ...] = ()
    _map: Mapping[Atom, Atom] = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        mapping = dict(self.moved)
        if len(mapping) != len(self.moved):
            raise ValueError("Permutation lists an atom twice")
        if set(mapping.keys()) != set(mapping.values()):
            raise ValueError("Permutation must be a bijection on its moved atoms")
        if any(a == b for a, b in mapping.items()):
            raise ValueError("Permutation must not list fixed points")
        object.__setattr__(self, '_map', mapping)

    @classmethod
    def from_mapping(cls, mapping: Mapping[Atom, Atom]) -> 'Perm':
        """Build from any bijective map, dropping fixed points"""
        pairs = tuple(sorted((a, b) for a, b in mapping.items() if a != b))
        return cls(pairs)

    def __call__(self, a: Atom) -> Atom:
        return self._map.get(a, a)

    def __bool__(self) -> bool:
        return bool(self.moved)


IDENTITY = Perm()


def swap(a: Atom, b: Atom) -> Perm:
    """Transposition exchanging a and b"""
    if a == b:
        return IDENTITY
    return Perm.from_mapping({a: b, b: a})


def swaps(left: Iterable[Atom], right: Iterable[Atom]) -> Perm:
    """Composite (a1 b1)...(ak bk) of transpositions between two lists of atoms"""
    result = IDENTITY
    for a, b in zip(left, right):
        result = compose(result, swap(a, b))
    return result


def apply(p: Perm, a: Atom) -> Atom:
    return p(a)


def compose(p: Perm, q: Perm) -> Perm:
    """p after q: compose(p, q)(a) == p(q(a))"""
    domain = set(p._map) | set(q._map)
    return Perm.from_mapping({a: p(q(a)) for a in domain})


def inverse(p: Perm) -> Perm:
    return Perm.from_mapping({b: a for a, b in p.moved})


def perm_support(p: Perm) -> FrozenSet[Atom]:
    """Atoms moved by p"""
    return frozenset(p._map)


def fresh_atom(avoid: Iterable[Atom]) -> Atom:
    """Smallest-index atom outside `avoid`"""
    taken = {a.index for a in avoid}
    index = 0
    while index in taken:
        index += 1
    return Atom(index)


def fresh_atoms(count: int, avoid: Iterable[Atom]) -> Tuple[Atom, ...]:
    """`count` distinct fresh atoms, each the smallest still available"""
    taken = set(avoid)
    chosen = []
    for _ in range(count):
        a = fresh_atom(taken)
        chosen.append(a)
        taken.add(a)
    return tuple(chosen)


class AtomTable:
    """Interns source identifiers to atoms, stably within one session"""

    def __init__(self):
        self._by_name: Dict[str, Atom] = {}
        self._by_index: Dict[int, str] = {}
        self._lock = threading.Lock()

    def intern(self, name: str) -> Atom:
        with self._lock:
            atom = self._by_name.get(name)
            if atom is None:
                atom = Atom(len(self._by_name), name)
                self._by_name[name] = atom
                self._by_index[atom.index] = name
            return atom

    def lookup(self, name: str) -> Optional[Atom]:
        return self._by_name.get(name)

    def name_of(self, atom: Atom) -> Optional[str]:
        return self._by_index.get(atom.index)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __len__(self) -> int:
        return len(self._by_name)


# Session-wide table used when callers do not bring their own
DEFAULT_TABLE = AtomTable()
