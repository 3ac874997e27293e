"""
Data formatting utilities: terms as text and as JSON layer objects
"""

from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Set

from backend.infinite import InfTerm
from models.atoms import DEFAULT_TABLE, Atom, AtomTable
from models.results import (AtMost, CommandResult, Diverges, DistanceBound, Exact,
                            FuelExhausted, Reached, ReductionOutcome)
from models.terms import ABS, APP, BOTTOM, UNKNOWN, Arg, Op, Star, TruncTerm, Var
from utils.constants import ASCII_GLYPHS, UNICODE_GLYPHS


class AtomNamer:
    """Chooses a distinct printed name for every atom of one rendering"""

    def __init__(self, table: Optional[AtomTable] = None):
        self.table = table if table is not None else DEFAULT_TABLE
        self._names: Dict[Atom, str] = {}
        self._taken: Set[str] = set()

    def name(self, atom: Atom) -> str:
        found = self._names.get(atom)
        if found is not None:
            return found
        base = self.table.name_of(atom) or atom.display or f"x{atom.index}"
        candidate = base
        if self._clashes(candidate, atom):
            candidate = f"{base}_{atom.index}"
            while self._clashes(candidate, atom):
                candidate += "'"
        self._names[atom] = candidate
        self._taken.add(candidate)
        return candidate

    def _clashes(self, candidate: str, atom: Atom) -> bool:
        if candidate in self._taken:
            return True
        owner = self.table.lookup(candidate)
        return owner is not None and owner != atom

    def reserve(self, atoms: Iterable[Atom]) -> None:
        """Name atoms in index order so output does not depend on traversal"""
        for atom in sorted(atoms):
            self.name(atom)


class TermFormatter:
    """Pretty-printer emitting the grammar the parser reads"""

    def __init__(self, table: Optional[AtomTable] = None, unicode: bool = False,
                 assume_bot: bool = False, generic: bool = False):
        self.table = table if table is not None else DEFAULT_TABLE
        self.glyphs = UNICODE_GLYPHS if unicode else ASCII_GLYPHS
        self.assume_bot = assume_bot
        self.generic = generic

    def format(self, t: Any) -> str:
        """
        Render a raw term, a truncation or a rational InfTerm

        Args:
            t: Term to render; producer-driven InfTerms must be truncated first

        Returns:
            Text in the input grammar
        """
        if isinstance(t, InfTerm):
            if not t.is_rational:
                raise ValueError("Producer terms are rendered through a truncation")
            return self.format_rational(t)
        namer = AtomNamer(self.table)
        namer.reserve(_atoms_of(t))
        return self._fmt(t, 'top', namer)

    def format_rational(self, t: InfTerm) -> str:
        """`let rec` rendering naming only shared or cyclic labels"""
        system, root = t.rep.system, t.rep.root
        refs: Dict[str, int] = {root: 1}
        order: List[str] = []
        stack = [root]
        while stack:
            label = stack.pop()
            if label in order:
                continue
            order.append(label)
            layer = system[label]
            if isinstance(layer, Op):
                for child in layer.children:
                    refs[child] = refs.get(child, 0) + 1
                    stack.append(child)

        namer = AtomNamer(self.table)
        atoms: Set[Atom] = set()
        for label in order:
            layer = system[label]
            if isinstance(layer, Var):
                atoms.add(layer.atom)
            else:
                for arg in layer.args:
                    atoms.update(arg.binders)
        namer.reserve(atoms)

        shared = [label for label in order if refs[label] > 1]
        if not shared:
            return self._fmt(self._inline(root, system, set(), {}), 'top', namer)

        used_names = {namer.name(a) for a in atoms}
        label_names: Dict[str, str] = {}
        k = 0
        for label in shared:
            while f"L{k}" in used_names:
                k += 1
            label_names[label] = f"L{k}"
            k += 1

        equations = []
        for label in shared:
            body = self._inline(label, system, set(label_names), label_names, top=True)
            equations.append(f"{label_names[label]} = {self._fmt(body, 'top', namer)}")
        root_name = label_names.get(root)
        if root_name is None:
            in_part = self._fmt(self._inline(root, system, set(label_names), label_names),
                                'top', namer)
        else:
            in_part = root_name
        return f"let rec {' and '.join(equations)} in {in_part}"

    def _inline(self, label: str, system, named: Set[str], label_names: Dict[str, str],
                top: bool = False):
        if label in named and not top:
            return _LabelLeaf(label_names[label])
        layer = system[label]
        if isinstance(layer, Var):
            return layer
        return Op(layer.name, tuple(
            Arg(arg.binders, self._inline(arg.body, system, named, label_names))
            for arg in layer.args))

    def _fmt(self, t, ctx: str, namer: AtomNamer) -> str:
        if isinstance(t, _LabelLeaf):
            return t.name
        if isinstance(t, Var):
            return namer.name(t.atom)
        if isinstance(t, Star):
            return self.glyphs['star']
        if not isinstance(t, Op):
            raise TypeError(f"Cannot render {type(t).__name__}")

        if not self.generic:
            if t.name == ABS and t.arity == (1,):
                binders = []
                body = t
                while isinstance(body, Op) and body.name == ABS and body.arity == (1,):
                    binders.append(namer.name(body.args[0].binders[0]))
                    body = body.args[0].body
                text = f"{self.glyphs['lambda']}{' '.join(binders)}. {self._fmt(body, 'top', namer)}"
                return text if ctx == 'top' else f"({text})"
            if t.name == APP and t.arity == (0, 0):
                operator, argument = t.children
                text = f"{self._fmt(operator, 'op', namer)} {self._fmt(argument, 'arg', namer)}"
                return f"({text})" if ctx == 'arg' else text
            if t.name == BOTTOM and not t.args:
                return self.glyphs['bottom']
            if t.name == UNKNOWN and not t.args:
                return self.glyphs['bottom'] if self.assume_bot else self.glyphs['unknown']

        if not t.args:
            return t.name
        parts = []
        for arg in t.args:
            body = self._fmt(arg.body, 'top', namer)
            if arg.binders:
                body = f"{' '.join(namer.name(b) for b in arg.binders)}. {body}"
            parts.append(body)
        return f"{t.name}({', '.join(parts)})"


class _LabelLeaf:
    """Label reference inside a `let rec` rendering"""

    def __init__(self, name: str):
        self.name = name


def _atoms_of(t: Any) -> Set[Atom]:
    found: Set[Atom] = set()
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            found.add(node.atom)
        elif isinstance(node, Op):
            for arg in node.args:
                found.update(arg.binders)
                stack.append(arg.body)
    return found


class JsonFormatter:
    """JSON layer objects wrapped in the CommandResult envelope"""

    @staticmethod
    def encode_term(t: TruncTerm, namer: AtomNamer, assume_bot: bool = False) -> Dict[str, Any]:
        """
        Encode a truncation as nested layer objects

        Args:
            t: Finite term or truncation
            namer: Atom naming shared by the whole result
            assume_bot: Render unresolved nodes as bottom

        Returns:
            {"var": name} | {"op": name, "args": [{"binders": [...], "body": ...}]} | {"star": true}
        """
        if isinstance(t, Var):
            return {"var": namer.name(t.atom)}
        if isinstance(t, Star):
            return {"star": True}
        name = BOTTOM if assume_bot and t.name == UNKNOWN else t.name
        return {
            "op": name,
            "args": [
                {
                    "binders": [namer.name(b) for b in arg.binders],
                    "body": JsonFormatter.encode_term(arg.body, namer, assume_bot),
                }
                for arg in t.args
            ],
        }

    @staticmethod
    def result(kind: str, term: Optional[TruncTerm] = None, value: Any = None,
               unknown_positions: Optional[List[List[int]]] = None,
               table: Optional[AtomTable] = None, assume_bot: bool = False) -> CommandResult:
        namer = AtomNamer(table)
        encoded = None
        if term is not None:
            namer.reserve(_atoms_of(term))
            encoded = JsonFormatter.encode_term(term, namer, assume_bot)
        positions = [] if assume_bot else list(unknown_positions or [])
        return CommandResult(
            kind=kind,
            term=encoded,
            status="unknown" if positions else "resolved",
            value=value,
            unknown_positions=positions,
        )

    @staticmethod
    def dump(result: CommandResult) -> str:
        return result.model_dump_json(exclude_none=True)


class DistanceFormatter:
    """Distance bound formatting utilities"""

    @staticmethod
    def format_fraction(value: Fraction) -> str:
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"

    @staticmethod
    def format_bound(bound: DistanceBound) -> str:
        text = DistanceFormatter.format_fraction(bound.value)
        return f"<= {text}" if isinstance(bound, AtMost) else text

    @staticmethod
    def to_json(bound: DistanceBound) -> Dict[str, str]:
        key = "exact" if isinstance(bound, Exact) else "at_most"
        return {key: DistanceFormatter.format_fraction(bound.value)}


class OutcomeFormatter:
    """Reduction outcome formatting utilities"""

    LABELS = {
        Reached: "reached",
        Diverges: "diverges",
        FuelExhausted: "fuel exhausted",
    }

    @staticmethod
    def label(outcome: ReductionOutcome) -> str:
        return OutcomeFormatter.LABELS[type(outcome)]

    @staticmethod
    def format_outcome(outcome: ReductionOutcome, rendered_term: str) -> str:
        return f"{OutcomeFormatter.label(outcome)} after {outcome.steps} steps: {rendered_term}"


def format_atoms(atoms: Iterable[Atom], table: Optional[AtomTable] = None) -> str:
    """Render an atom set as {a, b, c}"""
    namer = AtomNamer(table)
    ordered = sorted(atoms)
    namer.reserve(ordered)
    return "{" + ", ".join(namer.name(a) for a in ordered) + "}"


def atom_names(atoms: Iterable[Atom], table: Optional[AtomTable] = None) -> List[str]:
    namer = AtomNamer(table)
    ordered = sorted(atoms)
    namer.reserve(ordered)
    return [namer.name(a) for a in ordered]
