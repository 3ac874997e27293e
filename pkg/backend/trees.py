"""
Böhm, Lévy-Longo and Berarducci trees

Each tree is a producer: a node runs the matching reduction strategy with the
given fuel and emits the normal form's top layer, leaving the subterms to be
treated as new nodes. A recurring reduct makes the node ⊥; running out of fuel
makes it an `unknown` leaf, which renders as ⊥ only on request.
"""

import logging
from dataclasses import dataclass
from typing import Any, List, Optional, Tuple

from backend.infinite import InfTerm, Term, producer, support_of, truncate
from backend.lambda_calculus import reduce, view
from backend.signature import alpha_eq, alpha_eq_wild
from config import Config
from models.errors import Inconclusive
from models.results import (Diverges, FuelExhausted, Position, Resolved, Strategy, TreeNodeStatus,
                            Unknown)
from models.terms import (ABS, APP, BOT, TREE_SIGNATURE, UNKNOWN_LEAF, Arg, Layer, Op, Star,
                          TruncTerm, Var, is_abs, is_app, is_bot, is_unknown)
from utils.constants import TreeKind

logger = logging.getLogger(__name__)

_STRATEGY = {
    TreeKind.BOHM: Strategy.HEAD,
    TreeKind.LEVY_LONGO: Strategy.WHEAD,
    TreeKind.BERARDUCCI: Strategy.TOP,
}


@dataclass(frozen=True, eq=False)
class _Node:
    """Producer state: a subterm, and whether it is already known to be in normal form"""
    term: Term
    stable: bool = False


class _TreeStep:
    """Producer step computing one layer of a tree"""

    def __init__(self, kind: TreeKind, fuel: int):
        self.kind = kind
        self.fuel = fuel
        self.strategy = _STRATEGY[kind]

    def __call__(self, node: _Node) -> Layer:
        if node.stable:
            return self._emit(node.term)

        outcome = reduce(node.term, self.strategy, self.fuel)
        if isinstance(outcome, Diverges):
            logger.info(f"{self.kind.value} node is bottom: reduct recurs after {outcome.steps} steps")
            return BOT
        if isinstance(outcome, FuelExhausted):
            logger.warning(f"{self.kind.value} node left unresolved after {self.fuel} steps")
            return UNKNOWN_LEAF
        if self._bottom_headed(outcome.term):
            return BOT
        return self._emit(outcome.term)

    def _bottom_headed(self, t: Term) -> bool:
        """Head normal forms with ⊥ as head reduce to ⊥ outside Berarducci trees"""
        if self.kind == TreeKind.BERARDUCCI:
            return False
        layer = view(t)
        walked = 0
        if self.kind == TreeKind.BOHM:
            while is_abs(layer) and walked < Config.SPINE_LIMIT:
                layer = view(layer.children[0])
                walked += 1
        while is_app(layer) and walked < Config.SPINE_LIMIT:
            layer = view(layer.children[0])
            walked += 1
        return is_bot(layer)

    def _emit(self, t: Term) -> Layer:
        layer = view(t)
        if isinstance(layer, Var) or not layer.args:
            return layer
        if is_abs(layer):
            # Böhm trees keep the whole hnf stable; the others reduce under the λ anew
            body_stable = self.kind == TreeKind.BOHM
            return Op(ABS, (Arg(layer.args[0].binders, _Node(layer.children[0], body_stable)),))
        if is_app(layer):
            operator, argument = layer.children
            operator_stable = self.kind != TreeKind.BERARDUCCI
            return Op(APP, (Arg((), _Node(operator, operator_stable)), Arg((), _Node(argument))))
        return Op(layer.name, tuple(Arg(arg.binders, _Node(arg.body)) for arg in layer.args))


def _tree(kind: TreeKind, t: Term, fuel: Optional[int]) -> InfTerm:
    fuel = fuel if fuel is not None else Config.DEFAULT_FUEL
    if fuel < 1:
        raise ValueError("fuel must be at least 1")
    return producer(_Node(t), _TreeStep(kind, fuel), support_of(t), TREE_SIGNATURE)


def bt(t: Term, fuel: Optional[int] = None) -> InfTerm:
    """Böhm tree: head normal forms, unfolded node by node"""
    return _tree(TreeKind.BOHM, t, fuel)


def llt(t: Term, fuel: Optional[int] = None) -> InfTerm:
    """Lévy-Longo tree: weak head normal forms, unfolded node by node"""
    return _tree(TreeKind.LEVY_LONGO, t, fuel)


def bet(t: Term, fuel: Optional[int] = None) -> InfTerm:
    """Berarducci tree: top normal forms; applications with a zero-term operator split"""
    return _tree(TreeKind.BERARDUCCI, t, fuel)


def tree(kind: TreeKind, t: Term, fuel: Optional[int] = None) -> InfTerm:
    """
    Build the infinite normal form of `t` selected by `kind`

    Args:
        kind: Which tree to compute
        t: Lambda term, finite or infinite
        fuel: Steps each node may spend before it is reported unknown

    Returns:
        Lazily produced tree over the tree signature
    """
    return _tree(TreeKind(kind), t, fuel)


# Observation helpers

def unknown_positions(trunc: TruncTerm) -> List[Position]:
    """Positions (argument index paths) of unresolved nodes, in depth-first order"""
    found: List[Position] = []
    stack: List[Tuple[TruncTerm, Position]] = [(trunc, ())]
    while stack:
        node, position = stack.pop()
        if is_unknown(node):
            found.append(position)
        elif isinstance(node, Op):
            for i in reversed(range(len(node.args))):
                stack.append((node.args[i].body, position + (i,)))
    return found


def node_status(trunc: TruncTerm, position: Position, fuel: int) -> TreeNodeStatus:
    """Status of the node at `position` of a tree truncation"""
    node = trunc
    for index in position:
        if not isinstance(node, Op) or index >= len(node.args):
            raise ValueError(f"No node at position {list(position)}")
        node = node.args[index].body
    return Unknown(fuel) if is_unknown(node) else Resolved()


def tree_status(trunc: TruncTerm, fuel: int) -> List[Tuple[Position, TreeNodeStatus]]:
    """Unresolved positions with the fuel spent on each; every other node is resolved"""
    return [(position, node_status(trunc, position, fuel)) for position in unknown_positions(trunc)]


def collapse_unknown(trunc: TruncTerm) -> TruncTerm:
    """Render unresolved nodes as ⊥"""
    if is_unknown(trunc):
        return BOT
    if not isinstance(trunc, Op) or not trunc.args:
        return trunc
    return Op(trunc.name, tuple(Arg(arg.binders, collapse_unknown(arg.body)) for arg in trunc.args))


def has_redex(trunc: TruncTerm) -> bool:
    """Whether some application has an abstraction as operator"""
    stack = [trunc]
    while stack:
        node = stack.pop()
        if not isinstance(node, Op):
            continue
        if is_app(node) and is_abs(node.children[0]):
            return True
        stack.extend(node.children)
    return False


# Tree sets, checked on truncations; `*` passes and unresolved nodes count as ⊥

def _leafish(node: Any) -> bool:
    return isinstance(node, (Var, Star)) or (isinstance(node, Op) and not node.args)


def _spine(node: TruncTerm) -> Tuple[TruncTerm, List[TruncTerm]]:
    args = []
    while is_app(node):
        node, argument = node.children
        args.append(argument)
    return node, args


def _bottomish(node: Any) -> bool:
    return is_bot(node) or is_unknown(node)


def _in_bt(node: TruncTerm) -> bool:
    if isinstance(node, Star) or _bottomish(node):
        return True
    while is_abs(node):
        node = node.children[0]
    if isinstance(node, Star):
        return True
    head, args = _spine(node)
    if _bottomish(head) or is_abs(head) or not _leafish(head):
        return False
    return all(_in_bt(a) for a in args)


def _in_llt(node: TruncTerm) -> bool:
    if isinstance(node, Star) or _bottomish(node):
        return True
    if is_abs(node):
        return _in_llt(node.children[0])
    head, args = _spine(node)
    if _bottomish(head) or is_abs(head) or not _leafish(head):
        return False
    return all(_in_llt(a) for a in args)


def _in_bet(node: TruncTerm) -> bool:
    if _leafish(node):
        return True
    if is_abs(node):
        return _in_bet(node.children[0])
    if is_app(node):
        operator, argument = node.children
        return not is_abs(operator) and _in_bet(operator) and _in_bet(argument)
    return False


def in_bt_set(t: Term, depth: int) -> bool:
    """⊥, or λx1..xn. y M1..Mm with every Mi a Böhm tree"""
    return _in_bt(truncate(t, depth))


def in_llt_set(t: Term, depth: int) -> bool:
    """⊥, λx.M, or y M1..Mm with every part a Lévy-Longo tree"""
    return _in_llt(truncate(t, depth))


def in_bet_set(t: Term, depth: int) -> bool:
    """⊥, a variable, λx.M, or M N with M not an abstraction, parts Berarducci trees"""
    return _in_bet(truncate(t, depth))


# Tree bisimulations

def _bisim(kind: TreeKind, m: Term, n: Term, depth: int, fuel: int) -> bool:
    left = truncate(tree(kind, m, fuel), depth)
    right = truncate(tree(kind, n, fuel), depth)
    if alpha_eq(left, right):
        return True
    if alpha_eq_wild(left, right):
        logger.warning(f"{kind.value} trees differ only below unresolved nodes")
        raise Inconclusive(fuel)
    return False


def bisim_hnf_at(m: Term, n: Term, depth: int, fuel: int) -> bool:
    """Böhm trees alpha-equal to `depth`; Inconclusive when only unresolved nodes differ"""
    return _bisim(TreeKind.BOHM, m, n, depth, fuel)


def bisim_whnf_at(m: Term, n: Term, depth: int, fuel: int) -> bool:
    """Lévy-Longo trees alpha-equal to `depth`; Inconclusive when only unresolved nodes differ"""
    return _bisim(TreeKind.LEVY_LONGO, m, n, depth, fuel)


def bisim_top_at(m: Term, n: Term, depth: int, fuel: int) -> bool:
    """Berarducci trees alpha-equal to `depth`; Inconclusive when only unresolved nodes differ"""
    return _bisim(TreeKind.BERARDUCCI, m, n, depth, fuel)
