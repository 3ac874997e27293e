"""
Lambda calculus with bottom and constants

Substitution, the beta / head / weak-head / top reduction strategies, fuel-bounded
reduction with cycle detection, the zero-term test, and the translation of free
variables to constants. Every operation accepts finite raw terms and InfTerms;
finite inputs stay finite, and as soon as an InfTerm is involved the result is a
lazily produced InfTerm.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

from backend.infinite import InfTerm, Term, _graft, act_inf, node, producer, support_of
from backend.signature import canonical_term, canonicalize, fv, make_safe, var_atoms
from config import Config
from models.atoms import Atom, fresh_atom, swaps
from models.errors import FuelNeeded, RepresentativeClash
from models.results import (Diverges, FuelExhausted, Reached, ReductionOutcome, Strategy,
                            ZeroVerdict)
from models.terms import (ABS, APP, CONSTANT_PREFIX, LAMBDA_SIGNATURE, AlphaClass, Arg, Layer,
                          Op, Var, app, is_abs, is_app, is_const, spine)
from utils.cache_manager import LRUCache, cached

logger = logging.getLogger(__name__)

_reduction_cache = LRUCache(max_size=Config.CACHE_MAX_SIZE)


def is_finite(t: Term) -> bool:
    return not isinstance(t, InfTerm)


def view(t: Term) -> Layer:
    """Top layer of a term; InfTerm arguments stay lazy"""
    return t.layer() if isinstance(t, InfTerm) else t


def build(name: str, args: Tuple[Arg, ...]) -> Term:
    """Raw node when every argument is finite, otherwise a lazy node"""
    layer = Op(name, args)
    if all(is_finite(arg.body) for arg in args):
        return layer
    return node(layer, LAMBDA_SIGNATURE)


def build_abs(binder: Atom, body: Term) -> Term:
    return build(ABS, (Arg((binder,), body),))


def build_app(head: Term, *args: Term) -> Term:
    term = head
    for a in args:
        term = build(APP, (Arg((), term), Arg((), a)))
    return term


def _abs_parts(layer: Layer) -> Tuple[Atom, Term]:
    arg = layer.args[0]
    return arg.binders[0], arg.body


# Substitution

def _rename_clashes(binders: Tuple[Atom, ...], body: Term, x: Atom,
                    n_supp: FrozenSet[Atom]) -> Tuple[Tuple[Atom, ...], Term]:
    """Rename binders that would capture free atoms of the substituted term"""
    clashing = [b for b in binders if b in n_supp]
    if not clashing:
        return binders, body
    avoid = {x} | set(n_supp) | set(support_of(body)) | set(binders)
    if is_finite(body):
        avoid |= var_atoms(body)
    renaming = {}
    for b in clashing:
        z = fresh_atom(avoid)
        avoid.add(z)
        renaming[b] = z
    p = swaps(renaming.keys(), renaming.values())
    return tuple(renaming.get(b, b) for b in binders), act_inf(p, body)


def _subst_raw(m: Term, x: Atom, n: Term, n_supp: FrozenSet[Atom]) -> Term:
    if x not in fv(m):
        return m
    if isinstance(m, Var):
        return n
    args = []
    for arg in m.args:
        if x in arg.binders or x not in fv(arg.body):
            args.append(arg)
            continue
        binders, body = _rename_clashes(arg.binders, arg.body, x, n_supp)
        args.append(Arg(binders, _subst_raw(body, x, n, n_supp)))
    return Op(m.name, tuple(args))


@dataclass(frozen=True, eq=False)
class _PendingSubst:
    """Producer state: the substitution still to be pushed into `term`"""
    term: Term
    x: Atom
    n: Term


def _subst_step(state: Any) -> Layer:
    if not isinstance(state, _PendingSubst):
        return _graft(state)
    m, x, n = state.term, state.x, state.n
    if x not in support_of(m):
        return view(m)
    layer = view(m)
    if isinstance(layer, Var):
        return view(n) if layer.atom == x else layer
    n_supp = support_of(n)
    args = []
    for arg in layer.args:
        if x in arg.binders:
            args.append(arg)
            continue
        binders, body = _rename_clashes(arg.binders, arg.body, x, n_supp)
        args.append(Arg(binders, _PendingSubst(body, x, n)))
    return Op(layer.name, tuple(args))


def subst(m: Union[Term, AlphaClass], x: Atom, n: Union[Term, AlphaClass]) -> Union[Term, AlphaClass]:
    """
    Capture-avoiding substitution m[x := n]

    Args:
        m: Term substituted into; finite, infinite, or an alpha class
        x: Atom being replaced
        n: Replacement term

    Returns:
        The substituted term, an alpha class when either input is one
    """
    if isinstance(m, AlphaClass) or isinstance(n, AlphaClass):
        left = m.canonical if isinstance(m, AlphaClass) else m
        right = n.canonical if isinstance(n, AlphaClass) else n
        return canonicalize(subst(left, x, right))
    if is_finite(m) and is_finite(n):
        return _subst_raw(m, x, n, fv(n))
    m_supp = support_of(m)
    if x not in m_supp:
        return m
    declared = (m_supp - {x}) | support_of(n)
    return producer(_PendingSubst(m, x, n), _subst_step, declared, LAMBDA_SIGNATURE)


def contract(redex: Layer) -> Term:
    """(λx.P) Q  ->  P[x := Q]"""
    operator, argument = redex.children
    binder, body = _abs_parts(view(operator))
    return subst(body, binder, argument)


# One-step strategies

def _spine_walk(t: Term, descend_abs: bool) -> Optional[Term]:
    """Contract the head redex, if any, keeping the surrounding context"""
    limit = Config.SPINE_LIMIT
    binders: List[Atom] = []
    layer = view(t)
    if descend_abs:
        while is_abs(layer):
            binder, body = _abs_parts(layer)
            binders.append(binder)
            layer = view(body)
            if len(binders) > limit:
                raise FuelNeeded(limit)
    args: List[Term] = []
    while is_app(layer):
        operator, argument = layer.children
        op_layer = view(operator)
        if is_abs(op_layer):
            result = build_app(contract(layer), *reversed(args))
            for binder in reversed(binders):
                result = build_abs(binder, result)
            return result
        args.append(argument)
        layer = op_layer
        if len(args) > limit:
            raise FuelNeeded(limit)
    return None


def head_step(t: Term) -> Optional[Term]:
    """Contract the head redex, descending under abstractions; None on hnf"""
    return _spine_walk(t, descend_abs=True)


def whead_step(t: Term) -> Optional[Term]:
    """Contract the weak head redex; None on whnf (abstractions included)"""
    return _spine_walk(t, descend_abs=False)


def _whnf_probe(t: Term, fuel: int) -> Tuple[ZeroVerdict, Term, int]:
    """Weak-head reduce until an abstraction (NO), a stuck non-abstraction or a
    cycle (YES), or the fuel runs out (UNKNOWN)"""
    seen: Dict[Any, int] = {}
    current = t
    for steps in range(fuel + 1):
        if is_abs(view(current)):
            return ZeroVerdict.NO, current, steps
        if is_finite(current):
            key = canonical_term(current)
            if key in seen:
                logger.debug(f"Weak head trace cycles after {steps} steps")
                return ZeroVerdict.YES, current, steps
            head, args = spine(current)
            for k in range(len(args)):
                # t_j ->> t_j N1..Nk re-enters its own trace with more arguments
                if canonical_term(app(head, *args[:k])) in seen:
                    logger.debug(f"Weak head trace grows its own spine after {steps} steps")
                    return ZeroVerdict.YES, current, steps
            seen[key] = steps
        if steps == fuel:
            break
        following = whead_step(current)
        if following is None:
            return ZeroVerdict.YES, current, steps
        current = following
    return ZeroVerdict.UNKNOWN, current, fuel


def is_zero_term(t: Term, fuel: int) -> ZeroVerdict:
    """Whether t can never reduce to an abstraction"""
    try:
        verdict, _, _ = _whnf_probe(t, fuel)
    except FuelNeeded:
        return ZeroVerdict.UNKNOWN
    return verdict


def top_step(t: Term, fuel: Optional[int] = None) -> Optional[Term]:
    """Top beta step: weak-head normalize the operator, then contract at the root"""
    inner = fuel if fuel is not None else Config.top_inner_fuel(Config.DEFAULT_FUEL)
    layer = view(t)
    if not is_app(layer):
        return None
    operator, argument = layer.children
    verdict, reached, _ = _whnf_probe(operator, inner)
    if verdict == ZeroVerdict.UNKNOWN:
        raise FuelNeeded(inner)
    if verdict == ZeroVerdict.YES:
        return None
    binder, body = _abs_parts(view(reached))
    return subst(body, binder, argument)


def beta_step(t: Term, depth: Optional[int] = None) -> List[Term]:
    """All one-step beta reducts; InfTerms are searched down to `depth`"""
    if depth is None and not is_finite(t):
        depth = Config.DEFAULT_DEPTH
    found = _reducts(t, depth)
    if not is_finite(t):
        return found
    unique: Dict[Any, Term] = {}
    for r in found:
        unique.setdefault(canonical_term(r), r)
    return list(unique.values())


def _reducts(t: Term, depth: Optional[int]) -> List[Term]:
    if depth is not None and depth <= 0:
        return []
    below = None if depth is None else depth - 1
    layer = view(t)
    found: List[Term] = []
    if is_app(layer):
        operator, argument = layer.children
        if is_abs(view(operator)):
            found.append(contract(layer))
        found.extend(build_app(r, argument) for r in _reducts(operator, below))
        found.extend(build_app(operator, r) for r in _reducts(argument, below))
    elif is_abs(layer):
        binder, body = _abs_parts(layer)
        found.extend(build_abs(binder, r) for r in _reducts(body, below))
    return found


# Normal forms

def is_hnf(t: Term) -> bool:
    """
    λx1..xn. h N1..Nm with h a variable, a constant or bottom

    Raises:
        FuelNeeded: The abstraction prefix or the spine is longer than SPINE_LIMIT,
            as on an infinite λ-chain or an infinite left spine
    """
    limit = Config.SPINE_LIMIT
    layer = view(t)
    walked = 0
    while is_abs(layer):
        layer = view(_abs_parts(layer)[1])
        walked += 1
        if walked > limit:
            raise FuelNeeded(limit)
    walked = 0
    while is_app(layer):
        layer = view(layer.children[0])
        walked += 1
        if walked > limit:
            raise FuelNeeded(limit)
    return isinstance(layer, Var) or (isinstance(layer, Op) and not layer.args)


def is_whnf(t: Term) -> bool:
    """An abstraction, or a head normal form"""
    return is_abs(view(t)) or is_hnf(t)


def is_tnf(t: Term, fuel: Optional[int] = None) -> bool:
    return top_step(t, fuel) is None


# Reduction

def _step_function(strategy: Strategy, inner_fuel: int) -> Callable[[Term], Optional[Term]]:
    if strategy == Strategy.HEAD:
        return head_step
    if strategy == Strategy.WHEAD:
        return whead_step
    return lambda t: top_step(t, inner_fuel)


def _reduce_key(t, strategy, fuel, inner_fuel=None):
    if not is_finite(t):
        return None
    return (t, Strategy(strategy), fuel, inner_fuel)


@cached(_reduction_cache, _reduce_key, source="reduce")
def reduce(t: Term, strategy: Union[Strategy, str], fuel: int,
           inner_fuel: Optional[int] = None) -> ReductionOutcome:
    """
    Iterate one strategy until a normal form, a cycle, or fuel exhaustion

    Args:
        t: Term to reduce
        strategy: Strategy or its name (head, whead, top)
        fuel: Maximum number of steps, at least 1
        inner_fuel: Fuel of the inner weak-head runs of top reduction

    Returns:
        Reached, Diverges or FuelExhausted

    Raises:
        ValueError: fuel is below 1
    """
    if fuel < 1:
        raise ValueError("fuel must be at least 1")
    strategy = Strategy(strategy)
    inner = inner_fuel if inner_fuel is not None else Config.top_inner_fuel(fuel)
    step = _step_function(strategy, inner)

    seen = {canonical_term(t): 0} if is_finite(t) else None
    current, steps = t, 0
    while True:
        try:
            following = step(current)
        except FuelNeeded as e:
            logger.warning(f"{strategy.value} reduction needs more than {e.fuel} inner steps")
            return FuelExhausted(current, steps)
        if following is None:
            return Reached(current, steps)
        if steps >= fuel:
            logger.warning(f"{strategy.value} reduction exhausted {fuel} steps")
            return FuelExhausted(current, steps)
        current, steps = following, steps + 1
        if seen is not None:
            key = canonical_term(current)
            if key in seen:
                logger.debug(f"{strategy.value} reduction cycles after {steps} steps")
                return Diverges(current, steps)
            seen[key] = steps


# Free variables as constants

class ConstantNaming:
    """Bijection between atoms and constant names: atom i <-> #<prefix><i>"""

    def __init__(self, prefix: str = "c"):
        self.prefix = CONSTANT_PREFIX + prefix

    def to_constant(self, a: Atom) -> str:
        return f"{self.prefix}{a.index}"

    def to_atom(self, name: str) -> Optional[Atom]:
        if not name.startswith(self.prefix):
            return None
        digits = name[len(self.prefix):]
        return Atom(int(digits)) if digits.isdigit() else None


def _to_constants_raw(t: Term, rho: ConstantNaming, bound: FrozenSet[Atom]) -> Term:
    if isinstance(t, Var):
        return t if t.atom in bound else Op(rho.to_constant(t.atom))
    return Op(t.name, tuple(
        Arg(arg.binders, _to_constants_raw(arg.body, rho, bound | set(arg.binders)))
        for arg in t.args))


class _TranslateStep:
    """Producer step for both directions of the constants translation"""

    def __init__(self, rho: ConstantNaming, to_constants: bool):
        self.rho = rho
        self.to_constants = to_constants

    def __call__(self, state: Tuple[Term, FrozenSet[Atom]]) -> Layer:
        term, bound = state
        layer = view(term)
        if self.to_constants and isinstance(layer, Var) and layer.atom not in bound:
            return Op(self.rho.to_constant(layer.atom))
        if not self.to_constants and is_const(layer):
            a = self.rho.to_atom(layer.name)
            if a is not None:
                if a in bound:
                    raise RepresentativeClash(a)
                return Var(a)
        if isinstance(layer, Var):
            return layer
        return Op(layer.name, tuple(
            Arg(arg.binders, (arg.body, bound | set(arg.binders))) for arg in layer.args))


def tr_to_constants(t: Term, rho: Optional[ConstantNaming] = None) -> Term:
    """Replace every free variable x by the constant rho(x)"""
    rho = rho or ConstantNaming()
    if is_finite(t):
        return _to_constants_raw(t, rho, frozenset())
    return producer((t, frozenset()), _TranslateStep(rho, True), (), LAMBDA_SIGNATURE)


def _constants_of(t: Term) -> List[str]:
    found = []
    stack = [t]
    while stack:
        current = stack.pop()
        if is_const(current):
            found.append(current.name)
        elif isinstance(current, Op):
            stack.extend(current.children)
    return found


def _from_constants_raw(t: Term, rho: ConstantNaming) -> Term:
    if is_const(t):
        a = rho.to_atom(t.name)
        return t if a is None else Var(a)
    if isinstance(t, Var):
        return t
    return Op(t.name, tuple(Arg(arg.binders, _from_constants_raw(arg.body, rho)) for arg in t.args))


def tr_from_constants(t: Term, rho: Optional[ConstantNaming] = None,
                      support: Optional[Iterable[Atom]] = None) -> Term:
    """Turn the constants rho(x) back into variables x.

    Finite terms are freshened first so no binder captures a translated constant.
    InfTerms need the finite set of atoms the translation may produce, and raise
    RepresentativeClash when a binder of the given representative would capture one.
    """
    rho = rho or ConstantNaming()
    if is_finite(t):
        targets = {rho.to_atom(name) for name in _constants_of(t)} - {None}
        return _from_constants_raw(make_safe(t, targets), rho)
    if support is None:
        raise ValueError("Translating an infinitary term back needs its target support")
    declared = frozenset(support) | t.declared_support
    return producer((t, frozenset()), _TranslateStep(rho, False), declared, LAMBDA_SIGNATURE)
