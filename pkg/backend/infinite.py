"""
Infinitary terms as lazily unfolded coalgebras

An `InfTerm` is either a rational term (a finite system of equations between
labels, unfolded on demand) or a producer (a seed state and a deterministic step
function returning one layer whose argument bodies are new states). Every InfTerm
carries a declared finite support; a free atom outside it surfacing during
observation raises SupportViolation. All observation goes through truncation.
"""

import logging
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Union

from backend.nominal import register
from backend.signature import (act_raw, alpha_agreement, alpha_eq, canonicalize, fv,
                               agreement_depth, height, truncate_raw)
from config import Config
from models.atoms import Atom, Perm, fresh_atom
from models.errors import (IncompatibleChain, NotRational, SignatureError, SupportViolation,
                           UnboundedSupport)
from models.results import AtMost, DistanceBound, Exact
from models.terms import (STAR, AlphaClass, Arg, BindingSignature, Layer, Op, Star, TruncTerm,
                          Var)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Rational:
    """Equation system label -> layer whose argument bodies are labels"""
    system: Mapping[str, Layer]
    root: str

    def __post_init__(self):
        if self.root not in self.system:
            raise SignatureError(f"Undefined label {self.root!r}")
        for label, layer in self.system.items():
            if isinstance(layer, Op):
                for child in layer.children:
                    if child not in self.system:
                        raise SignatureError(f"Label {label!r} refers to undefined {child!r}")
            elif not isinstance(layer, Var):
                raise SignatureError(f"Label {label!r} is not bound to a layer")


@dataclass(frozen=True, eq=False)
class Producer:
    """Seed state plus a deterministic step: state -> layer of states"""
    seed: Any
    step: Callable[[Any], Layer]


class InfTerm:
    """Lazily unfolded infinitary term with a declared finite support"""

    def __init__(self, rep: Union[Rational, Producer], declared_support: Iterable[Atom],
                 signature: Optional[BindingSignature] = None):
        self.rep = rep
        self.declared_support: FrozenSet[Atom] = frozenset(declared_support)
        self.signature = signature
        self._layer: Optional[Layer] = None
        self._lock = threading.RLock()

    @property
    def is_rational(self) -> bool:
        return isinstance(self.rep, Rational)

    def __repr__(self) -> str:
        kind = "rational" if self.is_rational else "producer"
        shown = ", ".join(str(a) for a in sorted(self.declared_support))
        return f"InfTerm({kind}, supp={{{shown}}})"

    def _child(self, rep: Union[Rational, Producer], binders) -> 'InfTerm':
        return InfTerm(rep, self.declared_support | set(binders), self.signature)

    def _compute_layer(self) -> Layer:
        if isinstance(self.rep, Rational):
            layer = self.rep.system[self.rep.root]
            wrap = lambda label: Rational(self.rep.system, label)
        else:
            layer = self.rep.step(self.rep.seed)
            wrap = lambda state: Producer(state, self.rep.step)

        if isinstance(layer, Var):
            return layer
        if not isinstance(layer, Op):
            raise SignatureError(f"Step produced {type(layer).__name__}, expected a layer")
        if self.signature is not None:
            self.signature.check_layer(layer)
        return Op(layer.name, tuple(
            Arg(arg.binders, self._child(wrap(arg.body), arg.binders)) for arg in layer.args))

    def layer(self) -> Layer:
        """One unfolding step, memoized; support is checked on every call"""
        layer = self._layer
        if layer is None:
            with self._lock:
                if self._layer is None:
                    self._layer = self._compute_layer()
                layer = self._layer
        if isinstance(layer, Var) and layer.atom not in self.declared_support:
            raise SupportViolation(layer.atom, self.declared_support)
        return layer


Term = Union[Var, Op, InfTerm]


def unfold_step(t: InfTerm) -> Layer:
    """The coalgebra structure map: one layer with InfTerm arguments"""
    return t.layer()


def _graft(state: Any) -> Layer:
    """Step for producers whose states are InfTerms or layers of such"""
    if isinstance(state, InfTerm):
        return state.layer()
    return state


def support_of(t: Any) -> FrozenSet[Atom]:
    """Free atoms of a raw term, declared support of an InfTerm"""
    if isinstance(t, InfTerm):
        return t.declared_support
    if isinstance(t, Var):
        return frozenset((t.atom,))
    if isinstance(t, Star):
        return frozenset()
    result = frozenset()
    for arg in t.args:
        result |= support_of(arg.body) - set(arg.binders)
    return result


def node(layer: Layer, signature: Optional[BindingSignature] = None) -> InfTerm:
    """InfTerm whose first layer is given and whose arguments are terms of any kind"""
    return InfTerm(Producer(layer, _graft), support_of(layer), signature)


def embed(t: TruncTerm, signature: Optional[BindingSignature] = None) -> InfTerm:
    """A finite raw term as a rational InfTerm"""
    system: Dict[str, Layer] = {}

    def flatten(sub) -> str:
        label = f"n{len(system)}"
        system[label] = None
        if isinstance(sub, Var):
            system[label] = sub
        elif isinstance(sub, Op):
            system[label] = Op(sub.name, tuple(Arg(arg.binders, flatten(arg.body))
                                               for arg in sub.args))
        else:
            raise SignatureError("Truncations cannot be embedded")
        return label

    root = flatten(t)
    return InfTerm(Rational(system, root), fv(t), signature)


def rational(system: Mapping[str, Layer], root: str, declared_support: Optional[Iterable[Atom]] = None,
             signature: Optional[BindingSignature] = None) -> InfTerm:
    """Rational InfTerm; the declared support defaults to the exact free atoms"""
    rep = Rational(dict(system), root)
    if declared_support is None:
        declared_support = _rational_fv(rep)[root]
    return InfTerm(rep, declared_support, signature)


def producer(seed: Any, step: Callable[[Any], Layer], declared_support: Iterable[Atom],
             signature: Optional[BindingSignature] = None) -> InfTerm:
    return InfTerm(Producer(seed, step), declared_support, signature)


def finite_height(t: Term) -> Optional[int]:
    """Height of a finite term or of an acyclic rational term; None otherwise"""
    if not isinstance(t, InfTerm):
        return height(t)
    if not t.is_rational:
        return None
    system = t.rep.system
    heights: Dict[str, int] = {}
    visiting: set = set()

    def walk(label: str) -> Optional[int]:
        if label in heights:
            return heights[label]
        if label in visiting:
            return None
        visiting.add(label)
        layer = system[label]
        result = 1
        if isinstance(layer, Op):
            for child in layer.children:
                below = walk(child)
                if below is None:
                    return None
                result = max(result, 1 + below)
        visiting.discard(label)
        heights[label] = result
        return result

    return walk(t.rep.root)


def as_infterm(t: Term) -> InfTerm:
    return t if isinstance(t, InfTerm) else embed(t)


def truncate(t: Term, n: int) -> TruncTerm:
    """
    Depth-n truncation of a raw term, an InfTerm, or a layer mixing both

    Args:
        t: Term to observe
        n: Number of layers kept; deeper positions become STAR

    Returns:
        Finite truncation
    """
    if n <= 0:
        return STAR
    layer = t.layer() if isinstance(t, InfTerm) else t
    if isinstance(layer, (Var, Star)):
        return layer
    return Op(layer.name, tuple(Arg(arg.binders, truncate(arg.body, n - 1)) for arg in layer.args))


def fv_at(t: Term, n: int) -> FrozenSet[Atom]:
    """Free atoms visible in the depth-n truncation"""
    return fv(truncate(t, n))


def alpha_eq_at(t: Term, s: Term, n: int) -> bool:
    """Depth-n approximation of infinitary alpha-equivalence"""
    return alpha_eq(truncate(t, n), truncate(s, n))


def dist(t: Term, s: Term, cap: int) -> DistanceBound:
    """Truncation distance observed up to depth `cap`"""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    m = agreement_depth(truncate(t, cap), truncate(s, cap))
    if m is None:
        return AtMost(Fraction(1, 2 ** cap))
    return Exact(Fraction(1, 2 ** m))


def dist_alpha(t: Term, s: Term, cap: int) -> DistanceBound:
    """Alpha truncation distance observed up to depth `cap`"""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    m = alpha_agreement(truncate(t, cap), truncate(s, cap))
    if m is None:
        return AtMost(Fraction(1, 2 ** cap))
    return Exact(Fraction(1, 2 ** m))


def _rational_fv(rep: Rational) -> Dict[str, FrozenSet[Atom]]:
    """Least fixpoint of the free-atom equations of a rational system"""
    result = {label: frozenset() for label in rep.system}
    changed = True
    while changed:
        changed = False
        for label, layer in rep.system.items():
            if isinstance(layer, Var):
                new = frozenset((layer.atom,))
            else:
                new = frozenset()
                for arg in layer.args:
                    new |= result[arg.body] - set(arg.binders)
            if new != result[label]:
                result[label] = new
                changed = True
    return result


def fv_exact(t: InfTerm) -> FrozenSet[Atom]:
    """Exact free atoms of a rational term"""
    if not isinstance(t, InfTerm) or not t.is_rational:
        raise NotRational("fv_exact needs a rational term; use fv_at for producers")
    free = _rational_fv(t.rep)[t.rep.root]
    outside = free - t.declared_support
    if outside:
        raise SupportViolation(min(outside), t.declared_support)
    return free


def act_layer(p: Perm, layer: Layer, act_body: Callable[[Any], Any]) -> Layer:
    if isinstance(layer, Var):
        return Var(p(layer.atom))
    return Op(layer.name, tuple(
        Arg(tuple(p(b) for b in arg.binders), act_body(arg.body)) for arg in layer.args))


class _ActStep:
    """Producer step applying a fixed permutation layer by layer"""

    def __init__(self, p: Perm):
        self.p = p

    def __call__(self, state: InfTerm) -> Layer:
        return act_layer(self.p, state.layer(), lambda body: body)


def act_inf(p: Perm, t: Term) -> Term:
    """Permutation action, commuting with truncation"""
    if not p:
        return t
    if not isinstance(t, InfTerm):
        return act_raw(p, t)
    declared = frozenset(p(a) for a in t.declared_support)
    if t.is_rational:
        system = {label: act_layer(p, layer, lambda label: label)
                  for label, layer in t.rep.system.items()}
        return InfTerm(Rational(system, t.rep.root), declared, t.signature)
    return InfTerm(Producer(t, _ActStep(p)), declared, t.signature)


register(InfTerm, act_inf, lambda t: t.declared_support)


class ClassChain:
    """Compatible sequence n -> alpha class of a depth-n truncation

    `constant_from` is the depth from which every class is the same, when known.
    """

    def __init__(self, classes: Callable[[int], AlphaClass], constant_from: Optional[int] = None):
        self._classes = classes
        self.constant_from = constant_from
        self._memo: Dict[int, AlphaClass] = {}
        self._lock = threading.Lock()

    def __call__(self, n: int) -> AlphaClass:
        with self._lock:
            cached = self._memo.get(n)
        if cached is None:
            cached = self._classes(n)
            with self._lock:
                self._memo[n] = cached
        return cached

    @classmethod
    def from_infterm(cls, t: Term) -> 'ClassChain':
        return cls(lambda n: canonicalize(truncate(t, n)), constant_from=finite_height(t))

    @classmethod
    def from_sequence(cls, terms: Callable[[int], Term]) -> 'ClassChain':
        """chain(n) = class of the depth-n truncation of the n-th term"""
        return cls(lambda n: canonicalize(truncate(terms(n), n)))

    def check(self, depth: int) -> List[FrozenSet[Atom]]:
        """Verify compatibility up to `depth`; returns the supports along the way"""
        supports = [fv(self(0).canonical)]
        for m in range(depth):
            upper = self(m + 1)
            if canonicalize(truncate_raw(upper.canonical, m)) != self(m):
                raise IncompatibleChain(m)
            support = fv(upper.canonical)
            if not supports[-1] <= support:
                raise IncompatibleChain(m)
            supports.append(support)
        return supports


def _extend(c: TruncTerm, u: TruncTerm, env: Dict[Atom, Atom], avoid: FrozenSet[Atom],
            used: set, depth: int) -> TruncTerm:
    """Representative of canonical term c that truncates to u one level up"""
    if isinstance(c, Star):
        return STAR
    if isinstance(c, Var):
        return Var(env.get(c.atom, c.atom))
    if isinstance(u, Op):
        if u.name != c.name or u.arity != c.arity:
            raise IncompatibleChain(depth)
        below = [arg.body for arg in u.args]
        binder_lists = [arg.binders for arg in u.args]
    elif isinstance(u, Star):
        below = [STAR] * len(c.args)
        binder_lists = []
        for arg in c.args:
            chosen = []
            for _ in arg.binders:
                a = fresh_atom(avoid | used)
                used.add(a)
                chosen.append(a)
            binder_lists.append(tuple(chosen))
    else:
        raise IncompatibleChain(depth)
    args = []
    for arg, binders, sub in zip(c.args, binder_lists, below):
        inner = dict(env)
        inner.update(zip(arg.binders, binders))
        args.append(Arg(binders, _extend(arg.body, sub, inner, avoid, used, depth)))
    return Op(c.name, tuple(args))


class LimitBuilder:
    """Builds safe representatives of a chain's limit, depth by depth"""

    def __init__(self, chain: ClassChain, probe: Optional[int] = None):
        self.chain = chain
        self.probe = probe or Config.LIMIT_PROBE_DEPTH

    def limit_support(self, depth: int) -> FrozenSet[Atom]:
        """
        Support of the limit, checked for compatibility and stabilization

        Args:
            depth: Depth the caller wants represented

        Returns:
            The free atoms every later class keeps
        """
        if self.chain.constant_from is not None:
            probe = max(depth, self.chain.constant_from)
            return self.chain.check(probe)[probe]

        probe = max(depth, self.probe)
        supports = self.chain.check(probe)
        half = math.ceil(probe / 2)
        if supports[half] != supports[probe]:
            logger.warning(f"Chain support grows from {len(supports[half])} to "
                           f"{len(supports[probe])} atoms between depths {half} and {probe}")
            raise UnboundedSupport(probe, supports[probe])
        return supports[probe]

    def build(self, depth: int) -> TruncTerm:
        """
        Safe raw truncation representing chain(depth)

        Args:
            depth: Truncation depth of the result

        Returns:
            A representative whose binders are pairwise distinct and avoid the
            limit support; successive depths extend each other
        """
        avoid = self.limit_support(depth)
        used: set = set()
        u: TruncTerm = STAR
        for k in range(1, depth + 1):
            u = _extend(self.chain(k).canonical, u, {}, avoid, used, k)
        logger.info(f"Represented chain to depth {depth} with {len(used)} bound atoms")
        return u


def represent_limit(chain: ClassChain, depth: int, probe: Optional[int] = None) -> TruncTerm:
    """Safe raw truncation representing chain(depth); see LimitBuilder"""
    return LimitBuilder(chain, probe).build(depth)
