"""
Operations on finite raw terms over a binding signature

Covers the permutation action, free and bound atoms, alpha-equivalence,
canonical representatives, truncation, the truncation metrics and safe
(maximal-support) representatives. Truncations with `*` leaves are accepted
everywhere a raw term is.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, Optional, Set

from backend.nominal import register
from models.atoms import Atom, Perm, fresh_atom
from models.terms import STAR, AlphaClass, Arg, Op, Star, TruncTerm, Var, UNKNOWN

logger = logging.getLogger(__name__)


def act_raw(p: Perm, t: TruncTerm) -> TruncTerm:
    """Apply p to every atom occurrence, bound and free"""
    if not p:
        return t
    if isinstance(t, Var):
        return Var(p(t.atom))
    if isinstance(t, Star):
        return t
    return Op(t.name, tuple(
        Arg(tuple(p(b) for b in arg.binders), act_raw(p, arg.body)) for arg in t.args))


@lru_cache(maxsize=65536)
def fv(t: TruncTerm) -> FrozenSet[Atom]:
    """Free atoms"""
    if isinstance(t, Var):
        return frozenset((t.atom,))
    if isinstance(t, Star):
        return frozenset()
    result = frozenset()
    for arg in t.args:
        result |= fv(arg.body) - set(arg.binders)
    return result


@lru_cache(maxsize=65536)
def bv(t: TruncTerm) -> FrozenSet[Atom]:
    """Atoms occurring in binding position"""
    if not isinstance(t, Op):
        return frozenset()
    result = frozenset()
    for arg in t.args:
        result |= bv(arg.body) | set(arg.binders)
    return result


def var_atoms(t: TruncTerm) -> FrozenSet[Atom]:
    """All atoms of a raw term: its support as a raw term"""
    return fv(t) | bv(t)


def height(t: TruncTerm) -> int:
    """Number of layers; a variable or constant has height 1"""
    if isinstance(t, Star):
        return 0
    if isinstance(t, Var) or not t.args:
        return 1
    return 1 + max(height(arg.body) for arg in t.args)


def size(t: TruncTerm) -> int:
    if isinstance(t, Op):
        return 1 + sum(size(arg.body) for arg in t.args)
    return 1


def _alpha(t: TruncTerm, s: TruncTerm, env_t: Dict[Atom, int], env_s: Dict[Atom, int],
           level: int, wild: FrozenSet[str]) -> bool:
    if wild and ((isinstance(t, Op) and t.name in wild) or (isinstance(s, Op) and s.name in wild)):
        return True
    if isinstance(t, Var) and isinstance(s, Var):
        lt, ls = env_t.get(t.atom), env_s.get(s.atom)
        if lt is None and ls is None:
            return t.atom == s.atom
        return lt == ls
    if isinstance(t, Star) and isinstance(s, Star):
        return True
    if not (isinstance(t, Op) and isinstance(s, Op)):
        return False
    if t.name != s.name or t.arity != s.arity:
        return False
    for arg_t, arg_s in zip(t.args, s.args):
        inner_t, inner_s = env_t, env_s
        if arg_t.binders:
            inner_t, inner_s = dict(env_t), dict(env_s)
            for i, (bt, bs) in enumerate(zip(arg_t.binders, arg_s.binders)):
                inner_t[bt] = level + i
                inner_s[bs] = level + i
        if not _alpha(arg_t.body, arg_s.body, inner_t, inner_s,
                      level + len(arg_t.binders), wild):
            return False
    return True


def alpha_eq(t: TruncTerm, s: TruncTerm) -> bool:
    """Alpha-equivalence of finite terms"""
    if t is s:
        return True
    return _alpha(t, s, {}, {}, 0, frozenset())


def alpha_eq_wild(t: TruncTerm, s: TruncTerm, wild: Iterable[str] = (UNKNOWN,)) -> bool:
    """Alpha-equivalence where nodes named in `wild` match anything"""
    return _alpha(t, s, {}, {}, 0, frozenset(wild))


def _rebind(t: TruncTerm, env: Dict[Atom, Atom], taken: Set[Atom], per_path: bool) -> TruncTerm:
    """Rename every binder to the smallest atom outside `taken`.

    With per_path the chosen binders are only reserved below their scope (canonical
    form); otherwise every binder of the term gets its own atom (safe form).
    """
    if isinstance(t, Var):
        return Var(env.get(t.atom, t.atom))
    if isinstance(t, Star):
        return t
    args = []
    for arg in t.args:
        inner_env, inner_taken = env, taken
        if arg.binders:
            inner_env = dict(env)
            inner_taken = set(taken) if per_path else taken
        renamed = []
        for b in arg.binders:
            c = fresh_atom(inner_taken)
            inner_taken.add(c)
            inner_env[b] = c
            renamed.append(c)
        args.append(Arg(tuple(renamed), _rebind(arg.body, inner_env, inner_taken, per_path)))
    return Op(t.name, tuple(args))


@lru_cache(maxsize=16384)
def canonical_term(t: TruncTerm) -> TruncTerm:
    """Canonical representative: binders renamed depth-first, left to right, to the
    smallest atoms not free in t and not bound on the enclosing path"""
    return _rebind(t, {}, set(fv(t)), per_path=True)


def canonicalize(t: TruncTerm) -> AlphaClass:
    return AlphaClass(canonical_term(t))


def truncate_raw(t: TruncTerm, n: int) -> TruncTerm:
    """Depth-n prefix with `*` below; depth 0 is `*`"""
    if n <= 0:
        return STAR
    if isinstance(t, (Var, Star)):
        return t
    return Op(t.name, tuple(Arg(arg.binders, truncate_raw(arg.body, n - 1)) for arg in t.args))


def agreement_depth(t: TruncTerm, s: TruncTerm) -> Optional[int]:
    """Largest n with identical depth-n truncations; None when t == s"""
    if t == s:
        return None
    if not (isinstance(t, Op) and isinstance(s, Op)):
        return 0
    if t.name != s.name or len(t.args) != len(s.args):
        return 0
    if any(a.binders != b.binders for a, b in zip(t.args, s.args)):
        return 0
    depths = [d for d in (agreement_depth(a.body, b.body) for a, b in zip(t.args, s.args))
              if d is not None]
    return 1 + min(depths)


def dist_raw(t: TruncTerm, s: TruncTerm) -> Fraction:
    """2^-m where m is the largest depth with identical truncations"""
    m = agreement_depth(t, s)
    return Fraction(0) if m is None else Fraction(1, 2 ** m)


def alpha_agreement(t: TruncTerm, s: TruncTerm) -> Optional[int]:
    """Largest n with alpha-equal depth-n truncations; None when t and s are alpha-equal"""
    if alpha_eq(t, s):
        return None
    n = 1
    while alpha_eq(truncate_raw(t, n), truncate_raw(s, n)):
        n += 1
    return n - 1


def dist_alpha_raw(t: TruncTerm, s: TruncTerm) -> Fraction:
    """inf { 2^-n | t^n and s^n alpha-equal }"""
    m = alpha_agreement(t, s)
    return Fraction(0) if m is None else Fraction(1, 2 ** m)


def binder_occurrences(t: TruncTerm) -> list:
    """Binding atoms in depth-first order, with repetitions"""
    found = []
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Op):
            for arg in node.args:
                found.extend(arg.binders)
            stack.extend(reversed(node.children))
    return found


def is_safe(t: TruncTerm) -> bool:
    """Bound atoms pairwise distinct and disjoint from the free ones"""
    occurrences = binder_occurrences(t)
    distinct = set(occurrences)
    return len(distinct) == len(occurrences) and not (distinct & fv(t))


def make_safe(t: TruncTerm, avoid: Iterable[Atom] = ()) -> TruncTerm:
    """Alpha-equivalent safe term whose binders also avoid `avoid`"""
    return _rebind(t, {}, set(fv(t)) | set(avoid), per_path=False)


def bv_rel(t: TruncTerm) -> FrozenSet[Atom]:
    """supp(t) minus the support of its alpha class"""
    return var_atoms(t) - fv(t)


def act_class(p: Perm, c: AlphaClass) -> AlphaClass:
    return canonicalize(act_raw(p, c.canonical))


register(Var, act_raw, var_atoms)
register(Op, act_raw, var_atoms)
register(Star, act_raw, lambda t: frozenset())
register(AlphaClass, act_class, lambda c: fv(c.canonical))
