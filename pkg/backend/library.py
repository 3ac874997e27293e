"""
Named terms: standard combinators, infinitary examples and the reference tree table
"""

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, List, Tuple, Union

from backend.infinite import ClassChain, InfTerm, Term, producer, rational
from backend.lambda_calculus import build_app
from models.atoms import Atom
from models.terms import (ABS, APP, BOT, LAMBDA_SIGNATURE, Arg, Layer, Op, Var, app, const, lam)

logger = logging.getLogger(__name__)

X = Atom(0, "x")
Y = Atom(1, "y")
F = Atom(2, "f")
Z = Atom(3, "z")

I = lam(X, Var(X))
K = lam(X, Y, Var(X))
omega = lam(X, app(Var(X), Var(X)))
Omega = app(omega, omega)

# Y = λf. (λz. f (z z)) (λz. f (z z))
_half = lam(Z, app(Var(F), app(Var(Z), Var(Z))))
Y_COMBINATOR = lam(F, app(_half, _half))


def fix(f: Term) -> Term:
    """fix f as the Y combinator applied to f"""
    return build_app(Y_COMBINATOR, f)


def pinfbv() -> Term:
    """fix (λf x y. x y (f (x y))), whose Böhm tree has infinitely many bound variables"""
    x, y = Var(X), Var(Y)
    return fix(lam(F, X, Y, app(x, y, app(Var(F), app(x, y)))))


def _indexed(k: int) -> Atom:
    return Atom(k)


def ogre() -> InfTerm:
    """λx0. λx1. λx2. ... with a new binder at every level"""
    def step(k: int) -> Layer:
        return Op(ABS, (Arg((_indexed(k),), k + 1),))
    return producer(0, step, (), LAMBDA_SIGNATURE)


def ogre_constant() -> InfTerm:
    """λx. λx. λx. ... as a one-equation rational term"""
    return rational({"T": Op(ABS, (Arg((X,), "T"),))}, "T", signature=LAMBDA_SIGNATURE)


def _infbv_step(state: Tuple[str, int]) -> Layer:
    kind, k = state
    if kind == "top":
        next_state = ("top", 1) if k == 0 else ("body", 2)
        return Op(ABS, (Arg((_indexed(k),), next_state),))
    if kind == "var":
        return Var(_indexed(k))
    if kind == "spine":
        # x0 x1 ... x_k, built from the right
        if k == 0:
            return Var(_indexed(0))
        return Op(APP, (Arg((), ("spine", k - 1)), Arg((), ("var", k))))
    if kind == "abs":
        return Op(ABS, (Arg((_indexed(k),), ("body", k + 1)),))
    # body k: (x0 ... x_{k-1}) (λx_k. body k+1)
    return Op(APP, (Arg((), ("spine", k - 1)), Arg((), ("abs", k))))


def infbv() -> InfTerm:
    """λx0. λx1. x0 x1 (λx2. x0 x1 x2 (λx3. x0 x1 x2 x3 (...)))"""
    return producer(("top", 0), _infbv_step, (), LAMBDA_SIGNATURE)


def _spine_step(leaf: Callable[[int], Layer]) -> Callable[[Tuple[str, int]], Layer]:
    def step(state: Tuple[str, int]) -> Layer:
        kind, k = state
        if kind == "leaf":
            return leaf(k)
        return Op(APP, (Arg((), ("leaf", k)), Arg((), ("spine", k + 1))))
    return step


def allconst() -> InfTerm:
    """c0 (c1 (c2 (...))): infinitely many constants, empty support"""
    return producer(("spine", 0), _spine_step(lambda k: const(f"c{k}")), (), LAMBDA_SIGNATURE)


def allfv(declared: Iterable[Atom] = ()) -> InfTerm:
    """x0 (x1 (x2 (...))): every atom free, so any finite declared support is violated"""
    return producer(("spine", 0), _spine_step(lambda k: Var(_indexed(k))), declared,
                    LAMBDA_SIGNATURE)


def constants_example() -> Term:
    """(λx0 x1. x0 x1) allconst"""
    x0, x1 = _indexed(0), _indexed(1)
    return build_app(lam(x0, x1, app(Var(x0), Var(x1))), allconst())


def no_limit_term(n: int) -> Op:
    """λx_n. x_n (x0 (x1 (... x_{n-1})))"""
    tail = Var(_indexed(n - 1))
    for k in reversed(range(n - 1)):
        tail = app(Var(_indexed(k)), tail)
    return lam(_indexed(n), app(Var(_indexed(n)), tail))


def no_limit_chain() -> ClassChain:
    """Compatible chain whose supports never stabilize"""
    return ClassChain.from_sequence(lambda n: no_limit_term(max(n, 1)))


# Reference trees

def _cycle(system: dict, root: str = "T") -> InfTerm:
    return rational(system, root, signature=LAMBDA_SIGNATURE)


@dataclass(frozen=True)
class TreeExample:
    """A term with its expected Böhm, Lévy-Longo and Berarducci trees (unknown read as ⊥)"""
    name: str
    source: str
    term: Term
    bt: Union[Op, InfTerm]
    llt: Union[Op, InfTerm]
    bet: Union[Op, InfTerm]


def tree_examples() -> List[TreeExample]:
    x = Var(X)
    x_spine = _cycle({"T": Op(APP, (Arg((), "x"), Arg((), "T"))), "x": x})
    lam_x_spine = _cycle({"T": Op(ABS, (Arg((X,), "b"),)),
                          "b": Op(APP, (Arg((), "x"), Arg((), "T"))),
                          "x": x})
    lambdas = _cycle({"T": Op(ABS, (Arg((X,), "T"),))})
    left_spine = _cycle({"T": Op(APP, (Arg((), "T"), Arg((), "x"))), "x": x})
    lam_bot = lam(X, BOT)

    return [
        TreeExample("fix x", r"fix x", fix(x), x_spine, x_spine, x_spine),
        TreeExample("fix (λy x. x y)", r"fix (\y x. x y)",
                    fix(lam(Y, X, app(x, Var(Y)))), lam_x_spine, lam_x_spine, lam_x_spine),
        TreeExample("λx. Ω", r"\x. Omega", lam(X, Omega), BOT, lam_bot, lam_bot),
        TreeExample("fix (λx y. x)", r"fix (\x y. x)", fix(lam(X, Y, x)), BOT, lambdas, lambdas),
        TreeExample("Ω Ω", r"Omega Omega", app(Omega, Omega), BOT, BOT, app(BOT, BOT)),
        TreeExample("fix (λy. y x)", r"fix (\y. y x)", fix(lam(Y, app(Var(Y), x))),
                    BOT, BOT, left_spine),
    ]
