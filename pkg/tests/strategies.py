"""Hypothesis strategies for atoms, permutations and terms"""

from hypothesis import strategies as st

from backend.infinite import rational
from models.atoms import Atom, Perm
from models.terms import (ABS, APP, LAMBDA_SIGNATURE, Arg, BindingSignature, Op, Var, app, lam)

GENERIC_SIGNATURE = BindingSignature(
    name="generic",
    ops={"let2": (0, 2), "pair": (0, 0), "mu": (1,), "nil": ()},
)


def atoms(count: int = 8) -> st.SearchStrategy:
    return st.integers(min_value=0, max_value=count - 1).map(Atom)


@st.composite
def perms(draw, max_support: int = 8, pool: int = 12):
    size = draw(st.integers(min_value=0, max_value=max_support))
    moved = draw(st.lists(atoms(pool), min_size=size, max_size=size, unique=True))
    image = draw(st.permutations(moved))
    return Perm.from_mapping(dict(zip(moved, image)))


def lambda_terms(height: int = 6, atom_count: int = 5) -> st.SearchStrategy:
    """Pure lambda terms of the given maximal height over atom_count atoms"""
    names = atoms(atom_count)
    base = names.map(Var)
    if height <= 1:
        return base
    sub = lambda_terms(height - 1, atom_count)
    return st.one_of(
        base,
        st.builds(lambda a, body: lam(a, body), names, sub),
        st.builds(lambda f, x: app(f, x), sub, sub),
    )


def generic_terms(height: int = 4, atom_count: int = 4) -> st.SearchStrategy:
    """Terms over GENERIC_SIGNATURE"""
    names = atoms(atom_count)
    base = st.one_of(names.map(Var), st.just(Op("nil")))
    if height <= 1:
        return base
    sub = generic_terms(height - 1, atom_count)
    two_binders = st.lists(names, min_size=2, max_size=2, unique=True)
    return st.one_of(
        base,
        st.builds(lambda a, b: Op("pair", (Arg((), a), Arg((), b))), sub, sub),
        st.builds(lambda a, body: Op("mu", (Arg((a,), body),)), names, sub),
        st.builds(lambda a, bs, body: Op("let2", (Arg((), a), Arg(tuple(bs), body))),
                  sub, two_binders, sub),
    )


@st.composite
def closed_rational_terms(draw, labels: int = 4):
    """λa b c. R where the equations of R only mention a, b and c"""
    bound = [Atom(0), Atom(1), Atom(2)]
    n = draw(st.integers(min_value=1, max_value=labels))
    names = [f"L{i}" for i in range(n)]
    system = {
        "P0": Op(ABS, (Arg((bound[0],), "P1"),)),
        "P1": Op(ABS, (Arg((bound[1],), "P2"),)),
        "P2": Op(ABS, (Arg((bound[2],), "L0"),)),
    }
    for name in names:
        kind = draw(st.sampled_from(["var", "app", "abs"]))
        if kind == "var":
            system[name] = Var(draw(st.sampled_from(bound)))
        elif kind == "app":
            system[name] = Op(APP, (Arg((), draw(st.sampled_from(names))),
                                    Arg((), draw(st.sampled_from(names)))))
        else:
            system[name] = Op(ABS, (Arg((draw(st.sampled_from(bound)),),
                                        draw(st.sampled_from(names))),))
    return rational(system, "P0", signature=LAMBDA_SIGNATURE)


@st.composite
def binder_renamings(draw, t, pool: int = 6):
    """Rename each binder occurrence, and the occurrences it binds, to a random atom"""
    names = atoms(pool)

    def walk(node, env):
        if isinstance(node, Var):
            return Var(env.get(node.atom, node.atom))
        args = []
        for arg in node.args:
            inner = dict(env)
            renamed = []
            for b in arg.binders:
                c = draw(names.filter(lambda a: a not in renamed))
                inner[b] = c
                renamed.append(c)
            args.append(Arg(tuple(renamed), walk(arg.body, inner)))
        return Op(node.name, tuple(args))

    return walk(t, {})
