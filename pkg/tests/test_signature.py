from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from backend.infinite import dist_alpha, embed
from backend.signature import (act_raw, alpha_eq, bv, bv_rel, canonical_term, canonicalize,
                               dist_alpha_raw, dist_raw, fv, height, is_safe, make_safe, size,
                               truncate_raw, var_atoms)
from models.atoms import IDENTITY, Atom, swap
from models.errors import SignatureError
from models.results import Exact
from models.terms import (LAMBDA_SIGNATURE, STAR, Arg, BindingSignature, Op, Var, app, lam)

from .oracles import alpha_by_swapping, has_maximal_support
from .strategies import (GENERIC_SIGNATURE, binder_renamings, generic_terms, lambda_terms,
                         perms)

x, y, z, w = Atom(0, "x"), Atom(1, "y"), Atom(2, "z"), Atom(3, "w")
X, Y, Z = Var(x), Var(y), Var(z)


def all_lambda_terms(max_height, pool):
    """Every pure lambda term of height <= max_height over the atoms in pool"""
    if max_height <= 1:
        return [Var(a) for a in pool]
    smaller = all_lambda_terms(max_height - 1, pool)
    return ([Var(a) for a in pool]
            + [lam(a, body) for a in pool for body in smaller]
            + [app(f, s) for f, s in product(smaller, smaller)])


FOUR_ATOMS = [Atom(i) for i in range(4)]
SMALL_TERMS = all_lambda_terms(3, FOUR_ATOMS)


class TestBindingSignature:
    def test_lambda_arities(self):
        assert LAMBDA_SIGNATURE.arity("abs") == (1,)
        assert LAMBDA_SIGNATURE.arity("app") == (0, 0)
        assert LAMBDA_SIGNATURE.arity("#c3") == ()

    def test_unknown_operation(self):
        with pytest.raises(SignatureError):
            LAMBDA_SIGNATURE.arity("let")

    def test_make_checks_arity(self):
        with pytest.raises(SignatureError):
            LAMBDA_SIGNATURE.make("abs", Arg((), X))
        assert LAMBDA_SIGNATURE.make("abs", Arg((x,), X)) == lam(x, X)

    def test_check_walks_the_whole_term(self):
        bad = lam(x, Op("abs", (Arg((), X),)))
        with pytest.raises(SignatureError):
            LAMBDA_SIGNATURE.check(bad)

    def test_invalid_operation_name(self):
        with pytest.raises(ValueError):
            BindingSignature(ops={"no spaces": (0,)})

    def test_repeated_binder(self):
        with pytest.raises(SignatureError):
            Arg((x, x), X)

    def test_constants(self):
        assert GENERIC_SIGNATURE.constants == {"nil"}


class TestAction:
    def test_examples(self):
        assert act_raw(swap(x, y), lam(x, X)) == lam(y, Y)
        assert act_raw(swap(x, y), app(X, Y)) == app(Y, X)
        assert act_raw(IDENTITY, lam(x, X)) == lam(x, X)

    @given(perms(), lambda_terms(5, 5), st.integers(min_value=0, max_value=6))
    def test_action_commutes_with_truncation(self, p, t, n):
        assert truncate_raw(act_raw(p, t), n) == act_raw(p, truncate_raw(t, n))


class TestFreeAndBound:
    def test_examples(self):
        assert fv(lam(x, app(X, Y))) == {y}
        assert bv(lam(x, app(X, Y))) == {x}
        assert fv(app(X, lam(y, Y))) == {x}
        assert bv(app(X, lam(y, Y))) == {y}
        assert fv(lam(x, X)) == frozenset()

    def test_bv_relative_to_the_class(self):
        assert bv_rel(app(X, lam(y, Y))) == {y}

    def test_height_and_size(self):
        assert height(X) == 1
        assert height(lam(x, app(X, Y))) == 3
        assert size(lam(x, app(X, Y))) == 4
        assert height(STAR) == 0


class TestAlphaEquivalence:
    def test_examples(self):
        assert alpha_eq(lam(x, X), lam(y, Y))
        assert alpha_eq(lam(x, y, app(X, Y)), lam(y, x, app(Y, X)))
        assert not alpha_eq(lam(x, X), lam(x, Y))

    def test_shadowing(self):
        assert alpha_eq(lam(x, lam(x, X)), lam(y, lam(x, X)))
        assert not alpha_eq(lam(x, lam(x, X)), lam(x, lam(y, X)))

    def test_generic_binders(self):
        left = Op("let2", (Arg((), X), Arg((y, z), app(Y, Z))))
        right = Op("let2", (Arg((), X), Arg((z, y), app(Z, Y))))
        swapped = Op("let2", (Arg((), X), Arg((z, y), app(Y, Z))))
        assert alpha_eq(left, right)
        assert not alpha_eq(left, swapped)

    @settings(max_examples=1000)
    @given(lambda_terms(3, 4), lambda_terms(3, 4))
    def test_agrees_with_swapping_oracle_on_random_pairs(self, t, s):
        assert alpha_eq(t, s) == alpha_by_swapping(t, s)

    @settings(max_examples=1000)
    @given(st.data(), lambda_terms(3, 4))
    def test_agrees_with_swapping_oracle_on_renamings(self, data, t):
        s = data.draw(binder_renamings(t, pool=5))
        assert alpha_eq(t, s) == alpha_by_swapping(t, s)

    def test_agrees_with_swapping_oracle_exhaustively_up_to_height_two(self):
        terms = all_lambda_terms(2, FOUR_ATOMS)
        for t, s in product(terms, terms):
            assert alpha_eq(t, s) == alpha_by_swapping(t, s), (t, s)

    @given(st.data(), generic_terms(4, 4))
    def test_generic_terms_agree_with_swapping_oracle(self, data, t):
        s = data.draw(binder_renamings(t, pool=5))
        assert alpha_eq(t, s) == alpha_by_swapping(t, s)

    @given(perms(), lambda_terms(4, 4), lambda_terms(4, 4))
    def test_equivariant(self, p, t, s):
        assert alpha_eq(t, s) == alpha_eq(act_raw(p, t), act_raw(p, s))

    @given(st.data(), lambda_terms(5, 5))
    def test_alpha_equal_terms_share_free_atoms(self, data, t):
        s = data.draw(binder_renamings(t))
        if alpha_eq(t, s):
            assert fv(t) == fv(s)


class TestCanonicalize:
    def test_examples(self):
        assert canonicalize(lam(y, Y)) == canonicalize(lam(x, X))
        assert canonicalize(X).canonical == X
        assert canonical_term(lam(y, app(Y, X))) == lam(Atom(1), app(Var(Atom(1)), X))

    def test_binders_are_reused_across_paths(self):
        t = app(lam(z, Z), lam(y, Y))
        assert canonical_term(t) == app(lam(Atom(0), Var(Atom(0))), lam(Atom(0), Var(Atom(0))))

    @settings(max_examples=500)
    @given(lambda_terms(4, 4), lambda_terms(4, 4))
    def test_decides_alpha_equivalence(self, t, s):
        assert alpha_eq(t, s) == (canonicalize(t) == canonicalize(s))

    @given(st.data(), lambda_terms(5, 5))
    def test_canonical_form_of_a_renaming(self, data, t):
        s = data.draw(binder_renamings(t))
        assert alpha_eq(t, s) == (canonical_term(t) == canonical_term(s))

    @given(lambda_terms(5, 5))
    def test_preserves_class_and_free_atoms(self, t):
        c = canonical_term(t)
        assert alpha_eq(c, t)
        assert fv(c) == fv(t)
        assert canonical_term(c) == c


class TestTruncation:
    def test_examples(self):
        t = lam(x, app(X, Y))
        assert truncate_raw(t, 0) == STAR
        assert truncate_raw(t, 1) == lam(x, STAR)
        assert truncate_raw(t, 3) == t

    @given(lambda_terms(6, 5), st.integers(min_value=0, max_value=7))
    def test_coherent(self, t, n):
        assert truncate_raw(truncate_raw(t, n + 1), n) == truncate_raw(t, n)


class TestMetrics:
    def test_examples(self):
        t = lam(x, app(X, Y))
        assert dist_raw(t, t) == 0
        assert dist_raw(t, lam(x, app(X, X))) == Fraction(1, 4)
        assert dist_alpha_raw(lam(x, X), lam(y, Y)) == 0
        assert dist_raw(lam(x, X), lam(y, Y)) == 1

    @settings(max_examples=1000)
    @given(lambda_terms(4, 3), lambda_terms(4, 3), lambda_terms(4, 3))
    def test_raw_distance_is_an_ultrametric(self, a, b, c):
        assert dist_raw(a, c) <= max(dist_raw(a, b), dist_raw(b, c))
        assert dist_raw(a, b) == dist_raw(b, a)
        assert (dist_raw(a, b) == 0) == (a == b)

    @settings(max_examples=1000)
    @given(lambda_terms(4, 3), lambda_terms(4, 3), lambda_terms(4, 3))
    def test_alpha_distance_is_an_ultrametric(self, a, b, c):
        assert dist_alpha_raw(a, c) <= max(dist_alpha_raw(a, b), dist_alpha_raw(b, c))
        assert (dist_alpha_raw(a, b) == 0) == alpha_eq(a, b)

    @given(lambda_terms(4, 3), lambda_terms(4, 3))
    def test_alpha_distance_of_observed_terms_is_never_exactly_zero(self, a, b):
        bound = dist_alpha(embed(a), embed(b), 6)
        assert not (isinstance(bound, Exact) and bound.value == 0)


class TestSafety:
    def test_examples(self):
        assert is_safe(app(X, lam(y, Y)))
        assert not is_safe(app(X, lam(x, X)))

    def test_make_safe_example(self):
        safe = make_safe(lam(x, app(X, lam(x, X))))
        a, = safe.args[0].binders
        inner = safe.args[0].body.children[1]
        b, = inner.args[0].binders
        assert a != b
        assert safe == lam(a, app(Var(a), lam(b, Var(b))))

    def test_agrees_with_maximal_support_exhaustively(self):
        for t in SMALL_TERMS:
            assert is_safe(t) == has_maximal_support(t), t

    @given(lambda_terms(6, 5), st.frozensets(st.integers(0, 8).map(Atom), max_size=4))
    def test_make_safe(self, t, avoid):
        safe = make_safe(t, avoid)
        assert is_safe(safe)
        assert alpha_eq(safe, t)
        assert not (bv(safe) & avoid)
        assert len(var_atoms(safe)) >= len(var_atoms(t))

    @given(generic_terms(4, 4))
    def test_make_safe_on_generic_terms(self, t):
        safe = make_safe(t)
        assert is_safe(safe)
        assert alpha_eq(safe, t)
