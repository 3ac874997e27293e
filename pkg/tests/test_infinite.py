from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from backend.infinite import (ClassChain, act_inf, alpha_eq_at, as_infterm, dist, dist_alpha,
                              embed, finite_height, fv_at, fv_exact, node, rational,
                              represent_limit, support_of, truncate, unfold_step)
from backend.library import allfv, infbv, no_limit_chain, ogre, ogre_constant
from backend.signature import (act_raw, alpha_eq, canonicalize, is_safe, make_safe,
                               truncate_raw)
from models.atoms import IDENTITY, Atom, swap
from models.errors import (IncompatibleChain, NotRational, SignatureError, SupportViolation,
                           UnboundedSupport)
from models.results import AtMost, Exact
from models.terms import (APP, LAMBDA_SIGNATURE, STAR, Arg, Op, Var, app, is_app, lam)

from .strategies import closed_rational_terms, lambda_terms, perms

x, y = Atom(0, "x"), Atom(1, "y")
X, Y = Var(x), Var(y)


def x_spine(atom=x):
    """rec T = atom T"""
    return rational({"T": Op(APP, (Arg((), "a"), Arg((), "T"))), "a": Var(atom)}, "T")


class TestUnfolding:
    def test_embedded_variable(self):
        assert unfold_step(embed(X)) == X

    def test_one_equation_step(self):
        layer = unfold_step(x_spine())
        assert is_app(layer)
        assert truncate(layer.children[0], 1) == X

    def test_layer_is_memoized(self):
        t = x_spine()
        assert unfold_step(t) is unfold_step(t)

    def test_undefined_label(self):
        with pytest.raises(SignatureError):
            rational({"T": Op(APP, (Arg((), "T"), Arg((), "U")))}, "T")

    def test_layers_are_checked_against_the_signature(self):
        t = rational({"T": Op("abs", (Arg((), "T"),))}, "T", signature=LAMBDA_SIGNATURE)
        with pytest.raises(SignatureError):
            truncate(t, 2)

    def test_support_of(self):
        assert support_of(lam(x, app(X, Y))) == {y}
        assert support_of(x_spine()) == {x}
        assert as_infterm(X).declared_support == {x}

    def test_node_mixes_finite_and_infinite_arguments(self):
        t = node(app(X, x_spine(y)))
        assert truncate(t, 3) == app(X, app(Y, app(STAR, STAR)))


class TestTruncate:
    def test_ogre(self):
        assert alpha_eq(truncate(ogre(), 3), lam(Atom(7), Atom(8), Atom(9), STAR))

    def test_infbv(self):
        assert alpha_eq(truncate(infbv(), 2), lam(x, y, STAR))

    def test_infbv_spine(self):
        x0, x1, x2 = Var(Atom(0)), Var(Atom(1)), Var(Atom(2))
        expected = lam(Atom(0), Atom(1),
                       app(x0, x1, lam(Atom(2), app(x0, x1, x2, lam(Atom(3), STAR)))))
        assert truncate(infbv(), 6) == truncate_raw(expected, 6)

    def test_depth_zero(self):
        assert truncate(ogre(), 0) == STAR

    @given(lambda_terms(6, 5), st.integers(min_value=0, max_value=7))
    def test_embedding_commutes_with_truncation(self, t, n):
        assert truncate(embed(t), n) == truncate_raw(t, n)

    @given(closed_rational_terms(), st.integers(min_value=0, max_value=8))
    def test_coherent(self, t, n):
        assert truncate_raw(truncate(t, n + 1), n) == truncate(t, n)

    def test_concurrent_observation(self):
        t = infbv()
        with ThreadPoolExecutor(max_workers=4) as pool:
            results = list(pool.map(lambda _: truncate(t, 12), range(8)))
        assert all(r == results[0] for r in results)


class TestSupport:
    def test_allfv_violates_any_finite_support(self):
        with pytest.raises(SupportViolation):
            truncate(allfv(), 3)

    def test_violation_surfaces_at_the_offending_depth(self):
        t = allfv([Atom(0), Atom(1)])
        assert fv_at(t, 3) == {Atom(0), Atom(1)}
        with pytest.raises(SupportViolation) as info:
            truncate(t, 5)
        assert info.value.atom == Atom(2)

    def test_fv_exact(self):
        assert fv_exact(ogre_constant()) == frozenset()
        assert fv_exact(x_spine()) == {x}

    def test_fv_exact_needs_a_rational_term(self):
        with pytest.raises(NotRational):
            fv_exact(ogre())
        assert fv_at(infbv(), 10) == frozenset()

    def test_fv_exact_checks_declared_support(self):
        t = rational({"T": Op(APP, (Arg((), "a"), Arg((), "T"))), "a": X}, "T",
                     declared_support=())
        with pytest.raises(SupportViolation):
            fv_exact(t)


class TestObservation:
    def test_ogre_collapses_to_a_constant_binder(self):
        assert alpha_eq_at(ogre(), ogre_constant(), 20)

    def test_ogre_and_infbv(self):
        assert alpha_eq_at(ogre(), infbv(), 2)
        assert not alpha_eq_at(ogre(), infbv(), 3)
        assert dist(ogre(), infbv(), 8) == Exact(Fraction(1, 4))

    def test_identical_terms(self):
        t = x_spine()
        assert alpha_eq_at(t, t, 10)
        assert dist(t, t, 6) == AtMost(Fraction(1, 64))

    def test_alpha_distance_of_alpha_equal_terms(self):
        assert dist_alpha(embed(lam(x, X)), embed(lam(y, Y)), 4) == AtMost(Fraction(1, 16))
        assert dist(embed(lam(x, X)), embed(lam(y, Y)), 4) == Exact(Fraction(1))

    def test_cap_must_be_positive(self):
        with pytest.raises(ValueError):
            dist(X, X, 0)


class TestAction:
    def test_identity(self):
        t = x_spine()
        assert act_inf(IDENTITY, t) is t

    def test_rational_term(self):
        moved = act_inf(swap(x, y), x_spine())
        assert moved.is_rational
        assert truncate(moved, 6) == truncate(x_spine(y), 6)
        assert fv_exact(moved) == {y}

    def test_producer(self):
        moved = act_inf(swap(Atom(0), Atom(5)), ogre())
        assert truncate(moved, 2) == lam(Atom(5), Atom(1), STAR)

    @given(perms(), closed_rational_terms(), st.integers(min_value=0, max_value=10))
    def test_commutes_with_truncation(self, p, t, n):
        assert truncate(act_inf(p, t), n) == act_raw(p, truncate(t, n))

    @given(perms(), st.integers(min_value=0, max_value=10))
    def test_commutes_with_truncation_on_producers(self, p, n):
        assert truncate(act_inf(p, infbv()), n) == act_raw(p, truncate(infbv(), n))


class TestLimits:
    def test_ogre_chain(self):
        u = represent_limit(ClassChain.from_infterm(ogre()), 4)
        binders = []
        node_ = u
        for _ in range(4):
            binders.extend(node_.args[0].binders)
            node_ = node_.args[0].body
        assert node_ == STAR
        assert len(set(binders)) == 4
        assert is_safe(u)

    def test_no_limit_chain(self):
        with pytest.raises(UnboundedSupport):
            represent_limit(no_limit_chain(), 6, probe=10)

    def test_constant_chain_of_a_finite_term(self):
        t = lam(x, app(X, lam(x, X)))
        u = represent_limit(ClassChain.from_infterm(t), 6)
        assert is_safe(u)
        assert alpha_eq(u, make_safe(t))

    def test_finite_term_with_a_deep_free_atom(self):
        binders = [Atom(i) for i in range(1, 9)]
        t = lam(*binders, X)
        u = represent_limit(ClassChain.from_infterm(t), 4)
        assert is_safe(u)
        assert alpha_eq(u, truncate_raw(make_safe(t), 4))

    def test_finite_height(self):
        assert finite_height(lam(x, X)) == 2
        acyclic = rational({"T": Op(APP, (Arg((), "a"), Arg((), "a"))), "a": X}, "T")
        assert finite_height(acyclic) == 2
        assert finite_height(x_spine()) is None
        assert finite_height(ogre()) is None

    def test_incompatible_chain(self):
        chain = ClassChain.from_sequence(lambda n: X if n % 2 else Y)
        with pytest.raises(IncompatibleChain):
            represent_limit(chain, 3)

    @settings(max_examples=200, deadline=None)
    @given(closed_rational_terms())
    def test_random_rational_chains(self, t):
        chain = ClassChain.from_infterm(t)
        u = represent_limit(chain, 6)
        assert is_safe(u)
        assert canonicalize(u) == chain(6)
        assert truncate_raw(u, 5) == represent_limit(chain, 5)
