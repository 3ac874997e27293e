import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from backend.infinite import alpha_eq_at, fv_at, rational, truncate
from backend.lambda_calculus import (ConstantNaming, beta_step, build_abs, build_app, contract,
                                     head_step, is_hnf, is_tnf, is_whnf, is_zero_term, reduce,
                                     subst, top_step, tr_from_constants, tr_to_constants,
                                     whead_step)
from backend.library import (F, I, K, Omega, X as x, Y as y, Z as z, allconst,
                             constants_example, fix, ogre_constant)
from backend.signature import act_raw, alpha_eq, canonicalize, fv
from config import Config
from models.atoms import Atom
from models.errors import FuelNeeded, RepresentativeClash, SupportViolation
from models.results import Diverges, FuelExhausted, Reached, Strategy, ZeroVerdict
from models.terms import (ABS, APP, BOT, STAR, Arg, Op, Var, app, const, lam, spine)

from .oracles import subst_by_freshening
from .strategies import atoms, lambda_terms, perms

X, Y, Z = Var(x), Var(y), Var(z)


def x_spine():
    return rational({"T": Op(APP, (Arg((), "a"), Arg((), "T"))), "a": X}, "T")


class TestSubst:
    def test_variable(self):
        assert subst(X, x, app(Y, Y)) == app(Y, Y)

    def test_bottom(self):
        assert subst(BOT, x, Y) == BOT

    def test_capture_is_avoided(self):
        result = subst(lam(y, X), x, Y)
        binder, = result.args[0].binders
        assert binder != y
        assert alpha_eq(result, lam(z, Y))

    def test_bound_occurrences_are_left_alone(self):
        t = lam(x, X)
        assert subst(t, x, Y) is t

    def test_alpha_classes(self):
        result = subst(canonicalize(lam(y, X)), x, Y)
        assert result == canonicalize(lam(z, Y))

    def test_infinite_term(self):
        result = subst(x_spine(), x, I)
        i_spine = rational({"T": Op(APP, (Arg((), "i"), Arg((), "T"))),
                            "i": Op(ABS, (Arg((x,), "v"),)), "v": X}, "T")
        assert alpha_eq_at(result, i_spine, 7)
        assert fv_at(result, 12) == frozenset()

    def test_infinite_substituend(self):
        result = subst(lam(y, app(X, Y)), x, x_spine())
        assert alpha_eq_at(result, lam(z, app(app(X, app(X, STAR)), Z)), 4)

    @settings(max_examples=500)
    @given(lambda_terms(6, 5), atoms(5), lambda_terms(4, 5))
    def test_agrees_with_full_freshening(self, m, a, n):
        assert alpha_eq(subst(m, a, n), subst_by_freshening(m, a, n))

    @given(perms(), lambda_terms(5, 5), atoms(5), lambda_terms(4, 5))
    def test_equivariant(self, p, m, a, n):
        assert alpha_eq(act_raw(p, subst(m, a, n)),
                        subst(act_raw(p, m), p(a), act_raw(p, n)))

    @given(lambda_terms(5, 5), atoms(5), lambda_terms(4, 5))
    def test_no_free_occurrence(self, m, a, n):
        if a not in fv(m):
            assert alpha_eq(subst(m, a, n), m)


class TestSteps:
    def test_head_step(self):
        assert head_step(app(I, Y)) == Y
        assert head_step(lam(z, app(I, Y))) == lam(z, Y)
        assert head_step(X) is None

    def test_whead_step_stops_at_abstractions(self):
        assert whead_step(lam(z, app(I, Y))) is None
        assert whead_step(app(app(I, I), Y)) == app(I, Y)

    def test_contract(self):
        assert alpha_eq(contract(app(K, Y)), lam(z, Y))

    def test_beta_step(self):
        reducts = beta_step(app(I, app(K, Y)))
        assert len(reducts) == 2
        assert any(alpha_eq(r, app(K, Y)) for r in reducts)
        assert any(alpha_eq(r, app(I, lam(z, Y))) for r in reducts)
        assert beta_step(app(X, Y)) == []

    @given(lambda_terms(6, 4))
    def test_head_reduct_is_a_beta_reduct(self, t):
        h = head_step(t)
        if h is not None:
            assert any(alpha_eq(h, r) for r in beta_step(t))

    def test_top_step(self):
        assert top_step(app(I, Y)) == Y
        assert top_step(app(Omega, Y), 50) is None
        assert top_step(lam(x, app(I, X))) is None

    def test_top_step_normalizes_the_operator(self):
        # (I I) y reaches the abstraction I first
        assert top_step(app(app(I, I), Y), 10) == Y

    def test_constants_example(self):
        reducts = beta_step(constants_example(), depth=6)
        assert len(reducts) == 1
        expected = build_abs(Atom(1), build_app(allconst(), Var(Atom(1))))
        assert alpha_eq_at(reducts[0], expected, 6)


class TestNormalForms:
    def test_predicates(self):
        assert is_hnf(lam(x, app(X, Omega)))
        assert is_hnf(app(BOT, X))
        assert not is_hnf(lam(x, Omega))
        assert is_whnf(lam(x, Omega))
        assert not is_whnf(Omega)
        assert is_tnf(app(X, Omega))
        assert is_tnf(app(Omega, Y), 50)
        assert not is_tnf(app(I, Y))

    def test_infinite_abstraction_prefix_needs_fuel(self, monkeypatch):
        monkeypatch.setattr(Config, "SPINE_LIMIT", 64)
        with pytest.raises(FuelNeeded):
            is_hnf(ogre_constant())
        assert is_whnf(ogre_constant())

    def test_infinite_left_spine_needs_fuel(self, monkeypatch):
        monkeypatch.setattr(Config, "SPINE_LIMIT", 64)
        left_spine = rational({"T": Op(APP, (Arg((), "T"), Arg((), "a"))), "a": X}, "T")
        with pytest.raises(FuelNeeded):
            is_hnf(left_spine)
        with pytest.raises(FuelNeeded):
            is_whnf(left_spine)
        assert is_hnf(x_spine())

    @settings(deadline=None)
    @given(lambda_terms(4, 4), st.sampled_from(list(Strategy)))
    def test_reached_terms_are_normal(self, t, strategy):
        outcome = reduce(t, strategy, 40)
        if isinstance(outcome, Reached):
            if strategy == Strategy.HEAD:
                assert is_hnf(outcome.term)
            elif strategy == Strategy.WHEAD:
                assert is_whnf(outcome.term)
            else:
                assert is_tnf(outcome.term, Config.top_inner_fuel(40))


class TestReduce:
    def test_omega_diverges(self):
        outcome = reduce(Omega, Strategy.HEAD, 50)
        assert isinstance(outcome, Diverges)
        assert alpha_eq(outcome.term, Omega)

    def test_reaches_a_variable(self):
        assert reduce(app(I, Y), "head", 10) == Reached(Y, 1)

    def test_growing_terms_exhaust_fuel(self):
        outcome = reduce(fix(lam(x, y, X)), Strategy.HEAD, 100)
        assert isinstance(outcome, FuelExhausted)
        assert outcome.steps == 100

    def test_body_under_lambda_diverges(self):
        assert isinstance(reduce(lam(x, Omega), Strategy.HEAD, 20), Diverges)
        assert isinstance(reduce(lam(x, Omega), Strategy.WHEAD, 20), Reached)

    def test_fix_exposes_its_argument(self):
        outcome = reduce(fix(Var(F)), Strategy.WHEAD, 10)
        assert isinstance(outcome, Reached)
        head, args = spine(outcome.term)
        assert head == Var(F)
        assert len(args) == 1

    def test_outcomes_are_cached(self):
        assert reduce(Omega, Strategy.TOP, 30) is reduce(Omega, Strategy.TOP, 30)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            reduce(X, "sideways", 10)
        with pytest.raises(ValueError):
            reduce(X, Strategy.HEAD, 0)


class TestZeroTerms:
    def test_examples(self):
        assert is_zero_term(Omega, 50) == ZeroVerdict.YES
        assert is_zero_term(I, 1) == ZeroVerdict.NO
        assert is_zero_term(app(X, Y), 1) == ZeroVerdict.YES

    def test_growing_spine(self):
        assert is_zero_term(fix(lam(y, app(Y, X))), 50) == ZeroVerdict.YES

    def test_eventually_an_abstraction(self):
        assert is_zero_term(fix(lam(x, y, X)), 50) == ZeroVerdict.NO

    def test_unknown_within_fuel(self):
        assert is_zero_term(app(K, I, I), 1) == ZeroVerdict.UNKNOWN


class TestConstants:
    def test_free_variable_becomes_constant(self):
        assert tr_to_constants(X) == const("c0")
        assert tr_to_constants(lam(x, app(X, Y))) == lam(x, app(X, const("c1")))

    def test_naming(self):
        rho = ConstantNaming("k")
        assert rho.to_constant(Atom(4)) == "#k4"
        assert rho.to_atom("#k4") == Atom(4)
        assert rho.to_atom("#c4") is None

    @settings(max_examples=500)
    @given(lambda_terms(6, 5))
    def test_round_trip(self, t):
        assert alpha_eq(tr_from_constants(tr_to_constants(t)), t)

    def test_back_translation_freshens_binders(self):
        result = tr_from_constants(lam(x, const("c0")))
        binder, = result.args[0].binders
        assert binder != x
        assert fv(result) == {x}

    def test_infinite_term(self):
        translated = tr_to_constants(x_spine())
        assert fv_at(translated, 10) == frozenset()
        assert truncate(translated, 2) == app(const("c0"), app(STAR, STAR))

    def test_back_translation_needs_a_support(self):
        with pytest.raises(ValueError):
            tr_from_constants(allconst())

    def test_allconst_back_translates_outside_any_finite_support(self):
        back = tr_from_constants(allconst(), support=[Atom(0)])
        assert truncate(back, 2) == app(Var(Atom(0)), app(STAR, STAR))
        with pytest.raises(SupportViolation):
            truncate(back, 4)

    def test_binder_capturing_a_constant(self):
        t = rational({"T": Op(ABS, (Arg((x,), "B"),)), "B": const("c0")}, "T")
        back = tr_from_constants(t, support=[x])
        with pytest.raises(RepresentativeClash):
            truncate(back, 2)
