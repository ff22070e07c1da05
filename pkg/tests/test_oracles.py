from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from brute import HALTING_ROW_POINTS, random_samples, realizable_samples
from robust_cpac.constructions import INF, construction, thm2_construction, thm4_construction, thm5_construction
from robust_cpac.core import EmptySample, NoExactEvaluator, Predictor, Tri, ZooOracle, robust_loss_bounded
from robust_cpac.learners import rerm_learner
from robust_cpac.machine import pair
from robust_cpac.oracles import (
    AttackExceeded, Counterexample, Hypothesis, NoAgnosticOracle, NoAttack, NoStrongOracle,
    NotRobustlyRealizable, RermExceeded, UnsoundAttack, _checked, agnostic_rerm, argmin_members, pao,
    rerm_from_proper_learner, robust_risk_on, strong_realizable_rerm, weak_realizable_rerm,
)

AGNOSTIC = ["thm2", "thm3", "thm4", "ex1"]


def window_minimum(bundle, S, size):
    return min(robust_risk_on(bundle, h, S) for h in bundle.members(size))


@pytest.mark.parametrize("name", AGNOSTIC)
def test_agnostic_rerm_matches_window_minimum(name):
    b = construction(name, ZooOracle())
    size = 64 if name == "ex1" else 32
    for S in random_samples(name, 25, seed=1):
        h = agnostic_rerm(b, S)
        assert b.is_member(h)
        assert robust_risk_on(b, h, S) == window_minimum(b, S, size)


@pytest.mark.parametrize("name", AGNOSTIC)
def test_rerm_breaks_ties_by_smallest_code(name):
    b = construction(name, ZooOracle())
    for S in random_samples(name, 10, seed=2):
        h = agnostic_rerm(b, S)
        best = robust_risk_on(b, h, S)
        tied = [p for p in b.robust_candidates(S) if robust_risk_on(b, b.member(p), S) == best]
        assert b.code(h.params) == min(b.code(p) for p in tied)


@pytest.mark.parametrize("name", ["thm2", "thm3", "thm4", "thm5", "ex1"])
def test_weak_rerm_halts_with_zero_risk_on_realizable_samples(name):
    b = construction(name, ZooOracle())
    for S in realizable_samples(b, 15, seed=3):
        out = weak_realizable_rerm(b, S)
        assert isinstance(out, Hypothesis)
        assert robust_risk_on(b, out.predictor, S) == 0


def test_weak_rerm_budget_on_unrealizable_sample():
    b = thm5_construction()
    # (i,0) labelled 1 on a looping row has positive loss for every member
    out = weak_realizable_rerm(b, [(pair(3, 0), 1)], budget=200)
    assert out == RermExceeded(200)


def test_strong_oracle():
    b = thm2_construction(ZooOracle())
    assert isinstance(strong_realizable_rerm(b, [(0, 1), (4, 1)]), Hypothesis)
    # U(0) holds every odd number and every member labels odd numbers 1
    assert isinstance(strong_realizable_rerm(b, [(0, 0)]), NotRobustlyRealizable)
    with pytest.raises(NoStrongOracle):
        strong_realizable_rerm(thm5_construction(), [(0, 1)])
    with pytest.raises(NoAgnosticOracle):
        agnostic_rerm(thm5_construction(), [(0, 1)])
    with pytest.raises(EmptySample):
        agnostic_rerm(b, [])
    with pytest.raises(EmptySample):
        weak_realizable_rerm(b, [])


@given(st.integers(16, 31), st.integers(0, 40), st.lists(st.tuples(st.integers(0, 3), st.integers(0, 30),
                                                                   st.integers(0, 1)), min_size=1, max_size=6))
@settings(max_examples=150, deadline=None)
def test_thm4_dominating_subclass(i, b, rows):
    bundle = thm4_construction(ZooOracle())
    S = [(pair(i + di if i + di < 32 else i, j), y) for di, j, y in rows]
    assert robust_risk_on(bundle, bundle.member((i, INF)), S) <= robust_risk_on(bundle, bundle.member((i, b)), S)


def test_thm4_rerm_needs_no_oracle():
    truth_free = thm4_construction()
    truth = thm4_construction(ZooOracle())
    for S in random_samples("thm4", 20, seed=4):
        h = agnostic_rerm(truth_free, S)
        assert robust_risk_on(truth, h, S) == window_minimum(truth, S, 32)


def test_thm5_case_loss_agrees_with_bounded_search():
    b = thm5_construction()
    resolved = 0
    for p in [(i, j) for i in (0, 5, 16, 17, 18, 21, 27) for j in range(8)]:
        h = b.member(p)
        for x in HALTING_ROW_POINTS + list(range(40)):
            for y in (0, 1):
                answer = robust_loss_bounded(h, x, y, b.perturbation, 500)
                if answer is not Tri.UNKNOWN:
                    resolved += 1
                    assert answer.value == b.case_loss(p, x, y)
    assert resolved > 1000


def test_pao_is_sound_and_exact_for_members():
    b = thm2_construction(ZooOracle())
    for h in b.members(12):
        for x in range(120):
            for y in (0, 1):
                out = pao(b, h, x, y)
                if isinstance(out, Counterexample):
                    assert h(out.z) != y and b.contains(x, out.z)
                else:
                    assert out == NoAttack() and b.exact_loss(h, x, y) == 0


def test_pao_budgeted_fallback():
    b = thm2_construction()  # no oracle: the enumerator is the only route
    h = Predictor(lambda x: 0 if x == 6 * 16 + 2 else 1)
    assert pao(b, h, 6 * 16 + 4, 1, budget=10) == Counterexample(6 * 16 + 2, 1)
    zero = Predictor(lambda x: 1)
    assert pao(b, zero, 0, 1, budget=50) == AttackExceeded(50)
    with pytest.raises(NoExactEvaluator):
        pao(b, zero, 0, 1)


def test_unsound_attacks_are_rejected():
    b = thm2_construction(ZooOracle())
    h = b.member(3)
    with pytest.raises(UnsoundAttack):
        _checked(b, h, 2, 1, 3)  # 3 is classified correctly
    with pytest.raises(UnsoundAttack):
        _checked(b, h, 2, 1, 80)  # h(80) = 0, but U(2) is the singleton {2}


def test_rerm_from_proper_learner_recovers_the_minimum():
    b = thm2_construction(ZooOracle())
    for S in random_samples("thm2", 6, seed=5, max_size=3):
        h = rerm_from_proper_learner(rerm_learner(b), lambda eps, delta: 2, S, b)
        assert robust_risk_on(b, h, S) == window_minimum(b, S, 32)


def test_argmin_members():
    b = thm2_construction(ZooOracle())
    h = argmin_members(b, [5, INF, 2], [(4, 1)])
    assert h.params == INF  # every candidate has risk 0; INF has code 0
    with pytest.raises(ValueError):
        argmin_members(b, [], [(4, 1)])
    assert robust_risk_on(b, b.member(0), [(4, 1), (0, 1)]) == Fraction(1, 2)
