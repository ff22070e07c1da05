from fractions import Fraction
from itertools import count

import pytest
from hypothesis import given, strategies as st

from robust_cpac.core import (
    BoundedOracle, EmptySample, FiniteDistribution, HypothesisFamily, NoExactEvaluator, PerturbationType,
    Predictor, Tri, UnknownMachine, ZooOracle, empirical_risk, empirical_robust_risk, margin_membership,
    risk, robust_loss_bounded, robust_loss_exact, robust_risk,
)

# toy perturbation: U(x) = {x, x+1, x+2}
WIDTH = 3


def _window(x):
    return range(x, x + WIDTH)


def _enumerate(x):
    for z in _window(x):
        yield None
        yield z


def _exact_loss(h, x, y):
    return int(any(h(z) != y for z in _window(x)))


TOY = PerturbationType("toy", contains=lambda x, z: int(x <= z < x + WIDTH), enumerate=_enumerate,
                       exact_loss=_exact_loss,
                       exact_margin=lambda h, x: _exact_loss(h, x, h(x)))
DECIDER_ONLY = PerturbationType("decider", contains=TOY.contains)
EVENS_FOREVER = PerturbationType("evens", enumerate=lambda x: (x + 2 * k for k in count()))

bits = st.lists(st.integers(0, 1), min_size=40, max_size=40)


def table(bits_):
    return Predictor(lambda x: bits_[x % len(bits_)], label="table")


@given(bits, st.integers(0, 30), st.integers(0, 1))
def test_bounded_loss_agrees_with_exact_given_enough_budget(b, x, y):
    h = table(b)
    exact = robust_loss_exact(h, x, y, TOY)
    assert robust_loss_bounded(h, x, y, TOY, 2 * WIDTH + 1).value == exact


@given(bits, st.integers(0, 30), st.integers(0, 1), st.integers(0, 10))
def test_bounded_loss_never_contradicts_exact(b, x, y, budget):
    h = table(b)
    answer = robust_loss_bounded(h, x, y, TOY, budget)
    assert answer is Tri.UNKNOWN or answer.value == robust_loss_exact(h, x, y, TOY)


@given(bits, st.integers(0, 30), st.integers(0, 1))
def test_robust_loss_dominates_zero_one_loss(b, x, y):
    h = table(b)
    assert robust_loss_exact(h, x, y, TOY) >= int(h(x) != y)


def test_decider_only_type_can_find_witnesses_but_not_exhaust():
    h = Predictor(lambda x: int(x == 5))
    assert robust_loss_bounded(h, 3, 0, DECIDER_ONLY, 10) is Tri.ONE
    assert robust_loss_bounded(h, 10, 0, DECIDER_ONLY, 100) is Tri.UNKNOWN


def test_infinite_enumeration_stays_unknown():
    h = Predictor(lambda x: 0)
    assert robust_loss_bounded(h, 4, 0, EVENS_FOREVER, 1000) is Tri.UNKNOWN
    assert robust_loss_bounded(h, 4, 1, EVENS_FOREVER, 0) is Tri.ONE  # reflexive check costs nothing
    with pytest.raises(NoExactEvaluator):
        robust_loss_exact(h, 4, 0, EVENS_FOREVER)


def test_risks_are_exact_fractions():
    h = Predictor(lambda x: int(x >= 3))
    D = FiniteDistribution.from_masses([(0, 0, Fraction(1, 2)), (2, 0, Fraction(1, 3)), (5, 0, Fraction(1, 6))])
    assert risk(h, D) == Fraction(1, 6)
    # 2 sees 3 and 4 in U(2)
    assert robust_risk(h, D, TOY) == Fraction(1, 2)
    assert robust_risk(h, D, TOY, budget=100) == Fraction(1, 2)
    assert robust_risk(Predictor(lambda x: 0), D, EVENS_FOREVER, budget=5) is Tri.UNKNOWN
    S = [(0, 0), (2, 0), (5, 1), (5, 1)]
    assert empirical_risk(h, S) == 0
    assert empirical_robust_risk(h, S, TOY) == Fraction(1, 4)


def test_margin_membership():
    h = Predictor(lambda x: int(x >= 3))
    assert [margin_membership(h, x, TOY) for x in range(6)] == [0, 1, 1, 0, 0, 0]
    assert margin_membership(h, 1, TOY, budget=100) is Tri.ONE


def test_empty_samples_rejected():
    h = Predictor(lambda x: 0)
    with pytest.raises(EmptySample):
        empirical_risk(h, [])
    with pytest.raises(EmptySample):
        empirical_robust_risk(h, [], TOY)
    with pytest.raises(EmptySample):
        FiniteDistribution.uniform([])


def test_distribution_validation():
    with pytest.raises(ValueError):
        FiniteDistribution.from_masses([(0, 0, Fraction(1, 2))])
    with pytest.raises(ValueError):
        FiniteDistribution.from_masses([(0, 0, Fraction(1, 2)), (0, 0, Fraction(1, 2))])
    with pytest.raises(ValueError):
        FiniteDistribution.from_masses([(0, 2, 1)])
    with pytest.raises(ValueError):
        FiniteDistribution(((0, 0, 1.0),))


def test_uniform_merges_repeats():
    D = FiniteDistribution.uniform([(1, 0), (1, 0), (2, 1)])
    assert D.support == ((1, 0, Fraction(2, 3)), (2, 1, Fraction(1, 3)))


def test_predictor_equality_by_parameters():
    fam = HypothesisFamily("thresholds", "DR", lambda t, x: int(x >= t), lambda t: t, lambda n: n)
    assert fam.member(3) == fam.member(3)
    assert fam.member(3) != fam.member(4)
    f = Predictor(lambda x: 0)
    assert f == f and f != Predictor(lambda x: 0)
    assert [h.params for h, _ in zip(fam.enumerate(2), range(3))] == [2, 3, 4]
    assert fam.key(fam.member(9)) == 9


def test_oracles():
    assert ZooOracle().halting_step(17, 0) == 3
    assert ZooOracle().halting_step(17, 99) == 3
    assert ZooOracle().halting_step(2, 0) is None
    with pytest.raises(UnknownMachine):
        ZooOracle().halting_step(32, 0)
    assert BoundedOracle(10).halting_step(26, 0) is None
    assert BoundedOracle(100).halting_step(26, 0) == 83


def test_representation_tag():
    assert TOY.representation == "DR"
    assert EVENS_FOREVER.representation == "RER"
