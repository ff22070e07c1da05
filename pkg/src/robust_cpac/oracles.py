"""Robust ERM oracles (weak, strong, agnostic), the perfect attack oracle and
the extraction of a robust ERM from a proper learner.

Every argmin breaks ties by the smallest parameter code.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

from .core import (
    EmptySample, NoExactEvaluator, Predictor, Sample, empirical_robust_risk,
)

__all__ = [
    "Hypothesis", "NotRobustlyRealizable", "RermExceeded", "RermOutcome",
    "Counterexample", "NoAttack", "AttackExceeded", "AttackOutcome",
    "NoStrongOracle", "NoAgnosticOracle", "UnsoundAttack",
    "weak_realizable_rerm", "strong_realizable_rerm", "agnostic_rerm", "pao",
    "rerm_from_proper_learner", "robust_risk_on", "argmin_members",
]


@dataclass(frozen=True)
class Hypothesis:
    predictor: Predictor


@dataclass(frozen=True)
class NotRobustlyRealizable:
    pass


@dataclass(frozen=True)
class RermExceeded:
    candidates_tried: int


RermOutcome = Hypothesis | NotRobustlyRealizable | RermExceeded


@dataclass(frozen=True)
class Counterexample:
    z: int
    y: int


@dataclass(frozen=True)
class NoAttack:
    pass


@dataclass(frozen=True)
class AttackExceeded:
    budget: int


AttackOutcome = Counterexample | NoAttack | AttackExceeded


class NoStrongOracle(Exception):
    """The construction provably admits no strong realizable robust ERM."""


class NoAgnosticOracle(Exception):
    """The construction provably admits no agnostic robust ERM."""


class UnsoundAttack(AssertionError):
    """An attack oracle returned a point that is not a valid counterexample."""


def robust_risk_on(bundle, h: Predictor, S: Sample) -> Fraction:
    """Exact empirical robust risk of h on S through the bundle's evaluator."""
    return empirical_robust_risk(h, S, bundle.perturbation)


def argmin_members(bundle, params_list: Sequence, S: Sample,
                   risk: Callable[[Predictor], Fraction] | None = None) -> Predictor:
    """Member minimizing `risk` (default: exact empirical robust risk), smallest code on ties."""
    if not params_list:
        raise ValueError("no candidates")
    if risk is None:
        def risk(h):
            return robust_risk_on(bundle, h, S)
    best = None
    for params in params_list:
        h = bundle.member(params)
        key = (risk(h), bundle.code(params))
        if best is None or key < best[0]:
            best = (key, h)
    return best[1]


def _robustly_consistent(bundle, h: Predictor, S: Sample) -> bool:
    # early exit on the first robust mistake
    return all(not bundle.exact_loss(h, x, y) for x, y in S)


def weak_realizable_rerm(bundle, S: Sample, budget: int | None = None) -> RermOutcome:
    """Walk the family in code order and return the first robustly consistent member.

    Halts on robustly realizable samples.  Otherwise it runs forever, so a
    budget (number of members inspected) turns that case into RermExceeded.
    """
    if not S:
        raise EmptySample("robust ERM on an empty sample")
    code = 0
    while budget is None or code < budget:
        h = bundle.member(bundle.family.decode_params(code))
        if _robustly_consistent(bundle, h, S):
            return Hypothesis(h)
        code += 1
    return RermExceeded(code)


def agnostic_rerm(bundle, S: Sample) -> Predictor:
    """Exact empirical robust risk minimizer over the whole family.

    Searches the bundle's finite candidate structure, which is guaranteed to
    contain a minimizer (for thm4 the dominating subclass b = inf).
    """
    if not S:
        raise EmptySample("robust ERM on an empty sample")
    if bundle.family.name == "thm5":
        raise NoAgnosticOracle("thm5 admits no agnostic robust ERM")
    return argmin_members(bundle, bundle.robust_candidates(S), S)


def strong_realizable_rerm(bundle, S: Sample) -> RermOutcome:
    if bundle.family.name == "thm5":
        raise NoStrongOracle("thm5 admits no strong realizable robust ERM")
    h = agnostic_rerm(bundle, S)
    if robust_risk_on(bundle, h, S) == 0:
        return Hypothesis(h)
    return NotRobustlyRealizable()


def pao(bundle, h: Predictor, x: int, y: int, budget: int | None = None) -> AttackOutcome:
    """Perfect attack oracle: some z in U(x) with h(z) != y, if there is one.

    Exact whenever the bundle can decide the question (members, finite or
    windowed perturbation sets); otherwise it searches the enumerator of U(x)
    for `budget` steps and may give up.  NoAttack is only ever returned on an
    exact answer or an exhausted enumeration.
    """
    if h(x) != y:
        return Counterexample(x, y)
    try:
        z = bundle.counterexample(h, x, y)
    except NoExactEvaluator:
        if budget is None:
            raise
        stream = bundle.perturbation.enumerate(x)
        for _ in range(budget):
            try:
                z = next(stream)
            except StopIteration:
                return NoAttack()
            if z is not None and h(z) != y:
                return _checked(bundle, h, x, y, z)
        return AttackExceeded(budget)
    if z is None:
        return NoAttack()
    return _checked(bundle, h, x, y, z)


def _checked(bundle, h: Predictor, x: int, y: int, z: int) -> Counterexample:
    if h(z) == y:
        raise UnsoundAttack(f"{z} is classified correctly")
    contains = bundle.perturbation.contains
    if contains is not None and not contains(x, z):
        raise UnsoundAttack(f"{z} is not in U({x})")
    return Counterexample(z, y)


def rerm_from_proper_learner(learner: Callable[[Sample], Predictor],
                             sample_complexity: Callable[[Fraction, Fraction], int],
                             S: Sample, bundle) -> Predictor:
    """Robust ERM from a proper robust learner.

    With k = |S| and m = sample_complexity(1/(k+1), 1/7), every one of the k^m
    length-m sequences over the entries of S is fed to the learner; the output
    with the smallest exact empirical robust risk on S wins.
    """
    if not S:
        raise EmptySample("robust ERM on an empty sample")
    k = len(S)
    m = sample_complexity(Fraction(1, k + 1), Fraction(1, 7))
    best = None
    for indices in product(range(k), repeat=m):
        h = learner([S[t] for t in indices])
        key = (robust_risk_on(bundle, h, S), bundle.code(h.params) if h.is_member else -1)
        if best is None or key < best[0]:
            best = (key, h)
    return best[1]
