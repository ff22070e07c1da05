"""Computable learners: ERM, halving over a finite family, the attack-driven
robust learner and the majority-vote decoder used by the reductions."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

from .core import EmptySample, Predictor, Sample, empirical_risk
from .oracles import (
    AttackExceeded, Counterexample, agnostic_rerm, argmin_members, weak_realizable_rerm,
)

__all__ = [
    "Learner", "VersionSpaceEmpty", "MistakeBoundExceeded", "AttackBudgetExceeded",
    "HalvingLearner", "LearnerReport", "erm_pac_learner", "halving_online_learner",
    "cycle_robust", "majority_vote_decoder", "constant_learner", "erm_learner",
    "rerm_learner", "weak_rerm_learner", "seeded_arbitrary_learner", "constant_predictor",
]

Learner = Callable[[Sample], Predictor]


class VersionSpaceEmpty(Exception):
    """No member of the finite family is consistent with the stream so far."""


class MistakeBoundExceeded(Exception):
    """More updates than the online learner's mistake bound allows."""


class AttackBudgetExceeded(Exception):
    """A bounded attack oracle could not settle a query."""


def erm_pac_learner(bundle, S: Sample) -> Predictor:
    """Standard-loss ERM over the bundle's finite candidate structure."""
    if not S:
        raise EmptySample("ERM on an empty sample")
    return argmin_members(bundle, bundle.erm_candidates(S), S, risk=lambda h: empirical_risk(h, S))


class HalvingLearner:
    """Majority vote over the members still consistent with every update."""

    def __init__(self, members: Sequence[Predictor]):
        if not members:
            raise ValueError("halving needs at least one member")
        self.version_space = list(members)
        self.mistake_bound = math.ceil(math.log2(len(members)))
        self.mistakes = 0

    def predict(self, x: int) -> int:
        ones = sum(h(x) for h in self.version_space)
        return 1 if 2 * ones > len(self.version_space) else 0

    def update(self, x: int, y: int) -> None:
        if self.predict(x) != y:
            self.mistakes += 1
        self.version_space = [h for h in self.version_space if h(x) == y]
        if not self.version_space:
            raise VersionSpaceEmpty(f"no member labels {x} as {y}")

    def hypothesis(self) -> Predictor:
        """A frozen snapshot of the current majority vote."""
        space = tuple(self.version_space)
        if len(space) == 1:
            return space[0]
        n = len(space)

        def vote(x: int) -> int:
            return 1 if 2 * sum(h(x) for h in space) > n else 0
        return Predictor(vote, label=f"majority of {len(space)}")


def halving_online_learner(finite_members: Sequence[Predictor]) -> HalvingLearner:
    return HalvingLearner(finite_members)


@dataclass(frozen=True)
class LearnerReport:
    output: Predictor
    pao_calls: int
    mistakes: int


def cycle_robust(S: Sample, online: HalvingLearner,
                 attack: Callable[[Predictor, int, int], object]) -> LearnerReport:
    """Scan S with the attack oracle; feed every counterexample to the online
    learner and restart the scan, until a full scan finds no attack."""
    calls = updates = 0
    while True:
        h = online.hypothesis()
        for x, y in S:
            calls += 1
            outcome = attack(h, x, y)
            if isinstance(outcome, AttackExceeded):
                raise AttackBudgetExceeded(f"attack on ({x}, {y}) unresolved")
            if isinstance(outcome, Counterexample):
                updates += 1
                if updates > online.mistake_bound:
                    raise MistakeBoundExceeded(f"{updates} updates, bound {online.mistake_bound}")
                online.update(outcome.z, outcome.y)
                break
        else:
            return LearnerReport(h, calls, updates)


def majority_vote_decoder(learner: Learner, support: Sequence[tuple[int, int]], m: int,
                          probe: int | None, masses: Sequence[Fraction] | None = None,
                          statistic: Callable[[Predictor], int] | None = None) -> int:
    """Majority of the learner's predictions at `probe` over all |support|^m samples.

    With `masses` the vote of each sequence is weighted by its probability
    under the product distribution.  `statistic` replaces the probe by any bit
    computed from the output predictor.  Ties go to 0.
    """
    if not support:
        raise ValueError("empty support")
    weight = {0: Fraction(0), 1: Fraction(0)}
    for indices in product(range(len(support)), repeat=m):
        w = Fraction(1)
        if masses is not None:
            for t in indices:
                w *= masses[t]
        h = learner([support[t] for t in indices])
        weight[statistic(h) if statistic is not None else h(probe)] += w
    return 1 if weight[1] > weight[0] else 0


# ---------------------------------------------------------------- a small battery of learners

def constant_predictor(bit: int) -> Predictor:
    return Predictor(lambda x: bit, label=f"constant {bit}")


def constant_learner(bit: int) -> Learner:
    h = constant_predictor(bit)
    return lambda S: h


def erm_learner(bundle) -> Learner:
    def learn(S: Sample) -> Predictor:
        if not S:
            return bundle.member(bundle.family.decode_params(0))
        return erm_pac_learner(bundle, S)
    return learn


def rerm_learner(bundle) -> Learner:
    """Proper learner returning the agnostic robust ERM of the bundle.

    Empirical risk ignores sample order, so outputs are memoized per multiset.
    """
    seen: dict[tuple, Predictor] = {}

    def learn(S: Sample) -> Predictor:
        if not S:
            return bundle.member(bundle.family.decode_params(0))
        key = tuple(sorted(S))
        if key not in seen:
            seen[key] = agnostic_rerm(bundle, S)
        return seen[key]
    return learn


def weak_rerm_learner(bundle, budget: int):
    """Proper learner backed by the budgeted weak oracle; returns the raw outcome."""
    def learn(S: Sample):
        return weak_realizable_rerm(bundle, S, budget)
    return learn


def seeded_arbitrary_learner(seed: int) -> Learner:
    """Outputs a pseudo-random predictor determined by the seed and the sample."""
    def learn(S: Sample) -> Predictor:
        tag = f"{seed}:{list(S)}"

        def bit(x: int) -> int:
            return random.Random(f"{tag}:{x}").getrandbits(1)
        return Predictor(bit, label=f"arbitrary seed {seed}")
    return learn

