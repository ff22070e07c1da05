"""Samples, distributions, predictors, families, perturbation types and losses.

All masses and risks are exact `Fraction`s.  Points are naturals; constructions
over pairs use the Cantor pairing from the machine module.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Iterator, Protocol, Sequence

from .machine import halting_step, pair, unpair, zoo

__all__ = [
    "Example", "Sample", "FiniteDistribution", "Predictor", "HypothesisFamily",
    "PerturbationType", "Tri", "NoExactEvaluator", "EmptySample", "InfiniteSet",
    "HaltingOracle", "ZooOracle", "BoundedOracle", "UnknownMachine",
    "zero_one_loss", "empirical_risk", "robust_loss_bounded", "robust_loss_exact",
    "robust_risk", "empirical_robust_risk", "margin_membership", "risk",
    "pair", "unpair",
]

Example = tuple[int, int]
Sample = Sequence[Example]


class NoExactEvaluator(Exception):
    """The (family, perturbation) pair has no exact evaluator for this input."""


class EmptySample(ValueError):
    pass


class InfiniteSet(NoExactEvaluator):
    """A perturbation set is infinite and no window was given to cut it."""


class UnknownMachine(KeyError):
    """A halting oracle was asked about a machine it has no ground truth for."""


class Tri(enum.Enum):
    ZERO = 0
    ONE = 1
    UNKNOWN = "UnknownWithinBudget"


# ---------------------------------------------------------------- halting oracles

class HaltingOracle(Protocol):
    def halting_step(self, i: int, x: int) -> int | None:
        """Step at which machine i halts on input x, or None if it never halts."""


class ZooOracle:
    """Ground truth by construction for the zoo machines (which ignore their input)."""

    name = "zoo"

    def halting_step(self, i: int, x: int) -> int | None:
        entries = zoo()
        if not 0 <= i < len(entries):
            raise UnknownMachine(i)
        behavior = entries[i].behavior
        return getattr(behavior, "step", None)


@dataclass(frozen=True)
class BoundedOracle:
    """Approximation: treats every machine that outlives `budget` steps as looping."""

    budget: int
    name: str = "bounded"

    def halting_step(self, i: int, x: int) -> int | None:
        return halting_step(i, x, self.budget)


# ---------------------------------------------------------------- distributions

@dataclass(frozen=True)
class FiniteDistribution:
    support: tuple[tuple[int, int, Fraction], ...]

    def __post_init__(self) -> None:
        seen = set()
        total = Fraction(0)
        for x, y, mass in self.support:
            if (x, y) in seen:
                raise ValueError(f"duplicate support entry {(x, y)}")
            if not isinstance(mass, Fraction) or mass <= 0:
                raise ValueError("masses must be positive Fractions")
            if y not in (0, 1):
                raise ValueError("labels are bits")
            seen.add((x, y))
            total += mass
        if total != 1:
            raise ValueError(f"masses sum to {total}, not 1")

    @classmethod
    def from_masses(cls, masses: Iterable[tuple[int, int, Fraction | int]]) -> FiniteDistribution:
        return cls(tuple((x, y, Fraction(m)) for x, y, m in masses))

    @classmethod
    def uniform(cls, examples: Sample) -> FiniteDistribution:
        """Uniform over the sample, merging repeated examples."""
        if not examples:
            raise EmptySample("uniform distribution over an empty sample")
        counts = Counter(examples)
        n = len(examples)
        return cls(tuple((x, y, Fraction(c, n)) for (x, y), c in counts.items()))

    def examples(self) -> list[Example]:
        return [(x, y) for x, y, _ in self.support]

    def masses(self) -> list[Fraction]:
        return [m for _, _, m in self.support]


# ---------------------------------------------------------------- predictors and families

class Predictor:
    """A total map from points to bits, with provenance when it is a family member."""

    __slots__ = ("_fn", "family", "params", "label")

    def __init__(self, fn: Callable[[int], int], family: str | None = None,
                 params: Hashable | None = None, label: str | None = None):
        self._fn = fn
        self.family = family
        self.params = params
        self.label = label

    def __call__(self, x: int) -> int:
        return self._fn(x)

    @property
    def is_member(self) -> bool:
        return self.family is not None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Predictor):
            return NotImplemented
        if self.family is None or other.family is None:
            return self is other
        return (self.family, self.params) == (other.family, other.params)

    def __hash__(self) -> int:
        return hash((self.family, self.params)) if self.family is not None else id(self)

    def describe(self) -> str:
        if self.family is not None:
            return f"{self.family}{self.params!r}"
        return self.label or "opaque"

    def __repr__(self) -> str:
        return f"Predictor({self.describe()})"


@dataclass(frozen=True)
class HypothesisFamily:
    """An indexed family with a parameter numbering.

    `decode_params` maps every natural to a parameter (the enumeration used by
    oracles that iterate through the class); `encode_params` inverts it and is
    also the tie-break key.
    """

    name: str
    representation: str
    evaluate: Callable[[Hashable, int], int]
    encode_params: Callable[[Hashable], int]
    decode_params: Callable[[int], Hashable]

    def member(self, params: Hashable) -> Predictor:
        evaluate = self.evaluate
        return Predictor(lambda x: evaluate(params, x), self.name, params)

    def enumerate(self, start: int = 0) -> Iterator[Predictor]:
        code = start
        while True:
            yield self.member(self.decode_params(code))
            code += 1

    def key(self, h: Predictor) -> int:
        return self.encode_params(h.params)


@dataclass(frozen=True)
class PerturbationType:
    """A perturbation map U given by a decider and/or an enumerator.

    The enumerator yields points of U(x) interleaved with `None` ticks (one per
    unit of search work) and stops only when U(x) has been exhausted.
    `closed_form(x, limit)` returns U(x) ∩ [0, limit) exactly (all of U(x) when
    limit is None, raising InfiniteSet if that is infinite).  `exact_loss` and
    `exact_margin` are per-construction evaluators that raise NoExactEvaluator
    for predictors they cannot handle.
    """

    name: str
    contains: Callable[[int, int], int] | None = None
    enumerate: Callable[[int], Iterator[int | None]] | None = None
    closed_form: Callable[[int, int | None], frozenset[int]] | None = None
    exact_loss: Callable[[Predictor, int, int], int] | None = None
    exact_margin: Callable[[Predictor, int], int] | None = None
    notes: tuple[str, ...] = field(default=())

    @property
    def representation(self) -> str:
        return "DR" if self.contains is not None else "RER"


# ---------------------------------------------------------------- losses

def zero_one_loss(h: Predictor, x: int, y: int) -> int:
    return 1 if h(x) != y else 0


def empirical_risk(h: Predictor, S: Sample) -> Fraction:
    if not S:
        raise EmptySample("empirical risk of an empty sample")
    return Fraction(sum(zero_one_loss(h, x, y) for x, y in S), len(S))


def risk(h: Predictor, D: FiniteDistribution) -> Fraction:
    return sum((m for x, y, m in D.support if h(x) != y), Fraction(0))


def robust_loss_bounded(h: Predictor, x: int, y: int, U: PerturbationType, budget: int) -> Tri:
    """Search U(x) for a misclassified perturbation for at most `budget` steps.

    ONE when a witness is found, ZERO only when U(x) is exhausted, else UNKNOWN.
    """
    if h(x) != y:
        return Tri.ONE
    if U.enumerate is not None:
        stream = U.enumerate(x)
        for _ in range(budget):
            try:
                z = next(stream)
            except StopIteration:
                return Tri.ZERO
            if z is not None and h(z) != y:
                return Tri.ONE
        return Tri.UNKNOWN
    if U.contains is None:
        raise ValueError(f"{U.name} has neither an enumerator nor a decider")
    # a decider alone can find witnesses among the first `budget` naturals but never exhaust U(x)
    for z in range(budget):
        if U.contains(x, z) and h(z) != y:
            return Tri.ONE
    return Tri.UNKNOWN


def robust_loss_exact(h: Predictor, x: int, y: int, U: PerturbationType) -> int:
    if U.exact_loss is None:
        raise NoExactEvaluator(f"{U.name} registers no exact robust loss")
    return U.exact_loss(h, x, y)


def _robust_losses(h: Predictor, examples: Iterable[Example], U: PerturbationType,
                   budget: int | None) -> list[int] | None:
    losses = []
    for x, y in examples:
        if budget is None:
            losses.append(robust_loss_exact(h, x, y, U))
            continue
        answer = robust_loss_bounded(h, x, y, U, budget)
        if answer is Tri.UNKNOWN:
            return None
        losses.append(answer.value)
    return losses


def robust_risk(h: Predictor, D: FiniteDistribution, U: PerturbationType,
                budget: int | None = None) -> Fraction | Tri:
    """Exact robust risk (budget None) or the bounded version, which may be UNKNOWN."""
    losses = _robust_losses(h, D.examples(), U, budget)
    if losses is None:
        return Tri.UNKNOWN
    return sum((m for loss, m in zip(losses, D.masses()) if loss), Fraction(0))


def empirical_robust_risk(h: Predictor, S: Sample, U: PerturbationType,
                          budget: int | None = None) -> Fraction | Tri:
    if not S:
        raise EmptySample("empirical robust risk of an empty sample")
    losses = _robust_losses(h, S, U, budget)
    if losses is None:
        return Tri.UNKNOWN
    return Fraction(sum(losses), len(S))


def margin_membership(h: Predictor, x: int, U: PerturbationType,
                      budget: int | None = None) -> int | Tri:
    """Whether some z in U(x) has h(z) != h(x): exact (budget None) or bounded."""
    if budget is None:
        if U.exact_margin is None:
            raise NoExactEvaluator(f"{U.name} registers no margin closed form")
        return U.exact_margin(h, x)
    return robust_loss_bounded(h, x, h(x), U, budget)
