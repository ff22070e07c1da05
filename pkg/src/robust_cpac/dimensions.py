"""Brute-force dimensions over finite windows, witness functions and the
constructive robust no-free-lunch adversary.

Shattering is tested on member bitsets: for each point t, cols[t] is the set
of members (as bits of a Python int) labelling t with 1.  A set is shattered
when every branch of the labelling tree keeps a nonempty set of members.
Larger candidate sets are generated level by level from shattered sets only,
since every subset of a shattered set is shattered.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Sequence

from .core import FiniteDistribution, NoExactEvaluator, Predictor, robust_risk

__all__ = [
    "PairList", "Labeling", "ShatterableWith", "NotShatterable", "ShatterExceeded",
    "WitnessFunction", "NflCertificate", "ShatteredSetExists", "NoQualifyingLabeling",
    "NotShatterableInput", "TrivialBundle",
    "shattered_sets", "vc_dimension_bruteforce", "margin_vc_bruteforce", "shatterable_check",
    "robust_shattering_bruteforce", "vc_witness_bruteforce", "robust_witness_from_vc_witness",
    "robustly_realizable", "nfl_adversary", "witness_from_learner",
]

PairList = Sequence[tuple[int, int]]
Labeling = tuple[int, ...]

NFL_GATE = Fraction(1, 8)


class ShatteredSetExists(Exception):
    pass


class NoQualifyingLabeling(Exception):
    pass


class NotShatterableInput(Exception):
    """A pair list outside a witness's precondition (no shatterable set was certified)."""


@dataclass(frozen=True)
class ShatterableWith:
    points: tuple[int, ...]


@dataclass(frozen=True)
class NotShatterable:
    reason: str


@dataclass(frozen=True)
class ShatterExceeded:
    reason: str


# ---------------------------------------------------------------- shattering on bitsets

def _labelling_tree_full(cols: Sequence[tuple[int, int]], everyone: int) -> bool:
    """cols[t] = (members realizing label 0 at t, members realizing label 1 at t)."""
    parts = [everyone]
    for zero, one in cols:
        nxt = []
        for p in parts:
            a, b = p & zero, p & one
            if not a or not b:
                return False
            nxt.append(a)
            nxt.append(b)
        parts = nxt
    return True


def _apriori(n: int, columns: Sequence[tuple[int, int]], everyone: int, max_size: int | None,
             compatible: Callable[[int, int], bool] | None = None) -> list[list[tuple[int, ...]]]:
    """All shattered index sets, grouped by size (level 0 is the empty set)."""
    levels: list[list[tuple[int, ...]]] = [[()]]
    if not everyone:
        return levels
    current = [(t,) for t in range(n) if _labelling_tree_full([columns[t]], everyone)]
    while current and (max_size is None or len(current[0]) <= max_size):
        levels.append(current)
        if max_size is not None and len(current[0]) == max_size:
            break
        known = set(current)
        by_prefix: dict[tuple[int, ...], list[int]] = {}
        for T in current:
            by_prefix.setdefault(T[:-1], []).append(T[-1])
        nxt = []
        for prefix, lasts in by_prefix.items():
            for a, b in combinations(lasts, 2):
                if compatible is not None and not compatible(a, b):
                    continue
                T = prefix + (a, b)
                if any(T[:r] + T[r + 1:] not in known for r in range(len(T) - 2)):
                    continue
                if _labelling_tree_full([columns[t] for t in T], everyone):
                    nxt.append(T)
        current = nxt
    return levels


def _point_columns(members: Sequence[Predictor], window: Sequence[int],
                   label: Callable[[Predictor, int], int] | None = None) -> tuple[list[tuple[int, int]], int]:
    # distinct restrictions only; duplicates never change shattering
    label = label or (lambda h, x: h(x))
    rows = {tuple(label(h, x) for x in window) for h in members}
    rows = sorted(rows)
    everyone = (1 << len(rows)) - 1
    cols = []
    for t in range(len(window)):
        one = sum(1 << r for r, row in enumerate(rows) if row[t])
        cols.append((everyone & ~one, one))
    return cols, everyone


def shattered_sets(members: Sequence[Predictor], window: Sequence[int],
                   max_size: int | None = None, label=None) -> list[list[tuple[int, ...]]]:
    window = list(window)
    cols, everyone = _point_columns(members, window, label)
    levels = _apriori(len(window), cols, everyone if members else 0, max_size)
    return [[tuple(window[t] for t in T) for T in level] for level in levels]


def vc_dimension_bruteforce(members: Sequence[Predictor], window: Sequence[int]) -> int:
    """Size of the largest subset of the window shattered by the members."""
    return len(shattered_sets(members, window)) - 1


def margin_vc_bruteforce(bundle, members: Sequence[Predictor], window: Sequence[int]) -> int:
    """VC dimension of the margin sets {x in window : x is in the margin of h}."""
    return len(shattered_sets(members, window, label=bundle.exact_margin)) - 1


# ---------------------------------------------------------------- shatterable pair lists

def _common_point(bundle, z0: int, z1: int, budget: int) -> int | None | ShatterExceeded:
    """Alternate the two enumerators until one yields a point the other already has."""
    if z0 == z1:
        return z0
    streams = [bundle.perturbation.enumerate(z0), bundle.perturbation.enumerate(z1)]
    seen: list[set[int]] = [set(), set()]
    alive = [True, True]
    for step in range(budget):
        side = step % 2
        if not alive[side]:
            side = 1 - side
            if not alive[side]:
                return None
        try:
            z = next(streams[side])
        except StopIteration:
            alive[side] = False
            if not any(alive):
                return None
            contains = bundle.perturbation.contains
            if contains is not None:
                # one set is finite and fully known: decide membership in the other
                other = (z0, z1)[1 - side]
                return next((z for z in sorted(seen[side]) if contains(other, z)), None)
            continue
        if z is None:
            continue
        if z in seen[1 - side]:
            return z
        seen[side].add(z)
    return ShatterExceeded(f"no common point of U({z0}) and U({z1}) within {budget} steps")


def shatterable_check(bundle, Z: PairList, budget: int = 10_000):
    """Find x_i in U(z_i^0) ∩ U(z_i^1) for every pair and certify that U(z_i^1)
    and U(z_j^0) are disjoint whenever i != j."""
    points = []
    for z0, z1 in Z:
        x = _common_point(bundle, z0, z1, budget)
        if isinstance(x, ShatterExceeded):
            return x
        if x is None:
            return NotShatterable(f"U({z0}) and U({z1}) are disjoint")
        points.append(x)
    for i, (_, one) in enumerate(Z):
        for j, (zero, _) in enumerate(Z):
            if i == j:
                continue
            try:
                meet = bundle.intersects(one, zero)
            except NoExactEvaluator as exc:
                return ShatterExceeded(f"disjointness of U({one}) and U({zero}) uncertifiable: {exc}")
            if meet:
                return NotShatterable(f"U({one}) and U({zero}) intersect")
    return ShatterableWith(tuple(points))


def robust_shattering_bruteforce(bundle, members: Sequence[Predictor], window: Sequence[int],
                                 max_k: int) -> int:
    """Largest k <= max_k such that some k pairs over the window form a
    shatterable pair list on which every labelling is robustly realized."""
    window = list(window)
    if not members:
        return 0
    pairs = []
    for a, b in combinations(window, 2):
        if bundle.intersects(a, b):
            pairs.append((a, b))
    pairs = [(z, z) for z in window] + pairs
    everyone = (1 << len(members)) - 1
    cols = []
    for z0, z1 in pairs:
        zero = sum(1 << r for r, h in enumerate(members) if not bundle.exact_loss(h, z0, 0))
        one = sum(1 << r for r, h in enumerate(members) if not bundle.exact_loss(h, z1, 1))
        cols.append((zero, one))

    disjoint_cache: dict[tuple[int, int], bool] = {}

    def disjoint(u: int, v: int) -> bool:
        key = (u, v) if u <= v else (v, u)
        if key not in disjoint_cache:
            disjoint_cache[key] = not bundle.intersects(u, v)
        return disjoint_cache[key]

    def compatible(p: int, q: int) -> bool:
        (a0, a1), (b0, b1) = pairs[p], pairs[q]
        return disjoint(a1, b0) and disjoint(b1, a0)

    levels = _apriori(len(pairs), cols, everyone, max_k, compatible)
    return len(levels) - 1


# ---------------------------------------------------------------- witnesses

@dataclass(frozen=True)
class WitnessFunction:
    """A labelling oracle for inputs of size arity + 1 (points or pairs)."""

    arity: int
    evaluate: Callable[[Sequence], Labeling]
    kind: str

    def __call__(self, items: Sequence) -> Labeling:
        if len(items) != self.arity + 1:
            raise ValueError(f"witness of arity {self.arity} takes {self.arity + 1} inputs")
        return self.evaluate(items)


def vc_witness_bruteforce(members: Sequence[Predictor], window: Sequence[int], k: int) -> WitnessFunction:
    """For any k+1 points, the lexicographically first labelling no member achieves."""
    if vc_dimension_bruteforce(members, window) > k:
        raise ShatteredSetExists(f"some {k + 1}-subset of the window is shattered")
    members = list(members)

    def evaluate(points):
        achieved = {tuple(h(x) for x in points) for h in members}
        for y in product((0, 1), repeat=len(points)):
            if y not in achieved:
                return y
        raise ShatteredSetExists(f"{list(points)} is shattered")
    return WitnessFunction(k, evaluate, "vc")


def robust_witness_from_vc_witness(w: WitnessFunction, bundle, budget: int = 10_000) -> WitnessFunction:
    """Label the pair list with w applied to a shatterable set found inside it."""
    def evaluate(Z):
        outcome = shatterable_check(bundle, Z, budget)
        if not isinstance(outcome, ShatterableWith):
            raise NotShatterableInput(outcome.reason)
        return w(outcome.points)
    return WitnessFunction(w.arity, evaluate, "robust")


def robustly_realizable(bundle, members: Sequence[Predictor], Z: PairList, labeling: Labeling) -> bool:
    """Some member has robust loss 0 on every (z_i^{y_i}, y_i)."""
    return any(all(not bundle.exact_loss(h, pair_[y], y) for pair_, y in zip(Z, labeling))
               for h in members)


# ---------------------------------------------------------------- no-free-lunch adversary

@dataclass(frozen=True)
class NflCertificate:
    labeling: Labeling
    labeling_index: int
    shatterable_set: tuple[int, ...]
    distribution: FiniteDistribution
    witnessed_bound: Fraction
    exact_expectation: Fraction
    tail_probability: Fraction
    expectation_route: str
    sequences: int
    labelings_tried: int = field(default=0)


def nfl_adversary(learner: Callable, m: int, Z: PairList, bundle, budget: int = 10_000) -> NflCertificate:
    """Search labelings in lexicographic order for one on which the learner's
    witnessed robust risk, averaged over all (2m)^m samples, is at least 1/8."""
    n = len(Z)
    if n != 2 * m or m < 1:
        raise ValueError(f"need exactly 2m pairs with m >= 1, got {n} pairs for m = {m}")
    outcome = shatterable_check(bundle, Z, budget)
    if not isinstance(outcome, ShatterableWith):
        raise NotShatterableInput(outcome.reason)
    X = outcome.points
    sequences = list(product(range(n), repeat=m))
    k = len(sequences)
    for j, y in enumerate(product((0, 1), repeat=n)):
        support = [(Z[i][y[i]], y[i]) for i in range(n)]
        outputs = [learner([support[t] for t in seq]) for seq in sequences]
        per_sequence = [Fraction(sum(h(X[i]) != y[i] for i in range(n)), n) for h in outputs]
        witnessed = sum(per_sequence, Fraction(0)) / k
        if witnessed < NFL_GATE:
            continue
        D = FiniteDistribution.uniform(support)
        route = "exact"
        risks = []
        for h, lower in zip(outputs, per_sequence):
            try:
                risks.append(robust_risk(h, D, bundle.perturbation))
            except NoExactEvaluator:
                route = "witnessed"
                risks.append(lower)
        expectation = sum(risks, Fraction(0)) / k
        tail = Fraction(sum(r >= NFL_GATE for r in risks), k)
        return NflCertificate(y, j, X, D, witnessed, expectation, tail, route, k, j + 1)
    raise NoQualifyingLabeling(f"no labelling of {n} pairs reaches the 1/8 gate")


def witness_from_learner(learner: Callable, m: int, bundle, budget: int = 10_000) -> WitnessFunction:
    """A (2m-1)-witness: run the adversary on the 2m pairs and return its labelling."""
    def evaluate(Z):
        return nfl_adversary(learner, m, Z, bundle, budget).labeling
    return WitnessFunction(2 * m - 1, evaluate, "learner")


# ---------------------------------------------------------------- degenerate perturbations

class TrivialBundle:
    """Singleton perturbations U(x) = {x} over an explicit finite member list."""

    name = "trivial"

    def __init__(self, members: Sequence[Predictor]):
        from .core import PerturbationType

        self._members = list(members)
        self.perturbation = PerturbationType(
            name="singleton",
            contains=lambda x, z: int(x == z),
            enumerate=lambda x: iter((x,)),
            closed_form=lambda x, limit=None: frozenset({x}),
            exact_loss=self.exact_loss,
            exact_margin=lambda h, x: 0,
        )

    def members(self, size: int | None = None) -> list[Predictor]:
        return list(self._members)

    def perturbation_set(self, x: int, limit: int | None = None) -> frozenset[int]:
        return frozenset({x})

    def intersects(self, a: int, b: int) -> bool:
        return a == b

    def counterexample(self, h: Predictor, x: int, y: int) -> int | None:
        return x if h(x) != y else None

    def exact_loss(self, h: Predictor, x: int, y: int) -> int:
        return int(h(x) != y)

    def exact_margin(self, h: Predictor, x: int) -> int:
        return 0
