"""The five constructed (hypothesis family, perturbation type) pairs.

Every construction exposes the same surface:

* truth-free structure: the family, the membership decider (when the
  perturbation type is decidably representable), an enumerator of U(x) and
  the distribution family;
* ground-truth structure: `perturbation_set`, `member_counterexample` and the
  margin closed forms.  These mention "machine i halts" and therefore need an
  injected halting oracle.  Without one they raise NoExactEvaluator, except
  where the construction's loss is computable outright (the threshold rows of
  `thm4` with b = inf, and everything in `thm5`).

Points of the paired domains (`thm4`, `thm5`) are Cantor codes pair(i, j).
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import count
from typing import Hashable, Iterable, Iterator

from .core import (
    FiniteDistribution, HaltingOracle, HypothesisFamily, InfiniteSet, NoExactEvaluator,
    PerturbationType, Predictor, Sample,
)
from .evidence import proves
from .machine import halting_step, pair, unpair

INF = math.inf

__all__ = [
    "INF", "Construction", "WindowedConstruction", "Thm2Construction", "Thm3Construction",
    "Thm4Construction", "Thm5Construction", "Ex1Construction",
    "thm2_construction", "thm3_construction", "thm4_construction", "thm5_construction",
    "ex1_construction", "construction", "CONSTRUCTIONS", "triangle", "untriangle",
]


def _enc_ext(a: float | int) -> int:
    """inf -> 0, n -> n + 1."""
    return 0 if a == INF else a + 1


def _dec_ext(n: int) -> float | int:
    return INF if n == 0 else n - 1


def triangle(a: int, b: int) -> int:
    """Numbering of pairs a <= b, increasing in b and then in a."""
    if a > b:
        raise ValueError("triangle numbering needs a <= b")
    return b * (b + 1) // 2 + a


def untriangle(n: int) -> tuple[int, int]:
    b = (math.isqrt(8 * n + 1) - 1) // 2
    return n - b * (b + 1) // 2, b


def _smallest_outside(used: Iterable[int]) -> int:
    used = set(used)
    f = 0
    while f in used:
        f += 1
    return f


class Construction:
    """Shared machinery; subclasses fill in the construction-specific parts."""

    name: str = ""
    perturbation_representation: str = "DR"
    declared_properties: dict = {}

    def __init__(self, oracle: HaltingOracle | None = None):
        self.oracle = oracle
        self.family = self._family()
        self.perturbation = PerturbationType(
            name=self.name,
            contains=self.contains if self.perturbation_representation == "DR" else None,
            enumerate=self.enumerate_perturbations,
            closed_form=self.perturbation_set,
            exact_loss=self.exact_loss,
            exact_margin=self.exact_margin,
        )

    # ------------------------------------------------------------ to override

    def _family(self) -> HypothesisFamily:
        raise NotImplementedError

    def contains(self, x: int, z: int) -> int:
        raise NotImplementedError

    def enumerate_perturbations(self, x: int) -> Iterator[int | None]:
        raise NotImplementedError

    def perturbation_set(self, x: int, limit: int | None = None) -> frozenset[int]:
        raise NotImplementedError

    def member_counterexample(self, params: Hashable, x: int, y: int) -> int | None:
        raise NotImplementedError

    def margin_set(self, params: Hashable, points: Iterable[int]) -> frozenset[int]:
        raise NotImplementedError

    def param_window(self, size: int = 32) -> list:
        raise NotImplementedError

    def robust_candidates(self, S: Sample) -> list:
        raise NoExactEvaluator(f"{self.name} registers no finite robust candidate set")

    def erm_candidates(self, S: Sample) -> list:
        raise NotImplementedError

    # ------------------------------------------------------------ shared

    def member(self, params: Hashable) -> Predictor:
        return self.family.member(params)

    def code(self, params: Hashable) -> int:
        return self.family.encode_params(params)

    def domain_window(self, size: int = 64) -> list[int]:
        return list(range(size))

    def members(self, size: int = 32) -> list[Predictor]:
        return [self.member(p) for p in self.param_window(size)]

    def _step(self, i: int, x: int) -> int | None:
        if self.oracle is None:
            raise NoExactEvaluator(f"{self.name}: this evaluation needs a halting oracle")
        return self.oracle.halting_step(i, x)

    def is_member(self, h: Predictor) -> bool:
        return h.family == self.family.name

    def counterexample(self, h: Predictor, x: int, y: int) -> int | None:
        """x itself if h errs there, else the smallest z in U(x) with h(z) != y, else None."""
        if h(x) != y:
            return x
        if self.is_member(h):
            return self.member_counterexample(h.params, x, y)
        for z in sorted(self.perturbation_set(x)):
            if h(z) != y:
                return z
        return None

    def exact_loss(self, h: Predictor, x: int, y: int) -> int:
        return 0 if self.counterexample(h, x, y) is None else 1

    def exact_margin(self, h: Predictor, x: int) -> int:
        return self.exact_loss(h, x, h(x))

    def restrict(self, window: Iterable[int]) -> WindowedConstruction:
        return WindowedConstruction(self, window)

    def _finite_or_none(self, x: int) -> frozenset[int] | None:
        try:
            return self.perturbation_set(x)
        except InfiniteSet:
            return None

    def intersects(self, a: int, b: int) -> bool:
        """Whether U(a) and U(b) share a point, decided exactly."""
        A, B = self._finite_or_none(a), self._finite_or_none(b)
        if A is not None and B is not None:
            return bool(A & B)
        if A is None and B is None:
            return self._infinite_intersection(a, b)
        finite, other = (A, b) if A is not None else (B, a)
        return any(self.contains(other, z) for z in finite)

    def _infinite_intersection(self, a: int, b: int) -> bool:
        raise NoExactEvaluator(f"{self.name}: no rule for two infinite perturbation sets")

    def __repr__(self) -> str:
        oracle = getattr(self.oracle, "name", None)
        return f"{type(self).__name__}(oracle={oracle})"


class WindowedConstruction:
    """A construction with every perturbation set cut to a finite window.

    U_W(x) = U(x) ∩ W for x in W.  All losses are then exactly computable for
    arbitrary (improper) predictors, relative to the parent's halting oracle.
    """

    def __init__(self, parent: Construction, window: Iterable[int]):
        self.parent = parent
        self.window = tuple(sorted(set(window)))
        self._members = frozenset(self.window)
        self._limit = self.window[-1] + 1 if self.window else 0
        self.name = f"{parent.name}|W{len(self.window)}"
        self.family = parent.family
        self.perturbation = PerturbationType(
            name=self.name,
            contains=lambda x, z: int(z in self.perturbation_set(x)),
            enumerate=lambda x: iter(sorted(self.perturbation_set(x))),
            closed_form=lambda x, limit=None: self.perturbation_set(x),
            exact_loss=self.exact_loss,
            exact_margin=self.exact_margin,
        )

    def perturbation_set(self, x: int, limit: int | None = None) -> frozenset[int]:
        if x not in self._members:
            raise ValueError(f"point {x} lies outside the window")
        return frozenset(z for z in self.parent.perturbation_set(x, self._limit) if z in self._members)

    def counterexample(self, h: Predictor, x: int, y: int) -> int | None:
        if h(x) != y:
            return x
        for z in sorted(self.perturbation_set(x)):
            if h(z) != y:
                return z
        return None

    def exact_loss(self, h: Predictor, x: int, y: int) -> int:
        return 0 if self.counterexample(h, x, y) is None else 1

    def exact_margin(self, h: Predictor, x: int) -> int:
        return self.exact_loss(h, x, h(x))

    def intersects(self, a: int, b: int) -> bool:
        return bool(self.perturbation_set(a) & self.perturbation_set(b))

    def member(self, params: Hashable) -> Predictor:
        return self.parent.member(params)

    def code(self, params: Hashable) -> int:
        return self.parent.code(params)

    def param_window(self, size: int = 32) -> list:
        return self.parent.param_window(size)

    def members(self, size: int = 32) -> list[Predictor]:
        return self.parent.members(size)

    def domain_window(self, size: int | None = None) -> list[int]:
        return list(self.window)


# ---------------------------------------------------------------- thresholds on evens

class Thm2Construction(Construction):
    """Thresholds on even numbers, constant 1 on odds.

    U(6i) adds every odd number, U(6i+2) is a singleton and U(6i+4) adds 6i+2
    and the odd codes 2j+1 of proofs j of formula i.  U is decidable but
    whether U(6i) and U(6i+4) meet is the halting problem.
    """

    name = "thm2"
    declared_properties = {"vc": 1, "margin_vc": 1, "perturbation_representation": "DR"}

    def _family(self) -> HypothesisFamily:
        def evaluate(a, x):
            return 1 if x % 2 or x // 2 <= a else 0
        return HypothesisFamily("thm2", "DR", evaluate, _enc_ext, _dec_ext)

    def contains(self, x: int, z: int) -> int:
        if z == x:
            return 1
        if x % 2 or x % 6 == 2:
            return 0
        if x % 6 == 0:
            return z % 2
        i = x // 6
        if z == x - 2:
            return 1
        return proves(i, (z - 1) // 2) if z % 2 else 0

    def enumerate_perturbations(self, x: int) -> Iterator[int | None]:
        if x % 2 or x % 6 == 2:
            yield x
            return
        if x % 6 == 0:
            yield x
            for j in count():
                yield 2 * j + 1
        i = x // 6
        yield x - 2
        yield x
        for j in count():
            yield 2 * j + 1 if proves(i, j) else None

    def _proof_point(self, i: int) -> int | None:
        s = self._step(i, 0)
        return None if s is None else 2 * pair(i, s) + 1

    def perturbation_set(self, x: int, limit: int | None = None) -> frozenset[int]:
        if x % 2 or x % 6 == 2:
            points = {x}
        elif x % 6 == 0:
            if limit is None:
                raise InfiniteSet(f"U({x}) contains every odd number")
            points = {x} | set(range(1, limit, 2))
        else:
            points = {x - 2, x}
            proof = self._proof_point(x // 6)
            if proof is not None:
                points.add(proof)
        return frozenset(z for z in points if limit is None or z < limit)

    def member_counterexample(self, a, x: int, y: int) -> int | None:
        h = self.family.evaluate
        if h(a, x) != y:
            return x
        if x % 2 or x % 6 == 2:
            return None
        if x % 6 == 0:
            # every odd point is labelled 1 by every member
            return 1 if y == 0 else None
        found = []
        if h(a, x - 2) != y:
            found.append(x - 2)
        if y == 0:
            proof = self._proof_point(x // 6)
            if proof is not None:
                found.append(proof)
        return min(found, default=None)

    def margin_set(self, a, points: Iterable[int]) -> frozenset[int]:
        out = set()
        for k in points:
            if k % 6 == 0 and k > 2 * a:
                out.add(k)
            elif k % 6 == 4:
                tautology = self._step(k // 6, 0) is not None
                if (tautology and k > 2 * a) or (not tautology and k - 2 == 2 * a):
                    out.add(k)
        return frozenset(out)

    def _infinite_intersection(self, a: int, b: int) -> bool:
        return True  # both are of the form 6i and contain every odd number

    def distribution(self, i: int) -> FiniteDistribution:
        return FiniteDistribution.from_masses([
            (6 * i, 1, Fraction(1, 2)), (6 * i + 2, 1, Fraction(1, 6)), (6 * i + 4, 0, Fraction(1, 3)),
        ])

    def param_window(self, size: int = 32) -> list:
        return [INF] + list(range(size - 1))

    def _threshold_range(self, S: Sample) -> list:
        # above every relevant threshold all members agree with h_inf on S
        top = max((x // 2 for x, _ in S if x % 2 == 0), default=-1) + 1
        return [INF] + list(range(top + 1))

    def robust_candidates(self, S: Sample) -> list:
        return self._threshold_range(S)

    def erm_candidates(self, S: Sample) -> list:
        return self._threshold_range(S)


# ---------------------------------------------------------------- two even points

class Thm3Construction(Construction):
    """Indicators of at most two even points, constant c on the odds.

    U(2i) adds the odd codes 2j+1 for every j at or beyond the step at which
    machine i halts on input i; odd points are unperturbed.
    """

    name = "thm3"
    declared_properties = {"vc": 3, "margin_vc": 5, "perturbation_representation": "DR"}

    def _family(self) -> HypothesisFamily:
        def evaluate(params, x):
            a, b, c = params
            return c if x % 2 else int(x // 2 in (a, b))

        def encode(params):
            a, b, c = params
            return 2 * triangle(a, b) + c

        def decode(n):
            a, b = untriangle(n // 2)
            return (a, b, n % 2)

        return HypothesisFamily("thm3", "DR", evaluate, encode, decode)

    def contains(self, x1: int, x2: int) -> int:
        # the decision procedure for U: parity cases, then a bounded self-run
        if x1 % 2:
            return int(x2 == x1)
        if x2 % 2:
            i = x1 // 2
            return int(halting_step(i, i, (x2 - 1) // 2) is not None)
        return int(x2 == x1)

    def enumerate_perturbations(self, x: int) -> Iterator[int | None]:
        yield x
        if x % 2:
            return
        i = x // 2
        for j in count():
            yield 2 * j + 1 if halting_step(i, i, j) is not None else None

    def perturbation_set(self, x: int, limit: int | None = None) -> frozenset[int]:
        if x % 2:
            return frozenset({x})
        i = x // 2
        s = self._step(i, i)
        if s is None:
            return frozenset({x})
        if limit is None:
            raise InfiniteSet(f"U({x}) contains every odd number from {2 * s + 1}")
        return frozenset({x} | set(range(2 * s + 1, limit, 2))) & frozenset(range(limit))

    def member_counterexample(self, params, x: int, y: int) -> int | None:
        a, b, c = params
        if self.family.evaluate(params, x) != y:
            return x
        if x % 2 or c == y:
            return None
        i = x // 2
        s = self._step(i, i)
        return None if s is None else 2 * s + 1

    def margin_set(self, params, points: Iterable[int]) -> frozenset[int]:
        a, b, c = params
        out = set()
        for k in points:
            if k % 2:
                continue
            i = k // 2
            halts = self._step(i, i) is not None
            if halts and ((c == 0 and i in (a, b)) or (c == 1 and i not in (a, b))):
                out.add(k)
        return frozenset(out)

    def _infinite_intersection(self, a: int, b: int) -> bool:
        return True  # both contain every large enough odd number

    def distribution(self, i: int, k: int) -> FiniteDistribution:
        if i == k:
            raise ValueError("the two machines must differ")
        return FiniteDistribution.from_masses([(2 * i, 1, Fraction(1, 2)), (2 * k, 0, Fraction(1, 2))])

    def param_window(self, size: int = 32) -> list:
        return [(a, b, c) for b in range(size) for a in range(b + 1) for c in (0, 1)]

    def _pair_candidates(self, S: Sample) -> list:
        relevant = sorted({x // 2 for x, _ in S if x % 2 == 0})
        pool = relevant + [_smallest_outside(relevant)]
        pool.sort()
        return [(a, b, c) for ai, a in enumerate(pool) for b in pool[ai:] for c in (0, 1)]

    def robust_candidates(self, S: Sample) -> list:
        return self._pair_candidates(S)

    def erm_candidates(self, S: Sample) -> list:
        return self._pair_candidates(S)


# ---------------------------------------------------------------- rows and proofs

class Thm4Construction(Construction):
    """Lexicographic thresholds h_{a,b} over rows; proofs perturb formula points.

    U((i,0)) adds the points (i,j) for proofs j of formula i, and U((i,j)) for
    j >= 1 is {(i,0), (i,j)}.  With b = inf every row is constant, so those
    members have a computable loss; the rest need a halting oracle.
    """

    name = "thm4"
    declared_properties = {"vc": 1, "margin_vc": 1, "perturbation_representation": "DR"}

    def _family(self) -> HypothesisFamily:
        def evaluate(params, x):
            a, b = params
            i, j = unpair(x)
            return int(i < a or (i == a and j <= b))

        def encode(params):
            a, b = params
            return pair(_enc_ext(a), _enc_ext(b))

        def decode(n):
            u, v = unpair(n)
            return (_dec_ext(u), _dec_ext(v))

        return HypothesisFamily("thm4", "DR", evaluate, encode, decode)

    @staticmethod
    def in_dominating_subclass(params) -> bool:
        return params[1] == INF

    def contains(self, x: int, z: int) -> int:
        if z == x:
            return 1
        i, j = unpair(x)
        i2, j2 = unpair(z)
        if i2 != i:
            return 0
        if j == 0:
            return proves(i, j2) if j2 >= 1 else 0
        return int(j2 == 0)

    def enumerate_perturbations(self, x: int) -> Iterator[int | None]:
        i, j = unpair(x)
        if j >= 1:
            yield pair(i, 0)
            yield x
            return
        yield x
        for j2 in count(1):
            yield pair(i, j2) if proves(i, j2) else None

    def _proof_point(self, i: int) -> int | None:
        s = self._step(i, 0)
        return None if s is None else pair(i, pair(i, s))

    def perturbation_set(self, x: int, limit: int | None = None) -> frozenset[int]:
        i, j = unpair(x)
        if j >= 1:
            points = {x, pair(i, 0)}
        else:
            points = {x}
            proof = self._proof_point(i)
            if proof is not None:
                points.add(proof)
        return frozenset(z for z in points if limit is None or z < limit)

    def member_counterexample(self, params, x: int, y: int) -> int | None:
        a, b = params
        h = self.family.evaluate
        if h(params, x) != y:
            return x
        i, j = unpair(x)
        if i != a or b == INF:
            # row i is constant under h, and U never leaves the row
            return None
        if self.oracle is None:
            raise NoExactEvaluator("thm4: only members with b = inf have a computable robust loss")
        if j >= 1:
            z = pair(i, 0)
            return z if h(params, z) != y else None
        proof = self._proof_point(i)
        return proof if proof is not None and h(params, proof) != y else None

    def margin_set(self, params, points: Iterable[int]) -> frozenset[int]:
        a, b = params
        if a == INF or b == INF:
            return frozenset()
        out = set()
        for x in points:
            i, j = unpair(x)
            if i != a:
                continue
            if j >= 1 and j > b:
                out.add(x)
            elif j == 0:
                s = self._step(a, 0)
                if s is not None and pair(a, s) > b:
                    out.add(x)
        return frozenset(out)

    def param_window(self, size: int = 32) -> list:
        values = list(range(size)) + [INF]
        return [(a, b) for a in values for b in values]

    def robust_candidates(self, S: Sample) -> list:
        # the dominating subclass {h_{a,inf}} contains a minimizer on every sample
        top = max((unpair(x)[0] for x, _ in S), default=-1) + 1
        return [(INF, INF)] + [(a, INF) for a in range(top + 1)]

    def erm_candidates(self, S: Sample) -> list:
        rows = [unpair(x) for x, _ in S]
        top_a = max((i for i, _ in rows), default=-1) + 1
        top_b = max((j for _, j in rows), default=-1) + 1
        values_a = [INF] + list(range(top_a + 1))
        values_b = [INF] + list(range(top_b + 1))
        return [(a, b) for a in values_a for b in values_b]


# ---------------------------------------------------------------- initial segments per row

class Thm5Construction(Construction):
    """Initial segments h_{i,j} of single rows; perturbations follow running time.

    U((i,0)) is (i,0) plus every (i,k) at which machine i (input 0) has not yet
    halted after k steps; U((i,k)) adds (i,0) exactly when it has not halted
    after k steps.  Everything here is decidable by bounded runs.
    """

    name = "thm5"
    declared_properties = {"vc": 1, "margin_vc": 1, "perturbation_representation": "DR"}

    def _family(self) -> HypothesisFamily:
        def evaluate(params, x):
            i, j = params
            i2, k = unpair(x)
            return int(i2 == i and k <= j)
        return HypothesisFamily("thm5", "DR", evaluate, lambda p: pair(*p), unpair)

    @staticmethod
    def running_after(i: int, k: int) -> bool:
        """Machine i on input 0 has not halted within k steps."""
        return halting_step(i, 0, k) is None

    def contains(self, x: int, z: int) -> int:
        i, k = unpair(x)
        i2, k2 = unpair(z)
        if i2 != i:
            return 0
        if k == 0:
            return int(k2 == 0 or self.running_after(i, k2))
        return int(k2 == k or (k2 == 0 and self.running_after(i, k)))

    def enumerate_perturbations(self, x: int) -> Iterator[int | None]:
        i, k = unpair(x)
        if k >= 1:
            yield from sorted({x, pair(i, 0)} if self.running_after(i, k) else {x})
            return
        yield x
        for k2 in count(1):
            if not self.running_after(i, k2):
                return
            yield pair(i, k2)

    def perturbation_set(self, x: int, limit: int | None = None) -> frozenset[int]:
        i, k = unpair(x)
        if k >= 1:
            points = {x, pair(i, 0)} if self.running_after(i, k) else {x}
            return frozenset(z for z in points if limit is None or z < limit)
        s = self._step(i, 0)
        if s is None and limit is None:
            raise InfiniteSet(f"machine {i} never halts, so U({x}) is infinite")
        points = set()
        for k2 in count():
            z = pair(i, k2)
            if (s is not None and k2 >= s) or (limit is not None and z >= limit):
                break
            points.add(z)
        return frozenset(points)

    def exact_loss(self, h: Predictor, x: int, y: int) -> int:
        if not self.is_member(h):
            return super().exact_loss(h, x, y)
        return self.case_loss(h.params, x, y)

    def case_loss(self, params, x: int, y: int) -> int:
        """Robust loss of h_{i,j} by the five-way case split on (x, y)."""
        i, j = params
        i2, k = unpair(x)
        if i2 != i:
            return y
        if k == 0:
            if y == 0:
                return 1
            return int(self.running_after(i, j + 1))
        if y == 1:
            return 0 if k <= j else 1
        if k <= j:
            return 1
        return int(self.running_after(i, k))

    def member_counterexample(self, params, x: int, y: int) -> int | None:
        i, j = params
        if self.family.evaluate(params, x) != y:
            return x
        i2, k = unpair(x)
        if i2 != i:
            return None
        if k == 0:
            # h = 1 at (i,0); the first zero of the row is (i, j+1)
            return pair(i, j + 1) if self.running_after(i, j + 1) else None
        # here h(x) = y; the only other candidate is (i,0), labelled 1
        if y == 0 and self.running_after(i, k):
            return pair(i, 0)
        return None

    def margin_set(self, params, points: Iterable[int]) -> frozenset[int]:
        i, j = params
        if not self.running_after(i, j + 1):
            return frozenset()
        out = set()
        for x in points:
            i2, k = unpair(x)
            if i2 == i and (k == 0 or (k > j and self.running_after(i, k))):
                out.add(x)
        return frozenset(out)

    def _infinite_intersection(self, a: int, b: int) -> bool:
        return a == b  # both are (i,0) points of never-halting rows, and rows never meet

    def distribution(self, i: int) -> FiniteDistribution:
        return FiniteDistribution.from_masses([(pair(i, 0), 1, 1)])

    def param_window(self, size: int = 32) -> list:
        return [(i, j) for i in range(size) for j in range(size)]

    def h_s_candidates(self, S: Sample) -> list:
        """Finite ERM candidates: the positives' own segments plus one empty-row member."""
        positives = sorted({unpair(x) for x, y in S if y == 1})
        rows = {unpair(x)[0] for x, _ in S}
        return positives + [(_smallest_outside(rows), 0)]

    def erm_candidates(self, S: Sample) -> list:
        return self.h_s_candidates(S)


# ---------------------------------------------------------------- the non-DR example

class Ex1Construction(Construction):
    """Indicators of at most two points; 2i and 2i+1 merge when machine i halts.

    The perturbation type is only recursively enumerable: the enumerator
    dovetails the run of machine i on input 0 and never registers a decider.
    """

    name = "ex1"
    perturbation_representation = "RER"
    declared_properties = {"vc": 2, "perturbation_representation": "RER", "decidably_representable": False}

    def _family(self) -> HypothesisFamily:
        def evaluate(params, x):
            a, b = params
            return int(x in (a, b))

        def decode(n):
            return untriangle(n)

        return HypothesisFamily("ex1", "DR", evaluate, lambda p: triangle(*p), decode)

    def contains(self, x: int, z: int) -> int:
        raise NoExactEvaluator("ex1 perturbations have no membership decider")

    def enumerate_perturbations(self, x: int) -> Iterator[int | None]:
        yield x
        i, partner = x // 2, x ^ 1
        for t in count(1):
            if halting_step(i, 0, t) is not None:
                yield partner
                return
            yield None

    def perturbation_set(self, x: int, limit: int | None = None) -> frozenset[int]:
        points = {x}
        if self._step(x // 2, 0) is not None:
            points.add(x ^ 1)
        return frozenset(z for z in points if limit is None or z < limit)

    def member_counterexample(self, params, x: int, y: int) -> int | None:
        if self.family.evaluate(params, x) != y:
            return x
        partner = x ^ 1
        if self.family.evaluate(params, partner) != y and self._step(x // 2, 0) is not None:
            return partner
        return None

    def margin_set(self, params, points: Iterable[int]) -> frozenset[int]:
        a, b = params
        out = set()
        for x in points:
            split = int(x in (a, b)) != int((x ^ 1) in (a, b))
            if split and self._step(x // 2, 0) is not None:
                out.add(x)
        return frozenset(out)

    def distribution(self, i: int) -> FiniteDistribution:
        return FiniteDistribution.from_masses([(2 * i, 1, Fraction(1, 2)), (2 * i + 1, 0, Fraction(1, 2))])

    def param_window(self, size: int = 64) -> list:
        return [(a, b) for b in range(size) for a in range(b + 1)]

    def _pair_candidates(self, S: Sample) -> list:
        pool = {x for x, _ in S} | {x ^ 1 for x, _ in S}
        pool = sorted(pool | {_smallest_outside(pool)})
        return [(a, b) for bi, b in enumerate(pool) for a in pool[: bi + 1]]

    def robust_candidates(self, S: Sample) -> list:
        return self._pair_candidates(S)

    def erm_candidates(self, S: Sample) -> list:
        return self._pair_candidates(S)


def thm2_construction(oracle: HaltingOracle | None = None) -> Thm2Construction:
    return Thm2Construction(oracle)


def thm3_construction(oracle: HaltingOracle | None = None) -> Thm3Construction:
    return Thm3Construction(oracle)


def thm4_construction(oracle: HaltingOracle | None = None) -> Thm4Construction:
    return Thm4Construction(oracle)


def thm5_construction(oracle: HaltingOracle | None = None) -> Thm5Construction:
    return Thm5Construction(oracle)


def ex1_construction(oracle: HaltingOracle | None = None) -> Ex1Construction:
    return Ex1Construction(oracle)


CONSTRUCTIONS = {
    "thm2": thm2_construction,
    "thm3": thm3_construction,
    "thm4": thm4_construction,
    "thm5": thm5_construction,
    "ex1": ex1_construction,
}


def construction(name: str, oracle: HaltingOracle | None = None) -> Construction:
    try:
        return CONSTRUCTIONS[name](oracle)
    except KeyError:
        raise ValueError(f"unknown construction {name!r}; choose from {sorted(CONSTRUCTIONS)}") from None
