"""A decidable "proof" relation whose projection is the halting set.

Index j proves formula i when j = pair(i, s) and machine i, run on input 0,
halts at exactly step s.  Checking a proof is a bounded run, while asking
whether some proof exists is the halting problem.
"""

from __future__ import annotations

import enum
from math import isqrt

from .machine import halting_step, pair, unpair


class Answer(enum.Enum):
    YES = "Yes"
    UNKNOWN_WITHIN_BUDGET = "UnknownWithinBudget"


def proves(i: int, j: int) -> int:
    claimed, s = unpair(j)
    if claimed != i:
        return 0
    return 1 if halting_step(i, 0, s) == s else 0


def proof_index(i: int, budget: int) -> int | None:
    """The unique j with proves(i, j) = 1 if machine i halts within `budget` steps."""
    s = halting_step(i, 0, budget)
    return None if s is None else pair(i, s)


def _largest_second_coordinate(i: int, bound: int) -> int:
    """Largest s with pair(i, s) <= bound, or -1 if there is none."""
    if pair(i, 0) > bound:
        return -1
    # pair(i, s) grows strictly in s; solve roughly with the closed form, then fix up
    w = (isqrt(8 * bound + 1) - 1) // 2
    s = max(w - i, 0)
    while pair(i, s) > bound:
        s -= 1
    while pair(i, s + 1) <= bound:
        s += 1
    return s


def is_tautology_bounded(i: int, search_budget: int) -> Answer:
    """Yes iff some j <= search_budget has proves(i, j) = 1.

    Proofs of i are exactly pair(i, s) for the halting step s, so instead of
    testing every j we run machine i for the largest admissible s.
    """
    s_max = _largest_second_coordinate(i, search_budget)
    if s_max < 1:
        return Answer.UNKNOWN_WITHIN_BUDGET
    return Answer.YES if halting_step(i, 0, s_max) is not None else Answer.UNKNOWN_WITHIN_BUDGET
