"""Independent reference implementations used as test oracles.

Perturbation sets are rebuilt here from their definitions using only the zoo
annotations; none of the package's perturbation code is used.
"""

from fractions import Fraction
from itertools import product

from robust_cpac.machine import pair, unpair, zoo

INF = float("inf")

STEPS = {e.index: (e.behavior.step if e.halts else None) for e in zoo()}


def halts_by(i, k):
    """Machine i (any input) has halted within k steps."""
    s = STEPS[i]
    return s is not None and s <= k


def reference_u(name, x, limit):
    """U(x) ∩ [0, limit), plus a flag telling whether U(x) is infinite."""
    if name == "thm2":
        if x % 2 or x % 6 == 2:
            return {z for z in [x] if z < limit}, False
        if x % 6 == 0:
            return {z for z in [x, *range(1, limit, 2)] if z < limit}, True
        i = x // 6
        pts = {x, x - 2}
        if STEPS[i] is not None:
            pts.add(2 * pair(i, STEPS[i]) + 1)
        return {z for z in pts if z < limit}, False
    if name == "thm3":
        if x % 2:
            return {z for z in [x] if z < limit}, False
        s = STEPS[x // 2]
        if s is None:
            return {z for z in [x] if z < limit}, False
        return {z for z in [x, *range(2 * s + 1, limit, 2)] if z < limit}, True
    if name == "thm4":
        i, j = unpair(x)
        pts = {x, pair(i, 0)} if j >= 1 else {x}
        if j == 0 and STEPS[i] is not None:
            pts.add(pair(i, pair(i, STEPS[i])))
        return {z for z in pts if z < limit}, False
    if name == "thm5":
        i, k = unpair(x)
        if k >= 1:
            pts = {x} if halts_by(i, k) else {x, pair(i, 0)}
            return {z for z in pts if z < limit}, False
        pts = set()
        k2 = 0
        while pair(i, k2) < limit and (k2 == 0 or not halts_by(i, k2)):
            pts.add(pair(i, k2))
            k2 += 1
        return pts, STEPS[i] is None
    if name == "ex1":
        pts = {x, x ^ 1} if STEPS[x // 2] is not None else {x}
        return {z for z in pts if z < limit}, False
    raise KeyError(name)


# ---------------------------------------------------------------- hypothesis classes

def evaluate(name, params, x):
    if name == "thm2":
        return 1 if x % 2 or x // 2 <= params else 0
    if name == "thm3":
        a, b, c = params
        return c if x % 2 else int(x // 2 in (a, b))
    if name == "thm4":
        a, b = params
        i, j = unpair(x)
        return int(i < a or (i == a and j <= b))
    if name == "thm5":
        i, j = params
        i2, k = unpair(x)
        return int(i2 == i and k <= j)
    if name == "ex1":
        return int(x in params)
    raise KeyError(name)


def reference_loss(name, params, x, y, limit=4096):
    """Robust loss with an infinite U(x) truncated at `limit`; exact whenever
    U(x) is finite or the loss is witnessed below the limit."""
    _, infinite = reference_u(name, x, 1)
    pts, _ = reference_u(name, x, max(limit, x + 1) if infinite else 1 << 40)
    return int(any(evaluate(name, params, z) != y for z in pts))


def window_params(name, size):
    if name == "thm2":
        return [INF] + list(range(size - 1))
    if name == "thm3":
        return [(a, b, c) for b in range(size) for a in range(b + 1) for c in (0, 1)]
    if name == "thm4":
        vals = list(range(size)) + [INF]
        return [(a, b) for a in vals for b in vals]
    if name == "thm5":
        return [(i, j) for i in range(size) for j in range(size)]
    if name == "ex1":
        return [(a, b) for b in range(size) for a in range(b + 1)]
    raise KeyError(name)


def shatters(labelings, k):
    return len(set(labelings)) == 2 ** k


def brute_vc(rows, window, max_k=6):
    """rows: list of dicts point -> bit.  Plain subset enumeration."""
    from itertools import combinations
    best = 0
    for k in range(1, max_k + 1):
        found = False
        for pts in combinations(window, k):
            if shatters([tuple(r[p] for p in pts) for r in rows], k):
                found = True
                break
        if not found:
            break
        best = k
    return best


def expected_robust_risk(learner, support, m, loss):
    """Mean over all |support|^m sequences of the robust risk under the uniform D."""
    n = len(support)
    total = Fraction(0)
    seqs = list(product(range(n), repeat=m))
    for seq in seqs:
        h = learner([support[t] for t in seq])
        total += Fraction(sum(loss(h, x, y) for x, y in support), n)
    return total / len(seqs)


# ---------------------------------------------------------------- sample generators

HALTING_ROW_POINTS = [pair(i, k) for i in (16, 17, 18, 21, 27) for k in range(6)]


def sample_points(name, window=64):
    pts = list(range(window))
    if name in ("thm4", "thm5"):
        pts += HALTING_ROW_POINTS
    return pts


def random_samples(name, count, seed=0, window=64, max_size=5):
    import random
    rng = random.Random(f"{name}:{seed}")
    pts = sample_points(name, window)
    out = []
    for _ in range(count):
        size = rng.randint(1, max_size)
        out.append([(rng.choice(pts), rng.randint(0, 1)) for _ in range(size)])
    return out


def realizable_samples(bundle, count, seed=0, window=64, size=32, max_size=5):
    """Samples labelled by a window member that has robust loss 0 on each of them."""
    import random
    rng = random.Random(f"realizable:{bundle.name}:{seed}")
    pts = sample_points(bundle.name, window)
    params = bundle.param_window(size)
    out = []
    while len(out) < count:
        h = bundle.member(rng.choice(params))
        S = []
        for _ in range(rng.randint(1, max_size)):
            x = rng.choice(pts)
            if not bundle.exact_loss(h, x, h(x)):
                S.append((x, h(x)))
        if S:
            out.append(S)
    return out
