"""A tiny deterministic expression language used as the machine model.

Programs are trees of the form

    expr := input | var | NUMBER
          | (fst e) | (snd e) | (quote e)
          | (add a b) | (sub a b) | (mul a b) | (div a b)
          | (eq a b) | (lt a b) | (pair a b) | (eval a b)
          | (if c t e) | (loop init cond step)

`input` is the program input.  `(loop init cond step)` binds `var` to the value
of `init`, then replaces it by `step` while `cond` is nonzero, and yields the
final value.  `sub` is truncated subtraction, comparisons yield 0 or 1, and
`pair`/`fst`/`snd` use the Cantor pairing.  `(quote e)` yields the machine index
of `e` and `(eval a b)` runs machine `a` on input `b`.  Reading `var` outside a
loop or dividing by zero gets stuck, which counts as divergence.

One step is one node visit.  Machine indices are a bijection with programs:
indices below ``len(zoo())`` name the fixture programs of ``data/zoo.txt`` in
file order (so index 0 is the diverger), every other index names a program via
the structural code computed by :func:`structural_code`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from math import isqrt

__all__ = [
    "Expr", "INPUT", "VAR", "const", "node", "Halted", "ExceededBudget", "ZooEntry", "HaltsAt", "Loops",
    "pair", "unpair", "parse", "to_text", "structural_code", "from_structural_code",
    "encode", "decode", "run_bounded", "run_program", "halts_within", "halting_step",
    "smn", "smn_expr", "twofold_fixed_point", "zoo", "zoo_entry",
    "UNIVERSAL", "UNIVERSAL_OVERHEAD", "SMN_OVERHEAD",
]


def pair(a: int, b: int) -> int:
    """Cantor pairing of two naturals."""
    s = a + b
    return s * (s + 1) // 2 + b


def unpair(n: int) -> tuple[int, int]:
    w = (isqrt(8 * n + 1) - 1) // 2
    b = n - w * (w + 1) // 2
    return w - b, b


# ---------------------------------------------------------------- syntax

# op name -> (tag, arity); `input` and `var` are the two leaves with codes 0 and 1
OPS = {
    "const": (0, 0),
    "fst": (1, 1), "snd": (2, 1), "quote": (3, 1),
    "add": (4, 2), "sub": (5, 2), "mul": (6, 2), "div": (7, 2),
    "eq": (8, 2), "lt": (9, 2), "pair": (10, 2), "eval": (11, 2),
    "if": (12, 3), "loop": (13, 3),
}
_TAGS = {tag: name for name, (tag, _) in OPS.items()}
_NTAGS = len(OPS)


@dataclass(frozen=True)
class Expr:
    op: str
    args: tuple[Expr, ...] = ()
    value: int = 0

    def __repr__(self) -> str:
        return f"Expr({to_text(self)!r})"


INPUT = Expr("input")
VAR = Expr("var")


def const(n: int) -> Expr:
    if n < 0:
        raise ValueError("constants are natural numbers")
    return Expr("const", (), n)


def node(op: str, *args: Expr | int) -> Expr:
    """Build a node, turning bare ints into constants."""
    children = tuple(const(a) if isinstance(a, int) else a for a in args)
    if op not in OPS or OPS[op][1] != len(children) or op == "const":
        raise ValueError(f"bad node {op}/{len(children)}")
    return Expr(op, children)


def to_text(e: Expr) -> str:
    if e.op in ("input", "var"):
        return e.op
    if e.op == "const":
        return str(e.value)
    return "(" + " ".join([e.op] + [to_text(c) for c in e.args]) + ")"


_TOKEN = re.compile(r"\s*(\(|\)|[a-z]+|\d+)")


def parse(text: str) -> Expr:
    """Parse the parenthesized prefix notation produced by :func:`to_text`."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    expr, used = _parse_tokens(tokens, 0)
    if used != len(tokens):
        raise ValueError("trailing tokens after expression")
    return expr


def _parse_tokens(tokens: list[str], i: int) -> tuple[Expr, int]:
    if i >= len(tokens):
        raise ValueError("unexpected end of program text")
    tok = tokens[i]
    if tok.isdigit():
        return const(int(tok)), i + 1
    if tok in ("input", "var"):
        return Expr(tok), i + 1
    if tok != "(":
        raise ValueError(f"unexpected token {tok!r}")
    if i + 1 >= len(tokens) or tokens[i + 1] not in OPS or tokens[i + 1] == "const":
        raise ValueError("expected an operator after '('")
    op = tokens[i + 1]
    arity = OPS[op][1]
    args = []
    j = i + 2
    for _ in range(arity):
        sub, j = _parse_tokens(tokens, j)
        args.append(sub)
    if j >= len(tokens) or tokens[j] != ")":
        raise ValueError(f"operator {op} expects {arity} arguments")
    return Expr(op, tuple(args)), j + 1


# ---------------------------------------------------------------- numbering

def structural_code(e: Expr) -> int:
    """Bijective code of a program tree, before the zoo permutation."""
    if e.op == "input":
        return 0
    if e.op == "var":
        return 1
    tag, arity = OPS[e.op]
    if arity == 0:
        payload = e.value
    elif arity == 1:
        payload = structural_code(e.args[0])
    elif arity == 2:
        payload = pair(structural_code(e.args[0]), structural_code(e.args[1]))
    else:
        a, b, c = (structural_code(x) for x in e.args)
        payload = pair(a, pair(b, c))
    return 2 + _NTAGS * payload + tag


def from_structural_code(n: int) -> Expr:
    # iterative so that huge codes cannot exhaust the Python stack
    out: list[Expr] = []
    work: list[tuple[bool, int]] = [(False, n)]
    while work:
        build, item = work.pop()
        if build:
            op = _TAGS[item]
            arity = OPS[op][1]
            args = tuple(out[len(out) - arity:])
            del out[len(out) - arity:]
            out.append(Expr(op, args))
            continue
        if item < 2:
            out.append(INPUT if item == 0 else VAR)
            continue
        payload, tag = divmod(item - 2, _NTAGS)
        arity = OPS[_TAGS[tag]][1]
        if arity == 0:
            out.append(Expr("const", (), payload))
            continue
        work.append((True, tag))
        if arity == 1:
            children = [payload]
        elif arity == 2:
            children = list(unpair(payload))
        else:
            a, bc = unpair(payload)
            children = [a, *unpair(bc)]
        for child in reversed(children):
            work.append((False, child))
    return out[0]


@lru_cache(maxsize=1)
def _permutation() -> tuple[dict[int, int], dict[int, int]]:
    """Index <-> structural code maps that differ from the identity.

    Zoo program k gets index k.  Structural codes of zoo programs that lie at
    or above the zoo size are paired, in sorted order, with the small codes
    that no zoo program uses; every other code is its own index.
    """
    codes = [structural_code(entry.program) for entry in zoo()]
    if len(set(codes)) != len(codes):
        raise ValueError("zoo contains duplicate programs")
    size = len(codes)
    to_code = {k: c for k, c in enumerate(codes)}
    displaced = sorted(c for c in codes if c >= size)
    free = sorted(set(range(size)) - set(codes))
    for big, small in zip(displaced, free):
        to_code[big] = small
    to_index = {c: k for k, c in to_code.items()}
    return to_code, to_index


def encode(program: Expr) -> int:
    code = structural_code(program)
    return _permutation()[1].get(code, code)


@lru_cache(maxsize=8192)
def decode(index: int) -> Expr:
    """Total: every natural number names exactly one program."""
    if index < 0:
        raise ValueError("machine indices are natural numbers")
    return from_structural_code(_permutation()[0].get(index, index))


# ---------------------------------------------------------------- evaluation

@dataclass(frozen=True)
class Halted:
    output: int
    steps: int


@dataclass(frozen=True)
class ExceededBudget:
    budget: int


# compiled nodes are tuples (opcode, *fields) for a fast dispatch loop
(_INPUT, _VAR, _CONST, _FST, _SND, _QUOTE, _ADD, _SUB, _MUL, _DIV,
 _EQ, _LT, _PAIR, _EVAL, _IF, _LOOP) = range(16)
_OPCODE = {"input": _INPUT, "var": _VAR, "const": _CONST, "fst": _FST, "snd": _SND,
           "quote": _QUOTE, "add": _ADD, "sub": _SUB, "mul": _MUL, "div": _DIV,
           "eq": _EQ, "lt": _LT, "pair": _PAIR, "eval": _EVAL, "if": _IF, "loop": _LOOP}

# Fixed-point machines pair and unpair the same huge numbers over and over.
@lru_cache(maxsize=1024)
def _unpair_cached(n: int) -> tuple[int, int]:
    return unpair(n)


@lru_cache(maxsize=1024)
def _pair_cached(a: int, b: int) -> int:
    return pair(a, b)


def _unpair_fast(n: int) -> tuple[int, int]:
    return unpair(n) if n.bit_length() < 256 else _unpair_cached(n)


def _pair_fast(a: int, b: int) -> int:
    return pair(a, b) if a.bit_length() + b.bit_length() < 256 else _pair_cached(a, b)


# control-stack task kinds
_EV, _K_UN, _K_BIN, _K_EVAL, _K_IF, _K_LOOP, _K_TEST = range(7)
_STUCK = object()


def _compile(e: Expr) -> tuple:
    out: list[tuple] = []
    work: list[tuple[bool, Expr]] = [(False, e)]
    while work:
        build, item = work.pop()
        op = _OPCODE[item.op]
        if build:
            n = len(item.args)
            args = tuple(out[len(out) - n:])
            del out[len(out) - n:]
            out.append((op, *args))
        elif op == _CONST:
            out.append((op, item.value))
        elif op == _QUOTE:
            out.append((op, encode(item.args[0])))
        elif not item.args:
            out.append((op,))
        else:
            work.append((True, item))
            for child in reversed(item.args):
                work.append((False, child))
    return out[0]


@lru_cache(maxsize=8192)
def _compiled(index: int) -> tuple:
    return _compile(decode(index))


def _execute(root: tuple, x: int, budget: int) -> Halted | ExceededBudget:
    steps = 0
    vals: list[int] = []
    push_val = vals.append
    pop_val = vals.pop
    ctl: list[tuple] = [(_EV, root, (x, None))]
    push = ctl.append
    pop = ctl.pop
    while ctl:
        task = pop()
        kind = task[0]
        if kind == _EV:
            if steps >= budget:
                return ExceededBudget(budget)
            steps += 1
            nd = task[1]
            env = task[2]
            op = nd[0]
            if op == _CONST or op == _QUOTE:
                push_val(nd[1])
            elif op == _INPUT:
                push_val(env[0])
            elif op == _VAR:
                if env[1] is None:
                    return ExceededBudget(budget)
                push_val(env[1])
            elif op <= _SND:
                push((_K_UN, op))
                push((_EV, nd[1], env))
            elif op <= _EVAL:
                push((_K_EVAL,) if op == _EVAL else (_K_BIN, op))
                push((_EV, nd[2], env))
                push((_EV, nd[1], env))
            elif op == _IF:
                push((_K_IF, nd, env))
                push((_EV, nd[1], env))
            else:
                push((_K_LOOP, nd, env))
                push((_EV, nd[1], env))
        elif kind == _K_BIN:
            b = pop_val()
            a = pop_val()
            op = task[1]
            if op == _ADD:
                push_val(a + b)
            elif op == _SUB:
                push_val(a - b if a > b else 0)
            elif op == _MUL:
                push_val(a * b)
            elif op == _DIV:
                if b == 0:
                    return ExceededBudget(budget)
                push_val(a // b)
            elif op == _EQ:
                push_val(1 if a == b else 0)
            elif op == _LT:
                push_val(1 if a < b else 0)
            else:
                push_val(_pair_fast(a, b))
        elif kind == _K_LOOP:
            # value on top is the current loop variable: test the condition
            v = vals[-1]
            nd = task[1]
            push((_K_TEST, nd, task[2]))
            push((_EV, nd[2], (task[2][0], v)))
        elif kind == _K_TEST:
            c = pop_val()
            if c:
                v = pop_val()
                nd = task[1]
                push((_K_LOOP, nd, task[2]))
                push((_EV, nd[3], (task[2][0], v)))
        elif kind == _K_IF:
            c = pop_val()
            nd = task[1]
            push((_EV, nd[2] if c else nd[3], task[2]))
        elif kind == _K_UN:
            a = pop_val()
            push_val(_unpair_fast(a)[0 if task[1] == _FST else 1])
        else:
            arg = pop_val()
            index = pop_val()
            push((_EV, _compiled(index), (arg, None)))
    return Halted(vals[-1], steps)


def run_program(program: Expr, x: int, budget: int) -> Halted | ExceededBudget:
    """Run a program tree directly (no numbering involved)."""
    return _execute(_compile(program), x, budget)


def run_bounded(i: int, x: int, budget: int) -> Halted | ExceededBudget:
    """Run machine i on input x for at most `budget` steps."""
    if budget < 0:
        raise ValueError("budget must be a natural number")
    return _execute(_compiled(i), x, budget)


# (i, x) -> (halting step or None, largest budget explored without halting)
_HALT_MEMO: dict[tuple[int, int], tuple[int | None, int]] = {}


def halting_step(i: int, x: int, budget: int) -> int | None:
    """The halting step of machine i on x if it is at most `budget`, else None.

    Memoized; the memo only caches facts that are stable under budget changes.
    """
    known = _HALT_MEMO.get((i, x))
    explored = 0
    if known is not None:
        step, explored = known
        if step is not None:
            return step if step <= budget else None
        if budget <= explored:
            return None
    # grow geometrically so that callers raising the budget one step at a time
    # pay amortized linear cost
    limit = max(budget, 2 * explored)
    outcome = run_bounded(i, x, limit)
    if isinstance(outcome, Halted):
        _HALT_MEMO[(i, x)] = (outcome.steps, outcome.steps)
        return outcome.steps if outcome.steps <= budget else None
    _HALT_MEMO[(i, x)] = (None, limit)
    return None


def halts_within(i: int, x: int, j: int) -> int:
    return 1 if halting_step(i, x, j) is not None else 0


# ---------------------------------------------------------------- zoo

@dataclass(frozen=True)
class HaltsAt:
    step: int
    output: int


@dataclass(frozen=True)
class Loops:
    pass


@dataclass(frozen=True)
class ZooEntry:
    index: int
    name: str
    behavior: HaltsAt | Loops
    program: Expr

    @property
    def halts(self) -> bool:
        return isinstance(self.behavior, HaltsAt)


_ZOO_LINE = re.compile(r"^(\d+)\s+(\w+)\s+(Loops|HaltsAt\((\d+),(\d+)\))\s+(.+)$")


@lru_cache(maxsize=1)
def zoo() -> tuple[ZooEntry, ...]:
    text = resources.files("robust_cpac").joinpath("data/zoo.txt").read_text()
    entries = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        m = _ZOO_LINE.match(line)
        if not m:
            raise ValueError(f"malformed zoo line: {line!r}")
        index = int(m.group(1))
        if index != len(entries):
            raise ValueError(f"zoo indices must be consecutive, got {index}")
        behavior = Loops() if m.group(3) == "Loops" else HaltsAt(int(m.group(4)), int(m.group(5)))
        entries.append(ZooEntry(index, m.group(2), behavior, parse(m.group(6))))
    return tuple(entries)


def zoo_entry(i: int) -> ZooEntry:
    return zoo()[i]


# ---------------------------------------------------------------- currying and fixed points

# (eval (fst input) (snd input)): runs machine fst(x) on snd(x)
UNIVERSAL = node("eval", node("fst", INPUT), node("snd", INPUT))
# a universal run spends exactly this many extra steps before the simulated program starts
UNIVERSAL_OVERHEAD = 5
SMN_OVERHEAD = 5


def _smn_program(i: int, fixed: int) -> Expr:
    return node("eval", i, node("pair", fixed, INPUT))


def smn(i: int, fixed: int) -> int:
    """Index of the machine y -> T_i(pair(fixed, y)); always halts.

    The result runs exactly SMN_OVERHEAD steps more than T_i on the paired input.
    """
    return encode(_smn_program(i, fixed))


def _coded(tag: int, payload: Expr) -> Expr:
    return node("add", 2 + tag, node("mul", _NTAGS, payload))


def smn_expr(index: Expr, fixed: Expr) -> Expr:
    """In-language computation of smn(index, fixed).

    Builds the structural code of (eval index (pair fixed input)).  That code is
    never below the zoo size and never the code of a zoo program, so it is also
    the machine index.
    """
    const_index = _coded(OPS["const"][0], index)
    const_fixed = _coded(OPS["const"][0], fixed)
    pair_node = _coded(OPS["pair"][0], node("pair", const_fixed, const(0)))
    return _coded(OPS["eval"][0], node("pair", const_index, pair_node))


# T_a and T_b from the two-fold recursion argument, on input pair(pair(x1, x2), y):
# run machine T_{x1}(x1, x2) (resp. T_{x2}(x1, x2)) on y.
_ARGS = node("fst", INPUT)
T_A = node("eval", node("eval", node("fst", _ARGS), _ARGS), node("snd", INPUT))
T_B = node("eval", node("eval", node("snd", _ARGS), _ARGS), node("snd", INPUT))


def twofold_fixed_point(f1: int, f2: int) -> tuple[int, int]:
    """Indices (c1, c2) with T_c1 equivalent to T_{f1(c1,c2)} and T_c2 to T_{f2(c1,c2)}.

    f1 and f2 must be indices of machines computing total functions of
    pair(x1, x2); this is not checked.
    """
    a, b = encode(T_A), encode(T_B)
    h1 = smn_expr(const(a), INPUT)
    h2 = smn_expr(const(b), INPUT)
    e1 = encode(node("eval", f1, node("pair", h1, h2)))
    e2 = encode(node("eval", f2, node("pair", h1, h2)))
    return smn(a, pair(e1, e2)), smn(b, pair(e1, e2))
