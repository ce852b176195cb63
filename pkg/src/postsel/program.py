"""Randomised query programs that may answer 0, 1 or bottom, and their semantics.

A program is a tree of query nodes, chance nodes with exact rational branch
probabilities, and leaves.  Conditioning on "outcome is not bottom" is the
post-selection step.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import _kernels
from .boolean import BitLike, BooleanFunction, as_mask, mask_to_bits
from .errors import AttemptsExhausted, CapExceeded, FormatError, PostselError, PostselectionImpossible

BOT = -1
OUTCOMES = (0, 1, BOT)


@dataclass(frozen=True)
class Leaf:
    outcome: int

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise PostselError(f"leaf outcome must be 0, 1 or BOT, got {self.outcome!r}")


@dataclass(frozen=True)
class Query:
    index: int
    child0: "Node"
    child1: "Node"


@dataclass(frozen=True)
class Chance:
    branches: tuple  # ((Fraction, Node), ...)

    def __init__(self, branches: Iterable):
        object.__setattr__(self, "branches", tuple((Fraction(w), c) for w, c in branches))


@dataclass(frozen=True)
class Call:
    """Run a post-selected sub-program to completion, then continue on its answer.

    Only allowed inside a NestedProgram.
    """

    sub: "Node"
    on_one: "Node"
    on_zero: "Node"


Node = Union[Leaf, Query, Chance, Call]

ZERO, ONE, BOTTOM = Leaf(0), Leaf(1), Leaf(BOT)


def chance(branches: Sequence) -> "Node":
    """Chance node that merges equal children and collapses a single branch."""
    merged: dict = {}
    for w, child in branches:
        w = Fraction(w)
        if w:
            merged[child] = merged.get(child, Fraction(0)) + w
    if len(merged) == 1:
        return next(iter(merged))
    return Chance((w, c) for c, w in merged.items())


def _validate(node: Node, n: int, nested: bool) -> int:
    """Returns the query depth below ``node``."""
    if isinstance(node, Leaf):
        return 0
    if isinstance(node, Query):
        if not 0 <= node.index < n:
            raise PostselError(f"query index {node.index + 1} outside 1..{n}")
        return 1 + max(_validate(node.child0, n, nested), _validate(node.child1, n, nested))
    if isinstance(node, Chance):
        if not node.branches:
            raise PostselError("chance node without branches")
        total = Fraction(0)
        for w, _ in node.branches:
            if w <= 0:
                raise PostselError("chance branch probabilities must be positive")
            total += w
        if total != 1:
            raise PostselError(f"chance branch probabilities sum to {total}, not 1")
        return max(_validate(c, n, nested) for _, c in node.branches)
    if isinstance(node, Call):
        if not nested:
            raise PostselError("nested post-selection is not representable as a flat program")
        return _validate(node.sub, n, nested) + max(_validate(node.on_one, n, nested), _validate(node.on_zero, n, nested))
    raise PostselError(f"unknown node {node!r}")


@dataclass(frozen=True, eq=False)
class Program:
    n: int
    root: Node

    def __post_init__(self):
        depth = _validate(self.root, self.n, nested=False)
        if depth > self.n:
            raise PostselError(f"query depth {depth} exceeds n={self.n}")

    @cached_property
    def depth(self) -> int:
        return _depth(self.root)

    @cached_property
    def compiled(self) -> tuple:
        return _compile(self.root)


@dataclass(frozen=True, eq=False)
class NestedProgram:
    """Program whose Call nodes run an inner post-selected sub-program."""

    n: int
    root: Node

    def __post_init__(self):
        _validate(self.root, self.n, nested=True)

    @cached_property
    def depth(self) -> int:
        return _depth(self.root)


AnyProgram = Union[Program, NestedProgram]


@dataclass(frozen=True)
class OutcomeDistribution:
    p0: Fraction
    p1: Fraction
    pbot: Fraction

    def __post_init__(self):
        if min(self.p0, self.p1, self.pbot) < 0 or self.p0 + self.p1 + self.pbot != 1:
            raise PostselError("not a probability distribution")

    @property
    def accept(self) -> Fraction:
        return self.p0 + self.p1

    def conditional(self, b: int) -> Fraction:
        if self.accept == 0:
            raise PostselError("post-selection event has probability zero")
        return (self.p1 if b else self.p0) / self.accept


def _dist(node: Node, x: int) -> tuple[Fraction, Fraction, Fraction]:
    if isinstance(node, Leaf):
        one = Fraction(1)
        zero = Fraction(0)
        return (one, zero, zero) if node.outcome == 0 else (zero, one, zero) if node.outcome == 1 else (zero, zero, one)
    if isinstance(node, Query):
        return _dist(node.child1 if (x >> node.index) & 1 else node.child0, x)
    if isinstance(node, Chance):
        p0 = p1 = pb = Fraction(0)
        for w, child in node.branches:
            a, b, c = _dist(child, x)
            p0 += w * a
            p1 += w * b
            pb += w * c
        return p0, p1, pb
    # Call: the inner run is repeated until it answers, so it answers 1 with
    # its conditional probability
    s0, s1, _ = _dist(node.sub, x)
    if s0 + s1 == 0:
        raise PostselError("inner post-selection event has probability zero")
    v = s1 / (s0 + s1)
    a = _dist(node.on_one, x)
    b = _dist(node.on_zero, x)
    return tuple(v * ai + (1 - v) * bi for ai, bi in zip(a, b))


def exact_distribution(prog: AnyProgram, x: BitLike) -> OutcomeDistribution:
    return OutcomeDistribution(*_dist(prog.root, as_mask(x, prog.n)))


def conditional_one(prog: AnyProgram, x: BitLike) -> Fraction:
    """Pr[outcome 1 | outcome != bottom]."""
    m = as_mask(x, prog.n)
    p0, p1, _ = _dist(prog.root, m)
    if p0 + p1 == 0:
        raise PostselectionImpossible(mask_to_bits(m, prog.n))
    return p1 / (p0 + p1)


class _Ratios(Mapping):
    """Read-only mask -> Fraction view over integer numerator/denominator arrays."""

    def __init__(self, points, num, den):
        self._index = {int(x): j for j, x in enumerate(points)}
        self._num = num
        self._den = den

    def __getitem__(self, x):
        j = self._index[int(x)]
        return Fraction(int(self._num[j]), int(self._den[j]))

    def __iter__(self):
        return iter(self._index)

    def __len__(self):
        return len(self._index)


@dataclass(frozen=True)
class SuccessReport:
    worst: Fraction
    per_input: Mapping  # mask -> Fraction

    def computes(self, eps) -> bool:
        return self.worst >= 1 - Fraction(eps)


TABLE_MAX_N = 16


def _denominator(node: Node, memo: dict) -> int:
    key = id(node)
    if key in memo:
        return memo[key]
    if isinstance(node, Leaf):
        d = 1
    elif isinstance(node, Query):
        d = math.lcm(_denominator(node.child0, memo), _denominator(node.child1, memo))
    elif isinstance(node, Chance):
        d = 1
        for w, c in node.branches:
            d = math.lcm(d, w.denominator * _denominator(c, memo))
    else:
        raise PostselError("nested programs have no table form")
    memo[key] = d
    return d


def distribution_table(prog: Program):
    """Exact (p0, p1, pbot) on every input mask as integer arrays over a common denominator D.

    Returns (num0, num1, numbot, D).  Arrays are int64 when D < 2^31, else Python-int object arrays.
    """
    if not isinstance(prog, Program):
        raise PostselError("tables need a flat program")
    if prog.n > TABLE_MAX_N:
        raise CapExceeded(f"table over 2^{prog.n} inputs exceeds cap 2^{TABLE_MAX_N}")
    dens: dict = {}
    D = _denominator(prog.root, dens)
    dtype = np.int64 if D < 2**31 else object
    masks = np.arange(1 << prog.n, dtype=np.int64)

    def build(node: Node, scale: int):
        # leaf-reach numerators of node scaled by ``scale`` (= D / path denominator)
        if isinstance(node, Leaf):
            out = [0, 0, 0]
            out[{0: 0, 1: 1, BOT: 2}[node.outcome]] = scale
            return [np.asarray(v, dtype=dtype) for v in out]
        if isinstance(node, Query):
            bit = ((masks >> node.index) & 1).astype(bool)
            a = build(node.child0, scale)
            b = build(node.child1, scale)
            return [np.where(bit, bj, aj) for aj, bj in zip(a, b)]
        acc = None
        for w, child in node.branches:
            part = build(child, scale // w.denominator * w.numerator)
            acc = part if acc is None else [x + y for x, y in zip(acc, part)]
        return acc

    n0, n1, nb = (np.broadcast_to(v, masks.shape) for v in build(prog.root, D))
    return n0, n1, nb, D


def _table_success(prog: Program, f: BooleanFunction) -> SuccessReport:
    n0, n1, _, _ = distribution_table(prog)
    pts = f.domain_points()
    num = np.where(f.values[pts].astype(bool), n1[pts], n0[pts])
    den = n0[pts] + n1[pts]
    bad = np.flatnonzero(den == 0)
    if bad.size:
        raise PostselectionImpossible(mask_to_bits(int(pts[bad[0]]), f.n))
    # float argmin, then an exact cross-multiplied check that nothing is smaller
    j = int(np.argmin(num.astype(float) / den.astype(float)))
    a, b = num[j], den[j]
    smaller = np.flatnonzero(num * b < a * den)
    while smaller.size:
        j = int(smaller[0])
        a, b = num[j], den[j]
        smaller = np.flatnonzero(num * b < a * den)
    return SuccessReport(Fraction(int(a), int(b)), _Ratios(pts, num, den))


def conditional_success(prog: AnyProgram, f: BooleanFunction) -> SuccessReport:
    if prog.n != f.n:
        raise PostselError(f"variable counts differ: {prog.n} vs {f.n}")
    if isinstance(prog, Program) and prog.n <= TABLE_MAX_N:
        return _table_success(prog, f)
    per = {}
    for x in f.domain_points():
        x = int(x)
        p0, p1, _ = _dist(prog.root, x)
        if p0 + p1 == 0:
            raise PostselectionImpossible(mask_to_bits(x, f.n))
        per[x] = (p1 if f.values[x] else p0) / (p0 + p1)
    return SuccessReport(min(per.values()), per)


def _depth(node: Node) -> int:
    if isinstance(node, Leaf):
        return 0
    if isinstance(node, Query):
        return 1 + max(_depth(node.child0), _depth(node.child1))
    if isinstance(node, Chance):
        return max(_depth(c) for _, c in node.branches)
    return _depth(node.sub) + max(_depth(node.on_one), _depth(node.on_zero))


def query_depth(prog: AnyProgram) -> int:
    return prog.depth


def mix(weighted: Sequence[tuple]) -> Program:
    """Program that runs component i with probability w_i."""
    if not weighted:
        raise PostselError("nothing to mix")
    ns = {p.n for _, p in weighted}
    if len(ns) != 1:
        raise PostselError("mixed programs must share n")
    if any(Fraction(w) <= 0 for w, _ in weighted):
        raise PostselError("mixture weights must be positive")
    total = sum(Fraction(w) for w, _ in weighted)
    if total != 1:
        raise PostselError(f"mixture weights sum to {total}, not 1")
    return Program(ns.pop(), Chance([(w, p.root) for w, p in weighted]))


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def _compile(root: Node) -> tuple:
    ids: dict[int, int] = {}
    order: list[Node] = []

    def visit(node):
        key = id(node)
        if key in ids:
            return ids[key]
        ids[key] = len(order)
        order.append(node)
        if isinstance(node, Query):
            visit(node.child0)
            visit(node.child1)
        elif isinstance(node, Chance):
            for _, c in node.branches:
                visit(c)
        return ids[key]

    visit(root)
    size = len(order)
    kind = np.zeros(size, dtype=np.int64)
    arg = np.zeros(size, dtype=np.int64)
    child0 = np.zeros(size, dtype=np.int64)
    child1 = np.zeros(size, dtype=np.int64)
    start = np.zeros(size, dtype=np.int64)
    stop = np.zeros(size, dtype=np.int64)
    cum: list[float] = []
    target: list[int] = []
    for v, node in enumerate(order):
        if isinstance(node, Leaf):
            kind[v] = _kernels.LEAF
            arg[v] = node.outcome
        elif isinstance(node, Query):
            kind[v] = _kernels.QUERY
            arg[v] = node.index
            child0[v] = ids[id(node.child0)]
            child1[v] = ids[id(node.child1)]
        else:
            kind[v] = _kernels.CHANCE
            start[v] = len(cum)
            acc = Fraction(0)
            for w, c in node.branches:
                acc += w
                cum.append(float(acc))
                target.append(ids[id(c)])
            cum[-1] = 1.0
            stop[v] = len(cum)
    return (
        kind,
        arg,
        child0,
        child1,
        start,
        stop,
        np.asarray(cum, dtype=np.float64),
        np.asarray(target, dtype=np.int64),
    )


def _x_array(m: int, n: int) -> np.ndarray:
    return np.array([(m >> i) & 1 for i in range(n)], dtype=np.int64)


def _sample_node(node: Node, x: int, rng: np.random.Generator, max_attempts: int) -> int:
    while True:
        if isinstance(node, Leaf):
            return node.outcome
        if isinstance(node, Query):
            node = node.child1 if (x >> node.index) & 1 else node.child0
        elif isinstance(node, Chance):
            u = rng.random()
            acc = 0.0
            for w, child in node.branches:
                acc += float(w)
                if u < acc:
                    break
            node = child
        else:
            for _ in range(max_attempts):
                o = _sample_node(node.sub, x, rng, max_attempts)
                if o != BOT:
                    break
            else:
                raise AttemptsExhausted(max_attempts)
            node = node.on_one if o == 1 else node.on_zero


def sample(prog: AnyProgram, x: BitLike, seed: int) -> int:
    """One root-to-leaf walk; returns 0, 1 or BOT."""
    return _sample_node(prog.root, as_mask(x, prog.n), np.random.default_rng(seed), 10**6)


def postselected_runs(prog: Program, x: BitLike, runs: int, seed: int, max_attempts: int = 10**6):
    """``runs`` independent post-selected executions.

    Returns (outcomes, attempts) arrays; raises AttemptsExhausted if some run
    sees only bottom for ``max_attempts`` walks.
    """
    if not isinstance(prog, Program):
        raise PostselError("bulk sampling needs a flat program")
    xa = _x_array(as_mask(x, prog.n), prog.n)
    outcomes, attempts = _kernels.postselected_runs(*prog.compiled, xa, int(runs), int(seed), int(max_attempts))
    if runs and outcomes[-1] == BOT:
        raise AttemptsExhausted(max_attempts)
    return outcomes, attempts


def run_postselected(prog: Program, x: BitLike, seed: int, max_attempts: int = 10**6) -> int:
    outcomes, _ = postselected_runs(prog, x, 1, seed, max_attempts)
    return int(outcomes[0])


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------


def _fmt_node(node: Node, depth: int, out: list[str]):
    pad = "  " * depth
    if isinstance(node, Leaf):
        out.append(f"{pad}L {'B' if node.outcome == BOT else node.outcome}")
    elif isinstance(node, Query):
        out.append(f"{pad}Q {node.index + 1}")
        _fmt_node(node.child0, depth + 1, out)
        _fmt_node(node.child1, depth + 1, out)
    elif isinstance(node, Chance):
        out.append(f"{pad}C {len(node.branches)}")
        for w, child in node.branches:
            out.append(f"{pad}  w={w.numerator}/{w.denominator}")
            _fmt_node(child, depth + 1, out)
    else:
        raise PostselError("nested programs have no text form")


def format_program(prog: Program) -> str:
    out = [f"n={prog.n}"]
    _fmt_node(prog.root, 0, out)
    return "\n".join(out) + "\n"


def parse_program(text: str) -> Program:
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0][1].startswith("n="):
        raise FormatError("program must start with 'n=<N>'", lines[0][0] if lines else 0)
    try:
        n = int(lines[0][1][2:])
    except ValueError:
        raise FormatError(f"bad header {lines[0][1]!r}", lines[0][0]) from None
    pos = 1

    def node() -> Node:
        nonlocal pos
        if pos >= len(lines):
            raise FormatError("unexpected end of program", lines[-1][0])
        lineno, body = lines[pos]
        pos += 1
        toks = body.split()
        if len(toks) != 2:
            raise FormatError(f"cannot parse {body!r}", lineno)
        tag, val = toks
        if tag == "L":
            if val not in ("0", "1", "B"):
                raise FormatError(f"leaf outcome must be 0, 1 or B, got {val!r}", lineno)
            return Leaf(BOT if val == "B" else int(val))
        if tag == "Q":
            try:
                i = int(val) - 1
            except ValueError:
                raise FormatError(f"bad query index {val!r}", lineno) from None
            if not 0 <= i < n:
                raise FormatError(f"query index {val} outside 1..{n}", lineno)
            c0 = node()
            c1 = node()
            return Query(i, c0, c1)
        if tag == "C":
            try:
                m = int(val)
            except ValueError:
                raise FormatError(f"bad branch count {val!r}", lineno) from None
            if m < 1:
                raise FormatError("chance node needs at least one branch", lineno)
            branches = []
            for _ in range(m):
                if pos >= len(lines):
                    raise FormatError("unexpected end of program", lines[-1][0])
                wl, wbody = lines[pos]
                pos += 1
                if not wbody.startswith("w="):
                    raise FormatError(f"expected 'w=<p>/<q>', got {wbody!r}", wl)
                try:
                    w = Fraction(wbody[2:])
                except (ValueError, ZeroDivisionError):
                    raise FormatError(f"bad weight {wbody[2:]!r}", wl) from None
                if w <= 0:
                    raise FormatError("branch weights must be positive", wl)
                branches.append((w, node()))
            if sum(w for w, _ in branches) != 1:
                raise FormatError("branch weights do not sum to 1", lineno)
            return Chance(branches)
        raise FormatError(f"unknown node tag {tag!r}", lineno)

    root = node()
    if pos != len(lines):
        raise FormatError("trailing content after program", lines[pos][0])
    try:
        return Program(n, root)
    except PostselError as exc:
        raise FormatError(str(exc), lines[0][0]) from None
