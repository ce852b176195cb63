"""Approximate counting of |x| with post-selected sampling: a threshold
verifier, the doubling search with majority votes, and a (1+1/p)-accurate
variant that counts in a virtual product string."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from collections import Counter
from typing import Optional

import numpy as np

from . import _kernels
from .boolean import BitLike, as_mask
from .errors import AttemptsExhausted, PostselError
from .program import BOTTOM, ONE, ZERO, Program, Query, chance, postselected_runs

REPETITION_CONSTANT = 8
DEFAULT_MAX_ATTEMPTS = 10**6


@dataclass(frozen=True)
class CountingParams:
    n: int
    k: int = 2
    eps: Fraction = Fraction(1, 3)
    p: int = 1

    def __post_init__(self):
        object.__setattr__(self, "eps", Fraction(self.eps))
        if self.n < 1:
            raise PostselError("n must be positive")
        if self.k < 1:
            raise PostselError("k must be at least 1")
        if not 0 < self.eps < Fraction(1, 2):
            raise PostselError("eps must lie in (0, 1/2)")
        if self.p < 1:
            raise PostselError("p must be at least 1")


def verifier_r(A: int, n: int, k: int) -> Fraction:
    return Fraction(2 * A**k, n**k)


def _answer_weights(r: Fraction) -> tuple[Fraction, Fraction]:
    top = max(Fraction(1), r)
    return 1 / top, r / top


def _uniform_branch(indices: tuple[int, ...], hit_one, hit_zero):
    """All queried bits 1 -> hit_one, all 0 -> hit_zero, mixed -> bottom."""

    def chain(rest, want, leaf):
        node = leaf
        for i in reversed(rest):
            node = Query(i, node, BOTTOM) if want == 0 else Query(i, BOTTOM, node)
        return node

    first, rest = indices[0], indices[1:]
    return Query(first, chain(rest, 0, hit_zero), chain(rest, 1, hit_one))


@lru_cache(maxsize=256)
def _verifier(A: int, n: int, k: int) -> Program:
    r = verifier_r(A, n, k)
    w1, w0 = _answer_weights(r)
    hit_one = chance([(w1, ONE), (1 - w1, BOTTOM)])
    hit_zero = chance([(w0, ZERO), (1 - w0, BOTTOM)])
    # ordered k-tuples with replacement, grouped by their set of distinct indices
    groups: Counter = Counter()
    for multiset in combinations_with_replacement(range(n), k):
        counts = Counter(multiset)
        ways = math.factorial(k)
        for c in counts.values():
            ways //= math.factorial(c)
        groups[tuple(sorted(counts))] += ways
    total = n**k
    branches = [(Fraction(w, total), _uniform_branch(idx, hit_one, hit_zero)) for idx, w in sorted(groups.items())]
    return Program(n, chance(branches))


def counting_verifier(A: int, params: CountingParams) -> Program:
    """Sample k indices with replacement; all ones answers 1, all zeros answers
    0 with probability r = 2A^k/n^k, anything else is bottom.  When r > 1 both
    answer probabilities are divided by r, which keeps every conditional
    probability unchanged."""
    if not 1 <= A <= params.n:
        raise PostselError(f"A must lie in 1..{params.n}")
    return _verifier(A, params.n, params.k)


def verifier_conditional_one(A: int, n: int, k: int, weight: int) -> Fraction:
    """Closed form of Pr[1 | not bottom] at Hamming weight ``weight``."""
    if weight == 0:
        return Fraction(0)
    if weight == n:
        return Fraction(1)
    r = verifier_r(A, n, k)
    return 1 / (1 + r * Fraction(n, weight) ** k * Fraction(n - weight, n) ** k)


def repetitions(n: int, eps) -> int:
    rounds = max(1, math.ceil(math.log2(n))) if n > 1 else 1
    reps = math.ceil(REPETITION_CONSTANT * math.log(rounds / float(Fraction(eps))))
    reps = max(reps, 1)
    return reps if reps % 2 else reps + 1


def _round_seed(seed: int, i: int) -> int:
    return int(np.random.SeedSequence([seed, i]).generate_state(1)[0])


@dataclass
class Round:
    i: int
    A: int
    ones: int
    zeros: int
    attempts: int

    @property
    def majority(self) -> int:
        return 1 if self.ones > self.zeros else 0

    def __str__(self) -> str:
        return f"round {self.i}: A={self.A} votes 1:{self.ones} 0:{self.zeros} attempts={self.attempts} -> {self.majority}"


@dataclass
class CountResult:
    estimate: int
    rounds: list[Round] = field(default_factory=list)
    t: int = 1
    note: str = ""

    @property
    def attempts(self) -> int:
        return sum(r.attempts for r in self.rounds)

    def transcript(self) -> str:
        lines = [str(r) for r in self.rounds]
        if self.note:
            lines.append(self.note)
        lines.append(f"estimate={self.estimate}")
        return "\n".join(lines)


def _doubling(n: int, eps, seed: int, vote) -> tuple[int, list[Round]]:
    reps = repetitions(n, eps)
    rounds = []
    for i in range(max(1, math.ceil(math.log2(n))) + 1 if n > 1 else 1):
        A = min(2**i, n)
        outcomes, attempts = vote(A, reps, _round_seed(seed, i))
        ones = int(np.count_nonzero(outcomes == 1))
        rnd = Round(i, A, ones, reps - ones, int(np.sum(attempts)))
        rounds.append(rnd)
        if rnd.majority == 0:
            return A, rounds
        if A == n:
            break
    return n, rounds


def weak_count(x: BitLike, eps, seed: int, k: int = 2, max_attempts: int = DEFAULT_MAX_ATTEMPTS, n: Optional[int] = None) -> CountResult:
    """Factor-2-style estimate of |x|: the first A = min(2^i, n) whose verifier
    majority says 0, or n if none does."""
    bits, n = _bits(x, n)
    params = CountingParams(n, k, eps)
    mask = as_mask(bits, n)
    # closed form of the A=1 verifier; it matches the program exactly
    if verifier_conditional_one(1, n, k, int(bits.sum())) == 0:
        return CountResult(0, [], 1, "verifier at A=1 answers 0 with certainty: x is all zero")

    def vote(A, reps, s):
        prog = counting_verifier(A, params)
        outcomes, attempts = postselected_runs(prog, mask, reps, s, max_attempts)
        return outcomes, attempts

    est, rounds = _doubling(n, params.eps, seed, vote)
    return CountResult(est, rounds, 1)


def product_power(p: int) -> int:
    """Smallest t with 2^(1/t) <= 1 + 1/p."""
    if p < 1:
        raise PostselError("p must be at least 1")
    t = 1
    while Fraction(2) > Fraction(p + 1, p) ** t:
        t += 1
    return t


def strong_count(x: BitLike, params: CountingParams, seed: int, max_attempts: int = DEFAULT_MAX_ATTEMPTS) -> CountResult:
    """(1+1/p)-style estimate: weak counting on the virtual string X_t of
    length n^t whose bit (i_1..i_t) is x_{i_1} and ... and x_{i_t}, so
    |X_t| = |x|^t.  Virtual bits are evaluated on demand with t real queries;
    the estimate is the t-th root of the weak estimate, rounded."""
    bits, n = _bits(x, params.n)
    t = product_power(params.p)
    if t == 1:
        return weak_count(bits, params.eps, seed, params.k, max_attempts, n)
    if not bits.any():
        return CountResult(0, [], t, "every virtual bit is zero")
    big = n**t
    k = params.k

    def vote(A, reps, s):
        w1, w0 = _answer_weights(verifier_r(A, big, k))
        outcomes, used = _kernels.virtual_runs(bits, t, k, float(w1), float(w0), reps, s, max_attempts)
        if reps and outcomes[-1] == _kernels.OUT_BOT:
            raise AttemptsExhausted(max_attempts)
        return outcomes, used

    est, rounds = _doubling(big, params.eps, seed, vote)
    root = round(est ** (1.0 / t))
    return CountResult(max(1, root), rounds, t, f"virtual length {big}, weak estimate {est}, t={t}")


def _bits(x: BitLike, n: Optional[int]) -> tuple[np.ndarray, int]:
    if isinstance(x, int):
        if n is None:
            raise PostselError("give n with an integer mask")
        m = x
    else:
        n = len(x) if n is None else n
        m = as_mask(x, n)
    return np.array([(m >> i) & 1 for i in range(n)], dtype=np.int64), n


def hamming_weight(x: BitLike, n: Optional[int] = None) -> int:
    bits, _ = _bits(x, n)
    return int(bits.sum())
