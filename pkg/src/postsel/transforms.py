"""Conversions between post-selected programs and positive rational functions,
and the named algorithm constructions (OR, AND, Majority, certificate
algorithms, nested equality guessing).
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, product
from typing import Optional

from .boolean import BooleanFunction, Certificate, certificate_for, mask_to_bits
from .errors import CapExceeded, PostselError
from .poly import LiteralPolynomial, Monomial, PosRationalFunction
from .program import (
    BOT,
    BOTTOM,
    ONE,
    ZERO,
    Call,
    Chance,
    Leaf,
    NestedProgram,
    Node,
    Program,
    Query,
    chance,
    mix,
)

EQUALITY_CAP = 6


# ---------------------------------------------------------------------------
# program -> rational function
# ---------------------------------------------------------------------------


def acceptance_polynomials(prog: Program) -> tuple[LiteralPolynomial, LiteralPolynomial]:
    """(Pr[output 1], Pr[output != bottom]) as nonnegative literal polynomials."""
    n = prog.n
    one = LiteralPolynomial.constant(n, 1)
    zero = LiteralPolynomial.zero(n)
    memo: dict[int, tuple] = {}

    def build(node: Node):
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Leaf):
            out = (one, one) if node.outcome == 1 else (zero, one) if node.outcome == 0 else (zero, zero)
        elif isinstance(node, Query):
            p0, q0 = build(node.child0)
            p1, q1 = build(node.child1)
            i = node.index
            out = (
                p1.times_literal(i, True) + p0.times_literal(i, False),
                q1.times_literal(i, True) + q0.times_literal(i, False),
            )
        elif isinstance(node, Chance):
            p, q = zero, zero
            for w, child in node.branches:
                cp, cq = build(child)
                p = p + cp.scale(w)
                q = q + cq.scale(w)
            out = (p, q)
        else:
            raise PostselError("nested programs have no polynomial form")
        memo[key] = out
        return out

    return build(prog.root)


def program_to_rational(prog: Program) -> PosRationalFunction:
    p, q = acceptance_polynomials(prog)
    if not q.positive_everywhere():
        vals = q.values_on_cube()
        x = next(i for i, v in enumerate(vals) if v == 0)
        raise PostselError(f"not a valid post-selected algorithm: Pr[output != bottom] = 0 on x={mask_to_bits(x, prog.n)}")
    return PosRationalFunction(p, q)


# ---------------------------------------------------------------------------
# rational function -> program (monomial sampling)
# ---------------------------------------------------------------------------


def _check_chain(requirements: list[tuple[int, int]], on_match: Node, on_mismatch: Node) -> Node:
    """Query each (variable, wanted bit) in order; any mismatch goes to ``on_mismatch``."""
    node = on_match
    for i, b in reversed(requirements):
        node = Query(i, node, on_mismatch) if b == 0 else Query(i, on_mismatch, node)
    return node


def _requirements(pos: int, neg: int, n: int) -> list[tuple[int, int]]:
    return [(i, 1 if (pos >> i) & 1 else 0) for i in range(n) if ((pos | neg) >> i) & 1]


def _two_outcome_weights(r: Fraction) -> tuple[Fraction, Fraction]:
    """Probabilities (answer 1 on accept, answer 0 on reject) with ratio 1 : r, largest equal to 1."""
    top = max(Fraction(1), r)
    return 1 / top, r / top


def rational_to_program(R: PosRationalFunction, k: int = 2, r=None, eps=None) -> Program:
    """Sample k monomials from P and Q by coefficient mass; answer 1 if all came
    from P and all hold, answer 0 with probability r if all came from Q and all
    hold, bottom otherwise.  The conditional probability of answering 1 is
    P^k / (P^k + r Q^k).

    ``r`` defaults to eps*(1-eps) when ``eps`` is given.  Values of r above 1
    are realised by scaling both answer probabilities, which leaves the
    conditional distribution unchanged.
    """
    if k < 1:
        raise PostselError("k must be at least 1")
    if r is None:
        if eps is None:
            raise PostselError("give r or eps")
        eps = Fraction(eps)
        r = eps * (1 - eps)
    r = Fraction(r)
    if r <= 0:
        raise PostselError("r must be positive")
    n = R.n
    P, Q = R.numerator, R.denominator
    gamma = P.coefficient_mass() + Q.coefficient_mass()
    if gamma <= 0:
        raise PostselError("rational function has no coefficient mass")
    w_one, w_zero = _two_outcome_weights(r)
    accept = chance([(w_one, ONE), (1 - w_one, BOTTOM)])
    reject = chance([(w_zero, ZERO), (1 - w_zero, BOTTOM)])

    branches: list[tuple[Fraction, Node]] = []
    pure_mass = Fraction(0)
    for poly, terminal in ((P, accept), (Q, reject)):
        groups: dict[tuple[int, int], Fraction] = {}
        terms = [(m, c / gamma) for m, c in poly.terms]
        for tup in product(terms, repeat=k):
            pos = neg = 0
            w = Fraction(1)
            for m, c in tup:
                pos |= m.pos
                neg |= m.neg
                w *= c
            pure_mass += w
            if pos & neg:
                groups[(-1, -1)] = groups.get((-1, -1), Fraction(0)) + w
            else:
                groups[(pos, neg)] = groups.get((pos, neg), Fraction(0)) + w
        for (pos, neg), w in sorted(groups.items()):
            if pos < 0:
                branches.append((w, BOTTOM))
            else:
                branches.append((w, _check_chain(_requirements(pos, neg, n), terminal, BOTTOM)))
    if pure_mass < 1:
        branches.append((1 - pure_mass, BOTTOM))
    return Program(n, chance(branches))


def optimal_r(eps, k: int, precision: int = 10**12) -> tuple[Fraction, bool]:
    """sqrt(eps^k (1-eps)^k); exact when the square root is rational, otherwise
    the rational floor(sqrt * precision)/precision-style approximation.

    Returns (r, exact).
    """
    eps = Fraction(eps)
    v = (eps * (1 - eps)) ** k
    a, b = v.numerator, v.denominator
    ra, rb = math.isqrt(a), math.isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb), True
    return Fraction(math.isqrt(a * precision * precision // b), precision), False


def failure_bound(eps, k: int) -> float:
    """sqrt(eps^k) / (sqrt(eps^k) + sqrt((1-eps)^k))."""
    eps = float(Fraction(eps))
    a = math.sqrt(eps**k)
    return a / (a + math.sqrt((1 - eps) ** k))


def failure_bound_exact(eps, k: int) -> Fraction:
    """The same bound for even k, where it is rational."""
    if k % 2:
        raise PostselError("exact failure bound needs even k")
    eps = Fraction(eps)
    a = eps ** (k // 2)
    return a / (a + (1 - eps) ** (k // 2))


# ---------------------------------------------------------------------------
# certificate algorithms
# ---------------------------------------------------------------------------


def _distinct_witnesses(f: BooleanFunction, label: Optional[int] = None) -> list[Certificate]:
    seen: dict[Certificate, None] = {}
    for x in f.domain_points():
        x = int(x)
        if label is not None and int(f.values[x]) != label:
            continue
        seen.setdefault(certificate_for(f, x), None)
    return list(seen)


def zero_error_program(f: BooleanFunction) -> Program:
    """Uniform choice among one minimum certificate per input; answer its label if x agrees, else bottom."""
    certs = _distinct_witnesses(f)
    w = Fraction(1, len(certs))
    branches = [(w, _check_chain(list(c.assignment), Leaf(c.label), BOTTOM)) for c in certs]
    return Program(f.n, chance(branches))


def one_sided_program(f: BooleanFunction, b: int) -> Program:
    """Uniform b-certificate; answer b if x agrees, else answer 1-b with probability 2^-(n+1)."""
    if b not in (0, 1):
        raise PostselError("b must be 0 or 1")
    certs = _distinct_witnesses(f, label=b)
    if not certs:
        raise PostselError(f"function has no {b}-inputs")
    q = Fraction(1, 2 ** (f.n + 1))
    miss = chance([(q, Leaf(1 - b)), (1 - q, BOTTOM)])
    w = Fraction(1, len(certs))
    return Program(f.n, chance([(w, _check_chain(list(c.assignment), Leaf(b), miss)) for c in certs]))


# ---------------------------------------------------------------------------
# named algorithms
# ---------------------------------------------------------------------------


def or_subtree(n: int, i: int) -> Program:
    """Query x_i: a 1 answers 1; a 0 answers 0 with probability 1/(2n), else bottom."""
    q = Fraction(1, 2 * n)
    return Program(n, Query(i, chance([(q, ZERO), (1 - q, BOTTOM)]), ONE))


def or_program(n: int) -> Program:
    return mix([(Fraction(1, n), or_subtree(n, i)) for i in range(n)])


def and_program(n: int) -> Program:
    q = Fraction(1, 2 * n)
    hit = chance([(q, ONE), (1 - q, BOTTOM)])
    return mix([(Fraction(1, n), Program(n, Query(i, ZERO, hit))) for i in range(n)])


def maj_default_r(n: int) -> Fraction:
    return Fraction(1, 2 * math.comb(n, n // 2 + 1))


def maj_program(n: int, r=None) -> Program:
    """Uniform subset of n/2+1 bits; all ones answers 1, otherwise 0 with probability r."""
    if n < 2 or n % 2:
        raise PostselError("majority algorithm needs even n >= 2")
    r = maj_default_r(n) if r is None else Fraction(r)
    if not 0 < r <= 1:
        raise PostselError("r must lie in (0, 1]")
    miss = chance([(r, ZERO), (1 - r, BOTTOM)])
    subsets = list(combinations(range(n), n // 2 + 1))
    w = Fraction(1, len(subsets))
    return Program(n, chance([(w, _check_chain([(i, 1) for i in s], ONE, miss)) for s in subsets]))


# ---------------------------------------------------------------------------
# guessing the input with a nested equality check
# ---------------------------------------------------------------------------


def equality_default_K(n: int) -> Fraction:
    return Fraction(2 * n * 2**n)


def equality_verifier(y: int, n: int, K) -> Program:
    """Uniform index i; x_i != y_i answers 0, otherwise 1 with probability 1/K."""
    K = Fraction(K)
    if K <= 0:
        raise PostselError("K must be positive")
    w_one, w_zero = _two_outcome_weights(K)
    # ratio (answer 1 on a match) : (answer 0 on a mismatch) = 1/K : 1 = 1 : K
    match = chance([(w_one, ONE), (1 - w_one, BOTTOM)])
    mismatch = chance([(w_zero, ZERO), (1 - w_zero, BOTTOM)])
    subtrees = []
    for i in range(n):
        if (y >> i) & 1:
            subtrees.append((Fraction(1, n), Query(i, mismatch, match)))
        else:
            subtrees.append((Fraction(1, n), Query(i, match, mismatch)))
    return Program(n, chance(subtrees))


def _check_equality_size(n: int, cap: int):
    if n > cap:
        raise CapExceeded(f"equality construction enumerates 2^n guesses; n={n} exceeds cap {cap}")


def equality_program(f: BooleanFunction, K=None, cap: int = EQUALITY_CAP) -> NestedProgram:
    """Guess y uniformly from the domain, run the equality verifier as a
    post-selected subroutine, answer f(y) if it accepts, else bottom.
    One query to x in total."""
    n = f.n
    _check_equality_size(n, cap)
    K = equality_default_K(n) if K is None else Fraction(K)
    ys = [int(y) for y in f.domain_points()]
    w = Fraction(1, len(ys))
    branches = [(w, Call(equality_verifier(y, n, K).root, Leaf(int(f.values[y])), BOTTOM)) for y in ys]
    return NestedProgram(n, Chance(branches) if len(branches) > 1 else branches[0][1])


def flat_equality_program(f: BooleanFunction, K=None, cap: int = EQUALITY_CAP) -> Program:
    """The same guess-and-verify structure with a single post-selection:
    the verifier's 1 answers f(y) and its 0 becomes bottom."""
    n = f.n
    _check_equality_size(n, cap)
    K = equality_default_K(n) if K is None else Fraction(K)
    ys = [int(y) for y in f.domain_points()]
    w = Fraction(1, len(ys))
    branches = []
    for y in ys:
        hit = chance([(min(Fraction(1), 1 / K), Leaf(int(f.values[y]))), (1 - min(Fraction(1), 1 / K), BOTTOM)])
        subs = [
            (Fraction(1, n), Query(i, BOTTOM, hit) if (y >> i) & 1 else Query(i, hit, BOTTOM)) for i in range(n)
        ]
        branches.append((w, chance(subs)))
    return Program(n, chance(branches))
