"""Reproduction checks, one per acceptance criterion, shared by the CLI and the test suite.

Each check returns a CriterionResult; none of them raise on a failed check.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable

from .boolean import (
    BooleanFunction,
    and_function,
    certificate_complexity,
    majority,
    ndeg_symmetric,
    not_middle,
    or_function,
    parity,
)
from .counting import CountingParams, counting_verifier, weak_count
from .degree import FeasibilityInstance, lp_feasible, maj_lower_bound, rdeg_plus, symmetric_lower_bound
from .poly import LiteralPolynomial, Monomial, approx_error, or_rational, symmetrize, symmetrize_brute
from .program import conditional_success, distribution_table, query_depth
from .transforms import (
    and_program,
    equality_default_K,
    equality_program,
    failure_bound,
    maj_program,
    one_sided_program,
    optimal_r,
    or_program,
    program_to_rational,
    rational_to_program,
    zero_error_program,
)

THIRD = Fraction(1, 3)


@dataclass
class CriterionResult:
    cid: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0
    failures: list[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.cid:>2}: {self.title} ({self.seconds:.2f}s) {self.detail}"


def _all_functions(n: int):
    for table in range(1 << (1 << n)):
        yield BooleanFunction.from_table(n, [(table >> x) & 1 for x in range(1 << n)], name=f"T{table}")


def _timed(cid: int, title: str, budget: float, body: Callable[[list[str]], str]) -> CriterionResult:
    fails: list[str] = []
    start = time.perf_counter()
    detail = body(fails)
    secs = time.perf_counter() - start
    if secs > budget:
        fails.append(f"runtime {secs:.1f}s over budget {budget:.0f}s")
    if fails:
        detail = f"{detail}; first problem: {fails[0]}"
    return CriterionResult(cid, title, not fails, detail, secs, fails)


def criterion_1() -> CriterionResult:
    def body(fails):
        worst_overall = Fraction(1)
        for n in range(1, 17):
            prog, f = or_program(n), or_function(n)
            if query_depth(prog) != 1:
                fails.append(f"n={n}: depth {query_depth(prog)}")
            rep = conditional_success(prog, f)
            worst_overall = min(worst_overall, rep.worst)
            if rep.worst < Fraction(2, 3):
                fails.append(f"n={n}: worst {rep.worst}")
            if rep.per_input[0] != 1:
                fails.append(f"n={n}: conditional-0 on all-zero input is {rep.per_input[0]}")
        return f"n=1..16 depth 1, worst conditional success {worst_overall}"

    return _timed(1, "OR at query depth 1", 1.0, body)


def criterion_2() -> CriterionResult:
    def body(fails):
        count = 0
        for f in _all_functions(3):
            prog = zero_error_program(f)
            c = certificate_complexity(f).c
            rep = conditional_success(prog, f)
            if rep.worst != 1:
                fails.append(f"{f.name}: worst {rep.worst}")
            if query_depth(prog) != c:
                fails.append(f"{f.name}: depth {query_depth(prog)} vs C={c}")
            count += 1
        return f"{count} functions on n=3, success 1 and depth = C(f)"

    return _timed(2, "zero-error certificate programs", 60.0, body)


def criterion_3() -> CriterionResult:
    def body(fails):
        count = 0
        for f in _all_functions(3):
            if f.is_constant():
                continue
            rep = certificate_complexity(f)
            for b in (0, 1):
                prog = one_sided_program(f, b)
                cb = rep.c1 if b else rep.c0
                if query_depth(prog) > cb:
                    fails.append(f"{f.name} b={b}: depth {query_depth(prog)} > C_b={cb}")
                succ = conditional_success(prog, f).per_input
                for x, v in succ.items():
                    if f.values[x] == b and not v > Fraction(2, 3):
                        fails.append(f"{f.name} b={b} x={x}: {v}")
                    if f.values[x] != b and v != 1:
                        fails.append(f"{f.name} b={b} x={x}: {v} on a {1 - b}-input")
                count += 1
        return f"{count} (function, b) pairs on n=3"

    return _timed(3, "one-sided certificate programs", 60.0, body)


def program_suite():
    progs = [(f"OR{n}", or_program(n)) for n in range(1, 7)]
    progs += [(f"AND{n}", and_program(n)) for n in range(1, 7)]
    progs += [("MAJ4", maj_program(4)), ("MAJ6", maj_program(6))]
    progs += [(f"ZE-{f.name}", zero_error_program(f)) for f in _all_functions(3)]
    return progs


def criterion_4() -> CriterionResult:
    def body(fails):
        suite = program_suite()
        for name, prog in suite:
            R = program_to_rational(prog)
            if any(c < 0 for _, c in R.P.terms + R.Q.terms):
                fails.append(f"{name}: negative coefficient")
            if R.degree > query_depth(prog):
                fails.append(f"{name}: degree {R.degree} > depth {query_depth(prog)}")
            n0, n1, _, _ = distribution_table(prog)
            for x, v in enumerate(R.values_on_cube()):
                if v * (int(n0[x]) + int(n1[x])) != int(n1[x]):
                    fails.append(f"{name}: mismatch at x={x}")
                    break
        return f"{len(suite)} programs, exact agreement on every input"

    return _timed(4, "program to rational function", 60.0, body)


def criterion_5() -> CriterionResult:
    def body(fails):
        cases = [
            ("P_OR(4,1/10)", or_rational(4, Fraction(1, 10)), or_function(4)),
            ("MAJ4 rational", program_to_rational(maj_program(4)), majority(4)),
        ]
        notes = []
        for name, R, f in cases:
            P, Q = R.P.values_on_cube(), R.Q.values_on_cube()
            for k in (1, 2, 3):
                r, exact = optimal_r(THIRD, k)
                prog = rational_to_program(R, k, r)
                n0, n1, _, _ = distribution_table(prog)
                for x in range(1 << R.n):
                    want = P[x] ** k / (P[x] ** k + r * Q[x] ** k)
                    if Fraction(int(n1[x]), int(n0[x]) + int(n1[x])) != want:
                        fails.append(f"{name} k={k}: mismatch at x={x}")
                        break
                if not exact and f"k={k} r~{float(r):.6f}" not in notes:
                    notes.append(f"k={k} r~{float(r):.6f}")
                if prog.depth > k * R.degree:
                    fails.append(f"{name} k={k}: depth {prog.depth} > k*deg")
            prog = rational_to_program(R, 2, THIRD * (1 - THIRD))
            worst = conditional_success(prog, f).worst
            if 1 - worst > THIRD:
                fails.append(f"{name}: k=2 error {1 - worst}")
            notes.append(f"{name} k=2 error {1 - worst}")
        if failure_bound(THIRD, 2) > 1 / 3 + 1e-12:
            fails.append("k=2 failure bound above 1/3")
        return "; ".join(notes)

    return _timed(5, "rational function to program", 120.0, body)


def criterion_6() -> CriterionResult:
    def body(fails):
        notes = []
        for n in (4, 6, 8):
            f = majority(n)
            for r in (None, Fraction(1, 10**6)):
                prog = maj_program(n, r)
                if query_depth(prog) != n // 2 + 1:
                    fails.append(f"n={n}: depth {query_depth(prog)}")
                per = conditional_success(prog, f).per_input
                ones = min(v for x, v in per.items() if f.values[x])
                zeros = min(v for x, v in per.items() if not f.values[x])
                if zeros != 1:
                    fails.append(f"n={n}: error on a 0-input")
                if r is None and ones < Fraction(2, 3):
                    fails.append(f"n={n}: conditional-1 {ones} at default r")
                if r is not None and 1 - ones >= Fraction(1, 10**4):
                    fails.append(f"n={n}: 1-side error {1 - ones} at r=1e-6")
                if r is not None:
                    notes.append(f"n={n} error {float(1 - ones):.2e}")
        return "depth n/2+1; " + ", ".join(notes)

    return _timed(6, "Majority upper bound", 60.0, body)


def criterion_7() -> CriterionResult:
    def body(fails):
        for n in range(2, 129, 2):
            if maj_lower_bound(n, THIRD) < math.ceil(n / 8):
                fails.append(f"n={n}: bound {maj_lower_bound(n, THIRD)}")
        f = majority(8)
        notes = []
        for sym, budget in ((True, 10.0), (False, 600.0)):
            t = time.perf_counter()
            low = lp_feasible(FeasibilityInstance(f, 1, THIRD), symmetric=sym)
            high = lp_feasible(FeasibilityInstance(f, 5, THIRD), symmetric=sym)
            secs = time.perf_counter() - t
            label = "collapsed" if sym else "full"
            if low.feasible:
                fails.append(f"{label} LP: d=1 feasible")
            if not high.feasible:
                fails.append(f"{label} LP: d=5 infeasible")
            if secs > budget:
                fails.append(f"{label} LP took {secs:.1f}s")
            notes.append(f"{label} LP {secs:.1f}s")
        return f"bound(8)={maj_lower_bound(8, THIRD)}; d=1 infeasible, d=5 feasible; " + ", ".join(notes)

    return _timed(7, "Majority lower bound and LP", 610.0, body)


def _symmetric_nonconstant(n: int):
    for bits in product((0, 1), repeat=n + 1):
        if 0 < sum(bits) < n + 1:
            yield BooleanFunction.from_profile(n, bits, name="".join(map(str, bits)))


def criterion_8() -> CriterionResult:
    def body(fails):
        count = 0
        for n in (4, 6):
            for f in _symmetric_nonconstant(n):
                d = rdeg_plus(f, THIRD, n)
                lb = symmetric_lower_bound(f, THIRD)
                if d is None or d < lb:
                    fails.append(f"profile {f.name}: rdeg {d} < bound {lb}")
                count += 1
        sep = not_middle(8)
        nd = ndeg_symmetric(sep).degree
        d1 = lp_feasible(FeasibilityInstance(sep, 1, THIRD)).feasible
        if nd != 1:
            fails.append(f"ndeg of separation function is {nd}")
        if d1:
            fails.append("separation function feasible at d=1")
        return f"{count} symmetric functions; separation n=8: ndeg 1, d=1 infeasible so rdeg >= 2"

    return _timed(8, "symmetric lower bound sweep", 1800.0, body)


def random_polynomial(rng: random.Random, n: int) -> LiteralPolynomial:
    terms = {}
    for _ in range(rng.randint(1, 8)):
        pos = neg = 0
        for i in range(n):
            c = rng.randrange(3)
            if c == 1:
                pos |= 1 << i
            elif c == 2:
                neg |= 1 << i
        terms[Monomial(pos, neg)] = Fraction(rng.randint(1, 20), rng.randint(1, 12))
    return LiteralPolynomial(n, terms)


def criterion_9(seed: int = 2024) -> CriterionResult:
    def body(fails):
        rng = random.Random(seed)
        for j in range(200):
            n = rng.randint(1, 6)
            p = random_polynomial(rng, n)
            sym = symmetrize(p)
            for k in range(n + 1):
                if sym(k) != symmetrize_brute(p, k):
                    fails.append(f"polynomial {j} (n={n}) differs at k={k}")
        return "200 random polynomials, n <= 6, every weight"

    return _timed(9, "symmetrization closed form", 60.0, body)


def criterion_10(trials: int = 200, seed: int = 0) -> CriterionResult:
    def body(fails):
        for n in range(1, 9):
            params = CountingParams(n, 2)
            for A in range(1, n + 1):
                n0, n1, _, _ = distribution_table(counting_verifier(A, params))
                for x in range(1 << n):
                    w = bin(x).count("1")
                    if n0[x] + n1[x] == 0:
                        fails.append(f"n={n} A={A}: impossible at x={x}")
                        continue
                    c1 = Fraction(int(n1[x]), int(n0[x]) + int(n1[x]))
                    if 2 * A < w and c1 < Fraction(2, 3):
                        fails.append(f"n={n} A={A} |x|={w}: {c1} < 2/3")
                    if A > 2 * w and 2 * w <= n and c1 > THIRD:
                        fails.append(f"n={n} A={A} |x|={w}: {c1} > 1/3")
        notes = []
        for w in (1, 8, 32, 63):
            x = "1" * w + "0" * (64 - w)
            good = sum(w / 2 <= weak_count(x, THIRD, seed * 100003 + s).estimate <= 4 * w for s in range(trials))
            notes.append(f"|x|={w}: {good}/{trials}")
            if 3 * good < 2 * trials:
                fails.append(f"|x|={w}: only {good}/{trials} in range")
        return "thresholds exact for n <= 8; " + ", ".join(notes)

    return _timed(10, "approximate counting", 120.0, body)


def criterion_11() -> CriterionResult:
    def body(fails):
        notes = []
        for n in (2, 3, 4):
            for f in (parity(n), and_function(n)):
                prog = equality_program(f, equality_default_K(n))
                worst = conditional_success(prog, f).worst
                if worst < Fraction(2, 3):
                    fails.append(f"{f.name}: worst {worst}")
                if query_depth(prog) != 1:
                    fails.append(f"{f.name}: depth {query_depth(prog)}")
                notes.append(f"{f.name} {float(worst):.3f}")
        return "nested equality programs, depth 1: " + ", ".join(notes)

    return _timed(11, "guess-and-verify with nested post-selection", 10.0, body)


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
}


def run(cid: int) -> CriterionResult:
    if cid not in CRITERIA:
        raise KeyError(f"unknown criterion {cid}; choose 1..{len(CRITERIA)}")
    return CRITERIA[cid]()
