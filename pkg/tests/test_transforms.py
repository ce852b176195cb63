from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from postsel.boolean import (
    BooleanFunction,
    and_function,
    builtin,
    certificate_complexity,
    constant,
    majority,
    or_function,
    parity,
)
from postsel.degree import rdeg_plus_search
from postsel.errors import CapExceeded, PostselError
from postsel.poly import LiteralPolynomial, Monomial, PosRationalFunction, eval_rational, or_rational
from postsel.program import (
    BOTTOM,
    ONE,
    ZERO,
    Chance,
    Program,
    Query,
    conditional_one,
    conditional_success,
    exact_distribution,
    query_depth,
)
from postsel.transforms import (
    and_program,
    equality_default_K,
    equality_program,
    equality_verifier,
    failure_bound,
    failure_bound_exact,
    flat_equality_program,
    maj_program,
    one_sided_program,
    optimal_r,
    or_program,
    program_to_rational,
    rational_to_program,
    zero_error_program,
)

F = Fraction


def mono(pos=(), neg=()):
    return Monomial.of(pos=[i - 1 for i in pos], neg=[i - 1 for i in neg])


@st.composite
def rationals(draw, n=3, max_deg=2):
    def poly():
        terms = {}
        for _ in range(draw(st.integers(1, 4))):
            vars_ = draw(st.lists(st.integers(1, n), max_size=max_deg, unique=True))
            signs = [draw(st.booleans()) for _ in vars_]
            m = mono([v for v, s in zip(vars_, signs) if s], [v for v, s in zip(vars_, signs) if not s])
            terms[m] = F(draw(st.integers(1, 9)), draw(st.integers(1, 5)))
        return LiteralPolynomial(n, terms)

    P = poly() if draw(st.booleans()) else LiteralPolynomial.zero(n)
    Q = poly() + LiteralPolynomial.constant(n, F(draw(st.integers(1, 4)), 7))
    return PosRationalFunction(P, Q)


# program -> rational ----------------------------------------------------------


def test_one_bit_example():
    prog = Program(1, Query(0, Chance([(F(1, 2), ZERO), (F(1, 2), BOTTOM)]), ONE))
    R = program_to_rational(prog)
    assert R.P == LiteralPolynomial(1, {mono([1]): 1})
    assert R.Q == LiteralPolynomial(1, {mono([1]): 1, mono(neg=[1]): F(1, 2)})


def test_and_program_polynomials():
    n = 3
    R = program_to_rational(and_program(n))
    c = F(1, 2 * n)
    assert R.P == LiteralPolynomial.sum_of_variables(n, c / n)
    expected_q = LiteralPolynomial.sum_of_variables(n, c / n) + LiteralPolynomial.sum_of_variables(n, F(1, n), True)
    assert R.Q == expected_q


def test_leaf_one():
    R = program_to_rational(Program(2, ONE))
    assert R.P == R.Q == LiteralPolynomial.constant(2, 1)


def test_invalid_program_names_input():
    with pytest.raises(PostselError, match="x=11"):
        program_to_rational(Program(2, Query(0, ZERO, Query(1, ZERO, BOTTOM))))


@pytest.mark.parametrize(
    "prog",
    [or_program(3), and_program(3), maj_program(4), zero_error_program(majority(4)), one_sided_program(parity(3), 1)],
    ids=["or3", "and3", "maj4", "zero_error_maj4", "one_sided_parity3"],
)
def test_program_to_rational_round_trip(prog):
    R = program_to_rational(prog)
    assert R.degree <= query_depth(prog)
    for x in range(1 << prog.n):
        assert eval_rational(R, x) == conditional_one(prog, x)


# rational -> program ------------------------------------------------------------


def test_or_rational_example():
    prog = rational_to_program(or_rational(2, F(1, 10)), k=2, r=F(9, 100))
    assert conditional_one(prog, "11") == F(4) / (4 + F(3969, 10000))
    assert conditional_one(prog, "00") == 0


def test_trivial_rational_gives_coin():
    one = LiteralPolynomial.constant(2, 1)
    prog = rational_to_program(PosRationalFunction(one, one), k=1, r=1)
    assert all(conditional_one(prog, x) == F(1, 2) for x in range(4))


@settings(max_examples=25, deadline=None)
@given(rationals(), st.integers(1, 3), st.sampled_from([F(1, 10), F(2, 9), F(1), F(7, 2)]))
def test_rational_to_program_formula(R, k, r):
    prog = rational_to_program(R, k=k, r=r)
    assert query_depth(prog) <= k * R.degree
    for x in range(8):
        p, q = R.P.evaluate_mask(x), R.Q.evaluate_mask(x)
        assert conditional_one(prog, x) == p**k / (p**k + r * q**k)


def test_rational_to_program_errors():
    R = or_rational(2, F(1, 3))
    with pytest.raises(PostselError):
        rational_to_program(R, k=0, r=1)
    with pytest.raises(PostselError):
        rational_to_program(R, k=2, r=0)
    with pytest.raises(PostselError):
        rational_to_program(R, k=2)


def test_optimal_r_and_failure_bound():
    r, exact = optimal_r(F(1, 3), 2)
    assert exact and r == F(2, 9)
    assert failure_bound_exact(F(1, 3), 2) == F(1, 3)
    assert abs(failure_bound(F(1, 3), 2) - 1 / 3) < 1e-12
    r1, exact1 = optimal_r(F(1, 3), 1)
    assert not exact1 and abs(float(r1) - (2 / 9) ** 0.5) < 1e-12


def test_optimal_r_attains_bound():
    # R approximating OR with error 1/3 at the worst input, boosted with k=2
    eps = F(1, 3)
    R = or_rational(3, F(1, 2))
    r, _ = optimal_r(eps, 2)
    prog = rational_to_program(R, k=2, r=r)
    worst = 1 - conditional_success(prog, or_function(3)).worst
    assert worst <= failure_bound_exact(eps, 2)


# certificate programs ---------------------------------------------------------------


def test_zero_error_examples():
    rep = conditional_success(zero_error_program(or_function(2)), or_function(2))
    assert rep.worst == 1 and query_depth(zero_error_program(or_function(2))) == 2
    assert query_depth(zero_error_program(constant(3, 1))) == 0
    maj = zero_error_program(majority(4))
    assert query_depth(maj) == 3
    assert conditional_success(maj, majority(4)).worst == 1


def test_zero_error_partial_function():
    f = BooleanFunction.from_points(3, {0b000: 0, 0b111: 1, 0b011: 1})
    prog = zero_error_program(f)
    assert conditional_success(prog, f).worst == 1
    assert query_depth(prog) <= certificate_complexity(f).c


def test_one_sided_examples():
    n = 4
    prog = one_sided_program(or_function(n), 1)
    assert query_depth(prog) == 1
    assert conditional_one(prog, 0) == 0
    rep = conditional_success(prog, or_function(n))
    assert rep.worst > F(2, 3)
    assert query_depth(one_sided_program(and_function(n), 0)) == 1
    assert all(conditional_one(one_sided_program(constant(2, 1), 1), x) == 1 for x in range(4))
    with pytest.raises(PostselError):
        one_sided_program(constant(2, 1), 0)


@pytest.mark.parametrize("name", ["or", "and", "maj", "parity", "notmid"])
@pytest.mark.parametrize("b", [0, 1])
def test_one_sided_guarantee(name, b):
    f = builtin(name, 4)
    prog = one_sided_program(f, b)
    certs = certificate_complexity(f)
    assert query_depth(prog) <= (certs.c1 if b else certs.c0)
    for x in range(16):
        want = int(f.values[x])
        p_b = conditional_one(prog, x) if b else 1 - conditional_one(prog, x)
        if want == b:
            assert p_b > F(2, 3)
        else:
            assert p_b == 0


# named programs -----------------------------------------------------------------------


def test_or_program_examples():
    assert conditional_one(or_program(2), "10") == F(4, 5)
    assert conditional_one(or_program(5), 0) == 0
    assert conditional_one(or_program(1), "1") == 1
    for n in range(1, 9):
        rep = conditional_success(or_program(n), or_function(n))
        assert rep.worst >= F(2, 3)


def test_and_program_examples():
    assert conditional_one(and_program(2), "10") == F(1, 5)
    for n in range(2, 7):
        x = (1 << (n - 1)) - 1
        assert conditional_one(and_program(n), x) == F(n - 1, 3 * n - 1)
        assert conditional_one(and_program(n), (1 << n) - 1) == 1
    assert exact_distribution(Program(2, and_program(2).root.branches[0][1]), "00").p0 == 1


def test_maj_program_examples():
    assert conditional_one(maj_program(4), "1110") == F(8, 11)
    assert conditional_one(maj_program(4, F(1, 100)), "1110") == F(100, 103)
    for x in range(16):
        if bin(x).count("1") <= 2:
            assert conditional_one(maj_program(4), x) == 0


def test_maj_program_monotone_in_r():
    rs = [F(1, 200), F(1, 50), F(1, 8), F(1, 2), F(1)]
    for n in (4, 6):
        f = majority(n)
        ones = [x for x in range(1 << n) if f.values[x] == 1]
        for x in ones:
            vals = [conditional_one(maj_program(n, r), x) for r in rs]
            assert vals == sorted(vals, reverse=True)
        assert conditional_success(maj_program(n), f).worst >= F(2, 3)


def test_maj_program_errors():
    with pytest.raises(PostselError):
        maj_program(5)
    with pytest.raises(PostselError):
        maj_program(4, 0)


# guess and verify ------------------------------------------------------------------


def test_equality_verifier_accepts_its_guess():
    n, K = 3, equality_default_K(3)
    for y in range(8):
        assert conditional_one(equality_verifier(y, n, K), y) == 1


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("name", ["parity", "maj", "and", "notmid"])
def test_equality_program_one_query(n, name):
    f = builtin(name, n)
    prog = equality_program(f)
    assert query_depth(prog) == 1
    assert conditional_success(prog, f).worst >= F(2, 3)


def test_equality_program_n2_bound():
    n = 2
    f = parity(n)
    rep = conditional_success(equality_program(f, K=16), f)
    assert rep.worst >= 1 / (1 + F(1, 2 * 2**n) * 2**n)


def test_equality_cap_and_K():
    with pytest.raises(CapExceeded):
        equality_program(parity(7))
    with pytest.raises(PostselError):
        equality_verifier(0, 2, 0)


def test_flat_guessing_cannot_compute_parity():
    # one query under a single post-selection is a degree-1 rational form,
    # and parity on 3 bits needs degree at least 2
    f = parity(3)
    flat = flat_equality_program(f)
    assert query_depth(flat) == 1
    assert conditional_success(flat, f).worst <= F(1, 2)
    assert rdeg_plus_search(f, F(1, 3), d_max=1).degree is None


# degree and depth sandwich ------------------------------------------------------


@pytest.mark.parametrize("name,n", [("or", 3), ("and", 3), ("maj", 4), ("parity", 2), ("notmid", 3)])
def test_depth_degree_sandwich(name, n):
    eps = F(1, 3)
    f = builtin(name, n)
    res = rdeg_plus_search(f, eps)
    d = res.degree
    prog = rational_to_program(res.witness, k=2, eps=eps)
    assert query_depth(prog) <= 2 * d
    assert conditional_success(prog, f).worst >= 1 - eps
    for built in (zero_error_program(f), one_sided_program(f, 1)):
        if conditional_success(built, f).worst >= 1 - eps:
            assert d <= query_depth(built)
