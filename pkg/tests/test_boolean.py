import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from postsel.boolean import (
    BooleanFunction,
    and_function,
    as_mask,
    certificate_complexity,
    constant,
    forces,
    format_function,
    gamma,
    is_nondeterministic_poly,
    majority,
    mask_to_bits,
    ndeg_symmetric,
    not_middle,
    or_function,
    parse_function,
    parity,
)
from postsel.errors import FormatError, PostselError
from postsel.univariate import UnivariatePolynomial

from oracles import all_profiles, brute_certificate_sizes


def table_function(n, table):
    return BooleanFunction.from_table(n, [(table >> x) & 1 for x in range(1 << n)])


def test_bit_order_leftmost_is_first_variable():
    assert as_mask("100", 3) == 1
    assert mask_to_bits(1, 3) == "100"
    assert or_function(3)("010") == 1


@pytest.mark.parametrize("n", [1, 2, 4, 7])
def test_or_certificates(n):
    rep = certificate_complexity(or_function(n))
    assert (rep.c1, rep.c0, rep.c) == (1, n, n)


def test_constant_one_has_empty_certificates():
    rep = certificate_complexity(constant(3, 1))
    assert (rep.c0, rep.c1, rep.c) == (0, 0, 0)
    assert all(c.size == 0 for c in rep.witnesses.values())


def test_maj4_certificates_match_brute_force():
    f = BooleanFunction.from_profile(4, [0, 0, 0, 1, 1])
    rep = certificate_complexity(f)
    sizes = brute_certificate_sizes(f)
    c0 = max(s for x, s in sizes.items() if f.values[x] == 0)
    c1 = max(s for x, s in sizes.items() if f.values[x] == 1)
    assert (c0, c1) == (2, 3)
    assert (rep.c0, rep.c1, rep.c) == (2, 3, 3)


def test_nondeterministic_measures_equal_certificate_measures():
    rep = certificate_complexity(majority(5))
    assert (rep.n0, rep.n1, rep.n) == (rep.c0, rep.c1, rep.c)


def test_all_n3_functions_against_brute_force():
    for table in range(256):
        f = table_function(3, table)
        rep = certificate_complexity(f)
        sizes = brute_certificate_sizes(f)
        for x, cert in rep.witnesses.items():
            assert cert.size == sizes[x]
            assert cert.consistent_with(x)
            assert cert.label == f.values[x]
            assert forces(f, cert)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**16 - 1))
def test_witnesses_force_value_n4(table):
    f = table_function(4, table)
    rep = certificate_complexity(f)
    sizes = brute_certificate_sizes(f)
    for x, cert in rep.witnesses.items():
        assert cert.consistent_with(x) and forces(f, cert)
        assert cert.size == sizes[x]


def test_witness_tie_break_is_lexicographic():
    # x = 11 for AND on 2 bits needs both variables; x = 00 can use variable 1 or 2
    rep = certificate_complexity(and_function(2))
    assert rep.witnesses[0].assignment == ((0, 0),)
    assert rep.witnesses[as_mask("01", 2)].assignment == ((0, 0),)
    assert rep.witnesses[as_mask("10", 2)].assignment == ((1, 0),)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 255), st.integers(1, 255))
def test_restriction_never_increases_certificate_complexity(table, keep_mask):
    f = table_function(3, table)
    keep = [x for x in range(8) if (keep_mask >> x) & 1]
    g = f.restrict(keep)
    assert certificate_complexity(g).c <= certificate_complexity(f).c


def test_partial_function_certificates_only_use_domain():
    # promise: input has weight 0 or 3
    f = BooleanFunction.from_profile(3, [0, None, None, 1])
    rep = certificate_complexity(f)
    assert rep.c0 == 1 and rep.c1 == 1


def test_gamma_examples():
    for n in (3, 6, 9):
        g = gamma(or_function(n))
        assert (g.gamma, g.t) == (n - 1, 0)
    for n in (4, 8):
        g = gamma(majority(n))
        assert (g.gamma, g.t) == (1, n // 2)
    g = gamma(not_middle(8))
    assert (g.gamma, g.t) == (1, 3)


def test_gamma_rejects_constant():
    with pytest.raises(PostselError, match="no step change"):
        gamma(constant(4, 1))


def test_ndeg_examples():
    f = BooleanFunction.from_profile(4, [1, 1, 0, 1, 1])
    p = ndeg_symmetric(f)
    assert p.degree == 1 and p == UnivariatePolynomial([-2, 1])
    p = ndeg_symmetric(and_function(3))
    assert p.degree == 3 and p == UnivariatePolynomial.from_roots([0, 1, 2])
    assert ndeg_symmetric(or_function(5)) == UnivariatePolynomial([0, 1])
    with pytest.raises(PostselError):
        ndeg_symmetric(constant(3, 0))


def test_is_nondeterministic_poly_examples():
    f = BooleanFunction.from_profile(4, [1, 1, 0, 1, 1])
    assert is_nondeterministic_poly(UnivariatePolynomial([-2, 1]), f)
    assert not is_nondeterministic_poly(UnivariatePolynomial([0, 1]), and_function(3))


@pytest.mark.parametrize("n", range(1, 7))
def test_ndeg_symmetric_is_valid_for_every_profile(n):
    for prof in all_profiles(n):
        if not any(prof):
            continue
        f = BooleanFunction.from_profile(n, prof)
        p = ndeg_symmetric(f)
        assert p.degree == prof.count(0)
        assert is_nondeterministic_poly(p, f)


def test_multilinear_nondeterministic_poly():
    from postsel.poly import LiteralPolynomial

    # sum of x_i is non-zero exactly on OR's 1-inputs
    assert is_nondeterministic_poly(LiteralPolynomial.sum_of_variables(3), or_function(3))


def test_builtins_agree_with_definitions():
    for n in (3, 4, 5):
        for x in range(1 << n):
            w = bin(x).count("1")
            assert majority(n)(x) == int(w > n / 2)
            assert parity(n)(x) == w % 2
            assert not_middle(n)(x) == int(w != -(-n // 2))


@pytest.mark.parametrize(
    "f",
    [majority(4), parity(3), BooleanFunction.from_profile(3, [0, None, 1, 1]), BooleanFunction.from_points(2, {"10": 1, "01": 0})],
)
def test_format_round_trip(f):
    text = format_function(f)
    g = parse_function(text)
    assert g == f
    assert format_function(g) == text


def test_parse_errors_name_the_line():
    with pytest.raises(FormatError, match="line 3"):
        parse_function("n=2 partial general\nbits=10 value=1\nbits=01 value=7\n")
    with pytest.raises(FormatError, match="line 1"):
        parse_function("n=2 sometimes general\n")


def test_profile_must_match_table():
    with pytest.raises(PostselError):
        BooleanFunction(2, np.array([0, 1, 0, 0]), np.ones(4, bool), (0, 1, 0))


def test_empty_domain_rejected():
    with pytest.raises(PostselError):
        BooleanFunction.from_table(2, [0, 0, 0, 0], [False] * 4)
