from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from postsel import degree
from postsel.boolean import BooleanFunction, builtin, constant, majority, not_middle, or_function, parity
from postsel.degree import (
    FeasibilityInstance,
    lp_feasible,
    maj_lower_bound,
    monomials_up_to,
    rdeg_plus,
    rdeg_plus_search,
    symmetric_lower_bound,
    symmetric_lower_bound_report,
    symmetric_quadratic_bound,
)
from postsel.errors import CapExceeded, PostselError
from postsel.poly import approx_error
from postsel.program import conditional_success, query_depth
from postsel.transforms import maj_program, program_to_rational, zero_error_program

F = Fraction
THIRD = F(1, 3)


def symmetric_functions(n):
    for prof in product([0, 1], repeat=n + 1):
        if len(set(prof)) > 1:
            yield prof, BooleanFunction.from_profile(n, prof)


def test_monomial_count():
    # sum over sizes s <= d of C(n, s) 2^s
    assert len(monomials_up_to(3, 2)) == 1 + 6 + 12
    assert len(monomials_up_to(3, 2, include_constant=False)) == 18


def test_constant_feasible_at_zero():
    v = lp_feasible(FeasibilityInstance(constant(3, 1), 0, F(1, 5)))
    assert v.feasible and v.witness.degree == 0
    assert approx_error(v.witness, constant(3, 1)) <= F(1, 5)
    assert rdeg_plus(constant(4, 0), THIRD) == 0


def test_or_degree_one():
    v = lp_feasible(FeasibilityInstance(or_function(4), 1, THIRD), symmetric=False)
    assert v.feasible and v.witness.degree <= 1
    assert approx_error(v.witness, or_function(4)) <= THIRD
    for n in range(1, 7):
        assert rdeg_plus(or_function(n), THIRD) == 1


def test_majority_values():
    assert rdeg_plus(majority(4), THIRD) == 1
    assert rdeg_plus(majority(6), THIRD) == 2
    d8 = rdeg_plus(majority(8), THIRD)
    assert maj_lower_bound(8, THIRD) <= d8 <= 5
    assert not lp_feasible(FeasibilityInstance(majority(8), 1, THIRD)).feasible


def test_parity_needs_full_degree():
    for n in (2, 3):
        assert rdeg_plus(parity(n), THIRD) == n


def test_d_max_cut_off():
    res = rdeg_plus_search(majority(6), THIRD, d_max=1)
    assert res.degree is None and set(res.verdicts) == {0, 1}


@pytest.mark.parametrize("name", ["or", "and", "maj", "notmid", "parity"])
def test_monotone_and_sound(name):
    f = builtin(name, 4)
    for eps in (F(1, 10), THIRD):
        verdicts = [lp_feasible(FeasibilityInstance(f, d, eps), symmetric=False) for d in range(5)]
        flags = [v.feasible for v in verdicts]
        assert flags == sorted(flags)
        for v in verdicts:
            if v.feasible:
                assert approx_error(v.witness, f) <= eps
                assert min(v.witness.Q.values_on_cube()) >= 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_collapsed_matches_full(n):
    for _, f in symmetric_functions(n):
        for d in range(min(n, 2) + 1):
            inst = FeasibilityInstance(f, d, THIRD)
            assert lp_feasible(inst, symmetric=True).feasible == lp_feasible(inst, symmetric=False).feasible


def test_screened_matches_exact(monkeypatch):
    cases = [(majority(6), 1), (majority(6), 2), (not_middle(5), 1), (parity(4), 3), (or_function(5), 1)]
    exact = [lp_feasible(FeasibilityInstance(f, d, THIRD), symmetric=False, method="exact") for f, d in cases]
    monkeypatch.setattr(degree, "EXACT_COLUMN_LIMIT", 0)
    screened = [lp_feasible(FeasibilityInstance(f, d, THIRD), symmetric=False) for f, d in cases]
    assert [v.feasible for v in screened] == [v.feasible for v in exact]
    assert all(v.method == "full-screened" for v in screened)


def test_partial_function_lp():
    # promise: only weights 0 and n matter
    f = BooleanFunction.from_points(4, {0: 0, 15: 1})
    assert rdeg_plus(f, THIRD) == 1


def test_instance_validation():
    with pytest.raises(PostselError):
        FeasibilityInstance(or_function(3), 4, THIRD)
    with pytest.raises(PostselError):
        FeasibilityInstance(or_function(3), 1, F(1, 2))
    with pytest.raises(CapExceeded):
        FeasibilityInstance(or_function(11), 1, THIRD)
    with pytest.raises(PostselError):
        lp_feasible(FeasibilityInstance(BooleanFunction.from_table(2, [0, 1, 0, 0]), 1, THIRD), symmetric=True)


def test_depth_bounds_degree():
    for n in (4, 6):
        f = majority(n)
        prog = maj_program(n)
        assert conditional_success(prog, f).worst >= 1 - THIRD
        assert rdeg_plus(f, THIRD) <= query_depth(prog)
        assert program_to_rational(prog).degree <= query_depth(prog)
    f = not_middle(4)
    assert rdeg_plus(f, THIRD) <= query_depth(zero_error_program(f))


# closed-form bounds --------------------------------------------------------------


def test_maj_lower_bound_values():
    assert maj_lower_bound(8, THIRD) == 2
    assert [maj_lower_bound(n, THIRD) for n in (2, 4, 8, 16, 32, 64, 128)] == [1, 1, 2, 3, 5, 10, 19]
    for n in range(2, 200, 2):
        assert maj_lower_bound(n, THIRD) >= -(-n // 8)


def test_maj_lower_bound_small_eps_limit():
    for n in (8, 16, 32):
        # the excluded region tends to 2d < n
        assert maj_lower_bound(n, F(1, 10**9)) == n // 2


def test_maj_lower_bound_errors():
    with pytest.raises(PostselError):
        maj_lower_bound(7, THIRD)
    with pytest.raises(PostselError):
        maj_lower_bound(8, F(1, 2))


def test_maj_lower_bound_below_lp():
    for n in (2, 4, 6, 8):
        assert rdeg_plus(majority(n), THIRD) >= maj_lower_bound(n, THIRD)


def test_symmetric_bound_examples():
    for n in range(2, 20, 2):
        assert symmetric_lower_bound(majority(n), THIRD) == -(-(n - 1) // 8)
        assert symmetric_lower_bound(or_function(n), THIRD) == 1
        assert symmetric_lower_bound(not_middle(n), THIRD) == -(-(n - 1) // 8)
    with pytest.raises(PostselError):
        symmetric_lower_bound(constant(3, 1), THIRD)


def test_symmetric_report_fields():
    rep = symmetric_lower_bound_report(majority(8), THIRD)
    assert (rep.gamma, rep.clean, rep.bound) == (1, 1, 1)
    assert rep.quadratic == symmetric_quadratic_bound(8, rep.t, THIRD)
    assert "alpha" in rep.note
    other = symmetric_lower_bound_report(majority(8), F(1, 5))
    assert other.clean is None and other.bound == other.quadratic


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_symmetric_bounds_below_lp(n):
    for prof, f in symmetric_functions(n):
        d = rdeg_plus(f, THIRD)
        rep = symmetric_lower_bound_report(f, THIRD)
        assert rep.clean <= d, prof
        assert rep.quadratic <= d, prof


@pytest.mark.parametrize("eps", [F(1, 10), F(1, 5), F(2, 5)])
def test_quadratic_bound_below_lp_other_eps(eps):
    for n in (3, 4):
        for prof, f in symmetric_functions(n):
            assert symmetric_quadratic_bound(n, symmetric_lower_bound_report(f, eps).t, eps) <= rdeg_plus(f, eps), prof
