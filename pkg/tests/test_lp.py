from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from postsel import lp

F = Fraction


def scipy_feasible(A, b):
    A = np.asarray(A, dtype=float)
    res = linprog(np.zeros(A.shape[1]), A_ub=-A, b_ub=-np.asarray(b, dtype=float), bounds=(0, None), method="highs")
    return res.status == 0


def test_tiny_cases():
    assert lp.feasible([[1, 1]], [1]).feasible
    assert not lp.feasible([[-1, -1]], [1]).feasible
    assert lp.feasible([], []).feasible
    res = lp.feasible([[1, 0], [0, 1], [-1, -1]], [F(1, 3), F(1, 3), -1])
    assert res.feasible and lp.check([[1, 0], [0, 1], [-1, -1]], [F(1, 3), F(1, 3), -1], res.solution)
    assert not lp.feasible([[1, 0], [0, 1], [-1, -1]], [F(2, 3), F(2, 3), -1]).feasible


def test_degenerate_system_terminates():
    # many constraints tight at the origin
    A = [[1, -1, 0], [-1, 1, 0], [0, 1, -1], [0, -1, 1], [1, 1, 1]]
    res = lp.feasible(A, [0, 0, 0, 0, 0])
    assert res.feasible and res.trace.pivots < 50


@pytest.mark.parametrize("seed", range(40))
def test_random_systems_match_scipy(seed):
    rng = np.random.default_rng(seed)
    m, n = rng.integers(2, 9), rng.integers(1, 7)
    A = rng.integers(-4, 5, size=(m, n))
    b = rng.integers(-3, 4, size=m)
    res = lp.feasible(A.tolist(), b.tolist())
    assert res.feasible == scipy_feasible(A, b)
    if res.feasible:
        assert lp.check(A.tolist(), b.tolist(), res.solution)


def test_check_rejects_negative():
    assert not lp.check([[1]], [0], [F(-1)])
    assert not lp.check([[1]], [2], [F(1)])


def test_trace_text():
    res = lp.feasible([[1, 1]], [1])
    assert str(res.trace).startswith("tableau 1 rows x 3 columns")


def test_pivot_limit():
    with pytest.raises(RuntimeError):
        lp.feasible([[1, 1], [1, -1]], [1, 1], max_pivots=1)


def test_vertex_from_float():
    G = np.array([[1, 1], [1, -1]])
    h = np.array([2, 0])
    z = lp.vertex_from_float(G, h, np.array([1.0 + 1e-10, 1.0 - 1e-10]))
    assert z == [1, 1]
    # a point that is not near a vertex of the region is rejected
    assert lp.vertex_from_float(G, h, np.array([0.3, 0.2])) is None


def test_solve_square_singular():
    assert lp._solve_square([[1, 2], [2, 4]], [1, 2]) is None
    assert lp._solve_square([[2, 1], [1, 3]], [3, 5]) == [F(4, 5), F(7, 5)]
