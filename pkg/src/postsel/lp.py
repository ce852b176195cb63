"""Exact rational feasibility for systems  A c >= b, c >= 0.

Dictionary-form simplex over ``Fraction`` with a single auxiliary variable for
phase 1 and Bland's rule throughout, so it terminates on degenerate systems.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence


@dataclass
class SimplexTrace:
    rows: int = 0
    columns: int = 0
    pivots: int = 0
    notes: list[str] = field(default_factory=list)

    def __str__(self) -> str:
        out = f"tableau {self.rows} rows x {self.columns} columns, {self.pivots} pivots"
        return "; ".join([out, *self.notes])


@dataclass
class FeasibilityResult:
    feasible: bool
    solution: Optional[list[Fraction]]
    trace: SimplexTrace


def _pivot(rows, const, basis, nonbasic, obj, obj_const, r, e):
    """Exchange basic variable of row r with nonbasic column e (in place)."""
    row = rows[r]
    a = row[e]
    # solve row r for the entering variable
    inv = -1 / a
    new_row = [v * inv for v in row]
    new_row[e] = 1 / a
    new_const = const[r] * inv
    rows[r] = new_row
    const[r] = new_const
    for i in range(len(rows)):
        if i == r:
            continue
        other = rows[i]
        coef = other[e]
        if coef == 0:
            continue
        other[e] = 0
        for j, v in enumerate(new_row):
            if v:
                other[j] += coef * v
        const[i] += coef * new_const
    coef = obj[e]
    if coef:
        obj[e] = 0
        for j, v in enumerate(new_row):
            if v:
                obj[j] += coef * v
        obj_const += coef * new_const
    basis[r], nonbasic[e] = nonbasic[e], basis[r]
    return obj_const


def feasible(A: Sequence[Sequence], b: Sequence, max_pivots: int = 10**6) -> FeasibilityResult:
    """Decide whether some c >= 0 satisfies A c >= b, exactly."""
    m = len(A)
    n = len(A[0]) if m else 0
    trace = SimplexTrace(rows=m, columns=n + 1)
    if m == 0:
        return FeasibilityResult(True, [Fraction(0)] * n, trace)

    # variables: 0..n-1 originals, n the auxiliary x0, n+1+i the surplus of row i
    # dictionary: surplus_i = -b_i + A_i c + x0
    aux = n
    rows = [[Fraction(v) for v in A[i]] + [Fraction(1)] for i in range(m)]
    const = [Fraction(-bi) for bi in b]
    basis = [n + 1 + i for i in range(m)]
    nonbasic = list(range(n + 1))
    obj = [Fraction(0)] * n + [Fraction(-1)]  # maximise -x0
    obj_const = Fraction(0)

    worst = min(range(m), key=lambda i: (const[i], basis[i]))
    if const[worst] < 0:
        obj_const = _pivot(rows, const, basis, nonbasic, obj, obj_const, worst, aux)
        trace.pivots += 1

    while trace.pivots < max_pivots:
        # Bland: lowest-indexed improving variable enters
        entering = None
        for j in sorted(range(len(nonbasic)), key=lambda j: nonbasic[j]):
            if obj[j] > 0:
                entering = j
                break
        if entering is None:
            break
        leave = None
        best = None
        for i in range(m):
            a = rows[i][entering]
            if a < 0:
                ratio = const[i] / -a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            # cannot happen: the phase-1 objective is bounded by 0
            raise RuntimeError("unbounded phase-1 objective")
        obj_const = _pivot(rows, const, basis, nonbasic, obj, obj_const, leave, entering)
        trace.pivots += 1
    else:
        raise RuntimeError(f"simplex exceeded {max_pivots} pivots")

    if obj_const < 0:
        return FeasibilityResult(False, None, trace)
    sol = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            sol[var] = const[i]
    return FeasibilityResult(True, sol, trace)


def check(A: Sequence[Sequence], b: Sequence, c: Sequence) -> bool:
    """Exact verification that c >= 0 and A c >= b."""
    if any(v < 0 for v in c):
        return False
    support = [(j, v) for j, v in enumerate(c) if v]
    return all(sum(row[j] * v for j, v in support) >= bi for row, bi in zip(A, b))


def _solve_square(M: list[list[int]], rhs: list[int]) -> Optional[list[Fraction]]:
    """Integer system solved by fraction-free (Bareiss) elimination; None if singular."""
    s = len(M)
    aug = [list(row) + [v] for row, v in zip(M, rhs)]
    prev = 1
    for k in range(s):
        piv = next((r for r in range(k, s) if aug[r][k] != 0), None)
        if piv is None:
            return None
        aug[k], aug[piv] = aug[piv], aug[k]
        pk = aug[k]
        akk = pk[k]
        for i in range(k + 1, s):
            ri = aug[i]
            aik = ri[k]
            for j in range(k + 1, s + 1):
                ri[j] = (ri[j] * akk - aik * pk[j]) // prev
            ri[k] = 0
        prev = akk
    sol: list[Fraction] = [Fraction(0)] * s
    for i in range(s - 1, -1, -1):
        acc = Fraction(aug[i][s]) - sum(aug[i][j] * sol[j] for j in range(i + 1, s) if aug[i][j])
        sol[i] = acc / aug[i][i]
    return sol


def vertex_from_float(G, h, x, tol: float = 1e-7) -> Optional[list[Fraction]]:
    """Rebuild the exact vertex of {z >= 0, G z >= h} near a float basic solution ``x``.

    The support of ``x`` and its tight rows determine a square system that is
    solved in rationals; the result is returned only if it checks exactly.
    """
    import numpy as np
    from scipy.linalg import qr

    G = np.asarray(G)
    h = np.asarray(h)
    x = np.asarray(x, dtype=float)
    support = np.flatnonzero(x > tol)
    z = [Fraction(0)] * G.shape[1]
    if support.size:
        slack = G.astype(float) @ x - h.astype(float)
        scale = 1.0 + np.abs(G).max(axis=1)
        tight = np.flatnonzero(np.abs(slack) <= tol * scale)
        sub = G[np.ix_(tight, support)].astype(float)
        if tight.size < support.size:
            return None
        # pick independent rows with a pivoted QR of the transpose
        _, _, perm = qr(sub.T, pivoting=True, mode="economic")
        rows = tight[perm[: support.size]]
        M = [[int(G[r, c]) for c in support] for r in rows]
        sol = _solve_square(M, [int(h[r]) for r in rows])
        if sol is None:
            return None
        for c, v in zip(support, sol):
            z[int(c)] = v
    return z if check(G.tolist(), h.tolist(), z) else None
