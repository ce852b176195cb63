"""Minimal-degree positive rational approximation by exact LP, and closed-form
lower bounds for symmetric functions."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional

import numpy as np

from . import _kernels, lp
from .boolean import BooleanFunction, gamma
from .errors import CapExceeded, PostselError
from .poly import LiteralPolynomial, Monomial, PosRationalFunction, approx_error, class_polynomial

LP_CAP = 10
# above this many LP columns the "auto" method screens with a float solver first
EXACT_COLUMN_LIMIT = int(os.environ.get("POSTSEL_EXACT_COLUMNS", "400"))


@dataclass(frozen=True)
class FeasibilityInstance:
    f: BooleanFunction
    d: int
    eps: Fraction
    include_constant: bool = True

    def __post_init__(self):
        object.__setattr__(self, "eps", Fraction(self.eps))
        if not 0 <= self.d <= self.f.n:
            raise PostselError(f"degree {self.d} outside 0..{self.f.n}")
        if not 0 <= self.eps < Fraction(1, 2):
            raise PostselError("eps must lie in [0, 1/2)")
        if self.f.n > LP_CAP:
            raise CapExceeded(f"LP has 2^n rows; n={self.f.n} exceeds cap {LP_CAP}")


@dataclass
class LPVerdict:
    feasible: bool
    witness: Optional[PosRationalFunction]
    method: str
    trace: lp.SimplexTrace = field(default_factory=lp.SimplexTrace)


def monomials_up_to(n: int, d: int, include_constant: bool = True) -> list[Monomial]:
    out = []
    for size in range(0 if include_constant else 1, d + 1):
        for vars_ in combinations(range(n), size):
            for signs in range(1 << size):
                pos = neg = 0
                for j, v in enumerate(vars_):
                    if (signs >> j) & 1:
                        pos |= 1 << v
                    else:
                        neg |= 1 << v
                out.append(Monomial(pos, neg))
    return out


def _eps_rows(eps: Fraction):
    """Integer row templates (coef of P, coef of Q) for  a*P + b*Q >= 0."""
    num, den = eps.numerator, eps.denominator
    one = [(den, -(den - num)), (-den, den + num)]  # P >= (1-e)Q, P <= (1+e)Q
    zero = [(-den, num)]  # P <= eQ
    return one, zero


# ---------------------------------------------------------------------------
# full LP over individual monomials
# ---------------------------------------------------------------------------


def _full_system(inst: FeasibilityInstance):
    f = inst.f
    n = f.n
    mons = monomials_up_to(n, inst.d, inst.include_constant)
    pos = np.array([m.pos for m in mons], dtype=np.int64)
    neg = np.array([m.neg for m in mons], dtype=np.int64)
    ind = _kernels.monomial_indicators(pos, neg, n).astype(np.int64).T  # (2^n, |mons|)
    one, zero = _eps_rows(inst.eps)
    blocks, rhs = [], []
    dom = f.domain.astype(bool)
    vals = f.values.astype(bool)
    for label, templates in ((1, one), (0, zero)):
        pts = np.flatnonzero(dom & (vals == bool(label)))
        if pts.size == 0:
            continue
        sub = ind[pts]
        for a, bq in templates:
            blocks.append(np.hstack([a * sub, bq * sub]))
            rhs.extend([0] * pts.size)
    blocks.append(np.hstack([np.zeros_like(ind), ind]))
    rhs.extend([1] * ind.shape[0])
    A = np.vstack(blocks)
    A, keep = np.unique(np.column_stack([A, rhs]), axis=0, return_index=True)
    return mons, A[:, :-1], A[:, -1]


def _witness_from_full(n: int, mons, sol) -> PosRationalFunction:
    m = len(mons)
    P = LiteralPolynomial(n, {mons[j]: sol[j] for j in range(m) if sol[j]})
    Q = LiteralPolynomial(n, {mons[j]: sol[m + j] for j in range(m) if sol[m + j]})
    return PosRationalFunction(P, Q)


def _exact(A: np.ndarray, b: np.ndarray, columns: Optional[np.ndarray] = None):
    if columns is None:
        columns = np.arange(A.shape[1])
    sub = A[:, columns]
    nz = np.any(sub != 0, axis=1) | (b > 0)
    res = lp.feasible(sub[nz].tolist(), b[nz].tolist())
    if not res.feasible:
        return res, None
    full = [Fraction(0)] * A.shape[1]
    for j, v in zip(columns, res.solution):
        full[int(j)] = v
    return res, full


def _highs(G: np.ndarray, h: np.ndarray, cost: np.ndarray):
    """Float basic solution of  min cost.z  s.t.  G z >= h, z >= 0  (None if infeasible)."""
    from scipy.optimize import linprog

    res = linprog(c=cost, A_ub=-G.astype(float), b_ub=-h.astype(float), bounds=(0, None), method="highs-ds")
    if res.status == 0:
        return "feasible", res.x
    if res.status == 2:
        return "infeasible", None
    return "unknown", None


def _farkas_system(A: np.ndarray, b: np.ndarray):
    """y >= 0 with -A^T y >= 0 and b.y = 1 certifies that A c >= b, c >= 0 is empty."""
    G = np.vstack([-A.T, b[None, :], -b[None, :]])
    h = np.concatenate([np.zeros(A.shape[1], dtype=A.dtype), [1, -1]])
    return G, h


def _solve_full(inst: FeasibilityInstance, method: str) -> LPVerdict:
    mons, A, b = _full_system(inst)
    n = inst.f.n
    if method not in ("auto", "exact"):
        raise PostselError(f"unknown LP method {method!r}")
    notes = []
    if method == "auto" and A.shape[1] > EXACT_COLUMN_LIMIT:
        status, x = _highs(A, b, np.ones(A.shape[1]))
        if status == "feasible":
            sol = lp.vertex_from_float(A, b, x)
            if sol is not None:
                trace = lp.SimplexTrace(A.shape[0], A.shape[1])
                trace.notes.append(f"float screen feasible; exact vertex on {sum(1 for v in sol if v)} columns confirmed")
                return LPVerdict(True, _witness_from_full(n, mons, sol), "full-screened", trace)
            notes.append("float vertex did not confirm exactly")
        elif status == "infeasible":
            G, h = _farkas_system(A, b)
            st, y = _highs(G, h, np.ones(G.shape[1]))
            y = lp.vertex_from_float(G, h, y) if st == "feasible" else None
            if y is not None:
                trace = lp.SimplexTrace(A.shape[0], A.shape[1])
                trace.notes.append(f"float screen infeasible; exact Farkas certificate on {sum(1 for v in y if v)} rows confirmed")
                return LPVerdict(False, None, "full-screened", trace)
            notes.append("Farkas certificate did not confirm exactly")
    res, sol = _exact(A, b)
    res.trace.notes.extend(notes)
    w = _witness_from_full(n, mons, sol) if res.feasible else None
    return LPVerdict(res.feasible, w, "full-exact", res.trace)


# ---------------------------------------------------------------------------
# collapsed LP for symmetric functions
# ---------------------------------------------------------------------------


def _classes(n: int, d: int, include_constant: bool) -> list[tuple[int, int]]:
    return [(s, size - s) for size in range(0 if include_constant else 1, d + 1) for s in range(size + 1) if size <= n]


def expand_classes(n: int, masses: dict[tuple[int, int], Fraction]) -> LiteralPolynomial:
    """Permutation-invariant polynomial spreading each class mass evenly over its monomials."""
    terms = {}
    for (s, t), mass in masses.items():
        if not mass:
            continue
        count = math.comb(n, s) * math.comb(n - s, t)
        c = mass / count
        for S in combinations(range(n), s):
            rest = [i for i in range(n) if i not in S]
            pos = sum(1 << i for i in S)
            for T in combinations(rest, t):
                terms[Monomial(pos, sum(1 << i for i in T))] = c
    return LiteralPolynomial(n, terms)


def _solve_symmetric(inst: FeasibilityInstance) -> LPVerdict:
    f = inst.f
    n = f.n
    classes = _classes(n, inst.d, inst.include_constant)
    table = {c: [class_polynomial(n, *c)(k) for k in range(n + 1)] for c in classes}
    one, zero = _eps_rows(inst.eps)
    A, b = [], []
    for k, fk in enumerate(f.symmetric_profile):
        if fk is None:
            continue
        for a, bq in one if fk == 1 else zero:
            A.append([a * table[c][k] for c in classes] + [bq * table[c][k] for c in classes])
            b.append(0)
    for k in range(n + 1):
        A.append([0] * len(classes) + [table[c][k] for c in classes])
        b.append(1)
    res = lp.feasible(A, b)
    if not res.feasible:
        return LPVerdict(False, None, "symmetric-exact", res.trace)
    m = len(classes)
    P = expand_classes(n, dict(zip(classes, res.solution[:m])))
    Q = expand_classes(n, dict(zip(classes, res.solution[m:])))
    return LPVerdict(True, PosRationalFunction(P, Q), "symmetric-exact", res.trace)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def lp_feasible(inst: FeasibilityInstance, symmetric: Optional[bool] = None, method: str = "auto") -> LPVerdict:
    """Do nonnegative P, Q of degree <= d exist with Q >= 1 on the cube and
    |P/Q - f| <= eps on the domain?

    ``symmetric`` selects the per-class LP (default: whenever f carries a
    symmetric profile).  ``method`` applies to the full LP: "exact" runs the
    rational simplex directly; "auto" does so for small systems and otherwise
    screens with a float solver, confirming the verdict exactly.
    """
    use_sym = inst.f.is_symmetric if symmetric is None else symmetric
    if use_sym and not inst.f.is_symmetric:
        raise PostselError("collapsed LP needs a symmetric function")
    verdict = _solve_symmetric(inst) if use_sym else _solve_full(inst, method)
    if verdict.witness is not None:
        err = approx_error(verdict.witness, inst.f)
        if err > inst.eps or min(verdict.witness.Q.values_on_cube()) < 1:
            raise RuntimeError(f"LP witness fails verification (error {err})")
    return verdict


@dataclass
class DegreeResult:
    degree: Optional[int]  # None when every d <= d_max is infeasible
    witness: Optional[PosRationalFunction]
    verdicts: dict[int, LPVerdict]

    def __str__(self) -> str:
        return "exceeds d_max" if self.degree is None else str(self.degree)


def rdeg_plus_search(f: BooleanFunction, eps, d_max: Optional[int] = None, **kw) -> DegreeResult:
    d_max = f.n if d_max is None else min(d_max, f.n)
    verdicts = {}
    for d in range(d_max + 1):
        v = lp_feasible(FeasibilityInstance(f, d, eps), **kw)
        verdicts[d] = v
        if v.feasible:
            return DegreeResult(d, v.witness, verdicts)
    return DegreeResult(None, None, verdicts)


def rdeg_plus(f: BooleanFunction, eps, d_max: Optional[int] = None, **kw) -> Optional[int]:
    """Smallest feasible degree, or None if it exceeds d_max."""
    return rdeg_plus_search(f, eps, d_max, **kw).degree


# ---------------------------------------------------------------------------
# closed-form lower bounds
# ---------------------------------------------------------------------------


def _check_eps(eps) -> Fraction:
    eps = Fraction(eps)
    if not 0 < eps < Fraction(1, 2):
        raise PostselError("eps must lie in (0, 1/2)")
    return eps


def maj_lower_bound(n: int, eps) -> int:
    """Smallest d with 2d >= (n+1) - sqrt(beta (n^2+2n) + 1), beta = eps/(1-eps).

    Every smaller degree is excluded.  Exact: for 2d < n+1 the strict
    inequality 2d < (n+1) - sqrt(D) is  (n+1-2d)^2 > D.
    """
    if n < 2 or n % 2:
        raise PostselError("majority bound is derived for even n >= 2")
    eps = _check_eps(eps)
    beta = eps / (1 - eps)
    D = beta * (n * n + 2 * n) + 1
    d = 0
    while n + 1 - 2 * d > 0 and D < (n + 1 - 2 * d) ** 2:
        d += 1
    return d


@dataclass(frozen=True)
class SymmetricBound:
    bound: int
    clean: Optional[int]  # ceil((n - gamma)/8), only at eps = 1/3
    quadratic: int
    gamma: int
    t: int
    note: str


SYMMETRIC_NOTE = (
    "general-eps bound uses alpha = 1 - eps/(1-eps) on (N-T)(T+1); "
    "the closed-form statement writes eps/(1-eps) there instead"
)


def symmetric_quadratic_bound(n: int, t: int, eps) -> int:
    """Smallest d >= 0 with d^2 - (n+1) d + alpha (n-t)(t+1) <= 0."""
    eps = _check_eps(eps)
    alpha = 1 - eps / (1 - eps)
    c = alpha * (n - t) * (t + 1)
    d = 0
    while d * d - (n + 1) * d + c > 0:
        d += 1
    return d


def symmetric_lower_bound_report(f: BooleanFunction, eps) -> SymmetricBound:
    eps = _check_eps(eps)
    g = gamma(f)
    quad = symmetric_quadratic_bound(f.n, g.t, eps)
    clean = None
    if eps == Fraction(1, 3):
        clean = -((g.gamma - f.n) // 8)
    bound = clean if clean is not None else quad
    return SymmetricBound(bound, clean, quad, g.gamma, g.t, SYMMETRIC_NOTE)


def symmetric_lower_bound(f: BooleanFunction, eps) -> int:
    return symmetric_lower_bound_report(f, eps).bound
