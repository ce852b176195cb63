"""Nonnegative literal polynomials, rational functions built from them, and symmetrization.

A literal monomial is a product of variables x_i (i in ``pos``) and negated
variables (1 - x_j) (j in ``neg``); both sets are stored as bit masks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Optional

import numpy as np

from . import _kernels
from .boolean import BitLike, BooleanFunction, as_mask, popcount, weight_table
from .errors import FormatError, PostselError
from .univariate import UnivariatePolynomial

MAX_N = 24


def _indices(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


class Monomial(NamedTuple):
    pos: int = 0
    neg: int = 0

    @classmethod
    def of(cls, pos: Iterable[int] = (), neg: Iterable[int] = ()) -> "Monomial":
        p = 0
        for i in pos:
            p |= 1 << i
        q = 0
        for j in neg:
            q |= 1 << j
        return cls(p, q)

    @property
    def degree(self) -> int:
        return popcount(self.pos) + popcount(self.neg)

    @property
    def pos_indices(self) -> tuple[int, ...]:
        return _indices(self.pos)

    @property
    def neg_indices(self) -> tuple[int, ...]:
        return _indices(self.neg)

    def satisfied_by(self, x: int) -> bool:
        return (x & self.pos) == self.pos and (x & self.neg) == 0

    def sort_key(self):
        return (self.degree, self.pos_indices, self.neg_indices)


def _as_fraction(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


@dataclass(frozen=True, eq=False)
class LiteralPolynomial:
    """Polynomial over the 2n literals with strictly positive rational coefficients."""

    n: int
    terms: tuple  # sorted ((Monomial, Fraction), ...)

    def __init__(self, n: int, terms: Mapping[Monomial, object] | Iterable = ()):
        if not 1 <= n <= MAX_N:
            raise PostselError(f"n must be in 1..{MAX_N}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, Fraction] = {}
        full = (1 << n) - 1
        for mono, c in items:
            mono = Monomial(*mono)
            c = _as_fraction(c)
            if mono.pos & mono.neg:
                raise PostselError("monomial contains both x_i and (1 - x_i)")
            if (mono.pos | mono.neg) & ~full:
                raise PostselError(f"monomial uses a variable outside 1..{n}")
            if c < 0:
                raise PostselError("coefficients must be nonnegative")
            acc[mono] = acc.get(mono, Fraction(0)) + c
        object.__setattr__(self, "n", n)
        object.__setattr__(
            self, "terms", tuple(sorted(((m, c) for m, c in acc.items() if c != 0), key=lambda mc: mc[0].sort_key()))
        )

    # constructors -----------------------------------------------------------

    @classmethod
    def constant(cls, n: int, c=1) -> "LiteralPolynomial":
        return cls(n, {Monomial(): c})

    @classmethod
    def zero(cls, n: int) -> "LiteralPolynomial":
        return cls(n, {})

    @classmethod
    def sum_of_variables(cls, n: int, c=1, negated: bool = False) -> "LiteralPolynomial":
        return cls(n, {(Monomial.of(neg=[i]) if negated else Monomial.of(pos=[i])): c for i in range(n)})

    # algebra ------------------------------------------------------------------

    def as_dict(self) -> dict[Monomial, Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((m.degree for m, _ in self.terms), default=0)

    def coefficient_mass(self) -> Fraction:
        return sum((c for _, c in self.terms), Fraction(0))

    def __add__(self, other: "LiteralPolynomial") -> "LiteralPolynomial":
        self._check_n(other)
        return LiteralPolynomial(self.n, list(self.terms) + list(other.terms))

    def scale(self, c) -> "LiteralPolynomial":
        c = _as_fraction(c)
        if c < 0:
            raise PostselError("scaling factor must be nonnegative")
        return LiteralPolynomial(self.n, [(m, a * c) for m, a in self.terms])

    def times_literal(self, i: int, positive: bool) -> "LiteralPolynomial":
        """Multiply by x_i (positive) or (1 - x_i); x_i(1 - x_i) terms vanish."""
        bit = 1 << i
        out = []
        for m, c in self.terms:
            if positive:
                if m.neg & bit:
                    continue
                out.append((Monomial(m.pos | bit, m.neg), c))
            else:
                if m.pos & bit:
                    continue
                out.append((Monomial(m.pos, m.neg | bit), c))
        return LiteralPolynomial(self.n, out)

    def _check_n(self, other: "LiteralPolynomial"):
        if other.n != self.n:
            raise PostselError(f"variable counts differ: {self.n} vs {other.n}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, LiteralPolynomial):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.n, self.terms))

    def __repr__(self) -> str:
        return f"LiteralPolynomial(n={self.n}, {len(self.terms)} terms, degree {self.degree})"

    # evaluation ---------------------------------------------------------------

    def evaluate_mask(self, x: int) -> Fraction:
        return sum((c for m, c in self.terms if m.satisfied_by(x)), Fraction(0))

    def __call__(self, x: BitLike) -> Fraction:
        return self.evaluate_mask(as_mask(x, self.n))

    def indicators(self) -> np.ndarray:
        """Boolean matrix: term row, cube point column."""
        pos = np.array([m.pos for m, _ in self.terms], dtype=np.int64)
        neg = np.array([m.neg for m, _ in self.terms], dtype=np.int64)
        return _kernels.monomial_indicators(pos, neg, self.n)

    def values_on_cube(self) -> list[Fraction]:
        """Exact values at every point of {0,1}^n, indexed by mask."""
        npts = 1 << self.n
        if not self.terms:
            return [Fraction(0)] * npts
        denom = 1
        for _, c in self.terms:
            denom = math.lcm(denom, c.denominator)
        nums = [c.numerator * (denom // c.denominator) for _, c in self.terms]
        ind = self.indicators()
        if max(nums) * len(nums) < 2**62:
            tot = np.asarray(nums, dtype=np.int64) @ ind.astype(np.int64)
            ints = [int(v) for v in tot]
        else:
            arr = np.asarray(nums, dtype=object)
            ints = [int(arr[ind[:, x]].sum()) if ind[:, x].any() else 0 for x in range(npts)]
        return [Fraction(v, denom) for v in ints]

    def positive_everywhere(self) -> bool:
        xs = np.arange(1 << self.n, dtype=np.int64)
        covered = np.zeros(xs.shape, dtype=bool)
        for m, _ in self.terms:
            covered |= ((xs & m.pos) == m.pos) & ((xs & m.neg) == 0)
            if covered.all():
                return True
        return bool(covered.all())


def eval_poly(p: LiteralPolynomial, x: BitLike) -> Fraction:
    return p(x)


@dataclass(frozen=True)
class PosRationalFunction:
    """P/Q with nonnegative literal polynomials and Q > 0 on the whole cube."""

    numerator: LiteralPolynomial
    denominator: LiteralPolynomial

    def __post_init__(self):
        if self.numerator.n != self.denominator.n:
            raise PostselError("numerator and denominator use different n")
        if not self.denominator.positive_everywhere():
            raise PostselError("denominator vanishes somewhere on the cube")

    @property
    def n(self) -> int:
        return self.numerator.n

    @property
    def P(self) -> LiteralPolynomial:
        return self.numerator

    @property
    def Q(self) -> LiteralPolynomial:
        return self.denominator

    @property
    def degree(self) -> int:
        return max(self.numerator.degree, self.denominator.degree)

    def __call__(self, x: BitLike) -> Fraction:
        m = as_mask(x, self.n)
        q = self.denominator.evaluate_mask(m)
        if q == 0:  # excluded by the constructor
            raise RuntimeError("internal error: zero denominator")
        return self.numerator.evaluate_mask(m) / q

    def values_on_cube(self) -> list[Fraction]:
        return [p / q for p, q in zip(self.numerator.values_on_cube(), self.denominator.values_on_cube())]


def eval_rational(r: PosRationalFunction, x: BitLike) -> Fraction:
    return r(x)


def approx_error(r: PosRationalFunction, f: BooleanFunction) -> Fraction:
    """max over the domain of |P(x)/Q(x) - f(x)|."""
    if r.n != f.n:
        raise PostselError(f"variable counts differ: {r.n} vs {f.n}")
    vals = r.values_on_cube()
    return max(abs(vals[x] - int(f.values[x])) for x in f.domain_points())


def or_rational(n: int, eps) -> PosRationalFunction:
    """sum x_i / (eps + sum x_i)."""
    eps = _as_fraction(eps)
    if eps <= 0:
        raise PostselError("eps must be positive")
    num = LiteralPolynomial.sum_of_variables(n)
    return PosRationalFunction(num, num + LiteralPolynomial.constant(n, eps))


# ---------------------------------------------------------------------------
# symmetrization
# ---------------------------------------------------------------------------


def class_polynomial(n: int, s: int, t: int) -> UnivariatePolynomial:
    """Average over weight-k inputs of one monomial with |S| = s, |T| = t, as a polynomial in k."""
    scale = Fraction(math.factorial(n - s - t), math.factorial(n))
    return UnivariatePolynomial.falling(0, 1, s) * UnivariatePolynomial.falling(n, -1, t) * scale


def class_masses(p: LiteralPolynomial) -> dict[tuple[int, int], Fraction]:
    out: dict[tuple[int, int], Fraction] = {}
    for m, c in p.terms:
        key = (popcount(m.pos), popcount(m.neg))
        out[key] = out.get(key, Fraction(0)) + c
    return out


def symmetrize(p: LiteralPolynomial) -> UnivariatePolynomial:
    acc = UnivariatePolynomial()
    for (s, t), mass in class_masses(p).items():
        acc = acc + class_polynomial(p.n, s, t) * mass
    return acc


def symmetrize_brute(p: LiteralPolynomial, k: int) -> Fraction:
    """Mean of p over all inputs of Hamming weight k, by enumeration."""
    if not 0 <= k <= p.n:
        raise PostselError(f"weight {k} out of range 0..{p.n}")
    w = weight_table(p.n)
    pts = np.flatnonzero(w == k)
    total = sum((p.evaluate_mask(int(x)) for x in pts), Fraction(0))
    return total / len(pts)


@dataclass(frozen=True)
class SymmetrizedRational:
    p: UnivariatePolynomial
    q: UnivariatePolynomial

    def __call__(self, k) -> Fraction:
        return self.p(k) / self.q(k)


def symmetrize_rational(r: PosRationalFunction) -> SymmetrizedRational:
    return SymmetrizedRational(symmetrize(r.numerator), symmetrize(r.denominator))


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------


def _fmt_frac(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def _parse_frac(tok: str, lineno: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"bad rational {tok!r}", lineno) from None


def format_polynomial(p: LiteralPolynomial, header: bool = True) -> str:
    lines = [f"n={p.n}"] if header else []
    for m, c in p.terms:
        pos = ",".join(str(i + 1) for i in m.pos_indices)
        neg = ",".join(str(i + 1) for i in m.neg_indices)
        lines.append(f"coef={_fmt_frac(c)} pos={pos} neg={neg}")
    return "\n".join(lines) + "\n"


def format_rational(r: PosRationalFunction) -> str:
    return (
        f"n={r.n}\nP:\n"
        + format_polynomial(r.numerator, header=False)
        + "Q:\n"
        + format_polynomial(r.denominator, header=False)
    ).replace("\n\n", "\n")


def _parse_index_list(tok: str, lineno: int) -> list[int]:
    if not tok:
        return []
    try:
        idx = [int(v) - 1 for v in tok.split(",")]
    except ValueError:
        raise FormatError(f"bad index list {tok!r}", lineno) from None
    if any(i < 0 for i in idx):
        raise FormatError("variable indices start at 1", lineno)
    return idx


def _parse_terms(lines: list[tuple[int, str]]) -> list[tuple[Monomial, Fraction, int]]:
    out = []
    for lineno, body in lines:
        fields = {}
        for tok in body.split():
            if "=" not in tok:
                raise FormatError(f"expected key=value, got {tok!r}", lineno)
            k, v = tok.split("=", 1)
            fields[k] = v
        if "coef" not in fields or not set(fields) <= {"coef", "pos", "neg"}:
            raise FormatError("expected 'coef=<p>/<q> pos=<i,...> neg=<j,...>'", lineno)
        c = _parse_frac(fields["coef"], lineno)
        if c < 0:
            raise FormatError("coefficients must be nonnegative", lineno)
        pos = _parse_index_list(fields.get("pos", ""), lineno)
        neg = _parse_index_list(fields.get("neg", ""), lineno)
        if set(pos) & set(neg):
            raise FormatError("monomial contains both x_i and (1 - x_i)", lineno)
        out.append((Monomial.of(pos, neg), c, lineno))
    return out


def _split_header(text: str) -> tuple[Optional[int], list[tuple[int, str]]]:
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    n = None
    if lines and lines[0][1].startswith("n="):
        try:
            n = int(lines[0][1][2:])
        except ValueError:
            raise FormatError(f"bad header {lines[0][1]!r}", lines[0][0]) from None
        lines = lines[1:]
    return n, lines


def _build(n: Optional[int], terms, lineno: int) -> LiteralPolynomial:
    if n is None:
        n = max((max((m.pos | m.neg).bit_length(), 1) for m, _, _ in terms), default=1)
    try:
        return LiteralPolynomial(n, [(m, c) for m, c, _ in terms])
    except PostselError as exc:
        bad = next((ln for m, _, ln in terms if (m.pos | m.neg) >> n), lineno)
        raise FormatError(str(exc), bad) from None


def parse_polynomial(text: str, n: Optional[int] = None) -> LiteralPolynomial:
    hn, lines = _split_header(text)
    n = hn if n is None else n
    return _build(n, _parse_terms(lines), lines[0][0] if lines else 0)


def parse_rational(text: str) -> PosRationalFunction:
    n, lines = _split_header(text)
    blocks: dict[str, list] = {}
    current = None
    for lineno, body in lines:
        if body in ("P:", "Q:"):
            if body[0] in blocks:
                raise FormatError(f"duplicate block {body}", lineno)
            current = body[0]
            blocks[current] = []
        elif current is None:
            raise FormatError("term before 'P:' block", lineno)
        else:
            blocks[current].append((lineno, body))
    if set(blocks) != {"P", "Q"}:
        raise FormatError("rational function needs 'P:' and 'Q:' blocks", lines[-1][0] if lines else 0)
    p_terms, q_terms = _parse_terms(blocks["P"]), _parse_terms(blocks["Q"])
    if n is None:
        n = max((max((m.pos | m.neg).bit_length(), 1) for m, _, _ in p_terms + q_terms), default=1)
    P = _build(n, p_terms, 0)
    Q = _build(n, q_terms, 0)
    try:
        return PosRationalFunction(P, Q)
    except PostselError as exc:
        raise FormatError(str(exc), blocks["Q"][0][0] if blocks["Q"] else 0) from None
