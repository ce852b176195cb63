"""Exact univariate polynomials in the Hamming weight k."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


def _trim(coeffs: Iterable) -> tuple[Fraction, ...]:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class UnivariatePolynomial:
    """Coefficients indexed by power of k, trailing zeros trimmed."""

    coefficients: tuple[Fraction, ...] = ()

    def __init__(self, coefficients: Sequence = ()):
        object.__setattr__(self, "coefficients", _trim(coefficients))

    @classmethod
    def constant(cls, c) -> "UnivariatePolynomial":
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "UnivariatePolynomial":
        p = cls([1])
        for r in roots:
            p = p * cls([-Fraction(r), 1])
        return p

    @classmethod
    def falling(cls, base, shift_sign: int, m: int) -> "UnivariatePolynomial":
        """(base + s*k)(base + s*k - 1)...(m factors); s = +1 or -1 chooses k or N-k."""
        p = cls([1])
        for j in range(m):
            p = p * cls([Fraction(base) - j, shift_sign])
        return p

    @property
    def degree(self) -> int:
        # the zero polynomial is reported as degree 0
        return max(len(self.coefficients) - 1, 0)

    def is_zero(self) -> bool:
        return not self.coefficients

    def __call__(self, k) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * k + c
        return acc

    def __add__(self, other: "UnivariatePolynomial") -> "UnivariatePolynomial":
        a, b = self.coefficients, other.coefficients
        if len(a) < len(b):
            a, b = b, a
        return UnivariatePolynomial([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    def __mul__(self, other) -> "UnivariatePolynomial":
        if not isinstance(other, UnivariatePolynomial):
            return UnivariatePolynomial([c * other for c in self.coefficients])
        if self.is_zero() or other.is_zero():
            return UnivariatePolynomial()
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return UnivariatePolynomial(out)

    __rmul__ = __mul__

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coefficients):
            if c == 0:
                continue
            mono = "" if i == 0 else ("k" if i == 1 else f"k^{i}")
            if mono and c == 1:
                parts.append(mono)
            elif mono:
                parts.append(f"({c})*{mono}")
            else:
                parts.append(f"{c}")
        return " + ".join(parts)
