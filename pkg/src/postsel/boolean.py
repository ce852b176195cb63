"""Partial and symmetric Boolean functions, certificates and related measures.

Inputs are handled internally as integer masks: bit ``i`` of the mask is
variable ``i`` (0-based).  In bit strings variable 0 is the leftmost
character, and the text formats number variables from 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from . import _kernels
from .errors import CapExceeded, FormatError, PostselError
from .univariate import UnivariatePolynomial

MAX_N = 24
MAX_CERT_N = 14

BitLike = Union[str, Sequence[int], int]


def popcount(m: int) -> int:
    return bin(m).count("1")


def as_mask(x: BitLike, n: int) -> int:
    """Accept a 01-string, a 0/1 sequence or an already-encoded mask."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        x = int(x)
        if not 0 <= x < (1 << n):
            raise PostselError(f"mask {x} out of range for n={n}")
        return x
    bits = [int(c) for c in x] if isinstance(x, str) else [int(b) for b in x]
    if len(bits) != n:
        raise PostselError(f"bit string has length {len(bits)}, expected n={n}")
    if any(b not in (0, 1) for b in bits):
        raise PostselError("bits must be 0 or 1")
    return sum(1 << i for i, b in enumerate(bits) if b)


def mask_to_bits(m: int, n: int) -> str:
    return "".join("1" if (m >> i) & 1 else "0" for i in range(n))


def weight_table(n: int) -> np.ndarray:
    w = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        block = 1 << i
        w[block : 2 * block] = w[:block] + 1
    return w


@dataclass(frozen=True, eq=False)
class BooleanFunction:
    """A function from a domain D of n-bit inputs to {0, 1}.

    ``values`` and ``domain`` are indexed by input mask; ``values`` is
    meaningless outside the domain and kept at 0 there.
    """

    n: int
    values: np.ndarray
    domain: np.ndarray
    symmetric_profile: Optional[tuple] = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = self.n
        if not 1 <= n <= MAX_N:
            raise PostselError(f"n must be in 1..{MAX_N}, got {n}")
        values = np.asarray(self.values, dtype=np.uint8).copy()
        domain = np.asarray(self.domain, dtype=np.bool_).copy()
        if values.shape != (1 << n,) or domain.shape != (1 << n,):
            raise PostselError("truth table and domain must have 2**n entries")
        if not domain.any():
            raise PostselError("empty domain")
        if np.any(values > 1):
            raise PostselError("values must be 0 or 1")
        values[~domain] = 0
        values.flags.writeable = False
        domain.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "domain", domain)
        prof = self.symmetric_profile
        if prof is not None:
            prof = tuple(None if v is None else int(v) for v in prof)
            if len(prof) != n + 1:
                raise PostselError("symmetric profile needs n+1 entries")
            w = weight_table(n)
            for k, v in enumerate(prof):
                at_k = w == k
                if v is None:
                    if domain[at_k].any():
                        raise PostselError(f"profile undefined at weight {k} but domain meets it")
                else:
                    if not domain[at_k].all():
                        raise PostselError("symmetric domain must be closed under bit permutations")
                    if np.any(values[at_k] != v):
                        raise PostselError(f"truth table disagrees with profile at weight {k}")
            object.__setattr__(self, "symmetric_profile", prof)

    # constructors -----------------------------------------------------------

    @classmethod
    def from_table(cls, n: int, values: Sequence[int], domain: Optional[Sequence[bool]] = None, name: str = ""):
        dom = np.ones(1 << n, dtype=bool) if domain is None else np.asarray(domain, dtype=bool)
        return cls(n, np.asarray(values, dtype=np.uint8), dom, None, name)

    @classmethod
    def from_points(cls, n: int, points: Mapping[BitLike, int], name: str = ""):
        values = np.zeros(1 << n, dtype=np.uint8)
        domain = np.zeros(1 << n, dtype=bool)
        for x, v in points.items():
            m = as_mask(x, n)
            if domain[m]:
                raise PostselError(f"duplicate domain point {mask_to_bits(m, n)}")
            domain[m] = True
            values[m] = v
        return cls(n, values, domain, None, name)

    @classmethod
    def from_profile(cls, n: int, profile: Sequence[Optional[int]], name: str = ""):
        """Symmetric function with f(x) = profile[|x|]; None marks weights outside the domain."""
        if len(profile) != n + 1:
            raise PostselError("symmetric profile needs n+1 entries")
        w = weight_table(n)
        prof = [None if v is None else int(v) for v in profile]
        domain = np.array([prof[k] is not None for k in w], dtype=bool)
        values = np.array([prof[k] or 0 for k in w], dtype=np.uint8)
        return cls(n, values, domain, tuple(prof), name)

    # basic queries ------------------------------------------------------------

    @property
    def is_total(self) -> bool:
        return bool(self.domain.all())

    @property
    def is_symmetric(self) -> bool:
        return self.symmetric_profile is not None

    def domain_points(self) -> np.ndarray:
        return np.flatnonzero(self.domain)

    def __call__(self, x: BitLike) -> int:
        m = as_mask(x, self.n)
        if not self.domain[m]:
            raise PostselError(f"input {mask_to_bits(m, self.n)} outside the domain")
        return int(self.values[m])

    def is_constant(self) -> bool:
        vals = self.values[self.domain]
        return bool(vals.min() == vals.max())

    def restrict(self, keep: Iterable[BitLike]) -> "BooleanFunction":
        dom = np.zeros(1 << self.n, dtype=bool)
        for x in keep:
            m = as_mask(x, self.n)
            if not self.domain[m]:
                raise PostselError("restriction must stay inside the domain")
            dom[m] = True
        return BooleanFunction(self.n, self.values, dom, None, self.name)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.domain, other.domain)
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.domain.tobytes(), self.values.tobytes()))

    def __repr__(self) -> str:
        kind = "total" if self.is_total else "partial"
        label = self.name or "f"
        return f"<BooleanFunction {label} n={self.n} {kind}{' symmetric' if self.is_symmetric else ''}>"

    @cached_property
    def _cert_masks(self) -> np.ndarray:
        return _minimum_certificate_masks(self)


# ---------------------------------------------------------------------------
# built-in functions
# ---------------------------------------------------------------------------


def or_function(n: int) -> BooleanFunction:
    return BooleanFunction.from_profile(n, [0] + [1] * n, name=f"OR{n}")


def and_function(n: int) -> BooleanFunction:
    return BooleanFunction.from_profile(n, [0] * n + [1], name=f"AND{n}")


def majority(n: int) -> BooleanFunction:
    """MAJ_n(x) = 1 iff |x| > n/2."""
    return BooleanFunction.from_profile(n, [int(2 * k > n) for k in range(n + 1)], name=f"MAJ{n}")


def parity(n: int) -> BooleanFunction:
    return BooleanFunction.from_profile(n, [k % 2 for k in range(n + 1)], name=f"PARITY{n}")


def not_middle(n: int) -> BooleanFunction:
    """0 exactly on Hamming weight ceil(n/2)."""
    mid = (n + 1) // 2
    return BooleanFunction.from_profile(n, [int(k != mid) for k in range(n + 1)], name=f"NOTMID{n}")


def constant(n: int, b: int) -> BooleanFunction:
    return BooleanFunction.from_profile(n, [b] * (n + 1), name=f"CONST{b}_{n}")


BUILTINS = {
    "or": or_function,
    "and": and_function,
    "maj": majority,
    "parity": parity,
    "notmid": not_middle,
    "const0": lambda n: constant(n, 0),
    "const1": lambda n: constant(n, 1),
}


def builtin(name: str, n: int) -> BooleanFunction:
    try:
        return BUILTINS[name.lower()](n)
    except KeyError:
        raise PostselError(f"unknown built-in function {name!r}; choose from {sorted(BUILTINS)}") from None


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """Partial assignment {variable: bit} that forces the function to ``label``."""

    assignment: tuple[tuple[int, int], ...]
    label: int

    @property
    def size(self) -> int:
        return len(self.assignment)

    @property
    def variables(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.assignment)

    def consistent_with(self, x: int) -> bool:
        return all(((x >> i) & 1) == b for i, b in self.assignment)

    def as_dict(self) -> dict[int, int]:
        return dict(self.assignment)


@dataclass(frozen=True)
class CertificateReport:
    c0: int
    c1: int
    witnesses: dict

    @property
    def c(self) -> int:
        return max(self.c0, self.c1)

    # C_b = N_b, so the non-deterministic measures are read off directly
    @property
    def n0(self) -> int:
        return self.c0

    @property
    def n1(self) -> int:
        return self.c1

    @property
    def n(self) -> int:
        return self.c


def subset_order(n: int) -> np.ndarray:
    """Variable sets by size, then lexicographically by sorted index tuple."""
    out = []
    for s in range(n + 1):
        for combo in combinations(range(n), s):
            out.append(sum(1 << i for i in combo))
    return np.array(out, dtype=np.int64)


def _minimum_certificate_masks(f: BooleanFunction) -> np.ndarray:
    n = f.n
    if n > MAX_CERT_N:
        raise CapExceeded(f"certificate search capped at n={MAX_CERT_N}")
    values = np.ascontiguousarray(f.values)
    domain = np.ascontiguousarray(f.domain)
    has0, has1 = _kernels.subcube_flags(values, domain, n)
    return _kernels.min_certificates(has0, has1, values, domain, subset_order(n), _kernels.tern_table(n), n)


def certificate_for(f: BooleanFunction, x: int) -> Certificate:
    s = int(f._cert_masks[x])
    if s < 0:
        raise PostselError(f"input {mask_to_bits(x, f.n)} outside the domain")
    return Certificate(tuple((i, (x >> i) & 1) for i in range(f.n) if (s >> i) & 1), int(f.values[x]))


def certificate_complexity(f: BooleanFunction) -> CertificateReport:
    """Minimum certificate per domain input plus C0, C1 (0 when a side is empty)."""
    witnesses = {int(x): certificate_for(f, int(x)) for x in f.domain_points()}
    c = {0: 0, 1: 0}
    for cert in witnesses.values():
        c[cert.label] = max(c[cert.label], cert.size)
    return CertificateReport(c[0], c[1], witnesses)


def forces(f: BooleanFunction, cert: Certificate) -> bool:
    """True when every domain input consistent with ``cert`` has value ``cert.label``."""
    for x in f.domain_points():
        if cert.consistent_with(int(x)) and int(f.values[x]) != cert.label:
            return False
    return True


# ---------------------------------------------------------------------------
# symmetric functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Gamma:
    gamma: int
    t: int


def _total_profile(f: BooleanFunction) -> tuple[int, ...]:
    if f.symmetric_profile is None:
        raise PostselError("function is not tagged symmetric")
    if any(v is None for v in f.symmetric_profile):
        raise PostselError("function must be total")
    return f.symmetric_profile


def gamma(f: BooleanFunction) -> Gamma:
    """Distance of the nearest profile flip from the middle: min |2k - n + 1| over flips k."""
    prof = _total_profile(f)
    n = f.n
    best = None
    for k in range(n):
        if prof[k] != prof[k + 1]:
            g = abs(2 * k - n + 1)
            if best is None or g < best.gamma:
                best = Gamma(g, k)
    if best is None:
        raise PostselError("no step change: function is constant")
    return best


def zero_weights(f: BooleanFunction) -> list[int]:
    prof = f.symmetric_profile
    if prof is None:
        raise PostselError("function is not tagged symmetric")
    return [k for k, v in enumerate(prof) if v == 0]


def ndeg_symmetric(f: BooleanFunction) -> UnivariatePolynomial:
    """(k - k_1)...(k - k_z) over the zero weights k_j of f."""
    prof = f.symmetric_profile
    if prof is None:
        raise PostselError("function is not tagged symmetric")
    if all(v in (0, None) for v in prof):
        raise PostselError("constant-0 function has no non-deterministic polynomial of this form")
    return UnivariatePolynomial.from_roots(zero_weights(f))


def is_nondeterministic_poly(p, f: BooleanFunction) -> bool:
    """p is non-zero exactly on the 1-inputs of f (checked over the domain).

    A ``UnivariatePolynomial`` is evaluated at the Hamming weight; anything
    else must provide ``evaluate_mask``.
    """
    w = weight_table(f.n)
    for x in f.domain_points():
        val = p(int(w[x])) if isinstance(p, UnivariatePolynomial) else p.evaluate_mask(int(x))
        if (val != 0) != bool(f.values[x]):
            return False
    return True


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------


def format_function(f: BooleanFunction) -> str:
    kind = "total" if f.is_total else "partial"
    if f.is_symmetric:
        prof = " ".join("*" if v is None else str(v) for v in f.symmetric_profile)
        return f"n={f.n} {kind} symmetric\nprofile={prof}\n"
    lines = [f"n={f.n} {kind} general"]
    for x in f.domain_points():
        lines.append(f"bits={mask_to_bits(int(x), f.n)} value={int(f.values[x])}")
    return "\n".join(lines) + "\n"


def parse_function(text: str) -> BooleanFunction:
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise FormatError("empty function file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 3 or not parts[0].startswith("n="):
        raise FormatError("header must read 'n=<N> total|partial symmetric|general'", lineno)
    try:
        n = int(parts[0][2:])
    except ValueError:
        raise FormatError(f"bad bit count {parts[0]!r}", lineno) from None
    kind, shape = parts[1], parts[2]
    if kind not in ("total", "partial") or shape not in ("symmetric", "general"):
        raise FormatError("header must read 'n=<N> total|partial symmetric|general'", lineno)
    try:
        if shape == "symmetric":
            if len(lines) != 2 or not lines[1][1].startswith("profile="):
                raise FormatError("symmetric function needs exactly one 'profile=' line", lines[-1][0])
            lineno, body = lines[1]
            toks = body[len("profile=") :].split()
            prof = []
            for tok in toks:
                if tok == "*":
                    prof.append(None)
                elif tok in ("0", "1"):
                    prof.append(int(tok))
                else:
                    raise FormatError(f"bad profile entry {tok!r}", lineno)
            f = BooleanFunction.from_profile(n, prof)
        else:
            points = {}
            for lineno, body in lines[1:]:
                toks = dict(tok.split("=", 1) for tok in body.split() if "=" in tok)
                if set(toks) != {"bits", "value"} or toks["value"] not in ("0", "1"):
                    raise FormatError("expected 'bits=<01-string> value=<0|1>'", lineno)
                if toks["bits"] in points:
                    raise FormatError(f"duplicate point {toks['bits']}", lineno)
                points[toks["bits"]] = int(toks["value"])
            f = BooleanFunction.from_points(n, points)
    except FormatError:
        raise
    except PostselError as exc:
        raise FormatError(str(exc), lineno) from None
    if (kind == "total") != f.is_total:
        raise FormatError(f"header says {kind} but the listed domain disagrees", lines[0][0])
    return f
