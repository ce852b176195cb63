"""Independent brute-force reference implementations used by the tests."""

from fractions import Fraction
from itertools import combinations, product


def bits_of(x, n):
    return [(x >> i) & 1 for i in range(n)]


def brute_certificate_sizes(f):
    """Minimum certificate size per domain input, by enumerating every partial assignment."""
    n = f.n
    dom = [int(x) for x in f.domain_points()]
    out = {}
    for x in dom:
        xb = bits_of(x, n)
        for size in range(n + 1):
            found = False
            for S in combinations(range(n), size):
                consistent = [y for y in dom if all(((y >> i) & 1) == xb[i] for i in S)]
                if all(f.values[y] == f.values[x] for y in consistent):
                    found = True
                    break
            if found:
                out[x] = size
                break
    return out


def brute_distribution(node, x):
    """Outcome distribution by explicit enumeration of root-to-leaf paths."""
    from postsel.program import BOT, Chance, Leaf, Query

    acc = {0: Fraction(0), 1: Fraction(0), BOT: Fraction(0)}
    stack = [(node, Fraction(1))]
    while stack:
        v, p = stack.pop()
        if isinstance(v, Leaf):
            acc[v.outcome] += p
        elif isinstance(v, Query):
            stack.append((v.child1 if (x >> v.index) & 1 else v.child0, p))
        elif isinstance(v, Chance):
            stack.extend((c, p * w) for w, c in v.branches)
        else:
            raise TypeError(v)
    return acc[0], acc[1], acc[BOT]


def literal_value(pos, neg, x):
    return int((x & pos) == pos and (x & neg) == 0)


def brute_poly_value(p, x):
    return sum((c for m, c in p.terms if literal_value(m.pos, m.neg, x)), Fraction(0))


def all_profiles(n):
    return [bits for bits in product((0, 1), repeat=n + 1)]
