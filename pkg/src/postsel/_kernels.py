"""Hot loops with a numba path and a pure-numpy path.

The numba path is used when numba imports cleanly and ``POSTSEL_DISABLE_NUMBA``
is unset (or ``0``).  Every kernel exists in both forms as ``<name>_nb`` and
``<name>_np`` so that the benchmark and the tests can compare them directly;
the unsuffixed name is bound to whichever path is active.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and os.environ.get("POSTSEL_DISABLE_NUMBA", "0").lower() in (
    "",
    "0",
    "false",
    "no",
)

# Node type codes for compiled programs.
LEAF, QUERY, CHANCE = 0, 1, 2
# Outcome codes; BOT is the discarded outcome.
OUT_BOT = -1


def _njit(fn):
    if numba is None:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


# ---------------------------------------------------------------------------
# ternary subcube table
# ---------------------------------------------------------------------------
# A partial assignment on n variables is encoded in base 3: digit i is 0 or 1
# for a fixed variable i and 2 when variable i is free.  Bit i of a point mask
# is variable i.


def tern_table(n: int) -> np.ndarray:
    """tern[m] = sum of 3**i over the set bits i of m."""
    out = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        block = 1 << i
        out[block : 2 * block] = out[:block] + 3**i
    return out


def _subcube_flags_py(values, domain, n):
    size = 3**n
    has0 = np.zeros(size, dtype=np.bool_)
    has1 = np.zeros(size, dtype=np.bool_)
    for t in range(size):
        rest = t
        free = -1
        mask = 0
        p = 1
        for i in range(n):
            d = rest % 3
            rest //= 3
            if d == 2:
                free = i
                break
            if d == 1:
                mask |= 1 << i
            p *= 3
        if free < 0:
            if domain[mask]:
                if values[mask]:
                    has1[t] = True
                else:
                    has0[t] = True
        else:
            lo = t - 2 * p
            hi = t - p
            has0[t] = has0[lo] or has0[hi]
            has1[t] = has1[lo] or has1[hi]
    return has0, has1


subcube_flags_nb = _njit(_subcube_flags_py)


def subcube_flags_np(values, domain, n):
    """Vectorised variant: append the OR of the two halves along every axis."""
    vals = values.astype(np.bool_)
    pts1 = (domain & vals).reshape((2,) * n)
    pts0 = (domain & ~vals).reshape((2,) * n)
    out = []
    for a in (pts0, pts1):
        for axis in range(n):
            both = np.logical_or(np.take(a, [0], axis=axis), np.take(a, [1], axis=axis))
            a = np.concatenate([a, both], axis=axis)
        out.append(a.reshape(-1))
    return out[0], out[1]


# ---------------------------------------------------------------------------
# minimum certificates
# ---------------------------------------------------------------------------


def _min_certificates_py(has0, has1, values, domain, order, tern, n):
    full = (1 << n) - 1
    npts = 1 << n
    chosen = np.full(npts, -1, dtype=np.int64)
    for x in range(npts):
        if not domain[x]:
            continue
        for j in range(order.shape[0]):
            s = order[j]
            idx = tern[x & s] + 2 * tern[full ^ s]
            if values[x]:
                if not has0[idx]:
                    chosen[x] = s
                    break
            else:
                if not has1[idx]:
                    chosen[x] = s
                    break
    return chosen


min_certificates_nb = _njit(_min_certificates_py)


def min_certificates_np(has0, has1, values, domain, order, tern, n):
    full = (1 << n) - 1
    xs = np.arange(1 << n, dtype=np.int64)
    chosen = np.full(1 << n, -1, dtype=np.int64)
    pending = np.flatnonzero(domain)
    vals = values.astype(np.bool_)
    for s in order:
        if pending.size == 0:
            break
        idx = tern[xs[pending] & s] + 2 * tern[full ^ s]
        ok = np.where(vals[pending], ~has0[idx], ~has1[idx])
        chosen[pending[ok]] = s
        pending = pending[~ok]
    return chosen


# ---------------------------------------------------------------------------
# monomial indicators on the cube
# ---------------------------------------------------------------------------


def _monomial_indicators_py(pos, neg, n):
    npts = 1 << n
    out = np.zeros((pos.shape[0], npts), dtype=np.bool_)
    for m in range(pos.shape[0]):
        p = pos[m]
        q = neg[m]
        for x in range(npts):
            out[m, x] = (x & p) == p and (x & q) == 0
    return out


monomial_indicators_nb = _njit(_monomial_indicators_py)


def monomial_indicators_np(pos, neg, n):
    xs = np.arange(1 << n, dtype=np.int64)[None, :]
    p = pos[:, None]
    q = neg[:, None]
    return ((xs & p) == p) & ((xs & q) == 0)


# ---------------------------------------------------------------------------
# post-selected sampling of compiled programs
# ---------------------------------------------------------------------------
# A compiled program is a set of flat arrays:
#   kind[v]     LEAF / QUERY / CHANCE
#   arg[v]      leaf outcome (0, 1, OUT_BOT) or queried variable
#   child0[v], child1[v]   query children
#   start[v], stop[v]      slice of the branch arrays for a chance node
#   cum[b]      cumulative branch probability within its node (last = 1.0)
#   target[b]   branch child


def _walk(kind, arg, child0, child1, start, stop, cum, target, x):
    v = 0
    while kind[v] != LEAF:
        if kind[v] == QUERY:
            if x[arg[v]]:
                v = child1[v]
            else:
                v = child0[v]
        else:
            u = np.random.random()
            b = start[v]
            last = stop[v] - 1
            while b < last and u >= cum[b]:
                b += 1
            v = target[b]
    return arg[v]


def _postselected_runs_py(kind, arg, child0, child1, start, stop, cum, target, x, runs, seed, max_attempts):
    np.random.seed(seed)
    outcomes = np.full(runs, OUT_BOT, dtype=np.int64)
    attempts = np.zeros(runs, dtype=np.int64)
    for j in range(runs):
        for a in range(max_attempts):
            o = _walk(kind, arg, child0, child1, start, stop, cum, target, x)
            if o != OUT_BOT:
                outcomes[j] = o
                attempts[j] = a + 1
                break
        if outcomes[j] == OUT_BOT:
            attempts[j] = max_attempts
            break
    return outcomes, attempts


if numba is not None:
    _walk_nb = numba.njit(cache=True)(_walk)

    @numba.njit(cache=True)
    def postselected_runs_nb(kind, arg, child0, child1, start, stop, cum, target, x, runs, seed, max_attempts):
        np.random.seed(seed)
        outcomes = np.full(runs, OUT_BOT, dtype=np.int64)
        attempts = np.zeros(runs, dtype=np.int64)
        for j in range(runs):
            for a in range(max_attempts):
                o = _walk_nb(kind, arg, child0, child1, start, stop, cum, target, x)
                if o != OUT_BOT:
                    outcomes[j] = o
                    attempts[j] = a + 1
                    break
            if outcomes[j] == OUT_BOT:
                attempts[j] = max_attempts
                break
        return outcomes, attempts
else:  # pragma: no cover
    postselected_runs_nb = _postselected_runs_py


def _walk_batch_np(kind, arg, child0, child1, start, stop, cum, target, x, size, rng):
    # cum shifted by the node's branch offset so one searchsorted serves all nodes
    offs = np.zeros(len(cum), dtype=np.float64)
    for v in np.flatnonzero(kind == CHANCE):
        offs[start[v] : stop[v]] = v
    shifted = cum + offs
    cur = np.zeros(size, dtype=np.int64)
    while True:
        k = kind[cur]
        active = k != LEAF
        if not active.any():
            return arg[cur]
        q = k == QUERY
        if q.any():
            cq = cur[q]
            cur[q] = np.where(x[arg[cq]] != 0, child1[cq], child0[cq])
        c = k == CHANCE
        if c.any():
            cc = cur[c]
            u = rng.random(cc.size)
            b = np.searchsorted(shifted, cc + u, side="right")
            b = np.minimum(b, stop[cc] - 1)
            cur[c] = target[b]


def postselected_runs_np(kind, arg, child0, child1, start, stop, cum, target, x, runs, seed, max_attempts):
    """Draw i.i.d. walks in batches and cut the stream into rejection runs."""
    rng = np.random.default_rng(seed)
    outcomes = np.full(runs, OUT_BOT, dtype=np.int64)
    attempts = np.zeros(runs, dtype=np.int64)
    j = 0
    gap = 0
    batch = 1024
    while j < runs:
        res = _walk_batch_np(kind, arg, child0, child1, start, stop, cum, target, x, batch, rng)
        hits = np.flatnonzero(res != OUT_BOT)
        prev = -1
        for h in hits:
            gap += h - prev
            prev = h
            if gap > max_attempts:
                attempts[j] = max_attempts
                return outcomes, attempts
            outcomes[j] = res[h]
            attempts[j] = gap
            gap = 0
            j += 1
            if j == runs:
                return outcomes, attempts
        gap += batch - 1 - prev
        if gap >= max_attempts:
            attempts[j] = max_attempts
            return outcomes, attempts
        batch = min(batch * 2, 1 << 20)
    return outcomes, attempts


# ---------------------------------------------------------------------------
# counting verifier on a virtual product string
# ---------------------------------------------------------------------------
# The virtual string has length n**t; its bit at (i_1..i_t) is the AND of the
# real bits.  Sampling a uniform virtual index is t uniform real indices.


def _virtual_runs_py(bits, t, k, w_one, w_zero, runs, seed, max_attempts):
    np.random.seed(seed)
    n = bits.shape[0]
    outcomes = np.full(runs, OUT_BOT, dtype=np.int64)
    used = 0
    for j in range(runs):
        for a in range(max_attempts):
            used += 1
            ones = 0
            for _ in range(k):
                vb = 1
                for _ in range(t):
                    if bits[np.random.randint(0, n)] == 0:
                        vb = 0
                ones += vb
            if ones == k:
                if np.random.random() < w_one:
                    outcomes[j] = 1
                    break
            elif ones == 0:
                if np.random.random() < w_zero:
                    outcomes[j] = 0
                    break
        if outcomes[j] == OUT_BOT:
            break
    return outcomes, used


virtual_runs_nb = _njit(_virtual_runs_py)


def virtual_runs_np(bits, t, k, w_one, w_zero, runs, seed, max_attempts):
    """Returns (outcomes, attempts used); each attempt costs k*t real queries."""
    rng = np.random.default_rng(seed)
    n = bits.shape[0]
    outcomes = np.full(runs, OUT_BOT, dtype=np.int64)
    used = 0
    j = 0
    gap = 0
    batch = 1024
    while j < runs:
        idx = rng.integers(0, n, size=(batch, k, t))
        ones = bits[idx].astype(np.bool_).all(axis=2).sum(axis=1)
        u = rng.random(batch)
        res = np.full(batch, OUT_BOT, dtype=np.int64)
        res[(ones == k) & (u < w_one)] = 1
        res[(ones == 0) & (u < w_zero)] = 0
        prev = -1
        for h in np.flatnonzero(res != OUT_BOT):
            if gap + h - prev > max_attempts:
                return outcomes, used + max_attempts - gap
            gap = 0
            outcomes[j] = res[h]
            j += 1
            prev = h
            if j == runs:
                return outcomes, used + h + 1
        gap += batch - 1 - prev
        used += batch
        if gap >= max_attempts:
            return outcomes, used - (gap - max_attempts)
        batch = min(batch * 2, 1 << 18)
    return outcomes, used


# ---------------------------------------------------------------------------
# active bindings
# ---------------------------------------------------------------------------

if USE_NUMBA:
    subcube_flags = subcube_flags_nb
    min_certificates = min_certificates_nb
    monomial_indicators = monomial_indicators_nb
    postselected_runs = postselected_runs_nb
    virtual_runs = virtual_runs_nb
else:
    subcube_flags = subcube_flags_np
    min_certificates = min_certificates_np
    monomial_indicators = monomial_indicators_np
    postselected_runs = postselected_runs_np
    virtual_runs = virtual_runs_np
