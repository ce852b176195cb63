"""Time each kernel on its numba and numpy paths.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Numba compile time is excluded by a warm-up call.
"""

import argparse
import time

import numpy as np

from postsel import _kernels as K
from postsel.boolean import majority, subset_order
from postsel.transforms import maj_program


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    n = 12
    f = majority(n)
    values = f.values.astype(np.int8)
    domain = np.ones(1 << n, dtype=np.bool_)
    has0, has1 = K.subcube_flags_np(values, domain, n)
    cert_args = (has0, has1, values, domain, subset_order(n), K.tern_table(n), n)
    yield "subcube_flags n=12", lambda impl: impl["subcube_flags"](values, domain, n)
    yield "min_certificates n=12", lambda impl: impl["min_certificates"](*cert_args)

    rng = np.random.default_rng(0)
    m = 10
    pos = rng.integers(0, 1 << m, 2000)
    neg = rng.integers(0, 1 << m, 2000) & ~pos
    yield "monomial_indicators 2000 x 2^10", lambda impl: impl["monomial_indicators"](pos, neg, m)

    prog = maj_program(8)
    xa = np.array([1, 1, 1, 1, 1, 0, 0, 0], dtype=np.int64)
    yield "postselected_runs MAJ8 2000 runs", lambda impl: impl["postselected_runs"](*prog.compiled, xa, 2000, 1, 10**7)

    bits = np.zeros(64, dtype=np.int64)
    bits[:6] = 1
    yield "virtual_runs n=64 t=4 25 runs", lambda impl: impl["virtual_runs"](bits, 4, 2, 1.0, 0.01, 25, 1, 10**7)


NAMES = ["subcube_flags", "min_certificates", "monomial_indicators", "postselected_runs", "virtual_runs"]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    impls = {
        "numba": {name: getattr(K, name + "_nb") for name in NAMES},
        "numpy": {name: getattr(K, name + "_np") for name in NAMES},
    }
    print(f"{'kernel':36s} {'numba s':>10s} {'numpy s':>10s} {'ratio':>8s}")
    for label, call in cases():
        nb = best_of(lambda: call(impls["numba"]), args.repeat)
        np_ = best_of(lambda: call(impls["numpy"]), args.repeat)
        print(f"{label:36s} {nb:10.4f} {np_:10.4f} {np_ / nb:8.1f}")


if __name__ == "__main__":
    main()
