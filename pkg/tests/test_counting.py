from fractions import Fraction

import numpy as np
import pytest

from postsel.counting import (
    CountingParams,
    counting_verifier,
    hamming_weight,
    product_power,
    repetitions,
    strong_count,
    verifier_conditional_one,
    verifier_r,
    weak_count,
)
from postsel.errors import PostselError
from postsel.program import conditional_one, query_depth

F = Fraction
THIRD = F(1, 3)


def bits_with_weight(n, w, seed=0):
    rng = np.random.default_rng(seed)
    x = np.zeros(n, dtype=np.int64)
    x[rng.choice(n, w, replace=False)] = 1
    return "".join(map(str, x))


def test_boundary_example():
    prog = counting_verifier(4, CountingParams(4))
    assert conditional_one(prog, "1100") == THIRD
    assert verifier_conditional_one(4, 4, 2, 2) == THIRD


@pytest.mark.parametrize("k", [1, 2, 3])
def test_program_matches_closed_form(k):
    for n in (1, 3, 5, 8):
        params = CountingParams(n, k=k)
        for A in range(1, n + 1):
            prog = counting_verifier(A, params)
            assert query_depth(prog) <= k
            for w in range(n + 1):
                x = (1 << w) - 1
                assert conditional_one(prog, x) == verifier_conditional_one(A, n, k, w)


def test_threshold_behaviour():
    for n in range(2, 13):
        for w in range(1, n + 1):
            for A in range(1, n + 1):
                p = verifier_conditional_one(A, n, 2, w)
                if 2 * A < w:
                    assert p >= F(2, 3)
                if A > 2 * w and 2 * w <= n:
                    assert p <= THIRD


def test_zero_input_only_rejects():
    prog = counting_verifier(2, CountingParams(4))
    assert conditional_one(prog, 0) == 0


def test_scaled_weights_when_r_large():
    assert verifier_r(4, 4, 2) == 2
    prog = counting_verifier(4, CountingParams(4))
    # all answer weights stay at most 1 and the conditional is unchanged
    assert conditional_one(prog, "1000") == verifier_conditional_one(4, 4, 2, 1)


def test_params_validation():
    with pytest.raises(PostselError):
        CountingParams(4, eps=F(1, 2))
    with pytest.raises(PostselError):
        CountingParams(4, k=0)
    with pytest.raises(PostselError):
        CountingParams(4, p=0)
    with pytest.raises(PostselError):
        counting_verifier(5, CountingParams(4))


def test_repetitions_are_odd():
    assert repetitions(64, THIRD) == 25
    for n in (1, 2, 7, 1000):
        for eps in (F(1, 3), F(1, 100)):
            assert repetitions(n, eps) % 2 == 1


def test_product_power():
    assert [product_power(p) for p in (1, 2, 4, 10)] == [1, 2, 4, 8]


def test_weak_count_all_ones_and_zero():
    assert weak_count("1" * 16, THIRD, seed=1).estimate == 16
    res = weak_count("0" * 16, THIRD, seed=1)
    assert res.estimate == 0 and res.rounds == []
    assert strong_count("0" * 16, CountingParams(16, p=4), seed=1).estimate == 0


def test_weak_count_deterministic():
    x = bits_with_weight(32, 5)
    a = weak_count(x, THIRD, seed=42)
    b = weak_count(x, THIRD, seed=42)
    assert a.estimate == b.estimate and a.transcript() == b.transcript()


def test_weak_count_range():
    n, w = 32, 6
    hits = 0
    for seed in range(40):
        est = weak_count(bits_with_weight(n, w, seed), THIRD, seed=seed).estimate
        assert 1 <= est <= n
        hits += w / 2 <= est <= 4 * w
    assert hits >= 30


def test_strong_count_p1_is_weak():
    x = bits_with_weight(16, 4)
    a = strong_count(x, CountingParams(16, p=1), seed=3)
    b = weak_count(x, THIRD, seed=3)
    assert a.estimate == b.estimate and a.t == 1


def test_strong_count_accuracy():
    n, w = 16, 6
    hits = sum(5 <= strong_count(bits_with_weight(n, w, s), CountingParams(n, p=4), seed=s).estimate <= 8 for s in range(30))
    assert hits >= 25


def test_transcript_lists_rounds():
    res = weak_count(bits_with_weight(16, 3), THIRD, seed=5)
    text = res.transcript()
    assert text.splitlines()[0].startswith("round 0: A=1")
    assert text.endswith(f"estimate={res.estimate}")


def test_hamming_weight():
    assert hamming_weight("10110") == 3
    assert hamming_weight(0b101, n=3) == 2
    with pytest.raises(PostselError):
        hamming_weight(5)
