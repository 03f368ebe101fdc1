import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from permerge.builders import build_cw, build_m, build_m4
from permerge.netcore import Network, Stage, run_periodic
from permerge.oracle import (
    TwoSortedSpec,
    VerificationError,
    enumerate_two_sorted,
    failure_profile,
    is_sorted,
    is_two_sorted,
    merge_oracle,
    min_passes,
    two_sorted_matrix,
    two_sorted_specs,
    verify_merging,
    verify_sorting,
)


def test_predicates():
    assert is_sorted((0, 0, 1, 1))
    assert not is_sorted((1, 0))
    # parity subsequences (0,1) and (1,0)
    assert not is_two_sorted((0, 1, 1, 0))
    assert is_two_sorted((1, 0, 1, 1))


def test_merge_oracle():
    assert merge_oracle((), (1, 2)) == (1, 2)
    assert merge_oracle((0, 1), (0, 1)) == (0, 0, 1, 1)
    assert merge_oracle((1, 3, 5), (2, 2, 6)) == (1, 2, 2, 3, 5, 6)
    with pytest.raises(VerificationError):
        merge_oracle((2, 1), ())


@given(st.lists(st.integers(-9, 9)), st.lists(st.integers(-9, 9)))
def test_merge_oracle_is_sorted_union(a, b):
    assert merge_oracle(sorted(a), sorted(b)) == tuple(sorted(a + b))


def brute_two_sorted(n):
    return {v for v in __import__("itertools").product((0, 1), repeat=n) if is_two_sorted(v)}


@pytest.mark.parametrize("n", range(0, 9))
def test_enumerate_two_sorted_is_complete(n):
    got = list(enumerate_two_sorted(n))
    assert len(got) == len(set(got)) == ((n + 1) // 2 + 1) * (n // 2 + 1)
    assert set(got) == brute_two_sorted(n)


def test_enumeration_counts():
    assert sorted(enumerate_two_sorted(2)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert len(list(enumerate_two_sorted(4))) == 9
    assert len(two_sorted_specs(90)) == 46 * 46


def test_matrix_matches_vectors():
    specs = two_sorted_specs(11)
    m = two_sorted_matrix(specs, 11)
    assert [tuple(r) for r in m] == [s.vector() for s in specs]


def test_spec_vector():
    assert TwoSortedSpec(6, 1, 2).vector() == (0, 0, 0, 1, 1, 1)
    with pytest.raises(VerificationError):
        TwoSortedSpec(4, 3, 0).vector()


def test_verify_merging_cw5():
    rep = verify_merging(build_cw(5), 1)
    assert rep.verified and rep.total_inputs == 17 * 17


def test_verify_merging_m5():
    rep = verify_merging(build_m(5), 5)
    assert rep.verified and rep.total_inputs == 2116
    bad = verify_merging(build_m(5), 4)
    assert not bad.verified
    assert bad.failure_count == 393
    assert bad.result_line() == "RESULT family=two_sorted network=M_5 passes=4 inputs=2116 failures=393"


def test_verify_merging_workers_deterministic():
    a = verify_merging(build_m(5), 3, workers=1)
    b = verify_merging(build_m(5), 3, workers=4)
    assert a.failures == b.failures and a.failure_count == b.failure_count


def test_verify_sorting():
    assert verify_sorting(build_cw(1), 1).total_inputs == 4
    rep = verify_sorting(build_cw(4), 4)
    assert rep.verified and rep.total_inputs == 2**16
    assert not verify_sorting(build_cw(4), 3).verified
    with pytest.raises(VerificationError, match="randomised"):
        verify_sorting(build_cw(5), 5)
    rep = verify_sorting(build_cw(5), 5, samples=20000, seed=3)
    assert rep.verified and rep.family == "random"


def test_min_passes():
    assert min_passes(build_cw(5), "two_sorted", 5) == 1
    assert min_passes(build_m(5), "two_sorted", 10) == 5
    assert min_passes(build_cw(3), "all", 5) == 3
    assert min_passes(build_m(5), "two_sorted", 3) is None
    prof = failure_profile(build_m4(6), "two_sorted", 6)
    assert prof[0] > 0 and prof[-1] == 0
    assert min_passes(build_m4(6)) <= math.floor(math.log2(124))


@pytest.mark.parametrize("k", [3, 4, 5])
def test_m_merges_integers(k):
    net = build_m(k)
    rng = random.Random(k)
    n = net.n_registers
    for _ in range(300):
        a = sorted(rng.randrange(10) for _ in range((n + 1) // 2))
        b = sorted(rng.randrange(10) for _ in range(n // 2))
        x = [0] * n
        x[0::2], x[1::2] = a, b
        out = run_periodic(net, x, 2 * k - 5)
        assert out == merge_oracle(a, b)
        assert sorted(out) == sorted(x)


def test_report_text():
    net = Network(2, (Stage(),), name="id")
    rep = verify_merging(net, 1)
    assert rep.failure_count == 1
    assert "FAILED" in rep.text()
