import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permerge.builders import build_cw, build_p, p_stages
from permerge.netcore import (
    Comparator,
    Network,
    NetworkError,
    Stage,
    StageConflictError,
    compact_form,
    delay,
    delete_registers,
    format_netlist,
    fst,
    lst,
    parse_netlist,
    regs,
    run,
    run_batch,
    run_periodic,
    run_stage,
    union,
)


def brute_delay(net):
    """Register spans by scanning every stage for every register."""
    best = 0
    for r in range(net.n_registers):
        hits = [q for q, s in enumerate(net.stages, 1) if any(r in c for c in s.comparators)]
        if hits:
            best = max(best, hits[-1] - hits[0] + 1)
    return best


def test_regs():
    assert regs(Stage()) == set()
    assert regs(Stage.of([(0, 1), (2, 3)])) == {0, 1, 2, 3}
    assert regs(build_cw(5).stages[0]) == set(range(32))


def test_stage_rejects_shared_register():
    with pytest.raises(NetworkError):
        Stage.of([(0, 1), (1, 2)])
    with pytest.raises(NetworkError):
        Stage.of([(3, 3)])


def test_network_checks_range_and_period():
    with pytest.raises(NetworkError):
        Network(2, (Stage.of([(0, 2)]),))
    a, b = Stage.of([(0, 1)]), Stage.of([(1, 2)])
    Network(3, (a, b, a, b), period=2)
    with pytest.raises(NetworkError, match="period"):
        Network(3, (a, b, b, a), period=2)


def test_fst_lst_delay_single_stage():
    net = Network(4, (Stage.of([(0, 3)]),))
    assert fst(0, net) == lst(0, net) == 1
    assert delay(net) == 1
    with pytest.raises(NetworkError, match="register unused"):
        fst(1, net)


def test_delay_cw5_by_scan():
    net = build_cw(5)
    assert brute_delay(net) == 5
    assert delay(net) == 5
    assert (fst(1, net), lst(1, net)) == (1, 5)


@pytest.mark.parametrize("k", range(3, 9))
def test_delay_p(k):
    assert delay(build_p(k)) == brute_delay(build_p(k)) == 3


def test_union():
    a = Network(4, (Stage.of([(0, 1)]),))
    b = Network(4, (Stage.of([(2, 3)]),))
    empty = Network(4, ())
    assert union(a, empty) == a
    assert union(a, b).stages == (Stage.of([(0, 1), (2, 3)]),)
    deep = Network(4, (Stage.of([(2, 3)]), Stage.of([(0, 3)])))
    assert union(a, deep).depth == 2
    with pytest.raises(StageConflictError) as e:
        union(a, Network(4, (Stage.of([(1, 2)]),)))
    assert e.value.index == 1


def test_compact_form_delay_one():
    net = Network(6, (Stage.of([(0, 1)]), Stage.of([(2, 3)]), Stage.of([(4, 5)])))
    c = compact_form(net)
    assert c.depth == 1 and c.period == 1
    assert c.stages[0] == Stage.of([(0, 1), (2, 3), (4, 5)])


def test_compact_form_p5():
    p = build_p(5)
    c = compact_form(p)
    assert (c.depth, c.n_registers, c.period) == (3, 92, 3)
    s = p.stages
    assert c.stages[0].comparators == s[0].comparators | s[3].comparators | s[6].comparators
    assert c.stages[1].comparators == s[1].comparators | s[4].comparators
    assert c.stages[2].comparators == s[2].comparators | s[5].comparators
    assert c.provenance[(1, Comparator(0, 1))] == 1
    assert c.provenance[(1, next(iter(s[6].comparators)))] == 7


@pytest.mark.parametrize("k", range(3, 9))
def test_compact_form_depth_equals_delay(k):
    c = compact_form(build_p(k))
    assert c.depth == delay(c) == delay(build_p(k))


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_compact_form_random_networks(data):
    n = 8
    stages = []
    for _ in range(data.draw(st.integers(1, 8))):
        perm = data.draw(st.permutations(range(n)))
        size = data.draw(st.integers(0, n // 2))
        stages.append(Stage.of(tuple(sorted(perm[2 * i : 2 * i + 2])) for i in range(size)))
    net = Network(n, tuple(stages))
    c = compact_form(net)
    assert c.depth == delay(net) == brute_delay(net)
    # empty stages can leave the folded network with a shorter register span
    assert delay(c) <= c.depth
    assert c.size == net.size


def test_delete_registers():
    net = Network(4, (Stage.of([(1, 2)]),))
    assert delete_registers(net, set()) == net
    d = delete_registers(net, {0})
    assert d.n_registers == 3 and d.stages[0] == Stage.of([(0, 1)])
    with pytest.raises(NetworkError, match=r"\[1:2\]"):
        delete_registers(net, {1})
    assert delete_registers(net, {1}, allow_prune=True).size == 0


def test_delete_boundary_of_compact_p5():
    c = compact_form(build_p(5))
    m = delete_registers(c, {0, 91}, allow_prune=True)
    assert m.n_registers == 90
    assert m.size == c.size - 2


def test_run_stage():
    s = Stage.of([(0, 1)])
    assert run_stage(s, (1, 0)) == (0, 1)
    assert run_stage(s, (0, 1)) == (0, 1)


def test_run_length_mismatch():
    with pytest.raises(NetworkError):
        run(build_cw(2), (0, 1))


@pytest.mark.parametrize("k", [1, 3, 5])
def test_cw_merges_two_sorted(k):
    rng = random.Random(k)
    n = 2**k
    for _ in range(200):
        a = sorted(rng.randrange(5) for _ in range(n // 2))
        b = sorted(rng.randrange(5) for _ in range(n // 2))
        x = [0] * n
        x[0::2], x[1::2] = a, b
        assert list(run(build_cw(k), x)) == sorted(a + b)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_run_stage_idempotent_and_permutation(data):
    stage = build_p(4).stages[data.draw(st.integers(0, 4))]
    v = data.draw(st.lists(st.integers(-5, 5), min_size=30, max_size=30))
    once = run_stage(stage, v)
    assert run_stage(stage, once) == once
    assert sorted(once) == sorted(v)


def test_run_batch_matches_run():
    net = build_p(4)
    rng = np.random.default_rng(1)
    x = rng.integers(0, 100, size=(50, net.n_registers))
    out = run_batch(net, x, passes=2)
    for row, o in zip(x, out):
        assert tuple(o) == run_periodic(net, tuple(row), 2)


def test_netlist_round_trip(data_dir):
    for path in sorted(data_dir.glob("*.net")):
        text = path.read_text()
        net = parse_netlist(text)
        assert format_netlist(net) == text
        assert parse_netlist(format_netlist(net)) == net


@pytest.mark.parametrize(
    "text,line",
    [
        ("regs 2\nperiod -\n", 1),
        ("registers 2\nperiod x\n", 2),
        ("registers 2\nperiod -\n1:0\n", 3),
        ("registers 4\nperiod -\n0:1\n0:1 1:2\n", 4),
        ("registers 2\nperiod -\n0:5\n", 3),
    ],
)
def test_netlist_errors(text, line):
    with pytest.raises(NetworkError) as e:
        parse_netlist(text)
    assert e.value.line == line


def test_empty_stage_round_trip():
    net = Network(2, (Stage(), Stage.of([(0, 1)])), period=None)
    assert parse_netlist(format_netlist(net)) == net
