import random

import pytest

from ahtlab.coloring import Coloring, PairColoring, Word, projected_point_coloring, word_block_coloring
from ahtlab.errors import SearchBudgetExceeded
from ahtlab.solvers import (
    AhtWitness,
    HilWitness,
    Ipt2Witness,
    Rt2Witness,
    SearchBudget,
    family_unions,
    solve_aht,
    solve_hil,
    solve_ipt2,
    solve_rt2,
)

from oracles import (
    naive_aht,
    naive_hil,
    naive_ipt2,
    naive_rt2,
    random_pair_coloring,
    random_point_coloring,
    random_set_coloring,
)


def test_aht_examples():
    c = Coloring.from_expr("lam(n) % 2", 2, 64)
    assert solve_aht(c, SearchBudget(64, 3)) == AhtWitness((1, 4, 16), 0)
    assert solve_aht(Coloring.from_expr("0", 1, 8), SearchBudget(8, 2)) == AhtWitness((1, 2), 0)
    assert solve_aht(Coloring.from_expr("n % 2", 2, 4), SearchBudget(4, 1)) == AhtWitness((1,), 1)


def test_aht_none_when_bound_too_small():
    assert solve_aht(Coloring.from_expr("n % 2", 2, 8), SearchBudget(8, 50)) is None


def test_aht_without_apartness():
    c = Coloring.from_expr("0", 1, 6)
    assert solve_aht(c, SearchBudget(6, 3, require_apart=False)) == AhtWitness((1, 2, 3), 0)
    # least apart triple is 1, 2, 4 with total 7
    assert solve_aht(c, SearchBudget(6, 3)) is None


def test_aht_search_bound_must_fit_domain():
    with pytest.raises(ValueError):
        solve_aht(Coloring.from_expr("0", 1, 8), SearchBudget(9, 1))


def test_rt2_examples():
    assert solve_rt2(PairColoring.from_expr("(j - i) % 2", 2, 10), SearchBudget(10, 3)) == Rt2Witness((0, 2, 4), 0)
    assert solve_rt2(PairColoring.from_expr("1", 2, 4), SearchBudget(4, 4)) == Rt2Witness((0, 1, 2, 3), 1)
    assert solve_rt2(PairColoring.from_expr("if(j < 2, 0, 1)", 2, 2), SearchBudget(2, 2)) == Rt2Witness((0, 1), 0)
    assert solve_rt2(PairColoring.from_expr("1", 2, 4), SearchBudget(4, 1)) == Rt2Witness((0,), 0)


def test_ipt2_examples():
    assert solve_ipt2(PairColoring.from_expr("0", 1, 4), SearchBudget(4, 2)) == Ipt2Witness((0, 1), (0, 1), 0)
    assert solve_ipt2(PairColoring.from_expr("(j - i) % 2", 2, 6), SearchBudget(6, 2)) == Ipt2Witness((0, 1), (0, 1), 1)
    assert solve_ipt2(PairColoring.from_expr("i % 2", 2, 3), SearchBudget(3, 1)) == Ipt2Witness((0,), (1,), 0)


def test_hil_examples():
    assert solve_hil(Coloring.from_expr("0", 1, 2, kind="set"), SearchBudget(2, 2)) == HilWitness((1, 2), 0)
    w = solve_hil(Coloring.from_expr("pop(s) % 2", 2, 3, kind="set"), SearchBudget(3, 2))
    assert w == HilWitness((1, 7), 1)
    assert w.sets() == [{0}, {0, 1, 2}]
    f = Coloring.from_table([1], 2, kind="set")
    assert solve_hil(f, SearchBudget(1, 1)) == HilWitness((1,), 1)


def test_family_unions():
    assert sorted(family_unions([1, 2, 4])) == [1, 2, 3, 4, 5, 6, 7]
    assert len(family_unions([1, 2, 4, 8])) == 15


def test_node_limit_is_a_third_outcome():
    c = Coloring.from_expr("lam(n) % 2", 2, 64)
    with pytest.raises(SearchBudgetExceeded):
        solve_aht(c, SearchBudget(64, 3, node_limit=3))
    assert solve_aht(c, SearchBudget(64, 3, node_limit=10_000)) == AhtWitness((1, 4, 16), 0)
    with pytest.raises(SearchBudgetExceeded):
        solve_aht(Coloring.from_expr("n % 2", 2, 8), SearchBudget(8, 2, node_limit=0))


@pytest.mark.parametrize("seed", range(40))
def test_pruned_matches_naive_small(seed):
    rng = random.Random(seed)
    k = rng.choice([2, 3])
    n = rng.randint(1, 16)
    m = rng.choice([1, 2])
    c = random_point_coloring(rng, k, n)
    for apart in (True, False):
        w = solve_aht(c, SearchBudget(n, m, require_apart=apart))
        expected = naive_aht(c, n, m, apart)
        assert (None if w is None else (w.H, w.color)) == expected
    f = random_pair_coloring(rng, k, max(n, 2))
    w = solve_rt2(f, SearchBudget(f.bound, m))
    assert (None if w is None else (w.J, w.color)) == naive_rt2(f, f.bound, m)
    w = solve_ipt2(f, SearchBudget(f.bound, m))
    assert (None if w is None else (w.H1, w.H2, w.color)) == naive_ipt2(f, f.bound, m)
    base = rng.randint(1, 4)
    s = random_set_coloring(rng, k, base)
    w = solve_hil(s, SearchBudget(base, m))
    assert (None if w is None else (w.X, w.color)) == naive_hil(s, base, m)


@pytest.mark.parametrize("seed", range(25))
def test_endpoint_mode_matches_naive(seed):
    rng = random.Random(1000 + seed)
    f = random_pair_coloring(rng, rng.choice([2, 3]), 7)
    g = projected_point_coloring(f)
    assert g.endpoint_determined
    m = rng.choice([1, 2, 3])
    w = solve_aht(g, SearchBudget(g.bound, m))
    assert (None if w is None else (w.H, w.color)) == naive_aht(g, g.bound, m)


def test_endpoint_mode_matches_generic_search():
    rng = random.Random(5)
    for _ in range(20):
        w = Word(tuple(rng.randrange(3) for _ in range(9)), 1, period=4)
        d = word_block_coloring(w)
        generic = Coloring(d.num_colors, d.bound, d._fn, d.source, d.transforms)
        budget = SearchBudget(2**9 - 1, 2)
        assert solve_aht(d, budget) == solve_aht(generic, budget)


@pytest.mark.parametrize("threads", [2, 4])
def test_parallel_search_is_identical(threads):
    rng = random.Random(99)
    for _ in range(15):
        c = random_point_coloring(rng, 2, 200)
        f = random_pair_coloring(rng, 2, 10)
        s = random_set_coloring(rng, 3, 4)
        for m in (2, 3):
            assert solve_aht(c, SearchBudget(200, m, threads=threads)) == solve_aht(c, SearchBudget(200, m))
            assert solve_rt2(f, SearchBudget(10, m + 1, threads=threads)) == solve_rt2(f, SearchBudget(10, m + 1))
            assert solve_ipt2(f, SearchBudget(10, m, threads=threads)) == solve_ipt2(f, SearchBudget(10, m))
            assert solve_hil(s, SearchBudget(4, m, threads=threads)) == solve_hil(s, SearchBudget(4, m))


def _outcome(fn, *args):
    try:
        return fn(*args)
    except SearchBudgetExceeded as exc:
        return ("budget", exc.nodes)


@pytest.mark.parametrize("limit", [0, 1, 5, 17, 60, 250])
def test_parallel_budget_outcome_matches_sequential(limit):
    rng = random.Random(limit)
    for _ in range(10):
        c = random_point_coloring(rng, 3, 300)
        seq = _outcome(solve_aht, c, SearchBudget(300, 3, node_limit=limit))
        par = _outcome(solve_aht, c, SearchBudget(300, 3, node_limit=limit, threads=3))
        assert seq == par


def test_monotone_in_bound():
    rng = random.Random(8)
    for _ in range(30):
        c = random_point_coloring(rng, 2, 120)
        prev = None
        for n in (20, 40, 80, 120):
            w = solve_aht(c, SearchBudget(n, 2))
            if prev is not None:
                assert w is not None and w.H <= prev.H
            prev = w or prev
        f = random_pair_coloring(rng, 2, 12)
        prev = None
        for n in (6, 9, 12):
            w = solve_rt2(f, SearchBudget(n, 3))
            if prev is not None:
                assert w is not None and w.J <= prev.J
            prev = w or prev
