import itertools

import pytest

from conftest import random_double_graph
from jigsawperc.absorption import (
    AbsorptionInput,
    find_percolating_input,
    is_valid_input,
    iter_percolating_inputs,
    iter_valid_inputs,
    run_absorption,
)
from jigsawperc.enumeration import all_trees
from jigsawperc.errors import CapacityError, InputError
from jigsawperc.graph import BLUE, RED, DoubleGraph, induced_double_graph
from jigsawperc.jigsaw import percolates

PATH_STAR3 = DoubleGraph.from_edges(3, [(1, 2), (2, 3)], [(1, 2), (1, 3)])


def test_single_vertex():
    trace = run_absorption(DoubleGraph(1), AbsorptionInput.make(1, []))
    assert trace.percolated and trace.steps == 0
    assert trace.vertex_order == (1,)
    assert find_percolating_input(DoubleGraph(1)) == (AbsorptionInput(1, ()), 0)


def test_double_edge():
    g = DoubleGraph.from_edges(2, [(1, 2)], [(1, 2)])
    trace = run_absorption(g, AbsorptionInput.make(1, [{2}]))
    assert trace.percolated and trace.steps == 1
    assert trace.per_step_added[0] == (frozenset({2}),)


def test_hand_trace():
    trace = run_absorption(PATH_STAR3, AbsorptionInput.make(1, [{2}, {3}]))
    assert trace.percolated and trace.steps == 2
    assert trace.per_step_added[:2] == ((frozenset({2}),), (frozenset({3}),))
    assert trace.vertex_order == (1, 2, 3)
    assert trace.set_sizes[:3] == (1, 2, 3)


def test_search_on_path_star():
    inp, steps = find_percolating_input(PATH_STAR3)
    assert steps <= 2
    assert run_absorption(PATH_STAR3, inp).percolated
    # 3 start vertices x Bell(2) partitions at most
    assert len(list(iter_valid_inputs(PATH_STAR3))) <= 3 * 2


def test_search_fails_without_double_edges():
    g = DoubleGraph.from_edges(3, [(1, 2), (2, 3)], [(1, 3)])
    assert find_percolating_input(g) is None


def test_search_cap():
    with pytest.raises(CapacityError):
        find_percolating_input(DoubleGraph(8))
    assert find_percolating_input(DoubleGraph(3), cap=3) is None


class TestValidity:
    def test_singletons(self):
        g = DoubleGraph.from_edges(4, [(1, 2)], [(3, 4)])
        assert is_valid_input(g, AbsorptionInput.make(2, [{1}, {3}, {4}]))

    def test_red_only_pair(self):
        g = DoubleGraph.from_edges(3, [(2, 3)], [(1, 2)])
        assert not is_valid_input(g, AbsorptionInput.make(1, [{2, 3}]))
        with pytest.raises(InputError):
            run_absorption(g, AbsorptionInput.make(1, [{2, 3}]))

    def test_overlap(self):
        g = DoubleGraph(4)
        bad = AbsorptionInput(1, (frozenset({2, 3}), frozenset({3, 4})))
        assert not is_valid_input(g, bad)
        with pytest.raises(InputError):
            run_absorption(g, bad)

    def test_cover(self):
        g = DoubleGraph(4)
        assert not is_valid_input(g, AbsorptionInput.make(1, [{2}, {3}]))
        assert not is_valid_input(g, AbsorptionInput.make(1, [{1}, {2}, {3}, {4}]))
        assert not is_valid_input(g, AbsorptionInput.make(5, [{1}, {2}, {3}, {4}]))


def test_tie_break_prefers_smaller_v1():
    g = DoubleGraph.from_edges(2, [(1, 2)], [(1, 2)])
    assert find_percolating_input(g) == (AbsorptionInput.make(1, [{2}]), 1)


def _replay_ok(g, inp, trace):
    """Every added cluster has the bicoloured connection and size bound of its step."""
    red = {v: set() for v in range(1, g.n + 1)}
    blue = {v: set() for v in range(1, g.n + 1)}
    for u, v in g.edge_set(RED):
        red[u].add(v), red[v].add(u)
    for u, v in g.edge_set(BLUE):
        blue[u].add(v), blue[v].add(u)
    for i, added in enumerate(trace.per_step_added, start=1):
        vi = trace.vertex_order[i - 1]
        prefix = set(trace.vertex_order[:i])
        for c in added:
            if len(c) > trace.set_sizes[i - 1]:
                return False
            r_to_vi = bool(red[vi] & c)
            b_to_vi = bool(blue[vi] & c)
            r_in = any(red[x] & c for x in prefix)
            b_in = any(blue[x] & c for x in prefix)
            if not ((r_to_vi and b_in) or (b_to_vi and r_in)):
                return False
    return True


def test_soundness_and_discipline(rng):
    for _ in range(40):
        n = int(rng.integers(2, 7))
        g = random_double_graph(rng, n, 0.5, 0.5)
        for inp, trace in itertools.islice(iter_percolating_inputs(g), 40):
            assert percolates(g)
            assert _replay_ok(g, inp, trace)
            assert trace.steps <= n - 1
            assert sorted(trace.vertex_order) == list(range(1, n + 1))
            sizes = trace.set_sizes
            for i, added in enumerate(trace.per_step_added):
                assert sizes[i + 1] == sizes[i] + sum(len(c) for c in added)


def test_added_order_is_canonical(rng):
    for _ in range(30):
        g = random_double_graph(rng, 6, 0.6, 0.6)
        for inp, trace in itertools.islice(iter_percolating_inputs(g), 20):
            pos = 1
            for added in trace.per_step_added:
                mins = [min(c) for c in added]
                assert mins == sorted(mins)
                for c in added:
                    assert list(trace.vertex_order[pos:pos + len(c)]) == sorted(c)
                    pos += len(c)


def test_inputs_exist_for_six_vertex_configs(rng):
    trees = all_trees(6)
    for _ in range(150):
        a = trees[rng.integers(len(trees))]
        b = trees[rng.integers(len(trees))]
        g = DoubleGraph.from_edges(6, a, b)
        assert percolates(g) == (find_percolating_input(g) is not None)


def test_input_clusters_percolate(rng):
    for _ in range(20):
        g = random_double_graph(rng, 5, 0.5, 0.5)
        for inp in iter_valid_inputs(g):
            for c in inp.clusters:
                assert len(c) == 1 or percolates(induced_double_graph(g, c)[0])
