import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from jigsawperc.errors import ParameterError
from jigsawperc.graph import (
    BLUE,
    RED,
    DoubleGraph,
    GenParams,
    generate_double_graph,
    induced_double_graph,
    num_pairs,
    pair_from_index,
    pair_index,
    read_double_graph,
    union_double_graph,
    write_double_graph,
)


def test_full_probability_gives_all_pairs():
    g = generate_double_graph(GenParams(3, 1.0, 1.0, seed=99))
    assert g.red_edges == g.blue_edges == {(1, 2), (1, 3), (2, 3)}


def test_zero_probability_gives_no_edges():
    g = generate_double_graph(GenParams(10, 0.0, 0.5, seed=3))
    assert len(g.red) == 0
    assert len(g.blue) > 0


def test_mean_edge_count():
    n, p, seeds = 1000, 0.01, 100
    counts = np.array([len(generate_double_graph(GenParams(n, p, p, s)).red) for s in range(seeds)])
    N = num_pairs(n)
    se = math.sqrt(N * p * (1 - p) / seeds)
    assert abs(counts.mean() - N * p) < 5 * se


def test_edge_count_goodness_of_fit():
    n, p, trials = 100, 0.1, 1000
    N = num_pairs(n)
    counts = np.array([len(generate_double_graph(GenParams(n, p, 0.0, s)).red) for s in range(trials)])
    # ten equiprobable bins of Bi(N, p)
    edges = stats.binom.ppf(np.linspace(0, 1, 11)[1:-1], N, p)
    observed = np.bincount(np.searchsorted(edges, counts, side="right"), minlength=10)
    cdf = np.concatenate([[0.0], stats.binom.cdf(edges, N, p), [1.0]])
    expected = np.diff(cdf) * trials
    assert stats.chisquare(observed, expected).pvalue > 0.001


def test_determinism():
    a = generate_double_graph(GenParams(500, 0.02, 0.03, seed=7))
    b = generate_double_graph(GenParams(500, 0.02, 0.03, seed=7))
    assert a == b
    assert a != generate_double_graph(GenParams(500, 0.02, 0.03, seed=8))


def test_red_stream_ignores_p2():
    a = generate_double_graph(GenParams(300, 0.05, 0.01, seed=11))
    b = generate_double_graph(GenParams(300, 0.05, 0.9, seed=11))
    assert np.array_equal(a.red, b.red)
    assert not np.array_equal(a.blue, b.blue)


@pytest.mark.parametrize("kwargs", [
    dict(n=0, p1=0.1, p2=0.1),
    dict(n=5, p1=-0.1, p2=0.1),
    dict(n=5, p1=0.1, p2=1.5),
    dict(n=5, p1=float("nan"), p2=0.1),
])
def test_bad_params(kwargs):
    with pytest.raises(ParameterError):
        GenParams(**kwargs)


def test_invalid_edges_rejected():
    with pytest.raises(ParameterError):
        DoubleGraph.from_edges(3, [(1, 1)])
    with pytest.raises(ParameterError):
        DoubleGraph.from_edges(3, [(1, 4)])


def test_duplicate_edges_collapse():
    g = DoubleGraph.from_edges(3, [(1, 2), (2, 1), (1, 2)], [(3, 2)])
    assert g.red_edges == {(1, 2)}
    assert g.blue_edges == {(2, 3)}


@given(st.integers(2, 60), st.data())
def test_pair_index_roundtrip(n, data):
    u = data.draw(st.integers(1, n - 1))
    v = data.draw(st.integers(u + 1, n))
    idx = pair_index(u, v, n)
    assert 0 <= idx < num_pairs(n)
    a, b = pair_from_index(np.array([idx]), n)
    assert (a[0], b[0]) == (u, v)


def test_pair_index_is_lexicographic():
    n = 7
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    assert [int(pair_index(u, v, n)) for u, v in pairs] == list(range(len(pairs)))
    a, b = pair_from_index(np.arange(len(pairs)), n)
    assert list(zip(a.tolist(), b.tolist())) == pairs


class TestInduced:
    g = DoubleGraph.from_edges(4, [(1, 2), (2, 3), (3, 4)], [(1, 2), (1, 3), (1, 4)])

    def test_full_set_is_identity(self):
        h, labels = induced_double_graph(self.g, [1, 2, 3, 4])
        assert labels == (1, 2, 3, 4)
        assert h == self.g

    def test_singleton(self):
        h, labels = induced_double_graph(self.g, [3])
        assert h.n == 1 and len(h.red) == 0 and len(h.blue) == 0
        assert labels == (3,)

    def test_example(self):
        h, labels = induced_double_graph(self.g, {1, 2, 3})
        assert labels == (1, 2, 3)
        assert h.red_edges == {(1, 2), (2, 3)}
        assert h.blue_edges == {(1, 2), (1, 3)}

    def test_relabelling(self):
        h, labels = induced_double_graph(self.g, {2, 3, 4})
        assert labels == (2, 3, 4)
        assert h.red_edges == {(1, 2), (2, 3)}
        assert h.blue_edges == frozenset()

    def test_out_of_range(self):
        with pytest.raises(ParameterError):
            induced_double_graph(self.g, {0, 1})
        with pytest.raises(ParameterError):
            induced_double_graph(self.g, {5})


def test_induced_parts_never_invent_pairs(rng):
    g = generate_double_graph(GenParams(60, 0.1, 0.1, seed=5))
    for _ in range(20):
        u = sorted(rng.choice(np.arange(1, 61), size=25, replace=False).tolist())
        rest = sorted(set(range(1, 61)) - set(u))
        for colour in (RED, BLUE):
            found = set()
            for part in (u, rest):
                h, labels = induced_double_graph(g, part)
                found |= {(labels[a - 1], labels[b - 1]) for a, b in h.edge_set(colour)}
            assert found <= g.edge_set(colour)


def test_union_basic():
    g = generate_double_graph(GenParams(40, 0.1, 0.2, seed=1))
    assert union_double_graph(g, DoubleGraph(40)) == g
    assert union_double_graph(g, g) == g
    with pytest.raises(ParameterError):
        union_double_graph(g, DoubleGraph(41))


def test_union_inclusion_frequency():
    n, p, samples = 500, 0.01, 200
    hits = 0
    for s in range(samples):
        a = generate_double_graph(GenParams(n, p, 0.0, seed=2 * s))
        b = generate_double_graph(GenParams(n, p, 0.0, seed=2 * s + 1))
        hits += len(union_double_graph(a, b).red)
    total = samples * num_pairs(n)
    q = 1 - (1 - p) ** 2
    assert abs(hits / total - q) < 5 * math.sqrt(q * (1 - q) / total)


def test_text_roundtrip(tmp_path):
    g = generate_double_graph(GenParams(30, 0.2, 0.1, seed=4))
    path = tmp_path / "g.txt"
    write_double_graph(g, path)
    header = path.read_text().splitlines()[0]
    assert header == f"30 {len(g.red)} {len(g.blue)}"
    assert read_double_graph(path) == g


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 40), st.floats(0, 1), st.integers(0, 2**64 - 1))
def test_generated_edges_are_canonical(n, p, seed):
    g = generate_double_graph(GenParams(n, p, p / 2, seed))
    for e in (g.red, g.blue):
        assert np.all(e[:, 0] < e[:, 1])
        assert np.all((e >= 1) & (e <= n))
        keys = pair_index(e[:, 0], e[:, 1], n)
        assert np.all(np.diff(keys) > 0)
