"""The absorption process and an exhaustive search for percolating inputs.

An input is a start vertex ``v1`` together with a partition of the remaining
vertices into clusters, each of which must itself percolate.  At step i the
process looks at the i-th absorbed vertex ``v_i`` and swallows every
remaining cluster of size at most ``t(i)`` (the current absorbed count) that
is joined to ``v_i`` in one colour and to some of ``v_1..v_i`` in the other.

Vertices absorbed in one step are appended cluster by cluster, clusters
ordered by their smallest vertex, each cluster in increasing label order.
``steps`` is the index of the last step that absorbed anything (0 when
nothing was ever absorbed).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from .errors import CapacityError, InputError
from .graph import BLUE, RED, DoubleGraph, induced_double_graph
from .jigsaw import percolates

DEFAULT_SEARCH_CAP = 7


@dataclass(frozen=True)
class AbsorptionInput:
    v1: int
    clusters: tuple[frozenset, ...]

    @classmethod
    def make(cls, v1: int, clusters) -> "AbsorptionInput":
        blocks = tuple(sorted((frozenset(c) for c in clusters), key=min))
        return cls(int(v1), blocks)

    def sort_key(self):
        return (self.v1, tuple(tuple(sorted(c)) for c in self.clusters))


@dataclass(frozen=True)
class AbsorptionTrace:
    percolated: bool
    steps: int
    vertex_order: tuple[int, ...]
    per_step_added: tuple[tuple[frozenset, ...], ...]
    set_sizes: tuple[int, ...]

    @property
    def final_step_sizes(self) -> frozenset:
        """Sizes of the clusters absorbed in the last merging step."""
        if self.steps == 0:
            return frozenset()
        return frozenset(len(c) for c in self.per_step_added[self.steps - 1])


def _adjacency_sets(g: DoubleGraph, colour: int) -> dict[int, set]:
    adj = {v: set() for v in range(1, g.n + 1)}
    for u, v in g.edges(colour).tolist():
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _cluster_percolates(g: DoubleGraph, cluster) -> bool:
    if len(cluster) == 1:
        return True
    h, _ = induced_double_graph(g, cluster)
    return percolates(h)


def _partition_problems(g: DoubleGraph, inp: AbsorptionInput) -> Optional[str]:
    if not 1 <= inp.v1 <= g.n:
        return f"start vertex {inp.v1} outside 1..{g.n}"
    seen = {inp.v1}
    for c in inp.clusters:
        if not c:
            return "empty cluster"
        if any(not 1 <= v <= g.n for v in c):
            return f"cluster {sorted(c)} leaves 1..{g.n}"
        if seen & c:
            return f"cluster {sorted(c)} overlaps another cluster or v1"
        seen |= c
    if len(seen) != g.n:
        return "clusters and v1 do not cover the vertex set"
    return None


def is_valid_input(g: DoubleGraph, inp: AbsorptionInput) -> bool:
    if _partition_problems(g, inp) is not None:
        return False
    return all(_cluster_percolates(g, c) for c in inp.clusters)


def run_absorption(g: DoubleGraph, inp: AbsorptionInput, validate: bool = True) -> AbsorptionTrace:
    if validate:
        problem = _partition_problems(g, inp)
        if problem is None:
            bad = [sorted(c) for c in inp.clusters if not _cluster_percolates(g, c)]
            if bad:
                problem = f"non-percolating input cluster(s) {bad}"
        if problem is not None:
            raise InputError(problem)
    red = _adjacency_sets(g, RED)
    blue = _adjacency_sets(g, BLUE)
    return _absorb(g.n, red, blue, inp)


def _absorb(n, red, blue, inp: AbsorptionInput) -> AbsorptionTrace:
    order = [inp.v1]
    remaining = sorted(inp.clusters, key=min)
    prefix_red: set = set()
    prefix_blue: set = set()
    added_per_step = []
    sizes = [1]
    steps = 0
    i = 1
    while len(order) >= i:
        v = order[i - 1]
        prefix_red |= red[v]
        prefix_blue |= blue[v]
        t = len(order)
        added = []
        keep = []
        for c in remaining:
            if len(c) <= t and (
                (red[v] & c and prefix_blue & c) or (blue[v] & c and prefix_red & c)
            ):
                added.append(c)
            else:
                keep.append(c)
        for c in added:
            order.extend(sorted(c))
        remaining = keep
        added_per_step.append(tuple(added))
        sizes.append(len(order))
        if added:
            steps = i
        i += 1
    return AbsorptionTrace(
        percolated=len(order) == n,
        steps=steps,
        vertex_order=tuple(order),
        per_step_added=tuple(added_per_step),
        set_sizes=tuple(sizes),
    )


def _percolating_block_test(g: DoubleGraph):
    @lru_cache(maxsize=None)
    def test(block: frozenset) -> bool:
        return _cluster_percolates(g, block)

    return test


def _partitions(rest: tuple, test) -> Iterator[list]:
    # block containing the smallest remaining vertex first; prune bad blocks early
    if not rest:
        yield []
        return
    first, others = rest[0], rest[1:]
    k = len(others)
    for bits in range(1 << k):
        block = frozenset([first] + [others[j] for j in range(k) if bits >> j & 1])
        if not test(block):
            continue
        tail = tuple(x for x in others if x not in block)
        for more in _partitions(tail, test):
            yield [block] + more


def iter_valid_inputs(g: DoubleGraph) -> Iterator[AbsorptionInput]:
    """Every start vertex with every partition of the rest into percolating clusters."""
    test = _percolating_block_test(g)
    vertices = tuple(range(1, g.n + 1))
    for v1 in vertices:
        rest = tuple(v for v in vertices if v != v1)
        for blocks in _partitions(rest, test):
            yield AbsorptionInput.make(v1, blocks)


def iter_percolating_inputs(g: DoubleGraph, cap: int = DEFAULT_SEARCH_CAP):
    """Yield ``(input, trace)`` for every valid input whose absorption percolates."""
    if g.n > cap:
        raise CapacityError(f"exhaustive input search capped at {cap} vertices, got {g.n}")
    red = _adjacency_sets(g, RED)
    blue = _adjacency_sets(g, BLUE)
    for inp in iter_valid_inputs(g):
        trace = _absorb(g.n, red, blue, inp)
        if trace.percolated:
            yield inp, trace


def find_percolating_input(g: DoubleGraph, cap: int = DEFAULT_SEARCH_CAP):
    """Percolating input with the fewest steps, or ``None``.

    Ties are broken by ``(v1, clusters)`` in lexicographic order.  Returns
    ``(input, steps)``.
    """
    best = None
    for inp, trace in iter_percolating_inputs(g, cap):
        key = (trace.steps, inp.sort_key())
        if best is None or key < best[0]:
            best = (key, inp)
    if best is None:
        return None
    return best[1], best[0][0]
