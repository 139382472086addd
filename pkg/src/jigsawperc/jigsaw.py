"""The jigsaw percolation process on a double graph.

Two layers are provided.  :func:`jigsaw_step` works on an explicit
:class:`JigsawState` (cluster partition plus contracted edge sets) and is the
literal, set-based transcription of one round of the process; it is meant
for tracing and for small graphs.  :func:`run_jigsaw` runs the whole process
through the compiled (or numpy) kernel and is what simulations use.  The two
are checked against each other in the test suite.

Clusters are named by their smallest vertex throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import ContractError
from .graph import DoubleGraph


def _pair(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class JigsawState:
    round: int
    partition: tuple[frozenset, ...]
    red_cluster_edges: frozenset
    blue_cluster_edges: frozenset
    aux_edges: frozenset

    @classmethod
    def initial(cls, g: DoubleGraph) -> "JigsawState":
        red = g.red_edges
        blue = g.blue_edges
        partition = tuple(frozenset([v]) for v in range(1, g.n + 1))
        return cls(0, partition, red, blue, red & blue)

    def cluster_of(self) -> dict[int, int]:
        """Map each vertex to the name (smallest vertex) of its cluster."""
        return {v: min(block) for block in self.partition for v in block}


class _DisjointSet:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the smaller label as root so names stay canonical
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def jigsaw_step(state: JigsawState) -> JigsawState:
    """Merge the components of the auxiliary graph and contract both colours."""
    if not state.aux_edges:
        raise ContractError("jigsaw_step requires a non-empty auxiliary graph")
    names = [min(block) for block in state.partition]
    ds = _DisjointSet(names)
    for a, b in state.aux_edges:
        ds.union(a, b)
    groups: dict[int, set] = {}
    for name, block in zip(names, state.partition):
        groups.setdefault(ds.find(name), set()).update(block)
    partition = tuple(frozenset(groups[k]) for k in sorted(groups))

    def contract(edges):
        out = set()
        for a, b in edges:
            ra, rb = ds.find(a), ds.find(b)
            if ra != rb:
                out.add(_pair(ra, rb))
        return frozenset(out)

    red = contract(state.red_cluster_edges)
    blue = contract(state.blue_cluster_edges)
    return JigsawState(state.round + 1, partition, red, blue, red & blue)


def iterate_jigsaw(g: DoubleGraph):
    """Yield every state of the process, from round 0 to termination."""
    state = JigsawState.initial(g)
    yield state
    while state.aux_edges:
        state = jigsaw_step(state)
        yield state


@dataclass
class JigsawResult:
    percolated: bool
    rounds: int
    labels: np.ndarray = field(repr=False)
    max_cluster_trace: list[int]

    @property
    def max_cluster(self) -> int:
        return self.max_cluster_trace[-1]

    @cached_property
    def final_partition(self) -> tuple[frozenset, ...]:
        order = np.argsort(self.labels, kind="stable")
        labels = self.labels[order]
        cuts = np.flatnonzero(np.diff(labels)) + 1
        return tuple(frozenset((blk + 1).tolist()) for blk in np.split(order, cuts))


def run_jigsaw(g: DoubleGraph) -> JigsawResult:
    """Run the process to termination.

    ``max_cluster_trace[i]`` is the largest cluster size after round i, with
    entry 0 describing the initial all-singleton partition.  ``labels[v - 1]``
    is the name (smallest vertex) of the final cluster containing v.
    """
    rounds, labels, trace = _kernels.jigsaw_run(
        g.n, g.red[:, 0] - 1, g.red[:, 1] - 1, g.blue[:, 0] - 1, g.blue[:, 1] - 1
    )
    return JigsawResult(
        percolated=trace[-1] == g.n,
        rounds=int(rounds),
        labels=np.asarray(labels) + 1,
        max_cluster_trace=[int(x) for x in trace],
    )


def run_jigsaw_reference(g: DoubleGraph) -> JigsawResult:
    """Same contract as :func:`run_jigsaw`, computed by repeated :func:`jigsaw_step`."""
    trace = []
    state = None
    for state in iterate_jigsaw(g):
        trace.append(max(len(b) for b in state.partition))
    labels = np.empty(g.n, dtype=np.int64)
    for block in state.partition:
        labels[[v - 1 for v in block]] = min(block)
    return JigsawResult(len(state.partition) == 1, state.round, labels, trace)


def percolates(g: DoubleGraph) -> bool:
    return run_jigsaw(g).percolated
