"""Double graphs: two edge colours (red = 1, blue = 2) on the vertex set 1..n.

Random double graphs G(n, p1, p2) are sampled by geometric skipping over the
lexicographic order of the C(n, 2) vertex pairs, so the cost is proportional
to the number of edges rather than to n^2.  Each colour draws from its own
Philox stream derived from (seed, colour tag), which makes the red edge set
independent of p2 and vice versa.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from os import PathLike
from typing import Iterable

import numpy as np

from .errors import ParameterError

RED = 1
BLUE = 2

_EMPTY_EDGES = np.zeros((0, 2), dtype=np.int64)
_UINT64_MAX = 2**64 - 1


def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


def pair_index(u, v, n: int):
    """Lexicographic rank of the pair {u, v} (1-based labels, u < v) among all C(n, 2) pairs."""
    a = np.asarray(u, dtype=np.int64) - 1
    b = np.asarray(v, dtype=np.int64) - 1
    return a * (2 * n - a - 1) // 2 + (b - a - 1)


def pair_from_index(idx, n: int):
    """Inverse of :func:`pair_index`; returns 1-based (u, v) arrays."""
    idx = np.asarray(idx, dtype=np.int64)
    if idx.size == 0:
        return idx.copy(), idx.copy()
    m = 2 * n - 1
    disc = np.maximum(float(m) * m - 8.0 * idx.astype(np.float64), 0.0)
    a = np.floor((m - np.sqrt(disc)) / 2.0).astype(np.int64)
    a = np.clip(a, 0, n - 2)

    def start(x):
        return x * (2 * n - x - 1) // 2

    # float rounding can leave `a` off by one in either direction
    for _ in range(2):
        a = np.where(start(a) > idx, a - 1, a)
        a = np.where((a + 1 <= n - 2) & (start(a + 1) <= idx), a + 1, a)
    b = idx - start(a) + a + 1
    return a + 1, b + 1


def _canonical_edges(n: int, edges) -> np.ndarray:
    arr = np.asarray(edges if edges is not None else _EMPTY_EDGES, dtype=np.int64)
    if arr.size == 0:
        return _EMPTY_EDGES.copy()
    arr = arr.reshape(-1, 2)
    if arr.min() < 1 or arr.max() > n:
        raise ParameterError(f"edge endpoint outside 1..{n}")
    lo = np.minimum(arr[:, 0], arr[:, 1])
    hi = np.maximum(arr[:, 0], arr[:, 1])
    if np.any(lo == hi):
        raise ParameterError("self-loops are not allowed")
    keys = np.unique(pair_index(lo, hi, n))
    u, v = pair_from_index(keys, n)
    return np.stack([u, v], axis=1)


def _csr(n: int, edges: np.ndarray):
    src = np.concatenate([edges[:, 0], edges[:, 1]])
    dst = np.concatenate([edges[:, 1], edges[:, 0]])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    indptr = np.zeros(n + 2, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n + 1), out=indptr[1:])
    return indptr, dst


class DoubleGraph:
    """Immutable double graph on vertices 1..n.

    Edge sets are stored per colour as lexicographically sorted ``(m, 2)``
    integer arrays with ``u < v``; a per-vertex adjacency index (CSR) is
    built lazily on first neighbour query.
    """

    __slots__ = ("n", "red", "blue", "_csr", "_sets")

    def __init__(self, n: int, red=None, blue=None):
        if int(n) != n or n < 1:
            raise ParameterError(f"n must be a positive integer, got {n!r}")
        self.n = int(n)
        self.red = _canonical_edges(self.n, red)
        self.blue = _canonical_edges(self.n, blue)
        self.red.flags.writeable = False
        self.blue.flags.writeable = False
        self._csr = {}
        self._sets = {}

    @classmethod
    def from_edges(cls, n: int, red: Iterable = (), blue: Iterable = ()) -> "DoubleGraph":
        return cls(n, list(red) or None, list(blue) or None)

    def edges(self, colour: int) -> np.ndarray:
        if colour == RED:
            return self.red
        if colour == BLUE:
            return self.blue
        raise ParameterError(f"unknown colour {colour!r}")

    def edge_set(self, colour: int) -> frozenset:
        if colour not in self._sets:
            self._sets[colour] = frozenset(map(tuple, self.edges(colour).tolist()))
        return self._sets[colour]

    @property
    def red_edges(self) -> frozenset:
        return self.edge_set(RED)

    @property
    def blue_edges(self) -> frozenset:
        return self.edge_set(BLUE)

    def adjacency(self, colour: int):
        """CSR ``(indptr, indices)``; neighbours of v are ``indices[indptr[v]:indptr[v+1]]``."""
        if colour not in self._csr:
            self._csr[colour] = _csr(self.n, self.edges(colour))
        return self._csr[colour]

    def neighbours(self, colour: int, v: int) -> np.ndarray:
        indptr, indices = self.adjacency(colour)
        return indices[indptr[v]:indptr[v + 1]]

    def __eq__(self, other):
        if not isinstance(other, DoubleGraph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.red, other.red)
            and np.array_equal(self.blue, other.blue)
        )

    def __hash__(self):
        return hash((self.n, self.red.tobytes(), self.blue.tobytes()))

    def __repr__(self):
        return f"DoubleGraph(n={self.n}, red={len(self.red)}, blue={len(self.blue)})"


@dataclass(frozen=True)
class GenParams:
    n: int
    p1: float
    p2: float
    seed: int = 0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"n must be a positive integer, got {self.n!r}")
        for name in ("p1", "p2"):
            p = getattr(self, name)
            if not (0.0 <= p <= 1.0) or math.isnan(p):
                raise ParameterError(f"{name} must lie in [0, 1], got {p!r}")
        if int(self.seed) != self.seed or not (0 <= self.seed <= _UINT64_MAX):
            raise ParameterError("seed must be an integer in [0, 2**64)")


def colour_stream(seed: int, colour: int) -> np.random.Generator:
    """Philox (counter-based) generator for one colour of one seed."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(colour),))
    return np.random.Generator(np.random.Philox(ss))


def sample_pairs(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Each pair of 1..n independently with probability p, via geometric gaps."""
    total = num_pairs(n)
    if p <= 0.0 or total == 0:
        return _EMPTY_EDGES.copy()
    if p >= 1.0:
        keys = np.arange(total, dtype=np.int64)
    else:
        chunks = []
        pos = -1
        while True:
            remaining = total - pos - 1
            mean = remaining * p
            size = int(mean + 6.0 * math.sqrt(mean) + 32)
            # gaps past the end are misses; clipping keeps the cumsum inside int64
            gaps = np.minimum(rng.geometric(p, size=size), total + 1)
            cand = pos + np.cumsum(gaps)
            hit = cand[cand < total]
            chunks.append(hit)
            if hit.size < cand.size:
                break
            pos = int(cand[-1])
        keys = np.concatenate(chunks)
    u, v = pair_from_index(keys, n)
    return np.stack([u, v], axis=1)


def generate_double_graph(params: GenParams) -> DoubleGraph:
    red = sample_pairs(params.n, params.p1, colour_stream(params.seed, RED))
    blue = sample_pairs(params.n, params.p2, colour_stream(params.seed, BLUE))
    return DoubleGraph(params.n, red, blue)


def _induced_edges(g: DoubleGraph, colour: int, members: np.ndarray, newlabel: np.ndarray):
    indptr, indices = g.adjacency(colour)
    starts = indptr[members]
    lengths = indptr[members + 1] - starts
    total = int(lengths.sum())
    if total == 0:
        return _EMPTY_EDGES
    offsets = np.repeat(starts - np.concatenate([[0], np.cumsum(lengths)[:-1]]), lengths)
    dst = indices[np.arange(total) + offsets]
    src = np.repeat(members, lengths)
    keep = (newlabel[dst] > 0) & (src < dst)
    return np.stack([newlabel[src[keep]], newlabel[dst[keep]]], axis=1)


def induced_double_graph(g: DoubleGraph, u) -> tuple[DoubleGraph, tuple[int, ...]]:
    """Double graph induced on vertex set ``u``, relabelled 1..|u| in increasing order.

    Returns ``(h, label_map)`` where vertex ``i`` of ``h`` is vertex
    ``label_map[i - 1]`` of ``g``.
    """
    members = np.unique(np.fromiter((int(x) for x in u), dtype=np.int64))
    if members.size == 0:
        raise ParameterError("induced vertex set must be non-empty")
    if members[0] < 1 or members[-1] > g.n:
        raise ParameterError(f"vertex set not contained in 1..{g.n}")
    newlabel = np.zeros(g.n + 1, dtype=np.int64)
    newlabel[members] = np.arange(1, members.size + 1)
    red = _induced_edges(g, RED, members, newlabel)
    blue = _induced_edges(g, BLUE, members, newlabel)
    return DoubleGraph(int(members.size), red, blue), tuple(members.tolist())


def union_double_graph(a: DoubleGraph, b: DoubleGraph) -> DoubleGraph:
    if a.n != b.n:
        raise ParameterError(f"vertex counts differ: {a.n} != {b.n}")
    return DoubleGraph(a.n, np.concatenate([a.red, b.red]), np.concatenate([a.blue, b.blue]))


def write_double_graph(g: DoubleGraph, path: str | PathLike) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{g.n} {len(g.red)} {len(g.blue)}\n")
        for u, v in g.red.tolist():
            fh.write(f"{u} {v}\n")
        for u, v in g.blue.tolist():
            fh.write(f"{u} {v}\n")


def read_double_graph(path: str | PathLike) -> DoubleGraph:
    with open(path, encoding="ascii") as fh:
        tokens = fh.read().split()
    try:
        n, m1, m2 = (int(x) for x in tokens[:3])
        body = np.array(tokens[3:], dtype=np.int64)
    except ValueError as exc:
        raise ParameterError(f"malformed double-graph file {path}: {exc}") from None
    if body.size != 2 * (m1 + m2):
        raise ParameterError(f"expected {m1 + m2} edges in {path}, found {body.size / 2:g}")
    body = body.reshape(-1, 2)
    return DoubleGraph(n, body[:m1], body[m1:])
