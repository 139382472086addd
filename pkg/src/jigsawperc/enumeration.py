"""Exhaustive enumeration of minimal percolating configurations.

A minimal percolating configuration on [k] is an ordered pair (red tree,
blue tree) of labelled spanning trees whose double graph percolates.  All
k^(k-2) trees are generated from Prüfer sequences, every ordered pair is
profiled by the enumeration kernel (percolation plus the behaviour of all
absorption inputs), and the resulting exact counts are compared against the
known upper bounds in 640-bit floating point.

Counted quantities, for a configuration on the given vertex set:

* ``P_k``          -- percolating tree pairs on [k];
* ``M'(k, l)``     -- configurations on [k] with a percolating absorption
                      input finishing in at most l steps;
* ``M(k, l, r)``   -- configurations on [k + r] with a percolating input
                      finishing in exactly l steps that absorbs some cluster
                      of size exactly r in step l.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import mpmath
import numpy as np

from . import _kernels
from .absorption import iter_percolating_inputs
from .errors import CapacityError, ParameterError
from .graph import DoubleGraph
from .jigsaw import percolates

DEFAULT_TREE_CAP = 6
DEFAULT_MPRIME_CAP = 5
BOUND_PRECISION_BITS = 640

_mp = mpmath.MPContext()
_mp.prec = BOUND_PRECISION_BITS


# --- Prüfer sequences ---------------------------------------------------------


def prufer_decode(seq, k: Optional[int] = None) -> frozenset:
    """Labelled tree on [k] (k = len(seq) + 2) encoded by ``seq``."""
    seq = [int(x) for x in seq]
    if k is None:
        k = len(seq) + 2
    if k < 2 or len(seq) != k - 2:
        raise ParameterError(f"a Prüfer sequence for k={k} has length {k - 2}")
    if any(not 1 <= x <= k for x in seq):
        raise ParameterError(f"Prüfer entries must lie in 1..{k}")
    degree = [1] * (k + 1)
    for x in seq:
        degree[x] += 1
    leaves = [v for v in range(1, k + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((min(leaf, x), max(leaf, x)))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    a, b = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((a, b))
    return frozenset(edges)


def prufer_encode(edges, k: int) -> tuple[int, ...]:
    adj = {v: set() for v in range(1, k + 1)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    leaves = [v for v in adj if len(adj[v]) == 1]
    heapq.heapify(leaves)
    seq = []
    for _ in range(k - 2):
        leaf = heapq.heappop(leaves)
        (nb,) = adj.pop(leaf)
        adj[nb].discard(leaf)
        seq.append(nb)
        if len(adj[nb]) == 1:
            heapq.heappush(leaves, nb)
    return tuple(seq)


def all_trees(k: int) -> list[frozenset]:
    """All k^(k-2) labelled trees on [k], in lexicographic Prüfer order."""
    if k < 1:
        raise ParameterError("k must be positive")
    if k == 1:
        return [frozenset()]
    return [prufer_decode(s, k) for s in itertools.product(range(1, k + 1), repeat=k - 2)]


def tree_masks(k: int) -> np.ndarray:
    """Adjacency bitmasks: row t, column v-1 holds the neighbours of v in tree t."""
    trees = all_trees(k)
    out = np.zeros((len(trees), k), dtype=np.uint32)
    for t, tree in enumerate(trees):
        for u, v in tree:
            out[t, u - 1] |= 1 << (v - 1)
            out[t, v - 1] |= 1 << (u - 1)
    return out


# --- sweeps ---------------------------------------------------------------


@dataclass(frozen=True)
class TreePairSweep:
    k: int
    pairs: int
    percolating: int
    self_pairs: int
    no_input: int
    unsound: int
    min_steps_hist: tuple[int, ...]
    lr_counts: tuple[tuple[int, ...], ...]

    def mprime(self, l: int) -> int:
        return sum(self.min_steps_hist[: min(l, self.k) + 1])


@lru_cache(maxsize=None)
def tree_pair_sweep(k: int, backend: Optional[str] = None) -> TreePairSweep:
    """Profile every ordered spanning-tree pair on [k] with the enumeration kernel."""
    if not 1 <= k <= _kernels.MAX_ENUM_VERTICES:
        raise CapacityError(f"enumeration kernel supports 1..{_kernels.MAX_ENUM_VERTICES} vertices")
    kern = _kernels.active
    if backend == "python":
        kern = _kernels.pure
    elif backend is not None and backend != kern.BACKEND:
        raise ParameterError(f"backend {backend!r} is not available")
    raw = kern.tree_pair_sweep(k, tree_masks(k))
    return TreePairSweep(
        k=k,
        pairs=raw["pairs"],
        percolating=raw["percolating"],
        self_pairs=raw["self_pairs"],
        no_input=raw["no_input"],
        unsound=raw["unsound"],
        min_steps_hist=tuple(int(x) for x in raw["min_steps_hist"]),
        lr_counts=tuple(tuple(int(x) for x in row) for row in raw["lr_counts"]),
    )


def config_masks(k: int, red_tree, blue_tree):
    red = [0] * k
    blue = [0] * k
    for masks, tree in ((red, red_tree), (blue, blue_tree)):
        for u, v in tree:
            masks[u - 1] |= 1 << (v - 1)
            masks[v - 1] |= 1 << (u - 1)
    return red, blue


def decode_lr_bits(k: int, bits: int) -> frozenset:
    out = set()
    for steps in range(k + 1):
        for r in range(k + 1):
            if bits >> (steps * (k + 1) + r) & 1:
                out.add((steps, r))
    return frozenset(out)


@dataclass(frozen=True)
class ConfigProfile:
    percolates: bool
    n_inputs: int
    min_steps: int
    final_steps: frozenset  # {(steps, r)}: finish at `steps` absorbing a size-r cluster last


def kernel_profile(k: int, red_tree, blue_tree) -> ConfigProfile:
    red, blue = config_masks(k, red_tree, blue_tree)
    perc, n_inputs, min_steps, bits = _kernels.config_profile(k, red, blue)
    return ConfigProfile(bool(perc), n_inputs, min_steps, decode_lr_bits(k, bits))


def reference_profile(k: int, red_tree, blue_tree) -> ConfigProfile:
    """Same as :func:`kernel_profile`, via the jigsaw engine and the absorption module."""
    g = DoubleGraph.from_edges(k, red_tree, blue_tree)
    n_inputs = 0
    min_steps = -1
    final = set()
    for _, trace in iter_percolating_inputs(g, cap=k):
        n_inputs += 1
        if min_steps < 0 or trace.steps < min_steps:
            min_steps = trace.steps
        final.update((trace.steps, r) for r in trace.final_step_sizes)
    return ConfigProfile(percolates(g), n_inputs, min_steps, frozenset(final))


def count_percolating_pairs_engine(k: int) -> int:
    """P_k by running the jigsaw engine on every ordered tree pair (independent of the kernel)."""
    trees = all_trees(k)
    return sum(percolates(DoubleGraph.from_edges(k, a, b)) for a in trees for b in trees)


# --- bounds -------------------------------------------------------------------


def _check_range(which: str, k: int, l: Optional[int], r: Optional[int]) -> None:
    if which == "cayley":
        ok = k >= 1
    elif which == "lemma_Mprime":
        ok = l is not None and 1 <= l <= k
    elif which in ("theorem_Mklr", "ineq31"):
        ok = l is not None and r is not None and 1 <= l <= k and 1 <= r <= k
    else:
        raise ParameterError(f"unknown bound {which!r}")
    if not ok:
        raise ParameterError(f"parameters k={k}, l={l}, r={r} outside the range of {which}")


def paper_bound_value(which: str, k: int, l: Optional[int] = None, r: Optional[int] = None):
    """Evaluate one of the counting bounds as a 640-bit mpmath float.

    ``cayley``        k^(2k-4)
    ``lemma_Mprime``  (k!)^2 2^k e^l k e^291 / 2
    ``theorem_Mklr``  C(k+r, r) (k!)^2 (r!)^2 2^(k+r) e^(r+l) k l r^3 e^582 / 2
    ``ineq31``        C(k+r, r) M'(k, l) 2 r^2 l M'(r, r), from exact counts
    """
    _check_range(which, k, l, r)
    mp = _mp
    if which == "cayley":
        return mp.mpf(k) ** (2 * k - 4)
    if which == "lemma_Mprime":
        return mp.mpf(math.factorial(k) ** 2 * 2**k * k) * mp.exp(l + 291) / 2
    if which == "theorem_Mklr":
        coeff = math.comb(k + r, r) * math.factorial(k) ** 2 * math.factorial(r) ** 2
        coeff *= 2 ** (k + r) * k * l * r**3
        return mp.mpf(coeff) * mp.exp(r + l + 582) / 2
    mk = count_Mprime(k, l, cap=k).exact_count
    mr = count_Mprime(r, r, cap=r).exact_count
    return mp.mpf(math.comb(k + r, r) * mk * 2 * r * r * l * mr)


@dataclass(frozen=True)
class CountReport:
    which: str
    k: int
    l: Optional[int]
    r: Optional[int]
    exact_count: int
    paper_bound: object
    bound_satisfied: bool
    secondary_bound: object = None
    secondary_satisfied: Optional[bool] = None

    @property
    def all_satisfied(self) -> bool:
        return self.bound_satisfied and self.secondary_satisfied is not False

    def as_dict(self) -> dict:
        def fmt(x):
            return None if x is None else mpmath.nstr(x, 20)

        return {
            "which": self.which,
            "k": self.k,
            "l": self.l,
            "r": self.r,
            "exact_count": self.exact_count,
            "paper_bound": fmt(self.paper_bound),
            "bound_satisfied": self.bound_satisfied,
            "secondary_bound": fmt(self.secondary_bound),
            "secondary_satisfied": self.secondary_satisfied,
        }


def _cap_check(size: int, cap: int) -> None:
    if size > cap:
        raise CapacityError(f"{size} vertices exceeds the enumeration cap {cap}")


def count_minimal_configs(k: int, cap: int = DEFAULT_TREE_CAP) -> CountReport:
    """P_k, the number of percolating ordered tree pairs, against k^(2k-4)."""
    if k < 1:
        raise ParameterError("k must be positive")
    _cap_check(k, cap)
    count = tree_pair_sweep(k).percolating
    bound = paper_bound_value("cayley", k)
    return CountReport("cayley", k, None, None, count, bound, count <= bound)


def count_Mprime(k: int, l: int, cap: int = DEFAULT_MPRIME_CAP) -> CountReport:
    _check_range("lemma_Mprime", k, l, None)
    _cap_check(k, cap)
    count = tree_pair_sweep(k).mprime(l)
    bound = paper_bound_value("lemma_Mprime", k, l)
    return CountReport("lemma_Mprime", k, l, None, count, bound, count <= bound)


def count_Mklr(k: int, l: int, r: int, cap: int = DEFAULT_TREE_CAP) -> CountReport:
    _check_range("theorem_Mklr", k, l, r)
    _cap_check(k + r, cap)
    count = tree_pair_sweep(k + r).lr_counts[l][r]
    bound = paper_bound_value("theorem_Mklr", k, l, r)
    partition_bound = paper_bound_value("ineq31", k, l, r)
    return CountReport(
        "theorem_Mklr", k, l, r, count, bound, count <= bound,
        secondary_bound=partition_bound, secondary_satisfied=count <= partition_bound,
    )


def bound_suite(tree_cap: int = DEFAULT_TREE_CAP, mprime_cap: int = DEFAULT_MPRIME_CAP) -> list[CountReport]:
    """Every applicable count/bound comparison within the given caps."""
    reports = [count_minimal_configs(k, cap=tree_cap) for k in range(1, tree_cap + 1)]
    for k in range(1, mprime_cap + 1):
        reports.extend(count_Mprime(k, l, cap=mprime_cap) for l in range(1, k + 1))
    for k in range(1, tree_cap):
        for r in range(1, min(k, tree_cap - k) + 1):
            reports.extend(count_Mklr(k, l, r, cap=tree_cap) for l in range(1, k + 1))
    return reports
