"""Pure-Python / numpy implementations of the hot kernels.

Semantics are identical to the compiled ``_ckernels`` module; the test suite
runs both backends against each other.  Vertices are 0-based here.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

BACKEND = "python"


def _pair_keys(label, u, v, n):
    a = label[u]
    b = label[v]
    keep = a != b
    lo = np.minimum(a[keep], b[keep])
    hi = np.maximum(a[keep], b[keep])
    return keep, np.unique(lo * n + hi)


def jigsaw_run(n, ru, rv, bu, bv):
    """Round-synchronous jigsaw process.

    Returns ``(rounds, labels, trace)``: ``labels[v]`` is the smallest vertex
    of v's final cluster and ``trace[i]`` the largest cluster size after
    round i (``trace[0]`` is the initial state).
    """
    ru, rv, bu, bv = (np.asarray(x, dtype=np.int64) for x in (ru, rv, bu, bv))
    label = np.arange(n, dtype=np.int64)
    trace = [1 if n else 0]
    rounds = 0
    while True:
        keep_r, red_keys = _pair_keys(label, ru, rv, n)
        keep_b, blue_keys = _pair_keys(label, bu, bv, n)
        # edges inside a cluster never matter again
        ru, rv = ru[keep_r], rv[keep_r]
        bu, bv = bu[keep_b], bv[keep_b]
        aux = np.intersect1d(red_keys, blue_keys, assume_unique=True)
        if aux.size == 0:
            break
        a, b = np.divmod(aux, n)
        adj = coo_matrix((np.ones(aux.size, dtype=np.int8), (a, b)), shape=(n, n))
        ncomp, comp = connected_components(adj, directed=False)
        ids = np.unique(label)
        smallest = np.full(ncomp, n, dtype=np.int64)
        np.minimum.at(smallest, comp[ids], ids)
        label = smallest[comp[label]]
        rounds += 1
        trace.append(int(np.bincount(label).max()))
    return rounds, label, trace


# --- bitmask machinery for exhaustive small-k enumeration -------------------


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _mask_percolates(mask: int, red, blue) -> bool:
    clusters = []
    x = mask
    while x:
        low = x & -x
        v = low.bit_length() - 1
        clusters.append([low, red[v], blue[v]])
        x ^= low
    merged = True
    while merged and len(clusters) > 1:
        merged = False
        for i in range(len(clusters)):
            ci = clusters[i]
            for j in range(i + 1, len(clusters)):
                cj = clusters[j]
                if ci[1] & cj[0] and ci[2] & cj[0]:
                    ci[0] |= cj[0]
                    ci[1] |= cj[1]
                    ci[2] |= cj[2]
                    del clusters[j]
                    merged = True
                    break
            if merged:
                break
    return len(clusters) == 1


def percolating_masks(m: int, red, blue) -> list:
    perc = [False] * (1 << m)
    for mask in range(1, 1 << m):
        perc[mask] = _mask_percolates(mask, red, blue)
    return perc


def _partitions(rest: int, perc):
    if rest == 0:
        yield []
        return
    low = rest & -rest
    others = rest ^ low
    sub = others
    while True:
        block = sub | low
        if perc[block]:
            for tail in _partitions(rest ^ block, perc):
                yield [block] + tail
        if sub == 0:
            break
        sub = (sub - 1) & others


def absorb(m: int, red, blue, v1: int, blocks):
    """Absorption run on bitmasks; blocks must be ordered by smallest vertex.

    Returns ``(percolated, steps, sizes)`` where ``sizes`` is a bitmask of the
    cluster sizes added in the final merging step.
    """
    order = [v1]
    t = 1
    i = 1
    absorbed = 1 << v1
    pref_red = 0
    pref_blue = 0
    used = [False] * len(blocks)
    steps = 0
    last_sizes = 0
    while t >= i:
        v = order[i - 1]
        pref_red |= red[v]
        pref_blue |= blue[v]
        t_now = t
        sizes = 0
        for b, c in enumerate(blocks):
            if used[b]:
                continue
            size = _popcount(c)
            if size > t_now:
                continue
            if (red[v] & c and pref_blue & c) or (blue[v] & c and pref_red & c):
                used[b] = True
                sizes |= 1 << size
                absorbed |= c
                x = c
                while x:
                    low = x & -x
                    order.append(low.bit_length() - 1)
                    x ^= low
                t += size
        if sizes:
            steps = i
            last_sizes = sizes
        i += 1
    return absorbed == (1 << m) - 1, steps, last_sizes


def config_profile(m: int, red, blue):
    """Aggregate absorption behaviour of one configuration over all inputs.

    Returns ``(percolates, n_inputs, min_steps, lr_bits)``: ``n_inputs`` counts
    percolating inputs, ``min_steps`` is -1 if there are none, and bit
    ``steps * (m + 1) + r`` of ``lr_bits`` is set when some percolating input
    finishes at ``steps`` having added a size-r cluster in that last step.
    """
    red = [int(x) for x in red]
    blue = [int(x) for x in blue]
    perc = percolating_masks(m, red, blue)
    full = (1 << m) - 1
    n_inputs = 0
    min_steps = -1
    lr_bits = 0
    for v1 in range(m):
        for blocks in _partitions(full ^ (1 << v1), perc):
            ok, steps, sizes = absorb(m, red, blue, v1, blocks)
            if not ok:
                continue
            n_inputs += 1
            if min_steps < 0 or steps < min_steps:
                min_steps = steps
            r = 0
            while sizes:
                if sizes & 1:
                    lr_bits |= 1 << (steps * (m + 1) + r)
                sizes >>= 1
                r += 1
    return perc[full], n_inputs, min_steps, lr_bits


def tree_pair_sweep(m: int, tree_masks):
    """Profiles of all ordered spanning-tree pairs, exploiting colour symmetry."""
    trees = [[int(x) for x in row] for row in np.asarray(tree_masks)]
    hist = np.zeros(m + 1, dtype=np.int64)
    lr = np.zeros((m + 1, m + 1), dtype=np.int64)
    out = dict(pairs=0, percolating=0, self_pairs=0, no_input=0, unsound=0)
    for i, red in enumerate(trees):
        for j in range(i, len(trees)):
            w = 1 if i == j else 2
            perc, n_inputs, min_steps, lr_bits = config_profile(m, red, trees[j])
            out["pairs"] += w
            if not perc:
                out["unsound"] += w * (n_inputs > 0)
                continue
            out["percolating"] += w
            out["self_pairs"] += i == j
            if n_inputs == 0:
                out["no_input"] += w
                continue
            hist[min_steps] += w
            for steps in range(m + 1):
                for r in range(m + 1):
                    if lr_bits >> (steps * (m + 1) + r) & 1:
                        lr[steps, r] += w
    out["min_steps_hist"] = hist
    out["lr_counts"] = lr
    return out
