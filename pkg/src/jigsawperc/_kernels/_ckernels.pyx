# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: jigsaw contraction and the tree-pair absorption sweep.

Drop-in replacement for ``_pykernels``; see that module for the contracts.
"""

import numpy as np

from libc.stdint cimport int64_t, uint32_t, uint64_t

cdef extern from *:
    int __builtin_popcount(unsigned int) nogil
    int __builtin_ctz(unsigned int) nogil

BACKEND = "cython"
cdef enum:
    MAXM = 8


cdef tuple _csr(Py_ssize_t n, const int64_t[::1] u, const int64_t[::1] v):
    cdef Py_ssize_t m = u.shape[0], e, a, b
    ptr_arr = np.zeros(n + 1, dtype=np.int64)
    adj_arr = np.empty(2 * m, dtype=np.int64)
    fill_arr = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] ptr = ptr_arr
    cdef int64_t[::1] adj = adj_arr
    cdef int64_t[::1] fill = fill_arr
    for e in range(m):
        ptr[u[e] + 1] += 1
        ptr[v[e] + 1] += 1
    for a in range(n):
        ptr[a + 1] += ptr[a]
    for a in range(n):
        fill[a] = ptr[a]
    for e in range(m):
        a = u[e]
        b = v[e]
        adj[fill[a]] = b
        fill[a] += 1
        adj[fill[b]] = a
        fill[b] += 1
    return ptr_arr, adj_arr


cdef inline int64_t _find(int64_t[::1] uf, int64_t x) nogil:
    while uf[x] != x:
        uf[x] = uf[uf[x]]
        x = uf[x]
    return x


def jigsaw_run(Py_ssize_t n, ru_in, rv_in, bu_in, bv_in):
    """Round-synchronous jigsaw process; returns ``(rounds, labels, trace)``.

    Only clusters formed in the previous round are scanned: two clusters that
    both survived a round unchanged were already non-adjacent in the
    auxiliary graph.  Edges found inside a cluster are swapped out of the
    active part of the adjacency lists and never revisited.
    """
    cdef const int64_t[::1] ru = np.ascontiguousarray(ru_in, dtype=np.int64)
    cdef const int64_t[::1] rv = np.ascontiguousarray(rv_in, dtype=np.int64)
    cdef const int64_t[::1] bu = np.ascontiguousarray(bu_in, dtype=np.int64)
    cdef const int64_t[::1] bv = np.ascontiguousarray(bv_in, dtype=np.int64)
    rptr_arr, radj_arr = _csr(n, ru, rv)
    bptr_arr, badj_arr = _csr(n, bu, bv)
    cdef int64_t[::1] rptr = rptr_arr
    cdef int64_t[::1] radj = radj_arr
    cdef int64_t[::1] bptr = bptr_arr
    cdef int64_t[::1] badj = badj_arr
    rdeg_arr = np.diff(rptr_arr)
    bdeg_arr = np.diff(bptr_arr)
    cdef int64_t[::1] rdeg = rdeg_arr
    cdef int64_t[::1] bdeg = bdeg_arr

    label_arr = np.arange(n, dtype=np.int64)
    head_arr = np.arange(n, dtype=np.int64)
    tail_arr = np.arange(n, dtype=np.int64)
    nxt_arr = np.full(n, -1, dtype=np.int64)
    size_arr = np.ones(n, dtype=np.int64)
    minv_arr = np.arange(n, dtype=np.int64)
    uf_arr = np.arange(n, dtype=np.int64)
    stamp_arr = np.full(n, -1, dtype=np.int64)
    changed_arr = np.arange(n, dtype=np.int64)
    touched_arr = np.empty(n, dtype=np.int64)
    is_touched_arr = np.zeros(n, dtype=np.uint8)
    best_arr = np.full(n, -1, dtype=np.int64)
    gmin_arr = np.full(n, n, dtype=np.int64)
    cdef int64_t[::1] label = label_arr
    cdef int64_t[::1] head = head_arr
    cdef int64_t[::1] tail = tail_arr
    cdef int64_t[::1] nxt = nxt_arr
    cdef int64_t[::1] size = size_arr
    cdef int64_t[::1] minv = minv_arr
    cdef int64_t[::1] uf = uf_arr
    cdef int64_t[::1] stamp = stamp_arr
    cdef int64_t[::1] changed = changed_arr
    cdef int64_t[::1] touched = touched_arr
    cdef unsigned char[::1] is_touched = is_touched_arr
    cdef int64_t[::1] best = best_arr
    cdef int64_t[::1] gmin = gmin_arr

    cdef Py_ssize_t nchanged = n, ntouched, ci, k
    cdef int64_t C, D, v, w, e, end, tok = 0, x, r, tgt, ra, rb
    cdef int64_t maxsize = 1 if n > 0 else 0
    cdef Py_ssize_t rounds = 0
    trace = [int(maxsize)]

    while True:
        ntouched = 0
        with nogil:
            for ci in range(nchanged):
                C = changed[ci]
                tok += 1
                v = head[C]
                while v != -1:
                    e = rptr[v]
                    end = e + rdeg[v]
                    while e < end:
                        w = radj[e]
                        D = label[w]
                        if D == C:
                            end -= 1
                            radj[e] = radj[end]
                            radj[end] = w
                            rdeg[v] -= 1
                        else:
                            stamp[D] = tok
                            e += 1
                    v = nxt[v]
                v = head[C]
                while v != -1:
                    e = bptr[v]
                    end = e + bdeg[v]
                    while e < end:
                        w = badj[e]
                        D = label[w]
                        if D == C:
                            end -= 1
                            badj[e] = badj[end]
                            badj[end] = w
                            bdeg[v] -= 1
                        else:
                            if stamp[D] == tok:
                                if not is_touched[C]:
                                    is_touched[C] = 1
                                    touched[ntouched] = C
                                    ntouched += 1
                                if not is_touched[D]:
                                    is_touched[D] = 1
                                    touched[ntouched] = D
                                    ntouched += 1
                                ra = _find(uf, C)
                                rb = _find(uf, D)
                                if ra != rb:
                                    uf[rb] = ra
                            e += 1
                    v = nxt[v]
        if ntouched == 0:
            break
        with nogil:
            # per group: largest member keeps its internal id, smallest vertex names it
            for k in range(ntouched):
                x = touched[k]
                r = _find(uf, x)
                if best[r] == -1 or size[x] > size[best[r]]:
                    best[r] = x
                if minv[x] < gmin[r]:
                    gmin[r] = minv[x]
            nchanged = 0
            for k in range(ntouched):
                x = touched[k]
                r = _find(uf, x)
                tgt = best[r]
                if x == tgt:
                    changed[nchanged] = x
                    nchanged += 1
                    continue
                v = head[x]
                while v != -1:
                    label[v] = tgt
                    v = nxt[v]
                nxt[tail[tgt]] = head[x]
                tail[tgt] = tail[x]
                size[tgt] += size[x]
                head[x] = -1
            for k in range(nchanged):
                x = changed[k]
                r = _find(uf, x)
                minv[x] = gmin[r]
                if size[x] > maxsize:
                    maxsize = size[x]
            for k in range(ntouched):
                x = touched[k]
                r = _find(uf, x)
                best[r] = -1
                gmin[r] = n
            for k in range(ntouched):
                x = touched[k]
                uf[x] = x
                is_touched[x] = 0
        rounds += 1
        trace.append(int(maxsize))

    out = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] outv = out
    for k in range(n):
        outv[k] = minv[label[k]]
    return rounds, out, trace


# --- bitmask enumeration ------------------------------------------------------

cdef struct Ctx:
    int m
    uint32_t red[MAXM]
    uint32_t blue[MAXM]
    unsigned char perc[1 << MAXM]
    uint32_t blocks[MAXM]
    int v1
    int64_t n_inputs
    int min_steps
    uint64_t lr_bits


cdef bint _mask_percolates(Ctx* c, uint32_t mask) nogil:
    cdef uint32_t cl[MAXM]
    cdef uint32_t rn[MAXM]
    cdef uint32_t bn[MAXM]
    cdef int k = 0, i, j, v
    cdef uint32_t x = mask
    cdef bint merged
    while x:
        v = __builtin_ctz(x)
        cl[k] = (<uint32_t>1) << v
        rn[k] = c.red[v]
        bn[k] = c.blue[v]
        k += 1
        x &= x - 1
    merged = True
    while merged and k > 1:
        merged = False
        for i in range(k):
            for j in range(i + 1, k):
                if (rn[i] & cl[j]) and (bn[i] & cl[j]):
                    cl[i] |= cl[j]
                    rn[i] |= rn[j]
                    bn[i] |= bn[j]
                    k -= 1
                    cl[j] = cl[k]
                    rn[j] = rn[k]
                    bn[j] = bn[k]
                    merged = True
                    break
            if merged:
                break
    return k == 1


cdef void _absorb_and_record(Ctx* c, int nb) nogil:
    cdef int order[MAXM]
    cdef unsigned char used[MAXM]
    cdef int m = c.m, t = 1, i = 1, t_now, b, size, v, steps = 0, r
    cdef uint32_t absorbed = (<uint32_t>1) << c.v1
    cdef uint32_t pref_red = 0, pref_blue = 0, blk, x, sizes, last_sizes = 0
    order[0] = c.v1
    for b in range(nb):
        used[b] = 0
    while t >= i:
        v = order[i - 1]
        pref_red |= c.red[v]
        pref_blue |= c.blue[v]
        t_now = t
        sizes = 0
        for b in range(nb):
            if used[b]:
                continue
            blk = c.blocks[b]
            size = __builtin_popcount(blk)
            if size > t_now:
                continue
            if ((c.red[v] & blk) and (pref_blue & blk)) or ((c.blue[v] & blk) and (pref_red & blk)):
                used[b] = 1
                sizes |= (<uint32_t>1) << size
                absorbed |= blk
                x = blk
                while x:
                    order[t] = __builtin_ctz(x)
                    t += 1
                    x &= x - 1
        if sizes:
            steps = i
            last_sizes = sizes
        i += 1
    if absorbed != ((<uint32_t>1) << m) - 1:
        return
    c.n_inputs += 1
    if c.min_steps < 0 or steps < c.min_steps:
        c.min_steps = steps
    r = 0
    while last_sizes:
        if last_sizes & 1:
            c.lr_bits |= (<uint64_t>1) << (steps * (m + 1) + r)
        last_sizes >>= 1
        r += 1


cdef void _partitions(Ctx* c, uint32_t rest, int nb) nogil:
    cdef uint32_t low, others, sub, block
    if rest == 0:
        _absorb_and_record(c, nb)
        return
    low = rest & (~rest + 1)
    others = rest ^ low
    sub = others
    while True:
        block = sub | low
        if c.perc[block]:
            c.blocks[nb] = block
            _partitions(c, rest ^ block, nb + 1)
        if sub == 0:
            break
        sub = (sub - 1) & others


cdef void _profile(Ctx* c) nogil:
    cdef uint32_t mask, full = ((<uint32_t>1) << c.m) - 1
    cdef int v1
    c.perc[0] = 0
    for mask in range(1, full + 1):
        c.perc[mask] = _mask_percolates(c, mask)
    c.n_inputs = 0
    c.min_steps = -1
    c.lr_bits = 0
    for v1 in range(c.m):
        c.v1 = v1
        _partitions(c, full ^ ((<uint32_t>1) << v1), 0)


def config_profile(int m, red, blue):
    """See ``_pykernels.config_profile``."""
    if not 1 <= m <= MAXM - 1:
        raise ValueError(f"m must lie in 1..{MAXM - 1}")
    cdef Ctx c
    cdef int v
    c.m = m
    for v in range(m):
        c.red[v] = red[v]
        c.blue[v] = blue[v]
    _profile(&c)
    return bool(c.perc[((<uint32_t>1) << m) - 1]), int(c.n_inputs), int(c.min_steps), int(c.lr_bits)


def tree_pair_sweep(int m, tree_masks):
    """See ``_pykernels.tree_pair_sweep``."""
    if not 1 <= m <= MAXM - 1:
        raise ValueError(f"m must lie in 1..{MAXM - 1}")
    cdef const uint32_t[:, ::1] trees = np.ascontiguousarray(tree_masks, dtype=np.uint32)
    cdef Py_ssize_t T = trees.shape[0], i, j
    cdef int v, w, steps, r
    cdef Ctx c
    cdef uint32_t full = ((<uint32_t>1) << m) - 1
    hist_arr = np.zeros(m + 1, dtype=np.int64)
    lr_arr = np.zeros((m + 1, m + 1), dtype=np.int64)
    cdef int64_t[::1] hist = hist_arr
    cdef int64_t[:, ::1] lr = lr_arr
    cdef int64_t pairs = 0, percolating = 0, self_pairs = 0, no_input = 0, unsound = 0
    c.m = m
    with nogil:
        for i in range(T):
            for v in range(m):
                c.red[v] = trees[i, v]
            for j in range(i, T):
                w = 1 if i == j else 2
                for v in range(m):
                    c.blue[v] = trees[j, v]
                _profile(&c)
                pairs += w
                if not c.perc[full]:
                    if c.n_inputs > 0:
                        unsound += w
                    continue
                percolating += w
                if i == j:
                    self_pairs += 1
                if c.n_inputs == 0:
                    no_input += w
                    continue
                hist[c.min_steps] += w
                for steps in range(m + 1):
                    for r in range(m + 1):
                        if (c.lr_bits >> (steps * (m + 1) + r)) & 1:
                            lr[steps, r] += w
    return dict(
        pairs=int(pairs),
        percolating=int(percolating),
        self_pairs=int(self_pairs),
        no_input=int(no_input),
        unsound=int(unsound),
        min_steps_hist=hist_arr,
        lr_counts=lr_arr,
    )
