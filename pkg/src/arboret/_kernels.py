"""Compiled inner loops.  Each has a plain reference implementation elsewhere."""

from __future__ import annotations

import numpy as np
from numba import njit

# PCSymbol values
_UP, _UPSEEN, _FALL = 0, 1, 2


@njit(cache=True, nogil=True)
def ceil_log2(j):
    w = 0
    v = j - 1
    while v > 0:
        w += 1
        v >>= 1
    return w


@njit(cache=True, nogil=True)
def _get(W, off, lo, hi, q, s, f):
    if s < lo[q] or s > hi[q]:
        return 0
    return W[off[q] + 2 * (s - lo[q]) + f]


@njit(cache=True, nogil=True)
def pc_parse(bits):
    """Count parses of a binary PC string (saturating at 2) and return one.

    State is (position, UPSEEN count so far, previous symbol was FALL); the
    stack depth follows from the prefix zero count.  Returns the count and the
    symbol array of the first parse in (UP, FALL, UPSEEN) preference order.
    """
    L = bits.size
    z = np.zeros(L + 1, np.int64)
    for i in range(L):
        z[i + 1] = z[i] + (1 - bits[i])
    Z = z[L]
    empty = np.empty(0, np.uint8)
    if Z % 3:
        return 0, empty
    S = Z // 3
    lo = np.empty(L + 1, np.int64)
    hi = np.empty(L + 1, np.int64)
    off = np.empty(L + 2, np.int64)
    off[0] = 0
    for p in range(L + 1):
        zp = z[p]
        r = Z - zp
        a = max(0, S - r // 2)
        b = (3 * zp - Z + 5) // 6  # depth must be poppable by the remaining zeros
        lo[p] = max(a, b)
        hi[p] = min(zp // 3, S)
        width = hi[p] - lo[p] + 1
        off[p + 1] = off[p] + 2 * max(width, 0)
    W = np.zeros(off[L + 1], np.uint8)
    for p in range(L, -1, -1):
        for s in range(lo[p], hi[p] + 1):
            d = z[p] - 3 * s
            for f in range(2):
                if p == L:
                    v = 1 if d == 0 else 0
                else:
                    v = 0
                    if bits[p] == 1:
                        v += _get(W, off, lo, hi, p + 1, s, 0)
                    else:
                        if f == 0:
                            v += _get(W, off, lo, hi, p + 1, s, 1)
                        if p + 1 < L and bits[p + 1] == 0 and d >= 1:
                            v += _get(W, off, lo, hi, p + 2, s + 1, 0)
                    if v > 2:
                        v = 2
                W[off[p] + 2 * (s - lo[p]) + f] = v
    count = _get(W, off, lo, hi, 0, 0, 1)
    if count == 0:
        return 0, empty
    out = np.empty(L, np.uint8)
    k = 0
    p, s, f = 0, 0, 1
    while p < L:
        if bits[p] == 1:
            out[k] = _UP
            p += 1
            f = 0
        elif f == 0 and _get(W, off, lo, hi, p + 1, s, 1) > 0:
            out[k] = _FALL
            p += 1
            f = 1
        else:
            out[k] = _UPSEEN
            p += 2
            s += 1
            f = 0
        k += 1
    return count, out[:k]


@njit(cache=True, nogil=True)
def lz78_cost(seq, alphabet):
    """(phrase count, total bits) of the LZ78 code used by ``lzpipe``."""
    sym_bits = ceil_log2(alphabet)
    cap = 1024
    child = np.zeros(cap * alphabet, np.int32)
    node = 0
    j = 1
    total = 0
    for i in range(seq.size):
        x = seq[i]
        c = child[node * alphabet + x]
        if c != 0:
            node = c
            continue
        total += ceil_log2(j) + sym_bits
        if j >= cap:
            bigger = np.zeros(2 * cap * alphabet, np.int32)
            bigger[:cap * alphabet] = child
            child = bigger
            cap *= 2
        child[node * alphabet + x] = j
        j += 1
        node = 0
    phrases = j - 1
    if seq.size:
        total += 1
        if node != 0:
            total += ceil_log2(j)
            phrases += 1
    return phrases, total


@njit(cache=True, nogil=True)
def extract_bits(n, indptr, indices):
    """Bit extraction of a labeled tree given as CSR adjacency over labels.

    Neighbour lists must be sorted.  In a tree every neighbour of ``u`` except
    its parent is still outside the revealed component when ``u`` is processed,
    so the BFS order and per-node counts come from one cheap pass.
    """
    in_c = np.zeros(n + 1, np.bool_)
    in_c[1] = True
    order = np.empty(n, np.int64)
    order[0] = 1
    tail = 1
    counts = np.zeros(n, np.int64)
    for i in range(n):
        u = order[i]
        counts[i] = n - tail
        for k in range(indptr[u], indptr[u + 1]):
            w = indices[k]
            if not in_c[w]:
                in_c[w] = True
                order[tail] = w
                tail += 1
    total = 0
    for i in range(n):
        total += counts[i]
    out = np.empty(total, np.uint8)
    mark = np.zeros(n + 1, np.int64)
    in_c[:] = False
    in_c[1] = True
    pos = 0
    for i in range(n):
        u = order[i]
        for k in range(indptr[u], indptr[u + 1]):
            mark[indices[k]] = u
        for w in range(1, n + 1):
            if not in_c[w]:
                if mark[w] == u:
                    out[pos] = 1
                    in_c[w] = True
                else:
                    out[pos] = 0
                pos += 1
    return out, counts


@njit(cache=True, nogil=True)
def er_spanning_fill(n, p, buf, out, max_retries):
    """Fill rows of ``out`` with Wilson successor arrays of ER spanning trees.

    Uniforms are read from ``buf`` in the same order as the scalar sampler:
    C(n,2) edge coins per graph attempt, then one per walk step.  Returns
    (rows filled, uniforms used by those rows); rows = -1 on retry exhaustion.
    """
    m = n * (n - 1) // 2
    adj = np.zeros((n + 1, n + 1), np.bool_)
    nb = np.empty((n + 1, n), np.int64)
    deg = np.zeros(n + 1, np.int64)
    seen = np.zeros(n + 1, np.bool_)
    stack = np.empty(n, np.int64)
    in_tree = np.zeros(n + 1, np.bool_)
    nxt = np.zeros(n + 1, np.int64)
    pos = 0
    done = 0
    rows = out.shape[0]
    while done < rows:
        start = pos
        attempts = 0
        ok = False
        failed = False
        while not ok:
            if attempts >= max_retries:
                return -1, start
            if pos + m > buf.size:
                failed = True
                break
            attempts += 1
            k = pos
            for a in range(1, n + 1):
                for b in range(a + 1, n + 1):
                    e = buf[k] < p
                    adj[a, b] = e
                    adj[b, a] = e
                    k += 1
            pos += m
            seen[:] = False
            seen[1] = True
            top = 1
            stack[0] = 1
            cnt = 1
            while top:
                top -= 1
                u = stack[top]
                for w in range(1, n + 1):
                    if adj[u, w] and not seen[w]:
                        seen[w] = True
                        stack[top] = w
                        top += 1
                        cnt += 1
            ok = cnt == n
        if failed:
            return done, start
        for u in range(1, n + 1):
            d = 0
            for w in range(1, n + 1):
                if adj[u, w]:
                    nb[u, d] = w
                    d += 1
            deg[u] = d
        in_tree[:] = False
        in_tree[1] = True
        for i in range(2, n + 1):
            u = i
            while not in_tree[u]:
                if pos >= buf.size:
                    failed = True
                    break
                nxt[u] = nb[u, int(buf[pos] * deg[u])]
                pos += 1
                u = nxt[u]
            if failed:
                break
            u = i
            while not in_tree[u]:
                in_tree[u] = True
                u = nxt[u]
        if failed:
            return done, start
        for i in range(2, n + 1):
            out[done, i - 2] = nxt[i]
        done += 1
    return done, pos
