# cython: boundscheck=False, wraparound=False
"""Compiled twins of the kernels in _pykernels (same signatures and results)."""

import numpy as np
cimport numpy as cnp


def associativity_violations(int[:, :] comp, int[:] post_ptr, int[:] post_idx, int limit):
    cdef Py_ssize_t n = comp.shape[0]
    cdef int f, g, h, gf, hg, a, b, p, q
    out = []
    for f in range(n):
        for p in range(post_ptr[f], post_ptr[f + 1]):
            g = post_idx[p]
            gf = comp[g, f]
            for q in range(post_ptr[g], post_ptr[g + 1]):
                h = post_idx[q]
                hg = comp[h, g]
                a = comp[h, gf] if gf >= 0 else -1
                b = comp[hg, f] if hg >= 0 else -1
                if a < 0 or a != b:
                    out.append((h, g, f))
                    if len(out) >= limit:
                        return out
    return out


def interchange_violations(int[:, :] v, int[:, :] h, int[:] vpost_ptr, int[:] vpost_idx,
                           int[:] hpost_ptr, int[:] hpost_idx, int limit):
    cdef Py_ssize_t n = v.shape[0]
    cdef int a, b, a2, b2, ba, a2a, b2b, b2a2, lhs, rhs, p, q, r
    out = []
    for a in range(n):
        for p in range(vpost_ptr[a], vpost_ptr[a + 1]):
            b = vpost_idx[p]
            ba = v[b, a]
            for q in range(hpost_ptr[a], hpost_ptr[a + 1]):
                a2 = hpost_idx[q]
                a2a = h[a2, a]
                for r in range(vpost_ptr[a2], vpost_ptr[a2 + 1]):
                    b2 = vpost_idx[r]
                    b2b = h[b2, b]
                    b2a2 = v[b2, a2]
                    lhs = v[b2b, a2a] if (b2b >= 0 and a2a >= 0) else -1
                    rhs = h[b2a2, ba] if (b2a2 >= 0 and ba >= 0) else -1
                    if lhs < 0 or lhs != rhs:
                        out.append((b2, a2, b, a))
                        if len(out) >= limit:
                            return out
    return out


cdef int _find(int[:] parent, int x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def congruence_closure(int[:, :] comp, int[:] post_ptr, int[:] post_idx,
                       int[:] pre_ptr, int[:] pre_idx, int[:, :] pairs):
    cdef Py_ssize_t n = comp.shape[0]
    cdef int x, y, rx, ry, p, g, k
    parent_arr = np.arange(n, dtype=np.intc)
    cdef int[:] parent = parent_arr
    work = [(pairs[p, 0], pairs[p, 1]) for p in range(pairs.shape[0])]
    while work:
        x, y = work.pop()
        if x < 0 or y < 0 or x >= n or y >= n:
            raise ValueError("congruence pair leaves the composition table")
        rx = _find(parent, x)
        ry = _find(parent, y)
        if rx == ry:
            continue
        if rx < ry:
            parent[ry] = rx
        else:
            parent[rx] = ry
        for p in range(post_ptr[x], post_ptr[x + 1]):
            g = post_idx[p]
            work.append((comp[g, x], comp[g, y]))
        for p in range(pre_ptr[x], pre_ptr[x + 1]):
            k = pre_idx[p]
            work.append((comp[x, k], comp[y, k]))
    return [_find(parent, x) for x in range(n)]
