"""Pure-Python law-checking kernels.

Tables are square int arrays where ``t[g, f]`` is the index of the composite
``g after f`` or -1 when undefined.  Adjacency is passed in CSR form:
``post_idx[post_ptr[x]:post_ptr[x + 1]]`` lists every ``y`` with ``t[y, x] >= 0``.
"""


def _rows(ptr, idx):
    ptr = ptr.tolist()
    idx = idx.tolist()
    return [idx[ptr[x]:ptr[x + 1]] for x in range(len(ptr) - 1)]


def associativity_violations(comp, post_ptr, post_idx, limit):
    t = comp.tolist()
    post = _rows(post_ptr, post_idx)
    out = []
    for f in range(len(t)):
        for g in post[f]:
            gf = t[g][f]
            for h in post[g]:
                hg = t[h][g]
                a = t[h][gf] if gf >= 0 else -1
                b = t[hg][f] if hg >= 0 else -1
                if a < 0 or a != b:
                    out.append((h, g, f))
                    if len(out) >= limit:
                        return out
    return out


def interchange_violations(vcomp, hcomp, vpost_ptr, vpost_idx, hpost_ptr, hpost_idx, limit):
    v = vcomp.tolist()
    h = hcomp.tolist()
    vpost = _rows(vpost_ptr, vpost_idx)
    hpost = _rows(hpost_ptr, hpost_idx)
    out = []
    for a in range(len(v)):
        for b in vpost[a]:
            ba = v[b][a]
            for a2 in hpost[a]:
                a2a = h[a2][a]
                for b2 in vpost[a2]:
                    b2b = h[b2][b]
                    b2a2 = v[b2][a2]
                    lhs = v[b2b][a2a] if (b2b >= 0 and a2a >= 0) else -1
                    rhs = h[b2a2][ba] if (b2a2 >= 0 and ba >= 0) else -1
                    if lhs < 0 or lhs != rhs:
                        out.append((b2, a2, b, a))
                        if len(out) >= limit:
                            return out
    return out


def congruence_closure(comp, post_ptr, post_idx, pre_ptr, pre_idx, pairs):
    t = comp.tolist()
    post = _rows(post_ptr, post_idx)
    pre = _rows(pre_ptr, pre_idx)
    parent = list(range(len(t)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    work = [tuple(p) for p in pairs.tolist()]
    while work:
        x, y = work.pop()
        if x < 0 or y < 0 or x >= len(t) or y >= len(t):
            raise ValueError("congruence pair leaves the composition table")
        rx, ry = find(x), find(y)
        if rx == ry:
            continue
        if rx < ry:
            parent[ry] = rx
        else:
            parent[rx] = ry
        for g in post[x]:
            work.append((t[g][x], t[g][y]))
        for k in pre[x]:
            work.append((t[x][k], t[y][k]))
    return [find(x) for x in range(len(parent))]
