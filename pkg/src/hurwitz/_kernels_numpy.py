"""Pure numpy versions of the orbit kernels (same contracts as the numba ones)."""
from __future__ import annotations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

CHUNK = 1 << 16


def decode(codes, radices):
    codes = np.array(codes, dtype=np.int64, copy=True)
    D = np.empty((codes.shape[0], radices.shape[0]), dtype=np.int64)
    for k in range(radices.shape[0] - 1, -1, -1):
        D[:, k] = codes % radices[k]
        codes //= radices[k]
    return D


def encode(D, radices):
    code = np.zeros(D.shape[0], dtype=np.int64)
    for k in range(radices.shape[0]):
        code = code * radices[k] + D[:, k]
    return code


def _transport(T, D, n, j):
    u = np.zeros(D.shape[0], dtype=np.int64)
    for k in range(j):
        u = T.mul(u, T.comm(D[:, n + 2 * k], D[:, n + 2 * k + 1]))
    return u


def apply_digits(T, D, n, p, kind, idx, dr):
    """Apply one move to every row of D; rows whose letter leaves O get -1 entries."""
    D = D.copy()
    inv, o2g, g2o = T.inv, T.o2g, T.g2o
    mul, conj, comm = T.mul, T.conj, T.comm
    if kind == 0:
        g1 = o2g[D[:, idx]]
        g2 = o2g[D[:, idx + 1]]
        if dr > 0:
            n1, n2 = g2, conj(g1, g2)
        else:
            n1, n2 = mul(mul(g1, g2), inv[g1]), g1
        D[:, idx] = g2o[n1]
        D[:, idx + 1] = g2o[n2]
        return D
    if kind == 4:
        c = np.full(D.shape[0], idx, dtype=np.int64)
        for k in range(n):
            D[:, k] = g2o[conj(o2g[D[:, k]], c)]
        for k in range(n, n + 2 * p):
            D[:, k] = conj(D[:, k], c)
        return D
    j = idx
    a = D[:, n + 2 * j]
    b = D[:, n + 2 * j + 1]
    u0 = _transport(T, D, n, j)
    last = o2g[D[:, n - 1]]
    if kind == 1:
        h = conj(last, u0)
        if dr > 0:
            c1 = mul(mul(mul(a, inv[b]), inv[a]), inv[h])
            h2, a2 = conj(h, c1), mul(h, a)
        else:
            a2 = mul(mul(mul(mul(inv[b], inv[comm(a, b)]), inv[h]), a), b)
            h2 = mul(a, inv[a2])
        b2, u2 = b, u0
    elif kind == 2:
        h = conj(last, mul(u0, comm(a, b)))
        if dr > 0:
            c2 = mul(mul(mul(b, inv[a]), inv[b]), h)
            b2, h2 = mul(inv[h], b), conj(h, c2)
        else:
            b2 = mul(mul(mul(mul(inv[a], comm(a, b)), h), b), a)
            h2 = mul(b2, inv[b])
        a2 = a
        u2 = mul(u0, comm(a, b2))
    else:
        k = conj(last, u0)
        if dr > 0:
            h2 = conj(k, comm(a, b))
            a2, b2 = conj(a, h2), conj(b, h2)
        else:
            ki = inv[k]
            a2, b2 = conj(a, ki), conj(b, ki)
            c = comm(a2, b2)
            h2 = mul(mul(c, k), inv[c])
        u2 = u0
    D[:, n + 2 * j] = a2
    D[:, n + 2 * j + 1] = b2
    D[:, n - 1] = g2o[mul(mul(u2, h2), inv[u2])]
    return D


def apply_codes(T, n, p, codes, move, radices):
    kind, idx, dr = move
    D = apply_digits(T, decode(codes, radices), n, p, kind, idx, dr)
    out = encode(D, radices)
    out[(D < 0).any(axis=1)] = -1
    return out


def orbit_roots(T, n, p, states, moves, radices):
    M = states.shape[0]
    if moves.shape[0] == 0 or M == 0:
        return np.arange(M, dtype=np.int64)
    rows, cols = [], []
    for start in range(0, M, CHUNK):
        stop = min(M, start + CHUNK)
        D = decode(states[start:stop], radices)
        src = np.arange(start, stop, dtype=np.int64)
        for kind, idx, dr in moves:
            D2 = apply_digits(T, D, n, p, kind, idx, dr)
            bad = (D2 < 0).any(axis=1)
            code = encode(D2, radices)
            pos = np.searchsorted(states, code)
            pos[pos >= M] = M - 1
            bad |= states[pos] != code
            if bad.any():
                s = start + int(np.flatnonzero(bad)[0])
                raise ValueError(f"a move leaves the constrained space at state code {states[s]}")
            rows.append(src)
            cols.append(pos)
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    graph = coo_matrix((np.ones(r.shape[0], dtype=np.int8), (r, c)), shape=(M, M)).tocsr()
    _, labels = connected_components(graph, directed=True, connection="weak")
    roots = np.full(labels.max() + 1, M, dtype=np.int64)
    np.minimum.at(roots, labels, np.arange(M, dtype=np.int64))
    return roots[labels]


def enumerate_codes(T, n, patterns, members, msize, target, hU):
    R = T.n_letters
    H = hU.shape[0]
    det = target >= 0 and n >= 1
    L = n - 1 if det else n
    chunks = []
    for pat in patterns:
        pre = np.zeros(1, dtype=np.int64)
        bc = np.zeros(1, dtype=np.int64)
        for i in range(L):
            letters = members[pat[i], : msize[pat[i]]]
            pre = T.mul(pre[:, None], T.o2g[letters][None, :]).ravel()
            bc = (bc[:, None] * R + letters[None, :]).ravel()
        if det:
            g = T.mul(T.mul(T.inv[pre], target)[:, None], T.inv[hU][None, :])
            o = T.g2o[g]
            ok = o >= 0
            ok[ok] = T.oclass[o[ok]] == pat[n - 1]
            i_idx, h_idx = np.nonzero(ok)
            chunks.append((bc[i_idx] * R + o[i_idx, h_idx]) * H + h_idx)
        else:
            codes = bc[:, None] * H + np.arange(H, dtype=np.int64)[None, :]
            if target >= 0:
                codes = codes[T.mul(pre[:, None], hU[None, :]) == target]
            chunks.append(codes.ravel())
    if not chunks:
        return np.zeros(0, dtype=np.int64)
    return np.sort(np.concatenate(chunks))


def closure_size(T, gens):
    gens = np.asarray(gens, dtype=np.int64)
    seen = np.zeros(T.order, dtype=bool)
    seen[0] = True
    frontier = np.zeros(1, dtype=np.int64)
    while frontier.size:
        nxt = np.unique(T.mul(frontier[:, None], gens[None, :]).ravel())
        nxt = nxt[~seen[nxt]]
        seen[nxt] = True
        frontier = nxt
    return int(seen.sum())
