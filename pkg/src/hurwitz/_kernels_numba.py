"""numba kernels for state enumeration, move application and orbit union-find.

``G`` is the tuple ``(table, perms, keys, inv, o2g, g2o)`` from
``GroupTables.as_tuple()``.  Entry points unpack it once and pass the arrays
on explicitly, together with ``ut``: True when a product table exists, False
when products are computed by composing image arrays and binary-searching
the key.  Entry kernels force ``ut`` to a compile-time literal, so numba
prunes the unused branch of ``_mul`` and the table lookup gets inlined.  A
plain runtime flag (or passing the strategy as a function) is several times
slower or defeats the on-disk cache.

Move kinds: 0 H, 1 lambda, 2 mu, 3 zeta, 4 simultaneous conjugation
(index = element index of the conjugator).
"""
from __future__ import annotations

import numpy as np
from numba import literally, njit, prange

_OPTS = dict(cache=True, nogil=True)


@njit(**_OPTS)
def _mul(ut, x, y, tb, pm, ky):
    if ut:
        return tb[x, y]
    return _mul_perm(x, y, tb, pm, ky)


@njit(**_OPTS)
def _mul_perm(x, y, tb, pm, ky):
    d = pm.shape[1]
    key = 0
    for i in range(d):
        key = key * d + pm[y, pm[x, i]]
    lo = 0
    hi = ky.shape[0] - 1
    while lo < hi:
        mid = (lo + hi) >> 1
        if ky[mid] < key:
            lo = mid + 1
        else:
            hi = mid
    return lo


def _pick(T, with_table, without_table):
    return with_table if T.table.shape[0] > 0 else without_table


@njit(**_OPTS)
def _mul3(ut, x, y, z, tb, pm, ky):
    return _mul(ut, _mul(ut, x, y, tb, pm, ky), z, tb, pm, ky)


@njit(**_OPTS)
def _conj(ut, x, y, tb, pm, ky, inv):
    return _mul3(ut, inv[y], x, y, tb, pm, ky)


@njit(**_OPTS)
def _comm(ut, a, b, tb, pm, ky, inv):
    return _mul(ut, _mul(ut, a, b, tb, pm, ky), _mul(ut, inv[a], inv[b], tb, pm, ky), tb, pm, ky)


@njit(**_OPTS)
def _transport(ut, dig, n, j, tb, pm, ky, inv):
    u = 0
    for k in range(j):
        u = _mul(ut, u, _comm(ut, dig[n + 2 * k], dig[n + 2 * k + 1], tb, pm, ky, inv), tb, pm, ky)
    return u


@njit(**_OPTS)
def _apply(ut, dig, n, p, kind, idx, dr, tb, pm, ky, inv, o2g, g2o):
    """Apply one move in place; returns False if a letter leaves O."""
    if kind == 0:
        g1 = o2g[dig[idx]]
        g2 = o2g[dig[idx + 1]]
        if dr > 0:
            n1 = g2
            n2 = _conj(ut, g1, g2, tb, pm, ky, inv)
        else:
            n1 = _mul3(ut, g1, g2, inv[g1], tb, pm, ky)
            n2 = g1
        dig[idx] = g2o[n1]
        dig[idx + 1] = g2o[n2]
        return dig[idx] >= 0 and dig[idx + 1] >= 0
    if kind == 4:
        for k in range(n):
            dig[k] = g2o[_conj(ut, o2g[dig[k]], idx, tb, pm, ky, inv)]
            if dig[k] < 0:
                return False
        for k in range(n, n + 2 * p):
            dig[k] = _conj(ut, dig[k], idx, tb, pm, ky, inv)
        return True
    j = idx
    a = dig[n + 2 * j]
    b = dig[n + 2 * j + 1]
    u0 = _transport(ut, dig, n, j, tb, pm, ky, inv)
    last = o2g[dig[n - 1]]
    if kind == 1:
        h = _conj(ut, last, u0, tb, pm, ky, inv)
        if dr > 0:
            c1 = _mul(ut, _mul3(ut, a, inv[b], inv[a], tb, pm, ky), inv[h], tb, pm, ky)
            h2 = _conj(ut, h, c1, tb, pm, ky, inv)
            a2 = _mul(ut, h, a, tb, pm, ky)
        else:
            ab = _comm(ut, a, b, tb, pm, ky, inv)
            x = _mul3(ut, inv[b], inv[ab], inv[h], tb, pm, ky)
            a2 = _mul3(ut, x, a, b, tb, pm, ky)
            h2 = _mul(ut, a, inv[a2], tb, pm, ky)
        b2 = b
        u2 = u0
    elif kind == 2:
        ab = _comm(ut, a, b, tb, pm, ky, inv)
        h = _conj(ut, last, _mul(ut, u0, ab, tb, pm, ky), tb, pm, ky, inv)
        if dr > 0:
            c2 = _mul(ut, _mul3(ut, b, inv[a], inv[b], tb, pm, ky), h, tb, pm, ky)
            b2 = _mul(ut, inv[h], b, tb, pm, ky)
            h2 = _conj(ut, h, c2, tb, pm, ky, inv)
        else:
            x = _mul3(ut, inv[a], ab, h, tb, pm, ky)
            b2 = _mul3(ut, x, b, a, tb, pm, ky)
            h2 = _mul(ut, b2, inv[b], tb, pm, ky)
        a2 = a
        u2 = _mul(ut, u0, _comm(ut, a, b2, tb, pm, ky, inv), tb, pm, ky)
    else:
        k = _conj(ut, last, u0, tb, pm, ky, inv)
        if dr > 0:
            h2 = _conj(ut, k, _comm(ut, a, b, tb, pm, ky, inv), tb, pm, ky, inv)
            a2 = _conj(ut, a, h2, tb, pm, ky, inv)
            b2 = _conj(ut, b, h2, tb, pm, ky, inv)
        else:
            ki = inv[k]
            a2 = _conj(ut, a, ki, tb, pm, ky, inv)
            b2 = _conj(ut, b, ki, tb, pm, ky, inv)
            c = _comm(ut, a2, b2, tb, pm, ky, inv)
            h2 = _mul3(ut, c, k, inv[c], tb, pm, ky)
        u2 = u0
    dig[n + 2 * j] = a2
    dig[n + 2 * j + 1] = b2
    dig[n - 1] = g2o[_mul3(ut, u2, h2, inv[u2], tb, pm, ky)]
    return dig[n - 1] >= 0


@njit(**_OPTS)
def _decode(code, radices, dig):
    for k in range(radices.shape[0] - 1, -1, -1):
        r = radices[k]
        dig[k] = code % r
        code //= r


@njit(**_OPTS)
def _encode(dig, radices):
    code = 0
    for k in range(radices.shape[0]):
        code = code * radices[k] + dig[k]
    return code


@njit(**_OPTS)
def _search(states, starts, shift, code):
    """Index of code in the sorted states, or -1.

    ``starts[b]`` is the first state with ``code >> shift >= b``, so the
    binary search only covers one short bucket instead of the whole array.
    """
    b = code >> shift
    if b + 1 >= starts.shape[0]:
        return -1
    lo = starts[b]
    hi = starts[b + 1]
    while lo < hi:
        mid = (lo + hi) >> 1
        if states[mid] < code:
            lo = mid + 1
        else:
            hi = mid
    if lo < states.shape[0] and states[lo] == code:
        return lo
    return -1


BUCKET_BITS = 20


def _bucket_starts(states):
    top = int(states[-1]) if states.shape[0] else 0
    shift = max(0, top.bit_length() - BUCKET_BITS)
    bounds = np.arange((top >> shift) + 2, dtype=np.int64) << shift
    return np.searchsorted(states, bounds).astype(np.int64), shift


@njit(**_OPTS)
def _apply_codes(ut, codes, n, p, kind, idx, dr, radices, G):
    literally(ut)
    tb, pm, ky, inv, o2g, g2o = G
    out = np.empty_like(codes)
    dig = np.empty(radices.shape[0], np.int64)
    for s in range(codes.shape[0]):
        _decode(codes[s], radices, dig)
        if _apply(ut, dig, n, p, kind, idx, dr, tb, pm, ky, inv, o2g, g2o):
            out[s] = _encode(dig, radices)
        else:
            out[s] = -1
    return out


@njit(parallel=True, **_OPTS)
def _neighbors(ut, states, starts, shift, start, stop, n, p, moves, radices, G, out):
    literally(ut)
    tb, pm, ky, inv, o2g, g2o = G
    L = radices.shape[0]
    K = moves.shape[0]
    for s in prange(start, stop):
        dig0 = np.empty(L, np.int64)
        dig = np.empty(L, np.int64)
        _decode(states[s], radices, dig0)
        for k in range(K):
            for q in range(L):
                dig[q] = dig0[q]
            if _apply(ut, dig, n, p, moves[k, 0], moves[k, 1], moves[k, 2],
                      tb, pm, ky, inv, o2g, g2o):
                out[s - start, k] = _search(states, starts, shift, _encode(dig, radices))
            else:
                out[s - start, k] = -1


@njit(**_OPTS)
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit(**_OPTS)
def _union_block(parent, nbrs, start):
    """Union every state with its neighbours, linking to the smaller root.

    Returns -1, or the first state whose neighbour fell outside the space.
    """
    for r in range(nbrs.shape[0]):
        s = start + r
        for k in range(nbrs.shape[1]):
            t = nbrs[r, k]
            if t < 0:
                return s
            a = _find(parent, s)
            b = _find(parent, t)
            if a < b:
                parent[b] = a
            elif b < a:
                parent[a] = b
    return -1


@njit(**_OPTS)
def _flatten(parent):
    for x in range(parent.shape[0]):
        parent[x] = _find(parent, x)


CHUNK = 1 << 18


def orbit_roots(T, n, p, states, moves, radices):
    """Root (smallest member index) of every state's orbit."""
    G = T.as_tuple()
    M = states.shape[0]
    parent = np.arange(M, dtype=np.int64)
    K = moves.shape[0]
    if K == 0 or M == 0:
        return parent
    starts, shift = _bucket_starts(states)
    buf = np.empty((min(CHUNK, M), K), dtype=np.int64)
    for start in range(0, M, CHUNK):
        stop = min(M, start + CHUNK)
        out = buf[: stop - start]
        _pick(T, _neighbors_t, _neighbors_p)(states, starts, shift, start, stop, n, p, moves, radices, G, out)
        bad = _union_block(parent, out, start)
        if bad >= 0:
            raise ValueError(f"a move leaves the constrained space at state code {states[bad]}")
    _flatten(parent)
    return parent


def apply_codes(T, n, p, codes, move, radices):
    kind, idx, dr = move
    return _pick(T, _apply_codes_t, _apply_codes_p)(np.ascontiguousarray(codes, dtype=np.int64), n, p,
                        kind, idx, dr, radices, T.as_tuple())


@njit(**_OPTS)
def _enumerate(ut, n, patterns, members, msize, oclass, target, hU, H, R, G):
    literally(ut)
    tb, pm, ky, inv, o2g, g2o = G
    det = target >= 0 and n >= 1
    L = n - 1 if det else n
    out = np.empty(1024, np.int64)
    cnt = 0
    pos = np.zeros(max(L, 1), np.int64)
    pre = np.zeros(L + 1, np.int64)
    bc = np.zeros(L + 1, np.int64)
    for pat in range(patterns.shape[0]):
        for i in range(L):
            pos[i] = 0
        k = 0
        while True:
            # odometer over the first L letters; only positions >= k changed
            for i in range(k, L):
                o = members[patterns[pat, i], pos[i]]
                pre[i + 1] = _mul(ut, pre[i], o2g[o], tb, pm, ky)
                bc[i + 1] = bc[i] * R + o
            if det:
                # the last letter is forced by the boundary
                pinv_t = _mul(ut, inv[pre[L]], target, tb, pm, ky)
                lastclass = patterns[pat, n - 1]
                for h in range(H):
                    o = g2o[_mul(ut, pinv_t, inv[hU[h]], tb, pm, ky)]
                    if o >= 0 and oclass[o] == lastclass:
                        if cnt == out.shape[0]:
                            new = np.empty(2 * cnt, np.int64)
                            new[:cnt] = out
                            out = new
                        out[cnt] = (bc[L] * R + o) * H + h
                        cnt += 1
            else:
                for h in range(H):
                    if target < 0 or _mul(ut, pre[L], hU[h], tb, pm, ky) == target:
                        if cnt == out.shape[0]:
                            new = np.empty(2 * cnt, np.int64)
                            new[:cnt] = out
                            out = new
                        out[cnt] = bc[L] * H + h
                        cnt += 1
            i = L - 1
            while i >= 0:
                pos[i] += 1
                if pos[i] < msize[patterns[pat, i]]:
                    break
                pos[i] = 0
                i -= 1
            if i < 0:
                break
            k = i
    return out[:cnt]


def enumerate_codes(T, n, patterns, members, msize, target, hU):
    codes = _pick(T, _enumerate_t, _enumerate_p)(n, patterns, members, msize, T.oclass, target, hU,
                       hU.shape[0], T.n_letters, T.as_tuple())
    return np.sort(codes)


@njit(**_OPTS)
def _closure_size(ut, gens, N, G):
    literally(ut)
    tb, pm, ky, inv, o2g, g2o = G
    seen = np.zeros(N, np.bool_)
    queue = np.empty(N, np.int64)
    seen[0] = True
    queue[0] = 0
    head = 0
    tail = 1
    while head < tail:
        x = queue[head]
        head += 1
        for g in gens:
            y = _mul(ut, x, g, tb, pm, ky)
            if not seen[y]:
                seen[y] = True
                queue[tail] = y
                tail += 1
    return tail


def closure_size(T, gens):
    return int(_pick(T, _closure_size_t, _closure_size_p)(np.asarray(gens, dtype=np.int64), T.order,
                             T.as_tuple()))


# Entry points with the flag fixed.  Called from Python with a plain bool,
# ``literally`` would send every call back through the compiler; here the
# literal is resolved once, when these wrappers are compiled (or loaded).

@njit(**_OPTS)
def _apply_codes_t(codes, n, p, kind, idx, dr, radices, G):
    return _apply_codes(True, codes, n, p, kind, idx, dr, radices, G)


@njit(**_OPTS)
def _apply_codes_p(codes, n, p, kind, idx, dr, radices, G):
    return _apply_codes(False, codes, n, p, kind, idx, dr, radices, G)


@njit(**_OPTS)
def _neighbors_t(states, starts, shift, start, stop, n, p, moves, radices, G, out):
    _neighbors(True, states, starts, shift, start, stop, n, p, moves, radices, G, out)


@njit(**_OPTS)
def _neighbors_p(states, starts, shift, start, stop, n, p, moves, radices, G, out):
    _neighbors(False, states, starts, shift, start, stop, n, p, moves, radices, G, out)


@njit(**_OPTS)
def _enumerate_t(n, patterns, members, msize, oclass, target, hU, H, R, G):
    return _enumerate(True, n, patterns, members, msize, oclass, target, hU, H, R, G)


@njit(**_OPTS)
def _enumerate_p(n, patterns, members, msize, oclass, target, hU, H, R, G):
    return _enumerate(False, n, patterns, members, msize, oclass, target, hU, H, R, G)


@njit(**_OPTS)
def _closure_size_t(gens, N, G):
    return _closure_size(True, gens, N, G)


@njit(**_OPTS)
def _closure_size_p(gens, N, G):
    return _closure_size(False, gens, N, G)
