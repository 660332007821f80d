# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scan kernels. Same signatures and witness order as
``_kernels_py``; loops run profile-major so the first violation found is the
canonical one."""

import numpy as np
cimport numpy as cnp

ctypedef cnp.int64_t i64


cdef inline void _split(i64 p, int n, i64 m, i64* d):
    cdef int i
    for i in range(n - 1, -1, -1):
        d[i] = p % m
        p //= m


def sp_scan(const i64[:, :, ::1] T, const i64[:, ::1] prefs):
    cdef i64 M = T.shape[0]
    cdef int n = T.shape[1]
    cdef i64 m = prefs.shape[0]
    cdef i64 p, q, r, st
    cdef int i, t, a
    cdef i64 s1, s2
    cdef i64 d[16]
    cdef i64 stride[16]
    st = 1
    for i in range(n - 1, -1, -1):
        stride[i] = st
        st *= m
    for p in range(M):
        _split(p, n, m, d)
        for i in range(n):
            for r in range(m):
                if r == d[i]:
                    continue
                q = p + (r - d[i]) * stride[i]
                s1 = 0
                s2 = 0
                for t in range(n):
                    a = prefs[d[i], t]
                    s1 += T[p, i, a]
                    s2 += T[q, i, a]
                    if s1 < s2:
                        return (int(p), i, int(r), t + 1)
    return None


def ef_scan(const i64[:, :, ::1] T, const i64[:, ::1] prefs):
    cdef i64 M = T.shape[0]
    cdef int n = T.shape[1]
    cdef i64 m = prefs.shape[0]
    cdef i64 p, s1, s2
    cdef int i, j, t, a
    cdef i64 d[16]
    for p in range(M):
        _split(p, n, m, d)
        for i in range(n):
            for j in range(n):
                if j == i:
                    continue
                s1 = 0
                s2 = 0
                for t in range(n):
                    a = prefs[d[i], t]
                    s1 += T[p, i, a]
                    s2 += T[p, j, a]
                    if s1 < s2:
                        return (int(p), i, j, t + 1)
    return None


def ete_scan(const i64[:, :, ::1] T, i64 m):
    cdef i64 M = T.shape[0]
    cdef int n = T.shape[1]
    cdef i64 p
    cdef int i, j, a
    cdef i64 d[16]
    for p in range(M):
        _split(p, n, m, d)
        for i in range(n):
            for j in range(i + 1, n):
                if d[i] != d[j]:
                    continue
                for a in range(n):
                    if T[p, i, a] != T[p, j, a]:
                        return (int(p), i, j, a)
    return None


def neutral_scan(const i64[:, :, ::1] T, const i64[:, ::1] perms, const i64[:, ::1] relabel):
    cdef i64 M = T.shape[0]
    cdef int n = T.shape[1]
    cdef i64 m = perms.shape[0]
    cdef i64 G = perms.shape[0]
    cdef i64 p, q, g
    cdef int i, a
    cdef i64 d[16]
    for p in range(M):
        _split(p, n, m, d)
        for g in range(G):
            q = 0
            for i in range(n):
                q = q * m + relabel[g, d[i]]
            for i in range(n):
                for a in range(n):
                    if T[p, i, a] != T[q, i, perms[g, a]]:
                        return (int(p), int(g), i, a)
    return None


def anon_scan(const i64[:, :, ::1] T, const i64[:, ::1] aperms):
    cdef i64 M = T.shape[0]
    cdef int n = T.shape[1]
    cdef i64 G = aperms.shape[0]
    cdef i64 m = 1
    cdef i64 p, q, g
    cdef int i, a
    cdef i64 d[16]
    for i in range(2, n + 1):
        m *= i
    for p in range(M):
        _split(p, n, m, d)
        for g in range(G):
            q = 0
            for i in range(n):
                q = q * m + d[aperms[g, i]]
            for i in range(n):
                for a in range(n):
                    if T[p, aperms[g, i], a] != T[q, i, a]:
                        return (int(p), int(g), i, a)
    return None


def sul_scan(const i64[:, :, ::1] T, const i64[:, ::1] prefs):
    cdef i64 M = T.shape[0]
    cdef int n = T.shape[1]
    cdef i64 m = prefs.shape[0]
    cdef i64 p, q, st
    cdef int i, s, k, a, same
    cdef i64 d[16]
    cdef i64 stride[16]
    index = {tuple(r): k for k, r in enumerate(np.asarray(prefs).tolist())}
    cdef i64[:, ::1] swap_to = np.empty((m, n - 1), dtype=np.int64)
    for k, r in enumerate(np.asarray(prefs).tolist()):
        for s in range(n - 1):
            rr = list(r)
            rr[s], rr[s + 1] = rr[s + 1], rr[s]
            swap_to[k, s] = index[tuple(rr)]
    st = 1
    for i in range(n - 1, -1, -1):
        stride[i] = st
        st *= m
    sm = up = lo = None
    for p in range(M):
        _split(p, n, m, d)
        for i in range(n):
            for s in range(n - 1):
                q = p + (swap_to[d[i], s] - d[i]) * stride[i]
                if sm is None:
                    same = 1
                    for k in range(n):
                        if T[p, i, k] != T[q, i, k]:
                            same = 0
                            break
                    a = prefs[d[i], s + 1]
                    if not same and not (T[q, i, a] > T[p, i, a]):
                        sm = (int(p), i, s + 1, a)
                if up is None:
                    for k in range(s):
                        a = prefs[d[i], k]
                        if T[p, i, a] != T[q, i, a]:
                            up = (int(p), i, s + 1, a)
                            break
                if lo is None:
                    for k in range(s + 2, n):
                        a = prefs[d[i], k]
                        if T[p, i, a] != T[q, i, a]:
                            lo = (int(p), i, s + 1, a)
                            break
        if sm is not None and up is not None and lo is not None:
            break
    return sm, up, lo


def cfe_scan(const i64[:, :, ::1] T, const i64[:, ::1] prefs, i64 denom):
    cdef i64 M = T.shape[0]
    cdef int n = T.shape[1]
    cdef i64 m = prefs.shape[0]
    cdef i64 p
    cdef int i, j, ok
    cdef i64 d[16]
    for p in range(M):
        _split(p, n, m, d)
        ok = 1
        for i in range(n):
            for j in range(i + 1, n):
                if prefs[d[i], 0] == prefs[d[j], 0]:
                    ok = 0
        if not ok:
            continue
        for i in range(n):
            if T[p, i, prefs[d[i], 0]] != denom:
                return (int(p), i)
    return None


def dominance_scan(const i64[:, :, ::1] A, const i64[:, :, ::1] B, const i64[:, ::1] prefs):
    cdef i64 M = A.shape[0]
    cdef int n = A.shape[1]
    cdef i64 m = prefs.shape[0]
    cdef i64 p, s1, s2
    cdef int i, t, a
    cdef i64 d[16]
    strict = None
    for p in range(M):
        _split(p, n, m, d)
        for i in range(n):
            s1 = 0
            s2 = 0
            for t in range(n):
                a = prefs[d[i], t]
                s1 += A[p, i, a]
                s2 += B[p, i, a]
                if s1 < s2:
                    return (int(p), i, t + 1), None
                if s1 > s2 and strict is None:
                    strict = (int(p), i)
    return None, strict


def sep_scan(const i64[:, :, ::1] T, i64 m, bint full):
    cdef i64 M = T.shape[0]
    cdef int n = T.shape[1]
    cdef i64 p, q, st, sj, sk, rj, rk, lhs, rhs, step, best_q
    cdef int best_a
    cdef int i, j, k, a, x, idx
    cdef i64 d[16]
    cdef i64 stride[16]
    cdef i64 dev[16]
    cdef int others[16]
    cdef i64 ndev
    st = 1
    for i in range(n - 1, -1, -1):
        stride[i] = st
        st *= m
    ndev = 1
    for i in range(n - 1):
        ndev *= m
    for p in range(M):
        _split(p, n, m, d)
        for i in range(n):
            idx = 0
            for j in range(n):
                if j != i:
                    others[idx] = j
                    idx += 1
            if full:
                for x in range(ndev):
                    _split(x, n - 1, m, dev)
                    q = p
                    for k in range(n - 1):
                        q += (dev[k] - d[others[k]]) * stride[others[k]]
                    for a in range(n):
                        lhs = T[q, i, a] - T[p, i, a]
                        rhs = 0
                        for k in range(n - 1):
                            step = (dev[k] - d[others[k]]) * stride[others[k]]
                            rhs += T[p + step, i, a] - T[p, i, a]
                        if lhs != rhs:
                            return (int(p), i, int(q), a)
            else:
                best_q = -1
                best_a = 0
                for j in range(n - 1):
                    for k in range(j + 1, n - 1):
                        for rj in range(m):
                            sj = (rj - d[others[j]]) * stride[others[j]]
                            for rk in range(m):
                                sk = (rk - d[others[k]]) * stride[others[k]]
                                q = p + sj + sk
                                if best_q != -1 and q > best_q:
                                    continue
                                for a in range(n):
                                    if (T[q, i, a] - T[p + sj, i, a]
                                            - T[p + sk, i, a] + T[p, i, a]) != 0:
                                        if best_q == -1 or q < best_q or (q == best_q and a < best_a):
                                            best_q = q
                                            best_a = a
                                        break
                if best_q != -1:
                    return (int(p), i, int(best_q), best_a)
    return None
