"""Pure numpy scan kernels (fallback for the compiled ``_kernels`` module).

Every scan takes the int64 assignment table ``T`` of shape ``(M, n, n)``
indexed by profile, agent, object, and returns the first violation in
canonical order as a tuple of ints, or ``None``.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def _digits(M: int, n: int, m: int) -> np.ndarray:
    """(n, M) array of per-agent preference indices."""
    p = np.arange(M, dtype=np.int64)
    out = np.empty((n, M), dtype=np.int64)
    for i in range(n - 1, -1, -1):
        p, out[i] = np.divmod(p, m)
    return out


def _first(candidates):
    best = None
    for c in candidates:
        if c is not None and (best is None or c < best):
            best = c
    return best


def _first_true(mask: np.ndarray):
    flat = np.flatnonzero(mask.reshape(-1))
    if flat.size == 0:
        return None
    return tuple(int(x) for x in np.unravel_index(flat[0], mask.shape))


def sp_scan(T, prefs):
    """(p, i, misreport, t) with truthful prefix sum < misreport prefix sum."""
    M, n, _ = T.shape
    m = prefs.shape[0]
    D = _digits(M, n, m)
    stride = m ** (n - 1 - np.arange(n))
    out = []
    for i in range(n):
        order = prefs[D[i]]  # truthful order per profile, (M, n)
        truth = np.cumsum(np.take_along_axis(T[:, i, :], order, axis=1), axis=1)
        for r in range(m):
            q = np.arange(M) + (r - D[i]) * stride[i]
            lie = np.cumsum(np.take_along_axis(T[q, i, :], order, axis=1), axis=1)
            bad = (truth < lie) & (D[i] != r)[:, None]
            w = _first_true(bad)
            if w is not None:
                p, t = w
                out.append((p, i, r, t + 1))
    return _first(out)


def ef_scan(T, prefs):
    """(p, i, j, t): agent i's top-t share is below what j gets of them."""
    M, n, _ = T.shape
    m = prefs.shape[0]
    D = _digits(M, n, m)
    out = []
    for i in range(n):
        order = prefs[D[i]]
        own = np.cumsum(np.take_along_axis(T[:, i, :], order, axis=1), axis=1)
        for j in range(n):
            if j == i:
                continue
            other = np.cumsum(np.take_along_axis(T[:, j, :], order, axis=1), axis=1)
            w = _first_true(own < other)
            if w is not None:
                out.append((w[0], i, j, w[1] + 1))
    return _first(out)


def ete_scan(T, m):
    M, n, _ = T.shape
    D = _digits(M, n, m)
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            bad = (D[i] == D[j])[:, None] & (T[:, i, :] != T[:, j, :])
            w = _first_true(bad)
            if w is not None:
                out.append((w[0], i, j, w[1]))
    return _first(out)


def neutral_scan(T, perms, relabel):
    """(p, g, i, a) with T[p,i,a] != T[pi_g(p), i, pi_g(a)]."""
    M, n, _ = T.shape
    m = perms.shape[0]
    D = _digits(M, n, m)
    stride = m ** (n - 1 - np.arange(n))
    out = []
    for g in range(perms.shape[0]):
        q = (relabel[g][D] * stride[:, None]).sum(axis=0)
        moved = T[q][:, :, perms[g]]  # moved[p, i, a] = T[q, i, pi(a)]
        w = _first_true(T != moved)
        if w is not None:
            out.append((w[0], g, w[1], w[2]))
    return _first(out)


def anon_scan(T, aperms):
    """(p, g, i, a) with T[p, s(i), a] != T[s(p), i, a] for agent perm s."""
    M, n, _ = T.shape
    m = math.factorial(n)
    D = _digits(M, n, m)
    stride = m ** (n - 1 - np.arange(n))
    out = []
    for g in range(aperms.shape[0]):
        s = aperms[g]
        q = (D[s] * stride[:, None]).sum(axis=0)
        w = _first_true(T[:, s, :] != T[q])
        if w is not None:
            out.append((w[0], g, w[1], w[2]))
    return _first(out)


def sul_scan(T, prefs):
    """Swap-monotonicity, upper and lower invariance on adjacent swaps.

    Returns three witnesses ``(p, i, k, a)`` (``k`` is the 1-based swap
    position, ``a`` the offending object) or ``None`` each.
    """
    M, n, _ = T.shape
    m = prefs.shape[0]
    D = _digits(M, n, m)
    stride = m ** (n - 1 - np.arange(n))
    index = {tuple(r): k for k, r in enumerate(prefs.tolist())}
    swap_to = np.empty((m, n - 1), dtype=np.int64)
    for k, r in enumerate(prefs.tolist()):
        for s in range(n - 1):
            q = list(r)
            q[s], q[s + 1] = q[s + 1], q[s]
            swap_to[k, s] = index[tuple(q)]
    sm, up, lo = [], [], []
    for i in range(n):
        order = prefs[D[i]]
        P = np.take_along_axis(T[:, i, :], order, axis=1)  # by truthful rank
        for s in range(n - 1):
            q = np.arange(M) + (swap_to[D[i], s] - D[i]) * stride[i]
            Q = np.take_along_axis(T[q, i, :], order, axis=1)
            same = (P == Q).all(axis=1)
            bad = ~same & ~(Q[:, s + 1] > P[:, s + 1])
            idx = np.flatnonzero(bad)
            if idx.size:
                p = int(idx[0])
                sm.append((p, i, s + 1, int(order[p, s + 1])))
            if s > 0:
                w = _first_true(P[:, :s] != Q[:, :s])
                if w is not None:
                    up.append((w[0], i, s + 1, int(order[w[0], w[1]])))
            if s + 2 < n:
                w = _first_true(P[:, s + 2:] != Q[:, s + 2:])
                if w is not None:
                    lo.append((w[0], i, s + 1, int(order[w[0], s + 2 + w[1]])))
    return _first(sm), _first(up), _first(lo)


def cfe_scan(T, prefs, denom):
    """(p, i) on a contention-free profile where i misses her top for sure."""
    M, n, _ = T.shape
    m = prefs.shape[0]
    D = _digits(M, n, m)
    tops = prefs[D, 0]  # (n, M)
    distinct = np.ones(M, dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            distinct &= tops[i] != tops[j]
    got = np.stack([T[np.arange(M), i, tops[i]] for i in range(n)], axis=1)
    return _first_true(distinct[:, None] & (got != denom))


def dominance_scan(A, B, prefs):
    """Weak-dominance witness (p, i, t) and first strict cell (p, i)."""
    M, n, _ = A.shape
    m = prefs.shape[0]
    D = _digits(M, n, m)
    weak, strict = [], []
    for i in range(n):
        order = prefs[D[i]]
        ca = np.cumsum(np.take_along_axis(A[:, i, :], order, axis=1), axis=1)
        cb = np.cumsum(np.take_along_axis(B[:, i, :], order, axis=1), axis=1)
        w = _first_true(ca < cb)
        if w is not None:
            weak.append((w[0], i, w[1] + 1))
        s = np.flatnonzero((ca > cb).any(axis=1))
        if s.size:
            strict.append((int(s[0]), i))
    if weak:
        return _first(weak), None
    return None, _first(strict)


def sep_scan(T, m, full):
    """Separability: returns (p, i, q, a) where q is the deviated profile.

    ``full`` checks every deviation tuple of the other agents. Otherwise
    only tuples changing exactly two agents are checked; a function of the
    others' reports is additively separable iff all such mixed second
    differences vanish, so both modes decide the same property.
    """
    M, n, _ = T.shape
    D = _digits(M, n, m)
    stride = m ** (n - 1 - np.arange(n))
    base = np.arange(M, dtype=np.int64)
    out = []
    for i in range(n):
        others = [j for j in range(n) if j != i]
        Ti = T[:, i, :]
        if full:
            for dev in itertools.product(range(m), repeat=n - 1):
                q = base.copy()
                rhs = np.zeros((M, n), dtype=np.int64)
                for j, r in zip(others, dev):
                    step = (r - D[j]) * stride[j]
                    q += step
                    rhs += Ti[base + step] - Ti
                bad = (Ti[q] - Ti) != rhs
                w = _first_true(bad)
                if w is not None:
                    out.append((w[0], i, int(q[w[0]]), w[1]))
        else:
            for j, k in itertools.combinations(others, 2):
                for rj in range(m):
                    for rk in range(m):
                        sj = (rj - D[j]) * stride[j]
                        sk = (rk - D[k]) * stride[k]
                        mixed = Ti[base + sj + sk] - Ti[base + sj] - Ti[base + sk] + Ti
                        w = _first_true(mixed != 0)
                        if w is not None:
                            p = w[0]
                            out.append((p, i, int(p + sj[p] + sk[p]), w[1]))
    return _first(out)
