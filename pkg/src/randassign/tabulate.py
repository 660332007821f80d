"""Whole-domain evaluation of a mechanism into one integer array.

Every exhaustive checker works on a :class:`Table`: the assignments of all
``(n!)**n`` profiles, scaled to a common denominator so the scan kernels can
compare int64 values instead of fractions.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .core import ENUMERATION_CAP, Profile, all_preferences, default_tokens, profile_from_index

INT_LIMIT = 2 ** 60


@lru_cache(maxsize=None)
def pref_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    """``(order, rank)`` arrays: ``order[k]`` lists pref ``k`` best first and
    ``rank[k, a]`` is the 0-based rank of object ``a`` in it."""
    prefs = np.array(all_preferences(n), dtype=np.int64)
    rank = np.argsort(prefs, axis=1).astype(np.int64)
    prefs.setflags(write=False)
    rank.setflags(write=False)
    return prefs, rank


@lru_cache(maxsize=None)
def relabel_table(n: int) -> np.ndarray:
    """``out[g, k]`` = index of the preference obtained by renaming each
    object ``a`` of pref ``k`` to ``perm_g[a]``, where ``perm_g`` is the g-th
    permutation in lexicographic order."""
    prefs = all_preferences(n)
    index = {p: k for k, p in enumerate(prefs)}
    out = np.empty((len(prefs), len(prefs)), dtype=np.int64)
    for g, pi in enumerate(prefs):
        for k, p in enumerate(prefs):
            out[g, k] = index[tuple(pi[a] for a in p)]
    out.setflags(write=False)
    return out


def strides(n: int) -> np.ndarray:
    m = math.factorial(n)
    return np.array([m ** (n - 1 - i) for i in range(n)], dtype=np.int64)


@dataclass(frozen=True)
class Table:
    n: int
    num: np.ndarray  # (M, n, n) int64 numerators
    denom: int
    name: str = ""

    @property
    def m(self) -> int:
        return math.factorial(self.n)

    def profile(self, p: int) -> Profile:
        return profile_from_index(self.n, int(p), default_tokens(self.n))

    def row(self, p: int, i: int) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(x), self.denom) for x in self.num[p, i])

    def matrix(self, p: int) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(self.row(p, i) for i in range(self.n))

    def rescaled(self, denom: int) -> np.ndarray:
        if denom % self.denom:
            raise ValueError("target denominator must be a multiple")
        return self.num * (denom // self.denom)


_CACHE: "OrderedDict[tuple, Table]" = OrderedDict()
CACHE_BYTES = 400 * 2 ** 20


def _cache_key(mech, n: int) -> tuple:
    # the evaluator itself (not its id) so a collected callable can never alias
    return (mech.name, mech.evaluator, n)


def tabulate(mech, n: int, cap: int = ENUMERATION_CAP) -> Table:
    """Evaluate ``mech`` on every profile of size ``n`` (cached)."""
    if n > cap:
        raise ValueError(f"n={n} exceeds the exhaustive cap {cap}")
    key = _cache_key(mech, n)
    hit = _CACHE.get(key)
    if hit is not None:
        _CACHE.move_to_end(key)
        return hit
    if mech.bulk is not None:
        num, denom = mech.bulk(n)
        num = np.ascontiguousarray(num, dtype=np.int64)
    else:
        num, denom = _evaluate_all(mech, n)
    if np.abs(num).max(initial=0) * n >= INT_LIMIT:
        raise OverflowError(f"{mech.name}: scaled assignments exceed int64 range")
    table = Table(n, num, int(denom), mech.name)
    _CACHE[key] = table
    while sum(t.num.nbytes for t in _CACHE.values()) > CACHE_BYTES and len(_CACHE) > 1:
        _CACHE.popitem(last=False)
    return table


def _evaluate_all(mech, n: int) -> tuple[np.ndarray, int]:
    m = math.factorial(n)
    total = m ** n
    objects = default_tokens(n)
    mats = []
    denom = 1
    for p in range(total):
        mat = mech(profile_from_index(n, p, objects)).matrix
        for row in mat:
            for x in row:
                if denom % x.denominator:
                    denom = math.lcm(denom, x.denominator)
        mats.append(mat)
    if denom >= INT_LIMIT:
        raise OverflowError(f"{mech.name}: common denominator {denom} too large")
    num = np.empty((total, n, n), dtype=np.int64)
    for p, mat in enumerate(mats):
        for i, row in enumerate(mat):
            for a, x in enumerate(row):
                num[p, i, a] = x.numerator * (denom // x.denominator)
    return num, denom


def clear_cache() -> None:
    _CACHE.clear()
