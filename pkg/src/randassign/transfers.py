"""Pairwise transfer functions.

A transfer function ``f(pref, pref2, a)`` is the share of object ``a`` an
agent reporting ``pref`` receives from one reporting ``pref2``. This module
checks the feasibility and incentive properties of such tables, splits any
assignment into pairwise transfers by cycle decomposition, recovers ``f``
from an anonymous mechanism, and converts between ``f``, rank tables ``g``
and rank vectors ``v``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from .core import (Assignment, AssignmentError, Profile, all_preferences, default_tokens,
                   format_rational, parse_rational, preference_index, rank_of)
from .mechanisms import Mechanism, pairwise_exchange, validate_vector

DENSE_CAP = 4
ZERO = Fraction(0)


class TransferError(ValueError):
    pass


class TransferFunction:
    """``f`` over (preference, preference, object) for a fixed ``n``.

    Tables are dense for ``n <= 4``. A function built from a rank vector
    ``v`` is evaluated lazily from the formula at larger ``n``.
    """

    def __init__(self, n: int, values: Mapping[tuple, object] | None = None, *,
                 v: Sequence[Fraction] | None = None, name: str = "f"):
        if n < 3:
            raise TransferError(f"n must be >= 3, got {n}")
        self.n = n
        self.name = name
        self.v = None if v is None else tuple(Fraction(x) for x in v)
        self._table: list[Fraction] | None = None
        if v is None or n <= DENSE_CAP:
            if n > DENSE_CAP:
                raise TransferError(f"explicit tables are limited to n <= {DENSE_CAP}")
            m = math.factorial(n)
            self._table = [ZERO] * (m * m * n)
            if self.v is not None:
                prefs = all_preferences(n)
                ranks = [[rank_of(p, a) - 1 for a in range(n)] for p in prefs]
                for k in range(m):
                    for k2 in range(m):
                        base = (k * m + k2) * n
                        for a in range(n):
                            self._table[base + a] = self.v[ranks[k][a]] - self.v[ranks[k2][a]]
            lookup = preference_index(n)
            for (p, p2, a), x in (values or {}).items():
                try:
                    k, k2 = lookup[tuple(p)], lookup[tuple(p2)]
                except KeyError:
                    raise TransferError(f"({p}, {p2}) are not preferences over {n} objects") from None
                if not 0 <= a < n:
                    raise TransferError(f"object index {a} out of range")
                self._table[(k * m + k2) * n + a] = Fraction(x)

    @classmethod
    def zero(cls, n: int) -> "TransferFunction":
        return cls(n, name="zero")

    @classmethod
    def from_array(cls, n: int, arr: Sequence[Sequence[Sequence]], name: str = "f") -> "TransferFunction":
        """``arr[k][k2][a]`` indexed by canonical preference positions."""
        f = cls(n, name=name)
        m = math.factorial(n)
        for k in range(m):
            for k2 in range(m):
                for a in range(n):
                    f._table[(k * m + k2) * n + a] = Fraction(arr[k][k2][a])
        return f

    @property
    def m(self) -> int:
        return math.factorial(self.n)

    @property
    def dense(self) -> bool:
        return self._table is not None

    def at(self, k: int, k2: int, a: int) -> Fraction:
        if self._table is not None:
            return self._table[(k * self.m + k2) * self.n + a]
        prefs = all_preferences(self.n)
        return self(prefs[k], prefs[k2], a)

    def __call__(self, pref, pref2, a: int) -> Fraction:
        if self._table is None:
            return self.v[rank_of(pref, a) - 1] - self.v[rank_of(pref2, a) - 1]
        lookup = preference_index(self.n)
        return self._table[(lookup[tuple(pref)] * self.m + lookup[tuple(pref2)]) * self.n + a]

    def entries(self) -> Iterator[tuple[int, int, int, Fraction]]:
        """``(k, k2, a, value)`` over the whole domain in canonical order."""
        self._require_dense()
        m, n = self.m, self.n
        for k in range(m):
            for k2 in range(m):
                for a in range(n):
                    yield k, k2, a, self._table[(k * m + k2) * n + a]

    def scaled(self) -> tuple[np.ndarray, int]:
        """Integer table ``(m, m, n)`` and its common denominator."""
        self._require_dense()
        denom = math.lcm(*(x.denominator for x in self._table))
        arr = np.array([int(x * denom) for x in self._table], dtype=np.int64)
        return arr.reshape(self.m, self.m, self.n), denom

    def _require_dense(self) -> None:
        if self._table is None:
            raise TransferError(f"n={self.n} is beyond the dense cap {DENSE_CAP}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, TransferFunction) or other.n != self.n:
            return NotImplemented
        if self.dense and other.dense:
            return self._table == other._table
        return all(self.at(k, k2, a) == other.at(k, k2, a) for k, k2, a, _ in self.entries())

    def __hash__(self) -> int:
        return id(self)

    def __repr__(self) -> str:
        return f"TransferFunction(n={self.n}, name={self.name!r})"


def f_from_v(v: Sequence) -> TransferFunction:
    """``f(pref, pref2, a) = v[rank(pref, a)] - v[rank(pref2, a)]``."""
    v = validate_vector(v)
    from .mechanisms import format_vector
    return TransferFunction(len(v), v=v, name=f"v{format_vector(v)}")


def pairwise_bulk(f: TransferFunction) -> Callable[[int], tuple[np.ndarray, int]]:
    """Whole-domain fast path for :func:`transfer_mechanism`."""
    def bulk(n: int):
        if n != f.n:
            raise TransferError(f"transfer function is for n={f.n}, not {n}")
        F, fden = f.scaled()
        denom = math.lcm(fden, n)
        F = F * (denom // fden)
        m = f.m
        grids = np.indices((m,) * n).reshape(n, -1)
        M = grids.shape[1]
        out = np.full((M, n, n), denom // n, dtype=np.int64)
        for i in range(n):
            for j in range(n):
                if j != i:
                    out[:, i, :] += F[grids[i], grids[j]]
        if (out < 0).any() or (out > denom).any():
            p, i, a = (int(x[0]) for x in np.nonzero((out < 0) | (out > denom)))
            raise AssignmentError(f"profile #{p}: cell ({i + 1},{default_tokens(n)[a]}) outside [0,1]")
        return out, denom
    return bulk


def transfer_mechanism(f: TransferFunction) -> Mechanism:
    """The pairwise exchange mechanism of ``f`` (with a tabulation fast path)."""
    return Mechanism(f"pairwise:{f.name}", lambda prof: pairwise_exchange(prof, f), {"f": f},
                     bulk=pairwise_bulk(f) if f.dense else None)


# -- feasibility ---------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    holds: bool
    witness: dict | None = None

    def line(self) -> str:
        if self.holds:
            return f"{self.name}: holds"
        return f"{self.name}: fails " + ", ".join(f"{k}={v}" for k, v in self.witness.items())


@dataclass(frozen=True)
class Report:
    checks: tuple[Check, ...]

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def text(self) -> str:
        return "".join(c.line() + "\n" for c in self.checks)


def _pref_text(n: int, k: int) -> str:
    return ",".join(default_tokens(n)[a] for a in all_preferences(n)[k])


def _triple(f: TransferFunction, k: int, k2: int, a: int) -> dict:
    return {"pref": _pref_text(f.n, k), "pref2": _pref_text(f.n, k2),
            "object": default_tokens(f.n)[a], "value": format_rational(f.at(k, k2, a))}


def validate_transfer_function(f: TransferFunction) -> Report:
    """No self-transfers, balanced, anti-symmetric and bounded by 1/(n(n-1))."""
    n, m = f.n, f.m
    bound = Fraction(1, n * (n - 1))
    found: dict[str, dict | None] = {"no_transfers": None, "balanced": None,
                                     "antisymmetric": None, "bounded": None}
    for k in range(m):
        for k2 in range(m):
            total = ZERO
            for a in range(n):
                x = f.at(k, k2, a)
                total += x
                if k == k2 and x and found["no_transfers"] is None:
                    found["no_transfers"] = _triple(f, k, k2, a)
                if x != -f.at(k2, k, a) and found["antisymmetric"] is None:
                    found["antisymmetric"] = _triple(f, k, k2, a)
                if abs(x) > bound and found["bounded"] is None:
                    found["bounded"] = _triple(f, k, k2, a)
            if total and found["balanced"] is None:
                w = _triple(f, k, k2, 0)
                w.pop("value")
                w["object"] = "*"
                w["sum"] = format_rational(total)
                found["balanced"] = w
    return Report(tuple(Check(name, w is None, w) for name, w in found.items()))


def _require_valid(f: TransferFunction) -> None:
    rep = validate_transfer_function(f)
    if not rep.holds:
        bad = next(c for c in rep.checks if not c.holds)
        raise TransferError(f"invalid transfer function: {bad.line()}")


# -- invariance and monotonicity ------------------------------------------------

def check_f_axioms(f: TransferFunction) -> Report:
    """Sender invariance, receiver invariance and swap monotonicity, each over
    its whole domain; both the prefix and the suffix branch of each invariance
    are checked."""
    _require_valid(f)
    n, m = f.n, f.m
    prefs = all_preferences(n)
    ranks = [[rank_of(p, a) for a in range(n)] for p in prefs]
    sender = receiver = swap = None

    # sender: p1, p2 agree on positions <= t (or >= t); a = p1[t]
    for k in range(m):
        for k1 in range(m):
            for k2 in range(m):
                if sender is not None:
                    break
                p1, p2 = prefs[k1], prefs[k2]
                for t in range(n):
                    if p1[:t + 1] == p2[:t + 1] or p1[t:] == p2[t:]:
                        a = p1[t]
                        if f.at(k, k1, a) != f.at(k, k2, a):
                            sender = {"pref": _pref_text(n, k), "pref2": _pref_text(n, k1),
                                      "pref3": _pref_text(n, k2), "position": t + 1,
                                      "object": default_tokens(n)[a]}
                            break
    # receiver: p1, p2 give equal ranks to pref's top t objects (or its bottom ones)
    for k in range(m):
        p = prefs[k]
        for k1 in range(m):
            for k2 in range(m):
                if receiver is not None:
                    break
                same = [ranks[k1][a] == ranks[k2][a] for a in p]
                for t in range(n):
                    if all(same[:t + 1]) or all(same[t:]):
                        a = p[t]
                        if f.at(k, k1, a) != f.at(k, k2, a):
                            receiver = {"pref": _pref_text(n, k), "pref2": _pref_text(n, k1),
                                        "pref3": _pref_text(n, k2), "position": t + 1,
                                        "object": default_tokens(n)[a]}
                            break
    # swap: p2 swaps adjacent (a, b) of p1 so a is demoted; f(p1,p,a) >= f(p2,p,a)
    index = preference_index(n)
    for k1 in range(m):
        p1 = prefs[k1]
        for s in range(n - 1):
            q = list(p1)
            q[s], q[s + 1] = q[s + 1], q[s]
            k2 = index[tuple(q)]
            a = p1[s]
            for k in range(m):
                if f.at(k1, k, a) < f.at(k2, k, a):
                    swap = {"pref": _pref_text(n, k1), "swapped": _pref_text(n, k2),
                            "partner": _pref_text(n, k), "object": default_tokens(n)[a]}
                    break
            if swap:
                break
        if swap:
            break
    return Report((Check("sender_invariance", sender is None, sender),
                   Check("receiver_invariance", receiver is None, receiver),
                   Check("swap_monotonicity", swap is None, swap)))


def check_ef_transfer_lemmas(f: TransferFunction) -> Report:
    """Zero transfer of the t-th object between preferences agreeing on the
    first t (or last n-t+1) positions, and nonnegative prefix sums of what
    ``pref`` receives along its own order."""
    _require_valid(f)
    n, m = f.n, f.m
    prefs = all_preferences(n)
    zero = prefix = None
    for k in range(m):
        p = prefs[k]
        for k2 in range(m):
            p2 = prefs[k2]
            if zero is None:
                for t in range(n):
                    if (p[:t + 1] == p2[:t + 1] or p[t:] == p2[t:]) and f.at(k, k2, p[t]):
                        zero = _triple(f, k, k2, p[t]) | {"position": t + 1}
                        break
            if prefix is None:
                acc = ZERO
                for t in range(n):
                    acc += f.at(k, k2, p[t])
                    if acc < 0:
                        prefix = {"pref": _pref_text(n, k), "pref2": _pref_text(n, k2),
                                  "prefix": t + 1, "sum": format_rational(acc)}
                        break
    return Report((Check("agreeing_zero_transfers", zero is None, zero),
                   Check("nonnegative_prefix_sums", prefix is None, prefix)))


def check_sp_prefix_monotonicity(f: TransferFunction) -> Check:
    """For every ``p``, ``p'``, ``p''`` and ``t``, the top-t transfers ``p``
    receives from ``p''`` (along ``p``'s order) are at least what ``p'`` would
    receive of those objects."""
    _require_valid(f)
    n, m = f.n, f.m
    prefs = all_preferences(n)
    for k in range(m):
        p = prefs[k]
        for k1 in range(m):
            for k2 in range(m):
                s = s1 = ZERO
                for t in range(n):
                    s += f.at(k, k2, p[t])
                    s1 += f.at(k1, k2, p[t])
                    if s < s1:
                        return Check("sp_prefix_monotonicity", False,
                                     {"pref": _pref_text(n, k), "pref2": _pref_text(n, k1),
                                      "pref3": _pref_text(n, k2), "prefix": t + 1})
    return Check("sp_prefix_monotonicity", True)


# -- rank representations ------------------------------------------------------------

@dataclass(frozen=True)
class RankTransfer:
    """``g[i][j]`` for 1-based ranks, stored 0-based."""

    g: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.g)

    def __call__(self, i: int, j: int) -> Fraction:
        return self.g[i - 1][j - 1]

    @classmethod
    def from_v(cls, v: Sequence) -> "RankTransfer":
        v = [Fraction(x) for x in v]
        return cls(tuple(tuple(a - b for b in v) for a in v))


@dataclass(frozen=True)
class RankWitness:
    """Two domain triples with the same rank pair but different values."""
    first: dict
    second: dict


def g_from_f(f: TransferFunction) -> RankTransfer | RankWitness:
    _require_valid(f)
    n = f.n
    prefs = all_preferences(n)
    ranks = [[rank_of(p, a) - 1 for a in range(n)] for p in prefs]
    g: list[list[Fraction | None]] = [[None] * n for _ in range(n)]
    seen: dict[tuple[int, int], tuple[int, int, int]] = {}
    for k, k2, a, x in f.entries():
        key = (ranks[k][a], ranks[k2][a])
        if g[key[0]][key[1]] is None:
            g[key[0]][key[1]] = x
            seen[key] = (k, k2, a)
        elif g[key[0]][key[1]] != x:
            return RankWitness(_triple(f, *seen[key]), _triple(f, k, k2, a))
    return RankTransfer(tuple(tuple(row) for row in g))


@dataclass(frozen=True)
class VectorWitness:
    kind: str  # "diagonal", "permutation" or "difference"
    detail: tuple


def v_from_g(g: RankTransfer) -> tuple[Fraction, ...] | VectorWitness:
    """``v[i] = g(i, n)`` once ``g`` vanishes on the diagonal and on every
    permutation sum."""
    n = g.n
    for i in range(1, n + 1):
        if g(i, i):
            return VectorWitness("diagonal", (i,))
    for pi in itertools.permutations(range(1, n + 1)):
        if sum((g(i, pi[i - 1]) for i in range(1, n + 1)), ZERO):
            return VectorWitness("permutation", pi)
    v = tuple(g(i, n) for i in range(1, n + 1))
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            if g(a, b) != v[a - 1] - v[b - 1]:
                return VectorWitness("difference", (a, b))
    return v


# -- decomposition of an assignment ------------------------------------------------

@dataclass(frozen=True)
class TransferMap:
    """``h[(i, j, a)]``: share of ``a`` agent ``i`` receives from agent ``j``."""

    profile: Profile
    h: dict[tuple[int, int, int], Fraction] = field(default_factory=dict)

    def __call__(self, i: int, j: int, a: int) -> Fraction:
        return self.h.get((i, j, a), ZERO)

    def reconstruct(self) -> Assignment:
        n = self.profile.n
        return Assignment(tuple(tuple(Fraction(1, n) + sum((self(i, j, a) for j in range(n) if j != i), ZERO)
                                      for a in range(n)) for i in range(n)))

    def max_abs(self) -> Fraction:
        return max((abs(x) for x in self.h.values()), default=ZERO)

    def to_text(self) -> str:
        objs = self.profile.objects
        return "".join(f"{i + 1} <- {j + 1} | {objs[a]} | {format_rational(x)}\n"
                       for (i, j, a), x in sorted(self.h.items()) if x > 0)


def _smallest_cycle(succ: list[list[int]]) -> list[int] | None:
    """Lexicographically smallest simple cycle, written from its least node."""
    N = len(succ)

    def reaches(src: int, dst: int, allowed) -> bool:
        stack, seen = [src], {src}
        while stack:
            u = stack.pop()
            for w in succ[u]:
                if w == dst:
                    return True
                if w not in seen and allowed(w):
                    seen.add(w)
                    stack.append(w)
        return False

    for s in range(N):
        if not reaches(s, s, lambda w, s=s: w > s):
            continue
        path = [s]
        on_path = {s}
        while True:
            u = path[-1]
            if s in succ[u]:
                return path
            for w in sorted(succ[u]):
                if w > s and w not in on_path and reaches(w, s, lambda x: x > s and x not in on_path):
                    path.append(w)
                    on_path.add(w)
                    break
            else:  # pragma: no cover - reachability guarantees progress
                raise AssertionError("cycle search lost its path")
    return None


def decompose_to_transfers(P: Assignment | Sequence[Sequence], profile: Profile) -> TransferMap:
    """Split ``P - J/n`` into pairwise transfers.

    Agents are nodes ``0..n-1`` and objects ``n..2n-1``; object ``a`` sends
    flow to agent ``i`` when ``P[i][a] > 1/n`` and receives from ``i`` when
    ``P[i][a] < 1/n``. Each extracted cycle ``j -> a -> i`` moves its
    bottleneck weight of ``a`` from ``j`` to ``i``.
    """
    if not isinstance(P, Assignment):
        P = Assignment(tuple(tuple(r) for r in P))
    n = P.n
    if profile.n != n:
        raise AssignmentError(f"assignment is {n}x{n} but the profile has n={profile.n}")
    base = Fraction(1, n)
    cap: dict[tuple[int, int], Fraction] = {}
    for i in range(n):
        for a in range(n):
            d = P[i][a] - base
            if d > 0:
                cap[(n + a, i)] = d
            elif d < 0:
                cap[(i, n + a)] = -d
    h: dict[tuple[int, int, int], Fraction] = {}
    while cap:
        succ = [[] for _ in range(2 * n)]
        for (u, w) in cap:
            succ[u].append(w)
        cyc = _smallest_cycle(succ)
        if cyc is None:
            raise AssignmentError("residual flow has no cycle; input is not doubly stochastic")
        edges = list(zip(cyc, cyc[1:] + cyc[:1]))
        w = min(cap[e] for e in edges)
        for e in edges:
            cap[e] -= w
            if not cap[e]:
                del cap[e]
        for (u, x), (x2, v) in zip(edges, edges[1:] + edges[:1]):
            if u < n and x >= n:  # agent u gives object x to agent v
                a = x - n
                h[(v, u, a)] = h.get((v, u, a), ZERO) + w
                h[(u, v, a)] = h.get((u, v, a), ZERO) - w
    tm = TransferMap(profile, {k: x for k, x in h.items() if x})
    if tm.reconstruct() != P:
        raise AssertionError("transfer decomposition does not reconstruct its input")
    if tm.max_abs() > base:
        raise AssertionError("transfer exceeds 1/n")
    return tm


# -- mechanisms back to transfer functions -----------------------------------------------

def reconstruct_f(mech: Mechanism, n: int) -> TransferFunction:
    """Read ``f(p, p2, .)`` off the profile where agents 1..n-1 report ``p``
    and agent n reports ``p2``: an identical agent's share minus ``1/n``."""
    if n > DENSE_CAP:
        raise TransferError(f"n={n} exceeds the enumeration cap {DENSE_CAP}")
    prefs = all_preferences(n)
    m = len(prefs)
    objects = default_tokens(n)
    arr = [[None] * m for _ in range(m)]
    for k, p in enumerate(prefs):
        for k2, p2 in enumerate(prefs):
            prof = Profile((p,) * (n - 1) + (p2,), objects)
            P = mech(prof)
            for i in range(1, n - 1):
                if P[i] != P[0]:
                    raise TransferError(f"agents 1 and {i + 1} report alike but are treated "
                                        f"differently at profile {prof}")
            arr[k][k2] = [x - Fraction(1, n) for x in P[0]]
    return TransferFunction.from_array(n, arr, name=f"reconstructed:{mech.name}")


@dataclass(frozen=True)
class Roundtrip:
    is_pairwise_exchange: bool
    witness: Profile | None = None
    f: TransferFunction | None = None


def roundtrip_check(mech: Mechanism, n: int) -> Roundtrip:
    """``mech`` equals the pairwise exchange of its reconstructed ``f`` on every profile."""
    from .tabulate import tabulate
    f = reconstruct_f(mech, n)
    mine = tabulate(mech, n)
    if not validate_transfer_function(f).holds:
        # the exchange of an invalid f may leave [0, 1]; compare cell by cell
        for p in range(mine.num.shape[0]):
            prof = mine.profile(p)
            try:
                Q = pairwise_exchange(prof, f)
            except AssignmentError:
                return Roundtrip(False, prof, f)
            if Q.matrix != mine.matrix(p):
                return Roundtrip(False, prof, f)
        return Roundtrip(True, None, f)
    theirs = tabulate(transfer_mechanism(f), n)
    den = math.lcm(mine.denom, theirs.denom)
    diff = (mine.rescaled(den) != theirs.rescaled(den)).any(axis=(1, 2))
    bad = np.flatnonzero(diff)
    if bad.size:
        return Roundtrip(False, mine.profile(int(bad[0])), f)
    return Roundtrip(True, None, f)


# -- random valid transfer functions --------------------------------------------------------

def random_transfer_function(n: int, seed: int, *, grain: int | None = None) -> TransferFunction:
    """A seeded transfer function meeting the four feasibility properties.

    Odd seeds scatter random balanced vectors on a random subset of
    preference pairs; even seeds perturb a random rank-vector function on a
    few pairs (or not at all), so both strategy-proof and manipulable
    functions turn up.
    """
    import random
    rng = random.Random(seed)
    m = math.factorial(n)
    bound = Fraction(1, n * (n - 1))
    grain = grain or n * (n - 1) * 2  # values are multiples of 1/grain
    steps = int(bound * grain)

    def balanced() -> list[Fraction]:
        while True:
            x = [rng.randint(-steps, steps) for _ in range(n - 1)]
            last = -sum(x)
            if abs(last) <= steps:
                return [Fraction(c, grain) for c in x + [last]]

    if seed % 2 == 0:
        raw = sorted((Fraction(rng.randint(0, steps), grain) for _ in range(n - 1)), reverse=True)
        f = TransferFunction(n, v=tuple(raw) + (ZERO,), name=f"random#{seed}")
        f = TransferFunction.from_array(n, [[[f.at(k, k2, a) for a in range(n)] for k2 in range(m)]
                                            for k in range(m)], name=f"random#{seed}")
        touches = rng.choice([0, 0, 1, 2])
    else:
        f = TransferFunction.zero(n)
        f.name = f"random#{seed}"
        touches = rng.randint(1, m * (m - 1) // 2)
    pairs = [(k, k2) for k in range(m) for k2 in range(k + 1, m)]
    for k, k2 in rng.sample(pairs, touches):
        x = balanced()
        for a in range(n):
            f._table[(k * m + k2) * n + a] = x[a]
            f._table[(k2 * m + k) * n + a] = -x[a]
    return f


# -- file formats ------------------------------------------------------------------------

def format_f(f: TransferFunction, objects: Sequence[str] | None = None) -> str:
    objects = objects or default_tokens(f.n)
    prefs = all_preferences(f.n)
    lines = [f"f n={f.n}"]
    for k, k2, a, x in f.entries():
        if x:
            lines.append(f"{','.join(objects[b] for b in prefs[k])} | "
                         f"{','.join(objects[b] for b in prefs[k2])} | {objects[a]} | "
                         f"{format_rational(x)}")
    return "\n".join(lines) + "\n"


def parse_f(text: str) -> TransferFunction:
    lines = [(no, ln.strip()) for no, ln in enumerate(text.splitlines(), start=1)]
    lines = [(no, ln) for no, ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0][1].startswith("f n="):
        raise TransferError("line 1: expected header 'f n=<int>'")
    try:
        n = int(lines[0][1][4:])
    except ValueError:
        raise TransferError(f"line {lines[0][0]}: bad n") from None
    if n < 3 or n > DENSE_CAP:
        raise TransferError(f"n={n} outside the supported range 3..{DENSE_CAP}")
    objects = default_tokens(n)
    pos = {t: k for k, t in enumerate(objects)}
    values = {}
    for no, ln in lines[1:]:
        parts = [s.strip() for s in ln.split("|")]
        if len(parts) != 4:
            raise TransferError(f"line {no}: expected 'pref | pref | object | value'")
        try:
            p1 = tuple(pos[t.strip()] for t in parts[0].split(","))
            p2 = tuple(pos[t.strip()] for t in parts[1].split(","))
            a = pos[parts[2]]
        except KeyError as e:
            raise TransferError(f"line {no}: unknown object {e.args[0]!r}") from None
        for p in (p1, p2):
            if sorted(p) != list(range(n)):
                raise TransferError(f"line {no}: not a preference over {n} objects")
        key = (p1, p2, a)
        if key in values:
            raise TransferError(f"line {no}: duplicate entry")
        try:
            values[key] = parse_rational(parts[3])
        except ValueError as e:
            raise TransferError(f"line {no}: {e}") from None
    return TransferFunction(n, values)


def format_v(v: Sequence[Fraction]) -> str:
    return "v " + " ".join(format_rational(x) for x in v) + "\n"


def parse_v(text: str) -> tuple[Fraction, ...]:
    """Parse ``v <p/q> ...``; the vector is validated."""
    body = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if len(body) != 1 or body[0].split()[0] != "v":
        raise ValueError("expected a single line 'v <p/q> <p/q> ...'")
    return validate_vector([parse_rational(t) for t in body[0].split()[1:]])
