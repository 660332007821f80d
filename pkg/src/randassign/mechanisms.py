"""Equal division, serial dictatorship (single order and uniform random),
probabilistic serial, and pairwise-exchange mechanisms."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from .core import Assignment, AssignmentError, Profile, all_preferences, rank_of

RSD_EXACT_CAP = 8


@dataclass(frozen=True)
class Mechanism:
    """A named map from profiles to assignments.

    ``bulk`` is an optional fast path used by the exhaustive checkers: given
    ``n`` it returns ``(numerators, denominator)`` for every profile in
    enumeration order. It must agree exactly with ``evaluator``.
    """

    name: str
    evaluator: Callable[[Profile], Assignment]
    metadata: dict[str, Any] = field(default_factory=dict, compare=False)
    bulk: Callable[[int], Any] | None = field(default=None, compare=False)

    def __call__(self, profile: Profile) -> Assignment:
        out = self.evaluator(profile)
        if not isinstance(out, Assignment):
            out = Assignment(out)
        if out.n != profile.n:
            raise AssignmentError(f"{self.name} returned a {out.n}x{out.n} matrix for n={profile.n}")
        return out

    def __repr__(self) -> str:
        return f"Mechanism({self.name})"


# -- equal division ---------------------------------------------------------

def equal_division(profile: Profile) -> Assignment:
    return Assignment.uniform(profile.n)


# -- serial dictatorship ----------------------------------------------------

def serial_pick(profile: Profile, order: Sequence[int]) -> tuple[int, ...]:
    """Object received by each agent when agents pick in ``order`` (0-based)."""
    n = profile.n
    if sorted(order) != list(range(n)):
        raise ValueError(f"{tuple(order)} is not an ordering of the {n} agents")
    taken = [False] * n
    got = [-1] * n
    for i in order:
        for a in profile.prefs[i]:
            if not taken[a]:
                taken[a] = True
                got[i] = a
                break
    return tuple(got)


def serial_dictatorship(profile: Profile, order: Sequence[int]) -> Assignment:
    return Assignment.from_permutation(serial_pick(profile, order))


def random_serial_dictatorship(profile: Profile, cap: int = RSD_EXACT_CAP) -> Assignment:
    """Exact average of serial dictatorship over all ``n!`` agent orders."""
    n = profile.n
    if n > cap:
        raise ValueError(f"exact RSD enumerates n! orders; n={n} exceeds cap {cap}. "
                         "Sample orders with randassign.lottery instead.")
    counts = [[0] * n for _ in range(n)]
    for order in itertools.permutations(range(n)):
        for i, a in enumerate(serial_pick(profile, order)):
            counts[i][a] += 1
    total = math.factorial(n)
    return Assignment(tuple(tuple(Fraction(c, total) for c in row) for row in counts))


# -- probabilistic serial ---------------------------------------------------

def eating_schedule(profile: Profile) -> tuple[list[Fraction], Assignment]:
    """Simultaneous eating at unit speed.

    Returns the breakpoint times (ending at 1) and the resulting assignment.
    Objects that run out at the same instant are retired in one event.
    """
    n = profile.n
    supply = [Fraction(1)] * n
    shares = [[Fraction(0)] * n for _ in range(n)]
    t = Fraction(0)
    breakpoints: list[Fraction] = []
    while t < 1:
        targets = []
        for pref in profile.prefs:
            targets.append(next(a for a in pref if supply[a] > 0))
        eaters = [0] * n
        for a in targets:
            eaters[a] += 1
        dt = min([supply[a] / eaters[a] for a in range(n) if eaters[a]] + [1 - t])
        for i, a in enumerate(targets):
            shares[i][a] += dt
        for a in range(n):
            if eaters[a]:
                supply[a] -= dt * eaters[a]
        t += dt
        breakpoints.append(t)
    return breakpoints, Assignment(tuple(tuple(r) for r in shares))


def probabilistic_serial(profile: Profile) -> Assignment:
    return eating_schedule(profile)[1]


# -- pairwise exchange ------------------------------------------------------

def pairwise_exchange(profile: Profile, f) -> Assignment:
    """``1/n`` of everything plus the transfers ``f(pref_i, pref_j, a)``.

    ``f`` is any callable over (preference, preference, object); a
    :class:`randassign.transfers.TransferFunction` is the usual argument.
    The result is checked cell by cell before it is returned.
    """
    n = profile.n
    base = Fraction(1, n)
    rows = []
    for i, pi in enumerate(profile.prefs):
        row = []
        for a in range(n):
            x = base + sum((f(pi, pj, a) for j, pj in enumerate(profile.prefs) if j != i),
                           Fraction(0))
            if x < 0 or x > 1:
                raise AssignmentError(f"cell ({i + 1},{profile.objects[a]}) = {x} outside [0,1]")
            row.append(x)
        rows.append(tuple(row))
    for a in range(n):
        s = sum(r[a] for r in rows)
        if s != 1:
            raise AssignmentError(f"column {profile.objects[a]} sums to {s}")
    for i, r in enumerate(rows):
        if sum(r) != 1:
            raise AssignmentError(f"row {i + 1} sums to {sum(r)}; cell ({i + 1},"
                                  f"{profile.objects[0]}) starts the violating row")
    return Assignment(tuple(rows))


class VectorError(ValueError):
    """A rank vector that does not define a linear mechanism."""


def validate_vector(v: Sequence) -> tuple[Fraction, ...]:
    v = tuple(Fraction(x) for x in v)
    n = len(v)
    if n < 3:
        raise VectorError(f"vector must have n >= 3 entries, got {n}")
    cap = Fraction(1, n * (n - 1))
    for k in range(n - 1):
        if v[k] < v[k + 1]:
            raise VectorError(f"unsorted: v[{k + 1}] = {v[k]} < v[{k + 2}] = {v[k + 1]}")
    if v[-1] != 0:
        raise VectorError(f"v[n] must be 0, got {v[-1]}")
    if v[0] > cap:
        raise VectorError(f"v[1] = {v[0]} exceeds 1/(n(n-1)) = {cap}")
    if any(x < 0 for x in v):
        raise VectorError("entries must be nonnegative")
    return v


def format_vector(v: Sequence[Fraction]) -> str:
    from .core import format_rational
    return "(" + ",".join(format_rational(x) for x in v) + ")"


def linear_assignment(profile: Profile, v: Sequence) -> Assignment:
    """Closed form of the pairwise exchange with rank-difference transfers."""
    v = validate_vector(v)
    n = profile.n
    if len(v) != n:
        raise VectorError(f"vector length {len(v)} does not match n={n}")
    ranks = [[rank_of(p, a) - 1 for a in range(n)] for p in profile.prefs]
    # column totals of v[rank] let each cell be computed in O(1)
    col = [sum(v[ranks[j][a]] for j in range(n)) for a in range(n)]
    base = Fraction(1, n)
    return Assignment(tuple(
        tuple(base + n * v[ranks[i][a]] - col[a] for a in range(n)) for i in range(n)))


def _linear_bulk(v: tuple[Fraction, ...]):
    def bulk(n: int):
        import numpy as np
        from .tabulate import pref_tables
        if n != len(v):
            raise VectorError(f"vector length {len(v)} does not match n={n}")
        denom = math.lcm(n, *(x.denominator for x in v))
        vi = np.array([int(x * denom) for x in v], dtype=np.int64)
        _, rank = pref_tables(n)
        m = rank.shape[0]
        # vr[p, a] = v[rank(pref p, a)] scaled
        vr = vi[rank]
        grids = np.indices((m,) * n).reshape(n, -1)  # agent digits, lexicographic
        cells = vr[grids]  # (n, M, n)
        col = cells.sum(axis=0)
        out = denom // n + n * cells - col[None, :, :]
        return np.ascontiguousarray(out.transpose(1, 0, 2)), denom
    return bulk


def linear_mechanism(v: Sequence) -> Mechanism:
    """The neutral strategy-proof, envy-free pairwise exchange for ``v``."""
    v = validate_vector(v)
    return Mechanism(f"linear:{format_vector(v)}", lambda prof: linear_assignment(prof, v),
                     {"v": v}, bulk=_linear_bulk(v))


def pairwise_mechanism(f) -> Mechanism:
    return Mechanism(f"pairwise:{getattr(f, 'name', 'f')}",
                     lambda prof: pairwise_exchange(prof, f), {"f": f})


ED = Mechanism("ed", equal_division)
RSD = Mechanism("rsd", random_serial_dictatorship)
PS = Mechanism("ps", probabilistic_serial)


def sd_mechanism(order: Sequence[int]) -> Mechanism:
    order = tuple(order)
    return Mechanism("sd:" + ",".join(str(i + 1) for i in order),
                     lambda prof: serial_dictatorship(prof, order), {"order": order})


def catalog(n: int = 3) -> list[Mechanism]:
    """Default mechanisms used by sweeps."""
    mechs = [ED, RSD, PS, sd_mechanism(range(n))]
    if n == 3:
        mechs += [linear_mechanism((Fraction(1, 6), 0, 0)),
                  linear_mechanism((Fraction(1, 6), Fraction(1, 12), 0)),
                  linear_mechanism((Fraction(1, 12), 0, 0))]
    return mechs


__all__ = [
    "Mechanism", "equal_division", "serial_dictatorship", "serial_pick",
    "random_serial_dictatorship", "probabilistic_serial", "eating_schedule",
    "pairwise_exchange", "linear_mechanism", "linear_assignment", "validate_vector",
    "VectorError", "ED", "RSD", "PS", "sd_mechanism", "pairwise_mechanism", "catalog",
    "all_preferences",
]
