"""Lotteries over deterministic assignments.

Birkhoff-von Neumann decomposition of a doubly stochastic matrix, exact
convex-hull membership, and seeded sampling for demonstrations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import Assignment, AssignmentError, default_tokens, format_rational
from .certify.lp import Certificate, LinearSystem, lp_solve

Permutation = tuple[int, ...]  # agent i receives object perm[i]


@dataclass(frozen=True)
class Lottery:
    support: tuple[tuple[Fraction, Permutation], ...]

    def __post_init__(self) -> None:
        if not self.support:
            raise ValueError("empty lottery")
        if any(w <= 0 for w, _ in self.support):
            raise ValueError("lottery weights must be positive")
        if sum(w for w, _ in self.support) != 1:
            raise ValueError("lottery weights must sum to 1")

    @property
    def n(self) -> int:
        return len(self.support[0][1])

    def matrix(self) -> Assignment:
        n = self.n
        m = [[Fraction(0)] * n for _ in range(n)]
        for w, perm in self.support:
            for i, a in enumerate(perm):
                m[i][a] += w
        return Assignment(tuple(tuple(r) for r in m))

    def to_text(self, objects: Sequence[str] | None = None) -> str:
        objects = objects or default_tokens(self.n)
        return "".join(f"{format_rational(w)}: {render_permutation(p, objects)}\n"
                       for w, p in self.support)


def render_permutation(perm: Permutation, objects: Sequence[str] | None = None) -> str:
    objects = objects or default_tokens(len(perm))
    return ", ".join(f"{i + 1}↦{objects[a]}" for i, a in enumerate(perm))


def _has_matching(pos: list[list[bool]], rows: list[int], cols: list[int]) -> bool:
    """Kuhn's augmenting paths on the submatrix ``rows x cols``."""
    owner: dict[int, int] = {}

    def augment(i: int, seen: set[int]) -> bool:
        for a in cols:
            if pos[i][a] and a not in seen:
                seen.add(a)
                if a not in owner or augment(owner[a], seen):
                    owner[a] = i
                    return True
        return False

    return all(augment(i, set()) for i in rows)


def _perfect_matching(pos: list[list[bool]]) -> Permutation | None:
    """Lexicographically smallest perfect matching on the ``True`` entries."""
    n = len(pos)
    free = list(range(n))
    perm = []
    for i in range(n):
        for a in free:
            if pos[i][a]:
                rest = [b for b in free if b != a]
                if _has_matching(pos, list(range(i + 1, n)), rest):
                    perm.append(a)
                    free = rest
                    break
        else:
            return None
    return tuple(perm)


def birkhoff_decompose(P: Assignment | Sequence[Sequence]) -> Lottery:
    """Write ``P`` as a convex combination of permutation matrices.

    Each round takes a perfect matching on the positive entries and removes
    it with its bottleneck weight, zeroing at least one entry.
    """
    if not isinstance(P, Assignment):
        P = Assignment(tuple(tuple(r) for r in P))
    n = P.n
    rest = [list(r) for r in P.matrix]
    support: list[tuple[Fraction, Permutation]] = []
    remaining = Fraction(1)
    while remaining > 0:
        perm = _perfect_matching([[x > 0 for x in r] for r in rest])
        if perm is None:  # cannot happen for a doubly stochastic input
            raise AssignmentError("no perfect matching on the positive entries")
        w = min(rest[i][a] for i, a in enumerate(perm))
        for i, a in enumerate(perm):
            rest[i][a] -= w
        remaining -= w
        support.append((w, perm))
    bound = (n - 1) ** 2 + 1
    if len(support) > bound:
        raise AssertionError(f"support {len(support)} exceeds the Birkhoff bound {bound}")
    lottery = Lottery(tuple(support))
    if lottery.matrix() != P:
        raise AssertionError("decomposition does not reconstruct its input")
    return lottery


def hull_system(P: Assignment, vertices: Iterable[Permutation]) -> LinearSystem:
    vertices = sorted(set(tuple(v) for v in vertices))
    if not vertices:
        raise ValueError("need at least one vertex")
    n = P.n
    sys = LinearSystem()
    for v in vertices:
        sys.add_var(("w", v))
    sys.add_eq({("w", v): 1 for v in vertices}, 1, "weights sum to 1")
    for i in range(n):
        for a in range(n):
            sys.add_eq({("w", v): 1 for v in vertices if v[i] == a}, P[i][a],
                       f"cell ({i + 1},{a + 1})")
    return sys


def hull_membership(P: Assignment, vertices: Iterable[Permutation]) -> Certificate:
    """Feasible point = mixing weights; infeasible = Farkas proof of non-membership."""
    return lp_solve(hull_system(P, vertices), optimize=False)


def lottery_from_certificate(cert: Certificate) -> Lottery:
    return Lottery(tuple((w, name[1]) for name, w in cert.point.items() if w > 0))


def sample(lottery: Lottery, seed: int) -> Permutation:
    """Draw one deterministic assignment; the same seed gives the same draw."""
    bits = 64
    u = Fraction(random.Random(seed).getrandbits(bits), 2 ** bits)
    acc = Fraction(0)
    for w, perm in lottery.support:
        acc += w
        if u < acc:
            return perm
    return lottery.support[-1][1]
