"""Objects, strict preferences, profiles and exact assignment matrices.

Preferences are stored as tuples of object indices, most preferred first.
Object tokens only matter for parsing and printing; everything else works on
indices so that enumeration order is lexicographic over indices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

Rational = Fraction
Preference = tuple[int, ...]

ENUMERATION_CAP = 4


class ProfileError(ValueError):
    """Malformed profile text or inconsistent profile data."""


class AssignmentError(ValueError):
    """A matrix that is not a valid random assignment."""


def default_tokens(n: int) -> tuple[str, ...]:
    if n <= 26:
        return tuple(chr(ord("a") + k) for k in range(n))
    return tuple(f"a{k + 1}" for k in range(n))


@lru_cache(maxsize=None)
def all_preferences(n: int) -> tuple[Preference, ...]:
    """Every strict order over ``range(n)`` in lexicographic order."""
    return tuple(itertools.permutations(range(n)))


@lru_cache(maxsize=None)
def preference_index(n: int) -> dict[Preference, int]:
    return {p: k for k, p in enumerate(all_preferences(n))}


def rank_of(pref: Sequence[int], a: int) -> int:
    """1-based rank of object ``a`` in ``pref``."""
    try:
        return pref.index(a) + 1
    except ValueError:
        raise ValueError(f"object {a} not in preference {tuple(pref)}") from None


def sigma(pref: Sequence[int], k: int) -> int:
    """The k-th most preferred object (k is 1-based)."""
    if not 1 <= k <= len(pref):
        raise ValueError(f"rank {k} out of range 1..{len(pref)}")
    return pref[k - 1]


def check_preference(pref: Sequence[int], n: int) -> Preference:
    pref = tuple(pref)
    if sorted(pref) != list(range(n)):
        raise ProfileError(f"{pref} is not a strict order over {n} objects")
    return pref


@dataclass(frozen=True)
class Profile:
    """A preference profile: one strict order per agent (agents are 1-based
    in all user-facing output, 0-based internally)."""

    prefs: tuple[Preference, ...]
    objects: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        n = len(self.prefs)
        if n < 3:
            raise ProfileError(f"need n >= 3 agents, got {n}")
        object.__setattr__(self, "prefs", tuple(check_preference(p, n) for p in self.prefs))
        if not self.objects:
            object.__setattr__(self, "objects", default_tokens(n))
        if len(self.objects) != n or len(set(self.objects)) != n:
            raise ProfileError("object tokens must be n distinct labels")

    @property
    def n(self) -> int:
        return len(self.prefs)

    def __getitem__(self, i: int) -> Preference:
        return self.prefs[i]

    def replace(self, i: int, pref: Sequence[int]) -> "Profile":
        """Profile with agent ``i`` (0-based) reporting ``pref`` instead."""
        prefs = list(self.prefs)
        prefs[i] = tuple(pref)
        return Profile(tuple(prefs), self.objects)

    def index(self) -> int:
        """Position of this profile in :func:`enumerate_profiles` order."""
        lookup = preference_index(self.n)
        m = math.factorial(self.n)
        k = 0
        for p in self.prefs:
            k = k * m + lookup[p]
        return k

    def tops(self) -> tuple[int, ...]:
        return tuple(p[0] for p in self.prefs)

    def render_pref(self, pref: Sequence[int]) -> str:
        return "<" + ",".join(self.objects[a] for a in pref) + ">"

    def __str__(self) -> str:
        return "; ".join(f"{i + 1}: {' '.join(self.objects[a] for a in p)}"
                         for i, p in enumerate(self.prefs))

    def to_text(self) -> str:
        lines = [f"n {self.n}"]
        lines += [f"{i + 1}: {' '.join(self.objects[a] for a in p)}"
                  for i, p in enumerate(self.prefs)]
        return "\n".join(lines) + "\n"


def profile_from_index(n: int, k: int, objects: tuple[str, ...] = ()) -> Profile:
    prefs = all_preferences(n)
    m = len(prefs)
    digits = []
    for _ in range(n):
        k, d = divmod(k, m)
        digits.append(prefs[d])
    return Profile(tuple(reversed(digits)), objects)


def make_profile(*rows: str) -> Profile:
    """Build a profile from rows of single-letter tokens, e.g. ``"abc"``."""
    tokens: list[str] = []
    for ch in rows[0]:
        tokens.append(ch)
    tokens.sort()
    pos = {t: k for k, t in enumerate(tokens)}
    return Profile(tuple(tuple(pos[c] for c in r) for r in rows), tuple(tokens))


def parse_profile(text: str) -> Profile:
    """Parse the line-oriented profile format.

    Line 1 is ``n <int>``; each following line is ``<agent>: <obj> ... <obj>``.
    Canonical object order is order of first appearance.
    """
    lines = [(no, ln.strip()) for no, ln in enumerate(text.splitlines(), start=1)]
    lines = [(no, ln) for no, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ProfileError("empty profile")
    no, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "n" or not parts[1].lstrip("-").isdigit():
        raise ProfileError(f"line {no}: expected 'n <int>', got {head!r}")
    n = int(parts[1])
    if n < 3:
        raise ProfileError(f"line {no}: n must be >= 3, got {n}")
    body = lines[1:]
    if len(body) != n:
        raise ProfileError(f"expected {n} preference lines, got {len(body)}")
    tokens: list[str] = []
    raw: list[list[str]] = []
    for no, ln in body:
        if ":" not in ln:
            raise ProfileError(f"line {no}: expected '<agent>: <objects>'")
        row = ln.split(":", 1)[1].split()
        if len(row) != n:
            raise ProfileError(f"line {no}: expected {n} objects, got {len(row)}")
        seen: set[str] = set()
        for tok in row:
            if tok in seen:
                raise ProfileError(f"line {no}: duplicate object {tok!r}")
            seen.add(tok)
            if tok not in tokens:
                if len(tokens) == n:
                    raise ProfileError(f"line {no}: unknown object {tok!r}")
                tokens.append(tok)
        raw.append(row)
    pos = {t: k for k, t in enumerate(tokens)}
    return Profile(tuple(tuple(pos[t] for t in row) for row in raw), tuple(tokens))


def upper_contour(pref: Sequence[int], a: int) -> frozenset[int]:
    """Objects weakly preferred to ``a`` under ``pref``."""
    return frozenset(pref[: rank_of(pref, a)])


def _check_row(p: Sequence[Fraction], n: int) -> None:
    if len(p) != n:
        raise ValueError(f"allocation has length {len(p)}, expected {n}")
    if sum(p) != 1:
        raise ValueError(f"allocation {tuple(map(str, p))} does not sum to 1")


def sd_compare(p: Sequence[Fraction], q: Sequence[Fraction],
               pref: Sequence[int]) -> tuple[bool, bool]:
    """First-order stochastic dominance of ``p`` over ``q`` under ``pref``.

    Returns ``(dominates, strict)``.
    """
    n = len(pref)
    _check_row(p, n)
    _check_row(q, n)
    sp = sq = Fraction(0)
    strict = False
    for a in pref:
        sp += p[a]
        sq += q[a]
        if sp < sq:
            return False, False
        if sp > sq:
            strict = True
    return True, strict


def neighbors(pref: Sequence[int]) -> list[Preference]:
    """Preferences one adjacent transposition away, in swap-position order."""
    pref = tuple(pref)
    out = []
    for k in range(len(pref) - 1):
        q = list(pref)
        q[k], q[k + 1] = q[k + 1], q[k]
        out.append(tuple(q))
    return out


def _check_perm(pi: Sequence[int], n: int) -> tuple[int, ...]:
    pi = tuple(pi)
    if sorted(pi) != list(range(n)):
        raise ValueError(f"{pi} is not a permutation of range({n})")
    return pi


def invert(pi: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(pi)
    for k, v in enumerate(pi):
        inv[v] = k
    return tuple(inv)


def permute_objects(profile: Profile, pi: Sequence[int]) -> Profile:
    """Relabel object ``a`` as ``pi[a]`` in every preference."""
    pi = _check_perm(pi, profile.n)
    return Profile(tuple(tuple(pi[a] for a in p) for p in profile.prefs), profile.objects)


def permute_agents(profile: Profile, pi: Sequence[int]) -> Profile:
    """Agent ``i`` of the result reports what agent ``pi[i]`` reported."""
    pi = _check_perm(pi, profile.n)
    return Profile(tuple(profile.prefs[pi[i]] for i in range(profile.n)), profile.objects)


def enumerate_profiles(n: int, cap: int = ENUMERATION_CAP) -> Iterator[Profile]:
    """Yield all ``(n!)**n`` profiles in lexicographic order."""
    if n < 3:
        raise ProfileError(f"n must be >= 3, got {n}")
    if n > cap:
        raise ValueError(f"n={n} exceeds the exhaustive enumeration cap {cap}; "
                         "use sampling instead")
    objects = default_tokens(n)
    for prefs in itertools.product(all_preferences(n), repeat=n):
        yield Profile(prefs, objects)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational: {s!r}") from None


Matrix = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class Assignment:
    """An exact doubly stochastic matrix (rows agents, columns objects)."""

    matrix: Matrix

    def __post_init__(self) -> None:
        m = tuple(tuple(Fraction(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        n = len(m)
        for i, row in enumerate(m):
            if len(row) != n:
                raise AssignmentError(f"row {i + 1} has {len(row)} entries, expected {n}")
            for a, x in enumerate(row):
                if x < 0 or x > 1:
                    raise AssignmentError(f"entry ({i + 1},{a + 1}) = {x} outside [0,1]")
            if sum(row) != 1:
                raise AssignmentError(f"row {i + 1} sums to {sum(row)}")
        for a in range(n):
            s = sum(m[i][a] for i in range(n))
            if s != 1:
                raise AssignmentError(f"column {a + 1} sums to {s}")

    @property
    def n(self) -> int:
        return len(self.matrix)

    def __getitem__(self, i: int) -> tuple[Fraction, ...]:
        return self.matrix[i]

    def __iter__(self):
        return iter(self.matrix)

    @classmethod
    def uniform(cls, n: int) -> "Assignment":
        return cls(tuple(tuple(Fraction(1, n) for _ in range(n)) for _ in range(n)))

    @classmethod
    def from_permutation(cls, perm: Sequence[int]) -> "Assignment":
        """Agent ``i`` gets object ``perm[i]`` with certainty."""
        n = len(perm)
        return cls(tuple(tuple(Fraction(int(perm[i] == a)) for a in range(n)) for i in range(n)))

    def to_tsv(self, objects: Sequence[str] | None = None) -> str:
        objects = objects or default_tokens(self.n)
        lines = ["\t" + "\t".join(objects)]
        for i, row in enumerate(self.matrix):
            lines.append(f"{i + 1}\t" + "\t".join(format_rational(x) for x in row))
        return "\n".join(lines) + "\n"


def is_doubly_stochastic(m: Sequence[Sequence[Fraction]]) -> bool:
    try:
        Assignment(tuple(tuple(r) for r in m))
    except AssignmentError:
        return False
    return True
