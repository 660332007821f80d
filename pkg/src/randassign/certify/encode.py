"""Linear encodings of mechanism axioms over a finite set of profiles.

One variable per (profile, agent, object) cell of the unknown mechanism's
output. Stochastic dominance becomes prefix-sum inequalities, so every axiom
here is linear.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Sequence

from ..core import Profile, all_preferences, permute_objects
from .lp import LinearSystem, LPError

AXIOMS = ("SP", "EF", "ETE", "CFE", "NEUTRAL")
DEFAULT_VARIABLE_BUDGET = 20000


class BudgetError(LPError):
    pass


def profile_key(profile: Profile) -> str:
    return ",".join("".join(profile.objects[a] for a in p) for p in profile.prefs)


class AxiomSystem(LinearSystem):
    """A :class:`LinearSystem` whose variables are cells of registered profiles."""

    def __init__(self, profiles: Sequence[Profile], labels: dict[str, str] | None = None):
        super().__init__()
        self.profiles = list(profiles)
        self.labels = dict(labels or {})
        self.position = {p.prefs: k for k, p in enumerate(self.profiles)}
        self.meta: dict[str, tuple[int, int, int]] = {}
        for k, prof in enumerate(self.profiles):
            for i in range(prof.n):
                for a in range(prof.n):
                    name = self.cell(prof, i, a)
                    self.add_var(name)
                    self.meta[name] = (k, i, a)

    def tag(self, prof: Profile) -> str:
        key = profile_key(prof)
        return self.labels.get(key, key)

    def cell(self, prof: Profile, i: int, a: int) -> str:
        return f"P[{self.tag(prof)}][{i + 1},{prof.objects[a]}]"

    def __contains__(self, prof: Profile) -> bool:
        return prof.prefs in self.position

    def row_of(self, prof: Profile, i: int) -> list[str]:
        return [self.cell(prof, i, a) for a in range(prof.n)]

    def values(self, point: dict, prof: Profile) -> tuple[tuple[Fraction, ...], ...]:
        n = prof.n
        return tuple(tuple(point[self.cell(prof, i, a)] for a in range(n)) for i in range(n))


def close_under_objects(profiles: Iterable[Profile]) -> list[Profile]:
    """Profiles plus all their object relabelings, first-seen order."""
    out: list[Profile] = []
    seen = set()
    for prof in profiles:
        for pi in all_preferences(prof.n):
            q = permute_objects(prof, pi)
            if q.prefs not in seen:
                seen.add(q.prefs)
                out.append(q)
    return out


def encode_axioms(profiles: Iterable[Profile], axioms: Iterable[str], *,
                  labels: dict[str, str] | None = None,
                  budget: int = DEFAULT_VARIABLE_BUDGET) -> AxiomSystem:
    """Stochasticity rows plus the requested axioms.

    SP links each profile to every single-agent misreport that is also
    registered (all misreports, not just adjacent swaps). NEUTRAL closes the
    profile set under object relabeling first. ``closure_size`` on the result
    records how many profiles were registered.
    """
    axioms = set(axioms)
    unknown = axioms - set(AXIOMS)
    if unknown:
        raise ValueError(f"unknown axioms {sorted(unknown)}; choose from {AXIOMS}")
    seen = set()
    profs = []
    for p in profiles:
        if p.prefs not in seen:
            seen.add(p.prefs)
            profs.append(p)
    if "NEUTRAL" in axioms:
        profs = close_under_objects(profs)
    if not profs:
        raise ValueError("no profiles to encode")
    n = profs[0].n
    if any(p.n != n for p in profs):
        raise ValueError("all profiles must have the same n")
    nvars = len(profs) * n * n
    if nvars > budget:
        raise BudgetError(f"closure has {len(profs)} profiles = {nvars} variables, "
                          f"over the budget of {budget}")
    sys = AxiomSystem(profs, labels)
    sys.closure_size = len(profs)
    sys.axioms = frozenset(axioms)
    for prof in profs:
        tag = sys.tag(prof)
        for i in range(n):
            sys.add_eq({c: 1 for c in sys.row_of(prof, i)}, 1, f"row {tag} agent {i + 1}")
        for a in range(n):
            sys.add_eq({sys.cell(prof, i, a): 1 for i in range(n)}, 1,
                       f"column {tag} object {prof.objects[a]}")
    if "SP" in axioms:
        _encode_sp(sys)
    if "EF" in axioms:
        _encode_ef(sys)
    if "ETE" in axioms:
        _encode_ete(sys)
    if "CFE" in axioms:
        _encode_cfe(sys)
    if "NEUTRAL" in axioms:
        _encode_neutral(sys)
    return sys


def _prefix_ge(sys: AxiomSystem, high: Sequence[str], low: Sequence[str], label: str) -> None:
    coeffs: dict[str, int] = {}
    for c in high:
        coeffs[c] = coeffs.get(c, 0) + 1
    for c in low:
        coeffs[c] = coeffs.get(c, 0) - 1
    sys.add_ge(coeffs, 0, label)


def _encode_sp(sys: AxiomSystem) -> None:
    for prof in sys.profiles:
        n = prof.n
        for i in range(n):
            pref = prof[i]
            for lie in all_preferences(n):
                if lie == pref:
                    continue
                dev = prof.replace(i, lie)
                if dev not in sys:
                    continue
                for t in range(1, n):
                    top = pref[:t]
                    _prefix_ge(sys, [sys.cell(prof, i, a) for a in top],
                               [sys.cell(dev, i, a) for a in top],
                               f"SP {sys.tag(prof)} agent {i + 1} misreport "
                               f"{''.join(prof.objects[a] for a in lie)} top-{t}")


def _encode_ef(sys: AxiomSystem) -> None:
    for prof in sys.profiles:
        n = prof.n
        for i in range(n):
            pref = prof[i]
            for j in range(n):
                if j == i:
                    continue
                for t in range(1, n):
                    top = pref[:t]
                    _prefix_ge(sys, [sys.cell(prof, i, a) for a in top],
                               [sys.cell(prof, j, a) for a in top],
                               f"EF {sys.tag(prof)} agent {i + 1} vs {j + 1} top-{t}")


def _encode_ete(sys: AxiomSystem) -> None:
    for prof in sys.profiles:
        n = prof.n
        for i, j in itertools.combinations(range(n), 2):
            if prof[i] == prof[j]:
                for a in range(n):
                    sys.add_eq({sys.cell(prof, i, a): 1, sys.cell(prof, j, a): -1}, 0,
                               f"ETE {sys.tag(prof)} agents {i + 1},{j + 1} object {prof.objects[a]}")


def _encode_cfe(sys: AxiomSystem) -> None:
    for prof in sys.profiles:
        tops = prof.tops()
        if len(set(tops)) == len(tops):
            for i, a in enumerate(tops):
                sys.add_eq({sys.cell(prof, i, a): 1}, 1,
                           f"CFE {sys.tag(prof)} agent {i + 1} top {prof.objects[a]}")


def _encode_neutral(sys: AxiomSystem) -> None:
    # link each profile to every relabeling; identity and duplicates skipped
    done = set()
    for prof in sys.profiles:
        n = prof.n
        for pi in all_preferences(n):
            q = permute_objects(prof, pi)
            if q.prefs == prof.prefs:
                continue
            for i in range(n):
                for a in range(n):
                    x, y = sys.cell(prof, i, a), sys.cell(q, i, pi[a])
                    key = (min(x, y), max(x, y))
                    if key in done:
                        continue
                    done.add(key)
                    sys.add_eq({x: 1, y: -1}, 0, f"NEUTRAL {x} = {y}")
