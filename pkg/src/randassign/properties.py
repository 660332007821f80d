"""Mechanism-level axiom checks over every profile of a given size.

Exhaustive checks run on a :class:`~randassign.tabulate.Table` with the scan
kernels; the first violation in canonical order becomes a :class:`Witness`
that can be replayed against the mechanism with plain fractions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from . import kernels
from .certify.lp import Certificate, LinearSystem, lp_solve
from .core import (Assignment, Profile, all_preferences, format_rational, neighbors,
                   permute_agents, permute_objects, rank_of)
from .lottery import hull_membership
from .tabulate import Table, pref_tables, relabel_table, tabulate


@dataclass(frozen=True)
class Witness:
    """A concrete violation: the profile, the agents involved, and the
    inequality (``lhs`` vs ``rhs``) that fails."""

    prop: str
    profile: Profile
    agents: tuple[int, ...]  # 0-based
    detail: dict[str, Any] = field(default_factory=dict)
    rows: dict[str, tuple[Fraction, ...]] = field(default_factory=dict)
    relation: str = ""
    data: dict[str, Any] = field(default_factory=dict, compare=False)

    def describe(self) -> str:
        prof = self.profile
        lines = [f"property: {self.prop}", "profile:"]
        lines += ["  " + ln for ln in prof.to_text().splitlines()]
        lines.append("agents: " + " ".join(str(i + 1) for i in self.agents))
        for key, val in self.detail.items():
            lines.append(f"{key}: {_render(val, prof)}")
        for key, row in self.rows.items():
            lines.append(f"{key}: (" + ", ".join(format_rational(x) for x in row) + ")")
        if self.relation:
            lines.append(f"violated: {self.relation}")
        return "\n".join(lines) + "\n"


def _render(val, prof: Profile) -> str:
    if isinstance(val, tuple) and val and all(isinstance(x, int) for x in val):
        return prof.render_pref(val)
    if isinstance(val, Profile):
        return str(val)
    return str(val)


@dataclass(frozen=True)
class Verdict:
    prop: str
    holds: bool
    witness: Witness | None = None
    certificate: Certificate | None = None

    def __post_init__(self) -> None:
        if self.holds != (self.witness is None):
            raise ValueError("a verdict fails exactly when it carries a witness")

    def __bool__(self) -> bool:
        return self.holds

    def report(self) -> str:
        head = f"{self.prop}: {'holds' if self.holds else 'fails'}\n"
        return head + (self.witness.describe() if self.witness else "")


def _prefix(row, pref, t: int) -> Fraction:
    return sum((row[a] for a in pref[:t]), Fraction(0))


def _ok(prop: str) -> Verdict:
    return Verdict(prop, True)


def _fail(w: Witness) -> Verdict:
    return Verdict(w.prop, False, w)


# -- incentives and fairness -------------------------------------------------

def check_strategy_proof(mech, n: int, table: Table | None = None) -> Verdict:
    """Truthful reports SD-dominate every misreport, for every agent."""
    T = table or tabulate(mech, n)
    prefs, _ = pref_tables(n)
    hit = kernels.sp_scan(T.num, prefs)
    if hit is None:
        return _ok("sp")
    p, i, r, t = hit
    prof = T.profile(p)
    lie = all_preferences(n)[r]
    truth_row, lie_row = T.row(p, i), T.row(prof.replace(i, lie).index(), i)
    return _fail(Witness("sp", prof, (i,), {"misreport": lie, "prefix": t},
                         {"truthful": truth_row, "misreport allocation": lie_row},
                         f"top-{t} share {format_rational(_prefix(truth_row, prof[i], t))} "
                         f"< {format_rational(_prefix(lie_row, prof[i], t))} under misreport"))


def check_envy_free(mech, n: int, table: Table | None = None) -> Verdict:
    T = table or tabulate(mech, n)
    prefs, _ = pref_tables(n)
    hit = kernels.ef_scan(T.num, prefs)
    if hit is None:
        return _ok("ef")
    p, i, j, t = hit
    prof = T.profile(p)
    own, other = T.row(p, i), T.row(p, j)
    return _fail(Witness("ef", prof, (i, j), {"prefix": t}, {"own": own, "envied": other},
                         f"agent {i + 1} top-{t} share {format_rational(_prefix(own, prof[i], t))}"
                         f" < {format_rational(_prefix(other, prof[i], t))} held by agent {j + 1}"))


def check_equal_treatment(mech, n: int, table: Table | None = None) -> Verdict:
    T = table or tabulate(mech, n)
    hit = kernels.ete_scan(T.num, T.m)
    if hit is None:
        return _ok("ete")
    p, i, j, a = hit
    prof = T.profile(p)
    return _fail(Witness("ete", prof, (i, j), {"object": prof.objects[a]},
                         {f"agent {i + 1}": T.row(p, i), f"agent {j + 1}": T.row(p, j)},
                         f"identical reports, unequal shares of {prof.objects[a]}"))


def check_neutral(mech, n: int, table: Table | None = None) -> Verdict:
    """``P[i][a] == P^pi[i][pi(a)]`` for every object relabeling ``pi``."""
    T = table or tabulate(mech, n)
    prefs, _ = pref_tables(n)
    hit = kernels.neutral_scan(T.num, prefs, relabel_table(n))
    if hit is None:
        return _ok("neutral")
    p, g, i, a = hit
    prof = T.profile(p)
    pi = all_preferences(n)[g]
    moved = permute_objects(prof, pi)
    before, after = T.row(p, i)[a], T.row(moved.index(), i)[pi[a]]
    return _fail(Witness("neutral", prof, (i,),
                         {"relabeling": _perm_text(pi, prof.objects), "object": prof.objects[a],
                          "relabeled profile": moved},
                         {"original": T.row(p, i), "relabeled": T.row(moved.index(), i)},
                         f"P[{i + 1}][{prof.objects[a]}] = {format_rational(before)} but "
                         f"relabeled P[{i + 1}][{prof.objects[pi[a]]}] = {format_rational(after)}",
                         {"pi": pi}))


def check_anonymous(mech, n: int, table: Table | None = None) -> Verdict:
    """``P[pi(i)][a] == P^pi[i][a]`` for every agent permutation ``pi``."""
    T = table or tabulate(mech, n)
    prefs, _ = pref_tables(n)
    hit = kernels.anon_scan(T.num, prefs)
    if hit is None:
        return _ok("anon")
    p, g, i, a = hit
    prof = T.profile(p)
    pi = all_preferences(n)[g]
    moved = permute_agents(prof, pi)
    return _fail(Witness("anon", prof, (i, pi[i]),
                         {"agent permutation": " ".join(f"{k + 1}<-{v + 1}" for k, v in enumerate(pi)),
                          "object": prof.objects[a], "permuted profile": moved},
                         {"original": T.row(p, pi[i]), "permuted": T.row(moved.index(), i)},
                         f"P[{pi[i] + 1}][{prof.objects[a]}] differs from the permuted "
                         f"profile's P[{i + 1}][{prof.objects[a]}]"))


def _perm_text(pi, objects) -> str:
    return " ".join(f"{objects[a]}->{objects[b]}" for a, b in enumerate(pi))


def check_separable(mech, n: int, table: Table | None = None) -> Verdict:
    """Joint deviations of the others move agent i's allocation by the sum of
    the single deviations. Every deviation tuple is checked at n=3; larger n
    check deviations by two agents, which decides the same property."""
    T = table or tabulate(mech, n)
    hit = kernels.sep_scan(T.num, T.m, n == 3)
    if hit is None:
        return _ok("sep")
    p, i, q, a = hit
    prof, dev = T.profile(p), T.profile(q)
    base = T.row(p, i)[a]
    lhs = T.row(q, i)[a] - base
    rhs = Fraction(0)
    for j in range(n):
        if j != i and dev[j] != prof[j]:
            rhs += T.row(prof.replace(j, dev[j]).index(), i)[a] - base
    return _fail(Witness("sep", prof, (i,), {"deviated profile": dev, "object": prof.objects[a]},
                         {"before": T.row(p, i), "after joint deviation": T.row(q, i)},
                         f"joint change {format_rational(lhs)} != sum of single changes "
                         f"{format_rational(rhs)}"))


@dataclass(frozen=True)
class SwapReport:
    swap_monotonic: Verdict
    upper_invariant: Verdict
    lower_invariant: Verdict

    @property
    def all_hold(self) -> bool:
        return bool(self.swap_monotonic and self.upper_invariant and self.lower_invariant)

    def verdicts(self) -> list[Verdict]:
        return [self.swap_monotonic, self.upper_invariant, self.lower_invariant]


def check_swap_upper_lower(mech, n: int, table: Table | None = None) -> SwapReport:
    """Adjacent-swap misreports: the promoted object's share rises unless
    nothing changes; shares above and below the swapped pair stay fixed."""
    T = table or tabulate(mech, n)
    prefs, _ = pref_tables(n)
    hits = kernels.sul_scan(T.num, prefs)
    names = ("swap_monotonic", "upper_invariant", "lower_invariant")
    out = []
    for name, hit in zip(names, hits):
        if hit is None:
            out.append(_ok(name))
            continue
        p, i, k, a = hit
        prof = T.profile(p)
        lie = neighbors(prof[i])[k - 1]
        q = prof.replace(i, lie).index()
        rel = {
            "swap_monotonic": f"allocation changed but share of {prof.objects[a]} did not rise",
            "upper_invariant": f"share of {prof.objects[a]} (ranked above the swap) changed",
            "lower_invariant": f"share of {prof.objects[a]} (ranked below the swap) changed",
        }[name]
        out.append(_fail(Witness(name, prof, (i,), {"misreport": lie, "swap position": k,
                                                     "object": prof.objects[a]},
                                 {"truthful": T.row(p, i), "misreport allocation": T.row(q, i)},
                                 rel)))
    return SwapReport(*out)


def is_contention_free(profile: Profile) -> bool:
    tops = profile.tops()
    return len(set(tops)) == len(tops)


def check_contention_free_efficient(mech, n: int, table: Table | None = None) -> Verdict:
    T = table or tabulate(mech, n)
    prefs, _ = pref_tables(n)
    hit = kernels.cfe_scan(T.num, prefs, T.denom)
    if hit is None:
        return _ok("cfe")
    p, i = hit
    prof = T.profile(p)
    top = prof[i][0]
    return _fail(Witness("cfe", prof, (i,), {"top": prof.objects[top]}, {"allocation": T.row(p, i)},
                         f"P[{i + 1}][{prof.objects[top]}] = "
                         f"{format_rational(T.row(p, i)[top])} != 1 on a contention-free profile"))


# -- efficiency ----------------------------------------------------------------

def pareto_optimal_deterministic(profile: Profile) -> list[tuple[int, ...]]:
    """Permutations (agent i gets ``perm[i]``) not Pareto-dominated by another."""
    n = profile.n
    perms = list(itertools.permutations(range(n)))
    ranks = [[rank_of(profile[i], a) for a in range(n)] for i in range(n)]

    def dominates(s, t) -> bool:
        better = False
        for i in range(n):
            rs, rt = ranks[i][s[i]], ranks[i][t[i]]
            if rs > rt:
                return False
            better |= rs < rt
        return better

    return [t for t in perms if not any(dominates(s, t) for s in perms)]


def check_ex_post_efficient(P: Assignment, profile: Profile) -> Verdict:
    """``P`` is a lottery over Pareto-optimal deterministic assignments."""
    cert = hull_membership(P, pareto_optimal_deterministic(profile))
    if cert.feasible:
        return Verdict("expost", True, certificate=cert)
    agents = tuple(range(profile.n))
    return Verdict("expost", False,
                   Witness("expost", profile, agents, {"assignment": _matrix_text(P)}, {},
                           "outside the hull of Pareto-optimal permutations "
                           f"(Farkas delta {format_rational(cert.delta)})"),
                   cert)


def _matrix_text(P) -> str:
    return " / ".join("(" + ",".join(format_rational(x) for x in row) + ")" for row in P)


def dominance_system(P: Assignment, profile: Profile) -> LinearSystem:
    """Doubly stochastic ``Q`` SD-dominating ``P`` for every agent; maximize the
    summed prefix surplus."""
    n = profile.n
    sys = LinearSystem()
    for i in range(n):
        for a in range(n):
            sys.add_var((i, a))
    for i in range(n):
        sys.add_eq({(i, a): 1 for a in range(n)}, 1, f"row {i + 1}")
    for a in range(n):
        sys.add_eq({(i, a): 1 for i in range(n)}, 1, f"column {a + 1}")
    objective: dict = {}
    for i in range(n):
        pref = profile[i]
        for t in range(1, n):
            sys.add_ge({(i, a): 1 for a in pref[:t]}, _prefix(P[i], pref, t),
                       f"agent {i + 1} top-{t}")
            for a in pref[:t]:
                objective[(i, a)] = objective.get((i, a), 0) + 1
    sys.maximize(objective)
    return sys


def check_ordinal_efficient(P: Assignment, profile: Profile) -> Verdict:
    """No doubly stochastic assignment SD-dominates ``P`` with a strict gain."""
    sys = dominance_system(P, profile)
    cert = lp_solve(sys)
    base = sum((c * P[i][a] for (i, a), c in
                ((sys.names[j], c) for j, c in sys.objective.items())), Fraction(0))
    if cert.value == base:
        return Verdict("ordinal", True, certificate=cert)
    n = profile.n
    Q = tuple(tuple(cert.point[(i, a)] for a in range(n)) for i in range(n))
    return Verdict("ordinal", False,
                   Witness("ordinal", profile, tuple(range(n)),
                           {"assignment": _matrix_text(P), "dominating": _matrix_text(Q)}, {},
                           f"prefix surplus {format_rational(cert.value - base)} > 0"),
                   cert)


def _per_profile(prop: str, checker: Callable, mech, n: int, table: Table | None) -> Verdict:
    T = table or tabulate(mech, n)
    for p in range(T.num.shape[0]):
        prof = T.profile(p)
        v = checker(Assignment(T.matrix(p)), prof)
        if not v.holds:
            return v
    return _ok(prop)


def check_mechanism_ex_post(mech, n: int, table: Table | None = None) -> Verdict:
    return _per_profile("expost", check_ex_post_efficient, mech, n, table)


def check_mechanism_ordinal(mech, n: int, table: Table | None = None) -> Verdict:
    return _per_profile("ordinal", check_ordinal_efficient, mech, n, table)


# -- comparison -------------------------------------------------------------------

@dataclass(frozen=True)
class Dominance:
    weak: bool
    strict: bool
    witness: Witness | None

    def report(self, a: str = "A", b: str = "B") -> str:
        out = f"weak: {'yes' if self.weak else 'no'}\nstrict: {'yes' if self.strict else 'no'}\n"
        return out + (self.witness.describe() if self.witness else "")


def mechanism_dominates(A, B, n: int) -> Dominance:
    """Every agent's A-allocation SD-dominates her B-allocation on every
    profile; strict if additionally some agent gains strictly somewhere."""
    TA, TB = tabulate(A, n), tabulate(B, n)
    den = np.lcm(TA.denom, TB.denom)
    prefs, _ = pref_tables(n)
    weak, strict = kernels.dominance_scan(np.ascontiguousarray(TA.rescaled(int(den))),
                                          np.ascontiguousarray(TB.rescaled(int(den))), prefs)
    if weak is not None:
        p, i, t = weak
        prof = TA.profile(p)
        ra, rb = TA.row(p, i), TB.row(p, i)
        w = Witness("dominance", prof, (i,), {"prefix": t}, {"A": ra, "B": rb},
                    f"A top-{t} share {format_rational(_prefix(ra, prof[i], t))} < "
                    f"{format_rational(_prefix(rb, prof[i], t))} under B")
        return Dominance(False, False, w)
    return Dominance(True, strict is not None, None)


# -- replay ---------------------------------------------------------------------

def replay(mech, w: Witness) -> bool:
    """Re-evaluate ``mech`` directly (no tables) and confirm the violation."""
    prof = w.profile
    P = mech(prof)
    if w.prop == "sp":
        (i,), t = w.agents, w.detail["prefix"]
        Q = mech(prof.replace(i, w.detail["misreport"]))
        return _prefix(P[i], prof[i], t) < _prefix(Q[i], prof[i], t)
    if w.prop == "ef":
        (i, j), t = w.agents, w.detail["prefix"]
        return _prefix(P[i], prof[i], t) < _prefix(P[j], prof[i], t)
    if w.prop == "ete":
        i, j = w.agents
        return prof[i] == prof[j] and P[i] != P[j]
    if w.prop == "neutral":
        (i,) = w.agents
        a = prof.objects.index(w.detail["object"])
        pi = w.data["pi"]
        return P[i][a] != mech(permute_objects(prof, pi))[i][pi[a]]
    if w.prop == "anon":
        i, src = w.agents
        a = prof.objects.index(w.detail["object"])
        return P[src][a] != mech(w.detail["permuted profile"])[i][a]
    if w.prop == "sep":
        (i,) = w.agents
        a = prof.objects.index(w.detail["object"])
        dev = w.detail["deviated profile"]
        lhs = mech(dev)[i][a] - P[i][a]
        rhs = sum((mech(prof.replace(j, dev[j]))[i][a] - P[i][a]
                   for j in range(prof.n) if j != i), Fraction(0))
        return lhs != rhs
    if w.prop in ("swap_monotonic", "upper_invariant", "lower_invariant"):
        (i,) = w.agents
        k = w.detail["swap position"]
        Q = mech(prof.replace(i, w.detail["misreport"]))
        pref = prof[i]
        if w.prop == "swap_monotonic":
            b = pref[k]
            return P[i] != Q[i] and not Q[i][b] > P[i][b]
        if w.prop == "upper_invariant":
            return any(P[i][a] != Q[i][a] for a in pref[:k - 1])
        return any(P[i][a] != Q[i][a] for a in pref[k + 1:])
    if w.prop == "cfe":
        (i,) = w.agents
        return is_contention_free(prof) and P[i][prof[i][0]] != 1
    if w.prop == "expost":
        return not check_ex_post_efficient(P, prof).holds
    if w.prop == "ordinal":
        return not check_ordinal_efficient(P, prof).holds
    raise ValueError(f"cannot replay {w.prop!r} witnesses against one mechanism")


# -- dispatch --------------------------------------------------------------------

PROPERTIES = ("sp", "ef", "ete", "neutral", "anon", "sep", "sul", "cfe", "expost", "ordinal")

_CHECKERS: dict[str, Callable] = {
    "sp": check_strategy_proof,
    "ef": check_envy_free,
    "ete": check_equal_treatment,
    "neutral": check_neutral,
    "anon": check_anonymous,
    "sep": check_separable,
    "cfe": check_contention_free_efficient,
    "expost": check_mechanism_ex_post,
    "ordinal": check_mechanism_ordinal,
}


def check(mech, n: int, prop: str) -> Verdict:
    """Run one named property; ``sul`` folds its three parts into one verdict
    whose witness is the first failing part."""
    if prop == "sul":
        rep = check_swap_upper_lower(mech, n)
        for v in rep.verdicts():
            if not v.holds:
                return Verdict("sul", False, v.witness)
        return _ok("sul")
    try:
        fn = _CHECKERS[prop]
    except KeyError:
        raise ValueError(f"unknown property {prop!r}; choose from {', '.join(PROPERTIES)}") from None
    return fn(mech, n)
