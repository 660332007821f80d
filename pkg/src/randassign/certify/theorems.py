"""Machine-checked impossibility results for three agents.

Each routine builds an axiom system, solves it exactly and returns a report
whose certificates have already been re-verified by substitution.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from ..core import Assignment, Profile, enumerate_profiles, format_rational, make_profile
from .encode import AxiomSystem, encode_axioms, profile_key
from .lp import BudgetExceeded, Certificate, LPError, lp_solve
from .symmetry import group_elements, quotient, variable_action

SIX_PROFILES = {
    "A": ("abc", "bac", "cab"),
    "B": ("abc", "abc", "cab"),
    "C": ("abc", "acb", "cab"),
    "D": ("bac", "acb", "cab"),
    "E": ("abc", "acb", "acb"),
    "F": ("bac", "acb", "acb"),
}
PROFILE_C_TARGET = ((Fraction(1, 2), Fraction(1, 2), Fraction(0)),
                    (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)),
                    (Fraction(0), Fraction(1, 4), Fraction(3, 4)))
THEOREM1_AXIOMS = ("SP", "EF", "CFE")


class TheoremFailure(LPError):
    """A system expected to be infeasible (or bounded below 1) was not."""

    def __init__(self, message: str, point: dict | None = None):
        super().__init__(message)
        self.point = point


def six_profiles() -> dict[str, Profile]:
    return {name: make_profile(*rows) for name, rows in SIX_PROFILES.items()}


def _labels(profiles: dict[str, Profile]) -> dict[str, str]:
    return {profile_key(p): name for name, p in profiles.items()}


def write_certificate(cert: Certificate, path: str | Path, header: str = "") -> Path:
    """Write the plain-text audit form of ``cert``."""
    path = Path(path)
    text = cert.render()
    if header:
        text = "".join(f"# {line}\n" for line in header.splitlines()) + text
    path.write_text(text)
    return path


# -- contention-free efficiency ----------------------------------------------------

@dataclass
class ImpossibilityReport:
    certificate: Certificate
    system: AxiomSystem
    dropped: dict[str, Certificate]
    full: Certificate | None = None
    full_stats: str = ""
    quotient_stats: str = ""
    seconds: float = 0.0

    @property
    def holds(self) -> bool:
        return (self.certificate.kind == "infeasible"
                and all(c.kind == "feasible" for c in self.dropped.values())
                and (self.full is None or self.full.kind == "infeasible"))

    def text(self) -> str:
        c = self.certificate
        lines = [f"axioms: {' + '.join(THEOREM1_AXIOMS)} over profiles {', '.join(SIX_PROFILES)}",
                 f"system: {self.system.stats()}",
                 f"result: infeasible, {len(c.multipliers)} rows combine to "
                 f"0 <= {format_rational(-c.delta)}"]
        for ax, cert in self.dropped.items():
            lines.append(f"without {ax}: {cert.kind}")
        if self.full is not None:
            lines.append(f"all 216 profiles: {self.full_stats}; quotient {self.quotient_stats}; "
                         f"lifted certificate uses {len(self.full.multipliers)} rows, "
                         f"0 <= {format_rational(-self.full.delta)}")
        lines.append(f"time: {self.seconds:.1f}s")
        return "\n".join(lines) + "\n"


def certify_theorem1(confirm_full: bool = True) -> ImpossibilityReport:
    """SP + EF + CFE is infeasible on the six profiles; each pair is not.

    With ``confirm_full`` the same axioms are also refuted over all 216
    profiles: the symmetric quotient is solved and its certificate lifted
    back and re-verified on the full system.
    """
    start = time.monotonic()
    profs = six_profiles()
    labels = _labels(profs)
    sys = encode_axioms(profs.values(), THEOREM1_AXIOMS, labels=labels)
    cert = lp_solve(sys)
    if cert.feasible:
        raise TheoremFailure("six-profile system is feasible", cert.point)
    dropped = {}
    for ax in THEOREM1_AXIOMS:
        rest = [a for a in THEOREM1_AXIOMS if a != ax]
        dropped[ax] = lp_solve(encode_axioms(profs.values(), rest, labels=labels))
    report = ImpossibilityReport(cert, sys, dropped)
    if confirm_full:
        full = encode_axioms(enumerate_profiles(3), THEOREM1_AXIOMS)
        q = quotient(full, group_elements(3))
        small = lp_solve(q.reduced)
        if small.feasible:
            raise TheoremFailure("216-profile system is feasible", q.lift_point(small.point))
        report.full = q.lift_farkas(small)
        report.full_stats = full.stats()
        report.quotient_stats = q.reduced.stats()
    report.seconds = time.monotonic() - start
    return report


# -- the Profile C derivation ------------------------------------------------------

@dataclass
class ProfileCReport:
    assignment: Assignment
    ranges: dict[str, tuple[Fraction, Fraction]]
    step_interval: tuple[Fraction, Fraction]
    tight_interval: tuple[Fraction, Fraction]
    certificates: list[Certificate] = field(default_factory=list, repr=False)

    def text(self) -> str:
        rows = "\n".join("  " + " ".join(format_rational(x) for x in r) for r in self.assignment)
        lo, hi = self.step_interval
        tlo, thi = self.tight_interval
        return (f"Profile C assignment (unique over profiles A-D):\n{rows}\n"
                f"y = P[C][2,b] before profile D, from agents 2 and 3's rows: "
                f"[{format_rational(lo)}, {format_rational(hi)}]\n"
                f"y over the full A-C system: [{format_rational(tlo)}, {format_rational(thi)}]\n")


def _pin_profile_a(sys: AxiomSystem, a: Profile) -> None:
    for i in range(3):
        sys.add_eq({sys.cell(a, i, a[i][0]): 1}, 1, f"pin A agent {i + 1}")


def _interval(sys, var: str, certs: list) -> tuple[Fraction, Fraction]:
    low, high = sys.copy(), sys.copy()
    low.minimize({var: 1})
    high.maximize({var: 1})
    lo, hi = lp_solve(low), lp_solve(high)
    certs += [lo, hi]
    return lo.value, hi.value


def derive_profile_c() -> ProfileCReport:
    """Pin down Profile C's assignment from profiles A-D.

    Every cell is minimized and maximized; unequal bounds mean the system
    does not determine the assignment, which is reported as an error.
    """
    profs = six_profiles()
    labels = _labels(profs)
    c = profs["C"]
    certs: list[Certificate] = []

    sys = encode_axioms([profs[k] for k in "ABCD"], THEOREM1_AXIOMS, labels=labels)
    _pin_profile_a(sys, profs["A"])
    ranges = {}
    for i in range(3):
        for a in range(3):
            name = sys.cell(c, i, a)
            ranges[name] = _interval(sys, name, certs)
    loose = {k: v for k, v in ranges.items() if v[0] != v[1]}
    if loose:
        raise LPError(f"Profile C is not determined: {loose}")
    matrix = tuple(tuple(ranges[sys.cell(c, i, a)][0] for a in range(3)) for i in range(3))

    tight = encode_axioms([profs[k] for k in "ABC"], THEOREM1_AXIOMS, labels=labels)
    _pin_profile_a(tight, profs["A"])
    tight_interval = _interval(tight, tight.cell(c, 1, 1), certs)

    return ProfileCReport(Assignment(matrix), ranges, _step_interval(c, certs),
                          tight_interval, certs)


def _step_interval(c: Profile, certs: list) -> tuple[Fraction, Fraction]:
    """Range of y from agents 2 and 3's rows once column a is fixed.

    Agent 2 keeps probability 1/2 of ``a`` (upper invariance against B),
    which forces agent 3's share of ``a`` to 0. Mutual envy-freeness of
    agents 2 and 3 and their row sums then leave one free parameter.
    """
    sys = AxiomSystem([c], {profile_key(c): "C"})
    for i in (1, 2):
        sys.add_eq({x: 1 for x in sys.row_of(c, i)}, 1, f"row C agent {i + 1}")
    sys.add_eq({sys.cell(c, 1, 0): 1}, Fraction(1, 2), "agent 2 keeps 1/2 of a")
    sys.add_eq({sys.cell(c, 2, 0): 1}, 0, "agent 3 gets none of a")
    for i, j in ((1, 2), (2, 1)):
        for t in (1, 2):
            top = c[i][:t]
            coeffs = {}
            for a in top:
                coeffs[sys.cell(c, i, a)] = coeffs.get(sys.cell(c, i, a), 0) + 1
                coeffs[sys.cell(c, j, a)] = coeffs.get(sys.cell(c, j, a), 0) - 1
            sys.add_ge(coeffs, 0, f"EF C agent {i + 1} vs {j + 1} top-{t}")
    return _interval(sys, sys.cell(c, 1, 1), certs)


# -- no full allocations under neutrality ------------------------------------------

@dataclass(frozen=True)
class OrbitMax:
    profile: Profile
    agent: int
    obj: int
    value: Fraction
    orbit_size: int
    certificate: Certificate = field(repr=False, compare=False)

    def line(self) -> str:
        return (f"{profile_key(self.profile)} agent {self.agent + 1} object "
                f"{self.profile.objects[self.obj]}: max {format_rational(self.value)} "
                f"(orbit of {self.orbit_size} cells)")


@dataclass
class HardnessReport:
    axioms: tuple[str, ...]
    maxima: list[OrbitMax]
    orbits: int
    complete: bool
    seconds: float
    class_of: dict = field(default_factory=dict, repr=False)

    @property
    def theorem_configuration(self) -> bool:
        return set(self.axioms) == {"SP", "EF", "NEUTRAL"}

    @property
    def all_below_one(self) -> bool:
        return self.complete and all(m.value < 1 for m in self.maxima)

    def maximum_for(self, profile: Profile, agent: int, obj: int) -> OrbitMax:
        key = self.class_of[(profile.prefs, agent, obj)]
        return next(m for m in self.maxima if (m.profile.prefs, m.agent, m.obj) == key)

    def text(self) -> str:
        label = "" if self.theorem_configuration else " (non-theorem configuration)"
        head = [f"axioms: {' + '.join(self.axioms)}{label}",
                f"orbits solved: {len(self.maxima)} of {self.orbits}"
                + ("" if self.complete else " (budget exhausted)")]
        if self.maxima:
            worst = max(m.value for m in self.maxima)
            head.append(f"largest maximum: {format_rational(worst)}")
        head.append(f"time: {self.seconds:.1f}s")
        return "\n".join(head + [m.line() for m in self.maxima]) + "\n"


def _hardness_system(axioms: tuple[str, ...]):
    base = [a for a in axioms if a != "NEUTRAL"]
    full = encode_axioms(enumerate_profiles(3), base)
    if "NEUTRAL" in axioms:
        # the neutrality equalities are exactly this substitution
        q = quotient(full, group_elements(3, agents=False))
        return full, q.reduced, q.orbit_of
    return full, full, list(range(len(full)))


_WORKER: dict = {}


def _worker_init(axioms):
    _WORKER["system"] = _hardness_system(axioms)[1]


def _maximize(target: int, deadline: float | None, system=None):
    if deadline is not None and time.time() > deadline:
        raise BudgetExceeded("time budget exhausted")
    sys = (system if system is not None else _WORKER["system"]).copy()
    sys.maximize({sys.names[target]: 1})
    budget = None if deadline is None else max(0.0, deadline - time.time())
    return target, lp_solve(sys, guided=True, budget_seconds=budget)


def rsd_full_allocation(axioms: Sequence[str] = ("SP", "NEUTRAL")) -> OrbitMax:
    """RSD as an exact optimum certificate: it satisfies ``axioms`` on all 216
    profiles and gives some agent an object with probability 1."""
    from ..mechanisms import RSD
    from ..tabulate import tabulate
    table = tabulate(RSD, 3)
    full = encode_axioms(enumerate_profiles(3), axioms)
    point = {}
    target = None
    for name, (k, i, a) in full.meta.items():
        prof = full.profiles[k]
        point[name] = table.row(prof.index(), i)[a]
        if target is None and point[name] == 1:
            target = (name, prof, i, a)
    name, prof, i, a = target
    full.maximize({name: 1})
    upper = next(k for k, r in enumerate(full.all_rows()) if r.label == f"upper {name}")
    cert = Certificate("optimum", point, {upper: Fraction(1)}, Fraction(1))
    cert.verify(full)
    cert.system = full
    return OrbitMax(prof, i, a, Fraction(1), 1, cert)


def certify_strong_hardness(budget_seconds: float | None = None, *, jobs: int = 1,
                            axioms: Sequence[str] = ("SP", "EF", "NEUTRAL")) -> HardnessReport:
    """Maximize each cell, one per symmetry orbit, over all 216 profiles.

    Under NEUTRAL the system is solved on its object quotient, where each
    variable stands for a whole neutrality class. Orbit representatives are
    taken under object and agent relabelings together. Stops early, with
    ``complete=False``, once ``budget_seconds`` runs out.
    """
    start = time.monotonic()
    deadline = None if budget_seconds is None else time.time() + budget_seconds
    axioms = tuple(axioms)
    full, system, reduce_to = _hardness_system(axioms)
    action = variable_action(full, group_elements(3))
    rep: dict[int, int] = {}
    class_of = {}
    for name, (k, i, a) in full.meta.items():
        v = full.index[name]
        r = min(reduce_to[t[v]] for t in action)
        rep[r] = rep.get(r, 0) + 1
        k2, i2, a2 = full.meta[system.names[r]]
        class_of[(full.profiles[k].prefs, i, a)] = (full.profiles[k2].prefs, i2, a2)
    targets = sorted(rep)
    results: dict[int, Certificate] = {}
    complete = True
    try:
        if jobs > 1:
            with ProcessPoolExecutor(jobs, initializer=_worker_init, initargs=(axioms,)) as pool:
                for target, cert in pool.map(_maximize, targets, [deadline] * len(targets)):
                    results[target] = cert
        else:
            for target in targets:
                if deadline is not None and time.time() > deadline:
                    raise BudgetExceeded("time budget exhausted")
                results[target] = _maximize(target, deadline, system)[1]
    except BudgetExceeded:
        complete = False
    maxima = []
    for target in targets:
        cert = results.get(target)
        if cert is None:
            continue
        k, i, a = full.meta[system.names[target]]
        maxima.append(OrbitMax(full.profiles[k], i, a, cert.value, rep[target], cert))
        if set(axioms) == {"SP", "EF", "NEUTRAL"} and cert.value >= 1:
            raise TheoremFailure(f"{system.names[target]} reaches {cert.value}", cert.point)
    return HardnessReport(axioms, maxima, len(targets), complete,
                          time.monotonic() - start, class_of)


# -- the family of larger profiles -------------------------------------------------

def family_profile(n: int, top_block: Sequence) -> Profile:
    """Agents 1-3 rank ``a1, a2, a3`` as in ``top_block`` and then
    ``a4 ... an``; agent ``i > 3`` ranks ``ai ... an, a1 ... a(i-1)``.

    ``top_block`` holds three orders of ``{0, 1, 2}`` or of the tokens
    ``a1, a2, a3`` (strings like ``"a2 a1 a3"``).
    """
    if n <= 3:
        raise ValueError(f"family profiles need n > 3, got {n}")
    if len(top_block) != 3:
        raise ValueError("top_block needs exactly three preferences")
    tokens = tuple(f"a{k + 1}" for k in range(n))
    block = []
    for pref in top_block:
        if isinstance(pref, str):
            items = pref.replace(",", " ").split()
            if any(t not in tokens[:3] for t in items):
                raise ValueError(f"top block entry {pref!r} must rank a1, a2, a3")
            pref = [tokens.index(t) for t in items]
        pref = tuple(pref)
        if sorted(pref) != [0, 1, 2]:
            raise ValueError(f"top block entry {pref!r} must order exactly a1, a2, a3")
        block.append(pref)
    rest = tuple(range(3, n))
    prefs = [p + rest for p in block]
    prefs += [tuple(range(i, n)) + tuple(range(i)) for i in range(3, n)]
    return Profile(tuple(prefs), tokens)


def block_leakage(assignment: Assignment) -> dict[tuple[int, int], Fraction]:
    """Nonzero ``P[i][aj]`` for agents 1-3 and objects outside ``a1, a2, a3``."""
    return {(i, j): assignment[i][j] for i in range(3)
            for j in range(3, assignment.n) if assignment[i][j]}
