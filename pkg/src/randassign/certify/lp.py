"""Exact rational linear programming with checkable certificates.

The solver is a primal simplex in inequality form: a vertex is described by
an *active set* of tight rows whose matrix is nonsingular, equality rows are
always active, and pivots follow Bland's smallest-index rule. That form keeps
the working inverse at ``nvar x nvar`` no matter how many inequality rows the
system carries, which suits the axiom systems here (few variables, thousands
of prefix-sum rows).

Every answer comes with a certificate that :meth:`Certificate.verify`
re-checks by plain substitution, without trusting the solver.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


class LPError(Exception):
    pass


class Unbounded(LPError):
    """The objective is unbounded; ``ray`` is an improving recession direction."""

    def __init__(self, ray: dict):
        super().__init__("objective is unbounded")
        self.ray = ray


class CertificateError(LPError):
    pass


class BudgetExceeded(LPError):
    pass


@dataclass(frozen=True)
class Row:
    coeffs: dict[int, Fraction]
    sense: str  # "le" or "eq"
    rhs: Fraction
    label: str = ""

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * x[j] for j, c in self.coeffs.items()), ZERO)


class LinearSystem:
    """Named variables with bounds, ``<=`` / ``==`` rows and an optional
    objective. Variables default to the box ``[0, 1]``."""

    def __init__(self) -> None:
        self.names: list[Hashable] = []
        self.index: dict[Hashable, int] = {}
        self.lower: list[Fraction | None] = []
        self.upper: list[Fraction | None] = []
        self.rows: list[Row] = []
        self.objective: dict[int, Fraction] = {}
        self.maximizing = True
        self._all: list[Row] | None = None

    def __len__(self) -> int:
        return len(self.names)

    def add_var(self, name: Hashable, lower=0, upper=1) -> int:
        if name in self.index:
            raise LPError(f"duplicate variable {name!r}")
        self.index[name] = len(self.names)
        self.names.append(name)
        self.lower.append(None if lower is None else Fraction(lower))
        self.upper.append(None if upper is None else Fraction(upper))
        self._all = None
        return self.index[name]

    def var(self, name: Hashable) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise LPError(f"unregistered variable {name!r}") from None

    def _coeffs(self, coeffs: Mapping[Hashable, object]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for name, c in coeffs.items():
            j = self.var(name)
            out[j] = out.get(j, ZERO) + Fraction(c)
        return {j: c for j, c in out.items() if c}

    def add_le(self, coeffs: Mapping, rhs, label: str = "") -> None:
        self.rows.append(Row(self._coeffs(coeffs), "le", Fraction(rhs), label))
        self._all = None

    def add_ge(self, coeffs: Mapping, rhs, label: str = "") -> None:
        self.add_le({k: -Fraction(v) for k, v in coeffs.items()}, -Fraction(rhs), label)

    def add_eq(self, coeffs: Mapping, rhs, label: str = "") -> None:
        self.rows.append(Row(self._coeffs(coeffs), "eq", Fraction(rhs), label))
        self._all = None

    def maximize(self, coeffs: Mapping) -> None:
        self.objective = self._coeffs(coeffs)
        self.maximizing = True

    def minimize(self, coeffs: Mapping) -> None:
        self.objective = self._coeffs(coeffs)
        self.maximizing = False

    def all_rows(self) -> list[Row]:
        """Explicit rows followed by one row per finite variable bound."""
        if self._all is None:
            rows = list(self.rows)
            for j, name in enumerate(self.names):
                if self.lower[j] is not None:
                    rows.append(Row({j: -ONE}, "le", -self.lower[j], f"lower {name}"))
                if self.upper[j] is not None:
                    rows.append(Row({j: ONE}, "le", self.upper[j], f"upper {name}"))
            self._all = rows
        return self._all

    def copy(self) -> "LinearSystem":
        other = LinearSystem()
        other.names = list(self.names)
        other.index = dict(self.index)
        other.lower = list(self.lower)
        other.upper = list(self.upper)
        other.rows = list(self.rows)
        other.objective = dict(self.objective)
        other.maximizing = self.maximizing
        return other

    def stats(self) -> str:
        n_eq = sum(r.sense == "eq" for r in self.rows)
        return (f"{len(self.names)} variables, {n_eq} equalities, "
                f"{len(self.rows) - n_eq} inequalities")


@dataclass
class Certificate:
    """``kind`` is ``"feasible"``, ``"infeasible"`` or ``"optimum"``.

    ``point`` maps variable names to values. ``multipliers`` maps indices of
    :meth:`LinearSystem.all_rows` to multipliers: for ``infeasible`` they
    combine the rows into ``0 <= -delta``; for ``optimum`` they combine the
    rows into ``objective <= value`` (``>=`` when minimizing).
    """

    kind: str
    point: dict[Hashable, Fraction] | None = None
    multipliers: dict[int, Fraction] = field(default_factory=dict)
    value: Fraction | None = None
    delta: Fraction | None = None
    pivots: int = 0
    system: "LinearSystem | None" = field(default=None, repr=False, compare=False)

    @property
    def feasible(self) -> bool:
        return self.kind in ("feasible", "optimum")

    def verify(self, system: LinearSystem) -> None:
        """Raise :class:`CertificateError` unless the certificate checks out."""
        rows = system.all_rows()
        if self.kind in ("feasible", "optimum"):
            if self.point is None:
                raise CertificateError("missing point")
            x = [self.point[name] for name in system.names]
            for r in rows:
                lhs = r.value(x)
                if (r.sense == "eq" and lhs != r.rhs) or (r.sense == "le" and lhs > r.rhs):
                    raise CertificateError(f"point violates {r.label or r}")
        if self.kind == "infeasible":
            combo, rhs = self._combine(rows, len(system))
            if any(combo):
                raise CertificateError("multipliers do not cancel the variables")
            if not rhs < 0:
                raise CertificateError(f"combined right-hand side {rhs} is not negative")
            if self.delta is not None and -rhs != self.delta:
                raise CertificateError("delta does not match the combination")
        if self.kind == "optimum":
            combo, rhs = self._combine(rows, len(system))
            sign = 1 if system.maximizing else -1
            target = [sign * system.objective.get(j, ZERO) for j in range(len(system))]
            if combo != target:
                raise CertificateError("dual multipliers do not reproduce the objective")
            if sign * rhs != self.value:
                raise CertificateError("dual bound differs from the claimed value")
            x = [self.point[name] for name in system.names]
            attained = sum((c * x[j] for j, c in system.objective.items()), ZERO)
            if attained != self.value:
                raise CertificateError("point does not attain the claimed value")

    def _combine(self, rows: list[Row], nvar: int) -> tuple[list[Fraction], Fraction]:
        combo = [ZERO] * nvar
        rhs = ZERO
        for k, y in self.multipliers.items():
            r = rows[k]
            if r.sense == "le" and y < 0:
                raise CertificateError(f"negative multiplier on inequality {r.label}")
            for j, c in r.coeffs.items():
                combo[j] += y * c
            rhs += y * r.rhs
        return combo, rhs

    def render(self, system: LinearSystem | None = None) -> str:
        """Plain-text audit listing: rows with nonzero multipliers and the
        contradiction or bound they produce."""
        from ..core import format_rational as fr
        system = system or self.system
        rows = system.all_rows()
        out = [f"certificate: {self.kind}", f"system: {system.stats()}"]

        def show(r: Row) -> str:
            terms = " ".join(f"{'+' if c > 0 else '-'} {fr(abs(c))}*{system.names[j]}"
                             for j, c in sorted(r.coeffs.items()))
            op = "=" if r.sense == "eq" else "<="
            return f"{terms} {op} {fr(r.rhs)}"

        if self.multipliers:
            out.append("multipliers:")
            for k in sorted(self.multipliers):
                out.append(f"  [{k}] {fr(self.multipliers[k])} x ({rows[k].label}): {show(rows[k])}")
        if self.kind == "infeasible":
            out.append(f"combination: 0 <= {fr(-self.delta)}  (delta = {fr(self.delta)})")
        if self.point is not None:
            out.append("point:")
            for name in system.names:
                v = self.point[name]
                if v:
                    out.append(f"  {name} = {fr(v)}")
        if self.value is not None:
            out.append(f"objective value: {fr(self.value)}")
        return "\n".join(out) + "\n"


# -- linear algebra helpers ---------------------------------------------------

def _sparse_inverse(rows: list[dict[int, Fraction]], n: int) -> list[list[Fraction]]:
    """Inverse of the square matrix whose i-th row is ``rows[i]``.

    Returned densely as ``inv[var][position]`` so that ``x = inv @ b``.
    """
    work = []
    for i, r in enumerate(rows):
        d = dict(r)
        d[n + i] = ONE
        work.append(d)
    pivot_of_col: dict[int, int] = {}
    used = [False] * n
    for col in range(n):
        best = -1
        best_len = 0
        for i in range(n):
            if not used[i] and work[i].get(col):
                if best < 0 or len(work[i]) < best_len:
                    best, best_len = i, len(work[i])
        if best < 0:
            raise LPError("active set is singular")
        used[best] = True
        pivot_of_col[col] = best
        prow = work[best]
        inv_p = ONE / prow[col]
        if inv_p != 1:
            for k in prow:
                prow[k] *= inv_p
        for i in range(n):
            if i != best:
                f = work[i].get(col)
                if f:
                    wi = work[i]
                    for k, v in prow.items():
                        nv = wi.get(k, ZERO) - f * v
                        if nv:
                            wi[k] = nv
                        else:
                            wi.pop(k, None)
    inv = [[ZERO] * n for _ in range(n)]
    for col, i in pivot_of_col.items():
        for k, v in work[i].items():
            if k >= n:
                inv[col][k - n] = v
    return inv


def _independent_equalities(eqs: list[tuple[int, Row]], nvar: int):
    """Row-reduce the equalities.

    Returns ``(kept, pivots, None)`` with a maximal independent subset and
    their pivot columns, or ``(None, None, combo)`` where ``combo`` maps row
    indices to multipliers proving ``0 = nonzero``.
    """
    kept: list[int] = []
    pivcols: list[int] = []
    basis: list[tuple[dict[int, Fraction], Fraction, dict[int, Fraction], int]] = []
    for k, row in eqs:
        vec = dict(row.coeffs)
        rhs = row.rhs
        combo = {k: ONE}
        for bvec, brhs, bcombo, pc in basis:
            f = vec.get(pc)
            if f:
                for j, v in bvec.items():
                    nv = vec.get(j, ZERO) - f * v
                    if nv:
                        vec[j] = nv
                    else:
                        vec.pop(j, None)
                rhs -= f * brhs
                for j, v in bcombo.items():
                    nv = combo.get(j, ZERO) - f * v
                    if nv:
                        combo[j] = nv
                    else:
                        combo.pop(j, None)
        if not vec:
            if rhs != 0:
                return None, None, combo
            continue
        pc = min(vec)
        s = ONE / vec[pc]
        vec = {j: v * s for j, v in vec.items()}
        combo = {j: v * s for j, v in combo.items()}
        basis.append((vec, rhs * s, combo, pc))
        kept.append(k)
        pivcols.append(pc)
    return kept, pivcols, None


# -- the simplex core ------------------------------------------------------------

class _State:
    """Active-set simplex state for ``max c.x`` over ``rows``."""

    def __init__(self, rows: list[Row], nvar: int, active: list[int], deadline=None):
        self.rows = rows
        self.nvar = nvar
        self.active = list(active)
        self.is_active = [False] * len(rows)
        for k in active:
            self.is_active[k] = True
        self.inv = _sparse_inverse([rows[k].coeffs for k in active], nvar)
        self.x = [sum((self.inv[j][p] * rows[k].rhs for p, k in enumerate(active)
                       if self.inv[j][p]), ZERO) for j in range(nvar)]
        self.pivots = 0
        self.deadline = deadline

    def duals(self, c: dict[int, Fraction]) -> list[Fraction]:
        y = [ZERO] * self.nvar
        for j, cj in c.items():
            row = self.inv[j]
            for p in range(self.nvar):
                if row[p]:
                    y[p] += cj * row[p]
        return y

    def run(self, c: dict[int, Fraction], max_pivots: int | None = None) -> str:
        rows, nvar = self.rows, self.nvar
        while True:
            if self.deadline is not None and time.monotonic() > self.deadline:
                raise BudgetExceeded("time budget exhausted")
            y = self.duals(c)
            leave = -1
            for p in sorted(range(nvar), key=lambda p: self.active[p]):
                if y[p] < 0 and rows[self.active[p]].sense == "le":
                    leave = p
                    break
            if leave < 0:
                self.y = y
                return "optimal"
            # move along d with A_R d = -e_leave
            d = [-self.inv[j][leave] for j in range(nvar)]
            nz = [j for j in range(nvar) if d[j]]
            best_ratio = None
            enter = -1
            for k, r in enumerate(rows):
                if self.is_active[k] or r.sense != "le":
                    continue
                ad = ZERO
                for j, cf in r.coeffs.items():
                    dj = d[j]
                    if dj:
                        ad += cf * dj
                if ad > 0:
                    ratio = (r.rhs - r.value(self.x)) / ad
                    if best_ratio is None or ratio < best_ratio:
                        best_ratio, enter = ratio, k
            if enter < 0:
                self.ray = d
                return "unbounded"
            if best_ratio:
                for j in nz:
                    self.x[j] += best_ratio * d[j]
            self._replace(leave, enter)
            self.pivots += 1
            if max_pivots is not None and self.pivots >= max_pivots:
                return "limit"

    def _replace(self, pos: int, k: int) -> None:
        """Swap active row at position ``pos`` for row ``k`` (rank-one update)."""
        nvar = self.nvar
        inv = self.inv
        a = self.rows[k].coeffs
        # z = a^T inv - e_pos ; w = inv[:, pos]
        z = [ZERO] * nvar
        for j, cf in a.items():
            row = inv[j]
            for p in range(nvar):
                if row[p]:
                    z[p] += cf * row[p]
        alpha = z[pos]
        z[pos] -= ONE
        zn = [(p, zp / alpha) for p, zp in enumerate(z) if zp]
        for j in range(nvar):
            wj = inv[j][pos]
            if wj:
                row = inv[j]
                for p, zp in zn:
                    row[p] -= wj * zp
        old = self.active[pos]
        self.is_active[old] = False
        self.is_active[k] = True
        self.active[pos] = k


def _with_slack(rows: list[Row], s: int, exempt: set[int]) -> list[Row]:
    """Relax every inequality outside ``exempt`` by ``s``; ``exempt`` rows are
    tight at the starting point and stay as they are."""
    out = []
    for k, r in enumerate(rows):
        if r.sense == "le" and k not in exempt:
            c = dict(r.coeffs)
            c[s] = -ONE
            out.append(Row(c, "le", r.rhs, r.label))
        else:
            out.append(r)
    out.append(Row({s: -ONE}, "le", ZERO, "phase-one slack"))
    return out


def _initial_active(system: LinearSystem, rows: list[Row]):
    """Independent equalities plus one bound row per non-pivot variable.

    Returns ``(active, None)`` or ``(None, farkas_combo)``.
    """
    nvar = len(system)
    eqs = [(k, r) for k, r in enumerate(rows) if r.sense == "eq"]
    kept, pivcols, combo = _independent_equalities(eqs, nvar)
    if kept is None:
        return None, combo
    bound_row: dict[tuple[str, int], int] = {}
    for k, r in enumerate(rows):
        if r.label.startswith("lower ") or r.label.startswith("upper "):
            (j, c), = r.coeffs.items()
            bound_row.setdefault(("lower" if c < 0 else "upper", j), k)
    active = list(kept)
    pivset = set(pivcols)
    for j in range(nvar):
        if j in pivset:
            continue
        k = bound_row.get(("lower", j), bound_row.get(("upper", j)))
        if k is None:
            raise LPError(f"variable {system.names[j]!r} needs a finite bound")
        active.append(k)
    return active, None


def lp_solve(system: LinearSystem, *, optimize: bool | None = None,
             budget_seconds: float | None = None, verify: bool = True,
             start: list[int] | None = None, guided: bool = False) -> Certificate:
    """Solve ``system`` exactly.

    Without an objective (or with ``optimize=False``) the answer is a
    ``feasible`` point or an ``infeasible`` Farkas certificate. With an
    objective it is an ``optimum`` (value, attaining point and dual bound) or
    ``infeasible``; an unbounded objective raises :class:`Unbounded`.
    ``start`` may name an active set (indices into ``all_rows``) describing a
    known feasible vertex, which skips phase one. ``guided=True`` asks a
    floating-point solver for a starting vertex first; the exact pivots that
    follow decide the answer, so a bad guess costs time, never correctness.
    """
    deadline = None if budget_seconds is None else time.monotonic() + budget_seconds
    rows = system.all_rows()
    nvar = len(system)
    if optimize is None:
        optimize = bool(system.objective)

    if start is None and guided:
        start = guided_start(system)
    if start is not None:
        state = _State(rows, nvar, start, deadline)
        if any(r.sense == "le" and r.value(state.x) > r.rhs for r in rows):
            raise LPError("warm start is not a feasible vertex")
        pivots = 0
    else:
        active, combo = _initial_active(system, rows)
        if active is None:
            cert = _farkas_from(combo, rows)
            return _checked(cert, system, verify)
        state = _State(rows, nvar, active, deadline)
        worst = max(((r.value(state.x) - r.rhs, k) for k, r in enumerate(rows)
                     if r.sense == "le" and not state.is_active[k]),
                    default=(ZERO, -1), key=lambda t: (t[0], -t[1]))
        pivots = 0
        if worst[0] > 0:
            state, pivots, cert = _phase_one(system, rows, active, worst[1], deadline)
            if cert is not None:
                return _checked(cert, system, verify)

    if not optimize:
        point = dict(zip(system.names, state.x))
        return _checked(Certificate("feasible", point, pivots=pivots + state.pivots), system, verify)

    sign = ONE if system.maximizing else -ONE
    c = {j: sign * v for j, v in system.objective.items()}
    status = state.run(c)
    if status == "unbounded":
        raise Unbounded({system.names[j]: sign * v for j, v in enumerate(state.ray) if v})
    y = state.y
    mult = {k: y[p] for p, k in enumerate(state.active) if y[p]}
    value = sum((v * state.x[j] for j, v in system.objective.items()), ZERO)
    cert = Certificate("optimum", dict(zip(system.names, state.x)), mult, value,
                       pivots=pivots + state.pivots)
    cert.active = list(state.active)
    return _checked(cert, system, verify)


def guided_start(system: LinearSystem, tol: float = 1e-9) -> list[int] | None:
    """An active set for the vertex a floating-point simplex lands on.

    Returns ``None`` when the float solve fails or its vertex does not
    survive exact arithmetic.
    """
    import numpy as np
    from scipy.optimize import linprog
    from scipy.sparse import csr_matrix

    rows = system.all_rows()
    nvar = len(system)
    explicit = system.rows

    def matrix(sel):
        data, ri, ci = [], [], []
        for i, r in enumerate(sel):
            for j, c in r.coeffs.items():
                data.append(float(c))
                ri.append(i)
                ci.append(j)
        return csr_matrix((data, (ri, ci)), shape=(len(sel), nvar))

    le = [r for r in explicit if r.sense == "le"]
    eq = [r for r in explicit if r.sense == "eq"]
    c = np.zeros(nvar)
    sign = -1.0 if system.maximizing else 1.0
    for j, v in system.objective.items():
        c[j] = sign * float(v)
    bounds = [(None if lo is None else float(lo), None if hi is None else float(hi))
              for lo, hi in zip(system.lower, system.upper)]
    res = linprog(c, A_ub=matrix(le) if le else None,
                  b_ub=[float(r.rhs) for r in le] if le else None,
                  A_eq=matrix(eq) if eq else None,
                  b_eq=[float(r.rhs) for r in eq] if eq else None,
                  bounds=bounds, method="highs-ds")
    if res.status != 0:
        return None
    x = res.x
    eq_idx = [k for k, r in enumerate(rows) if r.sense == "eq"]
    tight = []
    for k, r in enumerate(rows):
        if r.sense == "le":
            lhs = sum(float(v) * x[j] for j, v in r.coeffs.items())
            if abs(lhs - float(r.rhs)) <= tol * max(1.0, abs(float(r.rhs))):
                tight.append(k)
    # rows carrying a dual in the float answer go first
    duals = {}
    if le:
        marg = res.ineqlin.marginals
        pos = [k for k, r in enumerate(rows[:len(explicit)]) if r.sense == "le"]
        duals = {k: abs(float(m)) for k, m in zip(pos, marg)}
    for k in range(len(explicit), len(rows)):
        r = rows[k]
        (j, cf), = r.coeffs.items()
        duals[k] = abs(float((res.lower if cf < 0 else res.upper).marginals[j]))
    tight.sort(key=lambda k: (duals.get(k, 0.0) <= tol, k))
    kept = _independent(rows, eq_idx + tight, nvar)
    if len(kept) != nvar:
        return None
    try:
        state = _State(rows, nvar, kept)
    except LPError:
        return None
    if any(r.sense == "le" and r.value(state.x) > r.rhs for r in rows):
        return None
    return kept


def _independent(rows: list[Row], order: list[int], nvar: int) -> list[int]:
    """Greedy maximal linearly independent subset of ``rows`` in ``order``."""
    basis: list[tuple[dict[int, Fraction], int]] = []
    kept = []
    for k in order:
        vec = dict(rows[k].coeffs)
        for bvec, pc in basis:
            f = vec.get(pc)
            if f:
                for j, v in bvec.items():
                    nv = vec.get(j, ZERO) - f * v
                    if nv:
                        vec[j] = nv
                    else:
                        vec.pop(j, None)
        if not vec:
            continue
        pc = min(vec)
        s = ONE / vec[pc]
        basis.append(({j: v * s for j, v in vec.items()}, pc))
        kept.append(k)
        if len(kept) == nvar:
            break
    return kept


def _phase_one(system, rows, active, worst_row, deadline):
    nvar = len(system)
    s = nvar
    prow = _with_slack(rows, s, set(active))
    state = _State(prow, nvar + 1, active + [worst_row], deadline)
    status = state.run({s: -ONE})
    if status != "optimal":
        raise LPError("phase one did not terminate at an optimum")
    if state.x[s] > 0:
        y = state.y
        mult = {}
        for p, k in enumerate(state.active):
            if y[p] and k < len(rows):
                mult[k] = y[p]
        cert = Certificate("infeasible", multipliers=mult, delta=state.x[s], pivots=state.pivots)
        return None, state.pivots, cert
    slack_row = len(rows)
    if not state.is_active[slack_row]:
        # degenerate: bring the slack bound in, dropping a row that mentions s
        lam = state.inv[s]  # row s of inverse gives combination for e_s
        pos = next(p for p in sorted(range(nvar + 1), key=lambda p: state.active[p])
                   if lam[p] and prow[state.active[p]].sense == "le")
        state._replace(pos, slack_row)
    keep = [k for k in state.active if k != slack_row]
    return _State(rows, nvar, keep, deadline), state.pivots, None


def _farkas_from(combo: dict[int, Fraction], rows: list[Row]) -> Certificate:
    rhs = sum((v * rows[k].rhs for k, v in combo.items()), ZERO)
    if rhs > 0:
        combo = {k: -v for k, v in combo.items()}
        rhs = -rhs
    return Certificate("infeasible", multipliers=combo, delta=-rhs)


def _checked(cert: Certificate, system: LinearSystem, verify: bool) -> Certificate:
    cert.system = system
    if verify:
        cert.verify(system)
    return cert


# -- independent cross-check ---------------------------------------------------

def fourier_motzkin_feasible(system: LinearSystem, max_rows: int = 20000) -> bool:
    """Decide feasibility by Fourier-Motzkin elimination (tiny systems only)."""
    ineqs: list[tuple[list[Fraction], Fraction]] = []
    n = len(system)
    for r in system.all_rows():
        vec = [r.coeffs.get(j, ZERO) for j in range(n)]
        ineqs.append((vec, r.rhs))
        if r.sense == "eq":
            ineqs.append(([-v for v in vec], -r.rhs))
    for j in range(n):
        pos, neg, rest = [], [], []
        for vec, b in ineqs:
            (pos if vec[j] > 0 else neg if vec[j] < 0 else rest).append((vec, b))
        new = list(rest)
        for vp, bp in pos:
            for vn, bn in neg:
                fp, fn = vp[j], -vn[j]
                vec = [fn * a + fp * c for a, c in zip(vp, vn)]
                new.append((vec, fn * bp + fp * bn))
        ineqs = _dedupe(new)
        if len(ineqs) > max_rows:
            raise BudgetExceeded(f"Fourier-Motzkin blew up to {len(ineqs)} rows")
    return all(b >= 0 for _, b in ineqs)


def _dedupe(ineqs):
    seen = {}
    for vec, b in ineqs:
        scale = next((abs(v) for v in vec if v), None)
        if scale is None:
            key = ("const", b >= 0)
            seen.setdefault(key, (vec, b if b < 0 else ZERO))
            if b < 0:
                seen[key] = (vec, b)
            continue
        key = tuple(v / scale for v in vec)
        nb = b / scale
        if key not in seen or seen[key][1] > nb:
            seen[key] = (list(key), nb)
    return list(seen.values())
