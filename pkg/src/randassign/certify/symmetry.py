"""Quotients of axiom systems by object and agent relabelings.

If a system is invariant under a group acting on its variables, it is
feasible iff it has a feasible point constant on variable orbits (average
any solution over the group). Substituting one variable per orbit gives a
much smaller system. A Farkas certificate of the small system lifts back:
spread each row multiplier evenly over the row's orbit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..core import all_preferences, invert, permute_agents, permute_objects
from .encode import AxiomSystem
from .lp import Certificate, LinearSystem, Row

ZERO = Fraction(0)


def group_elements(n: int, objects: bool = True, agents: bool = True) -> list[tuple]:
    ident = tuple(range(n))
    obj = all_preferences(n) if objects else (ident,)
    ag = all_preferences(n) if agents else (ident,)
    return [(pi, sigma) for pi in obj for sigma in ag]


def variable_action(sys: AxiomSystem, elements: list[tuple]) -> list[list[int]]:
    """``table[g][v]`` = index of the image of variable ``v`` under element ``g``.

    An element ``(pi, sigma)`` relabels objects by ``pi`` and then lets agent
    ``k`` take over the report of agent ``sigma[k]``; cell ``(i, a)`` moves to
    ``(sigma^-1(i), pi(a))``.
    """
    out = []
    for pi, sigma in elements:
        inv = invert(sigma)
        table = [0] * len(sys)
        for name, (k, i, a) in sys.meta.items():
            prof = sys.profiles[k]
            image = permute_agents(permute_objects(prof, pi), sigma)
            if image not in sys:
                raise ValueError(f"profile set is not closed under {pi}, {sigma}")
            table[sys.index[name]] = sys.index[sys.cell(image, inv[i], pi[a])]
        out.append(table)
    return out


def _row_key(row: Row, perm: list[int] | None = None) -> tuple:
    items = row.coeffs.items() if perm is None else ((perm[j], c) for j, c in row.coeffs.items())
    return (row.sense, row.rhs, tuple(sorted(items)))


@dataclass
class Quotient:
    full: AxiomSystem
    reduced: LinearSystem
    orbit_of: list[int]  # full variable -> reduced variable
    orbits: list[list[int]]  # reduced variable -> full variables
    row_orbits: list[list[int]]  # reduced explicit row -> full explicit rows
    action: list[list[int]]

    def lift_point(self, point: dict) -> dict:
        return {name: point[self.reduced.names[self.orbit_of[j]]]
                for j, name in enumerate(self.full.names)}

    def lift_farkas(self, cert: Certificate) -> Certificate:
        """Spread each multiplier evenly over its orbit of full-system rows."""
        if cert.kind != "infeasible":
            raise ValueError("only infeasibility certificates lift by averaging")
        full_rows = self.full.all_rows()
        n_explicit = len(self.full.rows)
        bound_index = {}
        for k in range(n_explicit, len(full_rows)):
            r = full_rows[k]
            bound_index[(r.label.split(" ", 1)[0], next(iter(r.coeffs)))] = k
        red_rows = self.reduced.all_rows()
        n_red = len(self.reduced.rows)
        mult: dict[int, Fraction] = {}
        for k, y in cert.multipliers.items():
            if k < n_red:
                members = self.row_orbits[k]
            else:
                r = red_rows[k]
                kind = r.label.split(" ", 1)[0]
                members = [bound_index[(kind, v)] for v in self.orbits[next(iter(r.coeffs))]]
            share = y / len(members)
            for idx in members:
                mult[idx] = mult.get(idx, ZERO) + share
        lifted = Certificate("infeasible", multipliers={k: v for k, v in mult.items() if v},
                             delta=cert.delta, pivots=cert.pivots)
        lifted.verify(self.full)
        lifted.system = self.full
        return lifted


def quotient(sys: AxiomSystem, elements: list[tuple]) -> Quotient:
    """Substitute one variable per orbit and keep one row per row orbit."""
    action = variable_action(sys, elements)
    nvar = len(sys)
    orbit_of = [-1] * nvar
    orbits: list[list[int]] = []
    for v in range(nvar):
        if orbit_of[v] >= 0:
            continue
        members = sorted({t[v] for t in action})
        for w in members:
            orbit_of[w] = len(orbits)
        orbits.append(members)

    red = LinearSystem()
    for members in orbits:
        j = members[0]
        red.add_var(sys.names[j], sys.lower[j], sys.upper[j])

    by_key = {}
    for k, row in enumerate(sys.rows):
        by_key.setdefault(_row_key(row), k)
    seen: set[tuple] = set()
    row_orbits: list[list[int]] = []
    for k, row in enumerate(sys.rows):
        key = _row_key(row)
        if key in seen:
            continue
        images = {_row_key(row, t) for t in action}
        seen |= images
        coeffs: dict[int, Fraction] = {}
        for j, c in row.coeffs.items():
            o = orbit_of[j]
            coeffs[o] = coeffs.get(o, ZERO) + c
        coeffs = {o: c for o, c in coeffs.items() if c}
        if not coeffs:
            if (row.sense == "eq" and row.rhs != 0) or (row.sense == "le" and row.rhs < 0):
                raise ValueError(f"row {row.label} collapses to a contradiction")
            continue
        red.rows.append(Row(coeffs, row.sense, row.rhs, row.label))
        try:
            row_orbits.append(sorted(by_key[img] for img in images))
        except KeyError:
            raise ValueError(f"system is not invariant: an image of {row.label} is missing") from None
    return Quotient(sys, red, orbit_of, orbits, row_orbits, action)
