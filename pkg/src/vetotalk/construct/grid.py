"""Heuristic grid search over two-message mixed strategies for three types.

Every sender strategy on the 1/resolution grid is screened exactly: the
receiver's optimal-reply faces at both induced posteriors come from
precomputed vertex tables (integerised so the hot loop stays in machine
integers), a necessary incentive filter compares per-type payoff ranges on
the faces, and survivors go through an exact joint feasibility LP that
searches the two faces for incentive-compatible proposals.

A returned equilibrium is exact and self-verified.  Returning None means
the grid is exhausted; it is NOT a certificate that no equilibrium exists.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from math import gcd
from typing import Optional

from .. import ratlp
from ..errors import WrongTypeCount
from ..model import GameSpec, receiver_strategy, sender_strategy
from ..participation import acceptance_set
from ..ratlp import AffineFn, LpStatus, Polytope, ZERO, combine, solve_linear_system
from .result import Equilibrium, Kind, pad_messages, verified


def enumerate_vertices(P: Polytope) -> list[tuple[Fraction, ...]]:
    """All vertices of a polytope by exhausting row subsets of size dim."""
    seen = set()
    out = []
    for combo in combinations(range(len(P.rows)), P.dim):
        mat = [P.rows[i][0] for i in combo]
        rhs = [P.rows[i][1] for i in combo]
        x = solve_linear_system(mat, rhs)
        if x is not None and x not in seen and P.contains(x):
            seen.add(x)
            out.append(x)
    out.sort()
    return out


def _lcm(values) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


class _SupportTable:
    """Vertex list of one acceptance set with integerised utility values."""

    def __init__(self, g: GameSpec, types: tuple[int, ...]):
        self.polytope = acceptance_set(g, types)
        self.vertices = enumerate_vertices(self.polytope)
        vvals = [[v(x) for v in g.receiver_v] for x in self.vertices]
        self.v_scale = _lcm([val.denominator for row in vvals for val in row] or [1])
        self.v_int = [[int(val * self.v_scale) for val in row] for row in vvals]
        self.u_int = None

    def scale_sender(self, g: GameSpec, u_scale: int):
        self.u_int = [[int(u(x) * u_scale) for u in g.sender_u] for x in self.vertices]


def _face(table: _SupportTable, weights_int):
    """Argmax vertex indices and the exact face value for integer weights."""
    best = None
    face = []
    for vi, row in enumerate(table.v_int):
        val = sum(w * rv for w, rv in zip(weights_int, row))
        if best is None or val > best:
            best = val
            face = [vi]
        elif val == best:
            face.append(vi)
    return face, best


def grid_mixed_search(g: GameSpec, resolution: int) -> Optional[Equilibrium]:
    """First equilibrium on the grid in lexicographic order, or None."""
    if g.k != 3:
        raise WrongTypeCount("the grid search is specified for exactly three types")
    if resolution < 1:
        raise ValueError("resolution must be a positive integer")
    r = resolution

    tables: dict[tuple[int, ...], _SupportTable] = {}
    for size in (1, 2, 3):
        for types in combinations(range(3), size):
            if ratlp.feasible(acceptance_set(g, types)).status is LpStatus.OPTIMAL:
                tables[types] = _SupportTable(g, types)
    u_scale = _lcm([val.denominator
                    for t in tables.values()
                    for x in t.vertices
                    for val in (u(x) for u in g.sender_u)] or [1])
    for t in tables.values():
        t.scale_sender(g, u_scale)

    prior_scale = _lcm([p.denominator for p in g.prior])
    prior_int = [int(p * prior_scale) for p in g.prior]

    for counts in product(range(r + 1), repeat=3):
        eq = _try_grid_point(g, r, counts, prior_int, tables)
        if eq is not None:
            return eq
    return None


def _try_grid_point(g, r, counts, prior_int, tables):
    w1 = tuple(prior_int[k] * counts[k] for k in range(3))
    w2 = tuple(prior_int[k] * (r - counts[k]) for k in range(3))
    s1 = tuple(k for k in range(3) if w1[k] > 0)
    s2 = tuple(k for k in range(3) if w2[k] > 0)

    if not s1 or not s2:
        # single-message strategy: a pooling candidate at the prior
        full = (0, 1, 2)
        if full not in tables:
            return None
        face, _ = _face(tables[full], prior_int)
        x = tables[full].vertices[face[0]]
        return _build(g, r, counts, {0: x, 1: x})
    if s1 not in tables or s2 not in tables:
        return None

    t1, t2 = tables[s1], tables[s2]
    face1, val1 = _face(t1, w1)
    face2, val2 = _face(t2, w2)

    # necessary incentive screen on per-type payoff ranges over the faces
    for k in range(3):
        u1 = [t1.u_int[vi][k] for vi in face1]
        u2 = [t2.u_int[vi][k] for vi in face2]
        on1, on2 = counts[k] > 0, counts[k] < r
        if on1 and on2:
            if max(u1) < min(u2) or max(u2) < min(u1):
                return None
        elif on1:
            if max(u1) < min(u2):
                return None
        else:
            if max(u2) < min(u1):
                return None

    # exact joint feasibility over the two optimal faces with IC rows
    n = g.n
    pad = (ZERO,) * n
    belief1 = _normalize(w1)
    belief2 = _normalize(w2)
    obj1 = combine(belief1, g.receiver_v)
    obj2 = combine(belief2, g.receiver_v)
    phi1 = Fraction(val1, t1.v_scale * sum(w1))
    phi2 = Fraction(val2, t2.v_scale * sum(w2))
    rows = [(tuple(c) + pad, rhs) for c, rhs in t1.polytope.rows]
    rows += [(pad + tuple(c), rhs) for c, rhs in t2.polytope.rows]
    joint = Polytope(2 * n, tuple(rows))
    joint = joint.with_equality(AffineFn(obj1.coeffs + pad, obj1.constant), phi1)
    joint = joint.with_equality(AffineFn(pad + obj2.coeffs, obj2.constant), phi2)
    for k in range(3):
        u = g.sender_u[k]
        diff = AffineFn(u.coeffs + tuple(-c for c in u.coeffs))
        on1, on2 = counts[k] > 0, counts[k] < r
        if on1 and on2:
            joint = joint.with_equality(diff, ZERO)
        elif on1:
            joint = joint.with_rows([(diff.scaled(-1).coeffs, ZERO)])
        else:
            joint = joint.with_rows([(diff.coeffs, ZERO)])
    out = ratlp.feasible(joint)
    if out.status is not LpStatus.OPTIMAL:
        return None
    return _build(g, r, counts, {0: out.point[:n], 1: out.point[n:]})


def _normalize(weights):
    total = sum(weights)
    return tuple(Fraction(w, total) for w in weights)


def _build(g, r, counts, decisions):
    labels = ["g0", "g1"]
    tau_map = {"g0": decisions[0], "g1": decisions[1]}
    labels, tau_map = pad_messages(labels, tau_map, g.k, "g0")
    rows = []
    for k in range(3):
        row = [Fraction(counts[k], r), Fraction(r - counts[k], r)]
        rows.append(row + [0] * (len(labels) - 2))
    sigma = sender_strategy(labels, rows)
    tau = receiver_strategy([(m, tau_map[m]) for m in labels])
    return verified(g, Kind.MIXED if not sigma.is_partitional else Kind.PARTITIONAL,
                    "grid-search", sigma, tau,
                    metadata={"resolution": r, "counts": counts})
