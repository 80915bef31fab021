"""Partially revealing equilibrium for a two-pair participation structure.

The pivot type (the one both maximal pairs contain) randomizes between two
messages; the other two types each stick to the message naming their pair.
A parameter t in [0,1] slides the first posterior along the segment from
"pivot or first type" toward the first type alone, and the second posterior
is pinned by the requirement that the prior stays a convex combination of
the two.  The pivot must be exactly indifferent between the receiver's
optimal replies at the two posteriors.

Both LP value functions are maxima of finitely many affine functions of t,
so their kinks can be enumerated exactly by chord search; the optimal reply
faces are constant between kinks.  Testing the joint indifference LP at
every kink and piece midpoint therefore decides exact indifference without
floating-point bisection.  Before that, the two pure escapes (one of the
pair partitions already incentive compatible) are tried.
"""

from __future__ import annotations

from fractions import Fraction

from .. import ratlp
from ..errors import BisectionBudgetExceeded, WrongClassification
from ..model import GameSpec, receiver_strategy, sender_strategy
from ..participation import Classification, acceptance_set, participation_structure
from ..ratlp import AffineFn, LpStatus, ONE, Polytope, ZERO, combine
from .basic import _partitional
from .result import Equilibrium, Kind, pad_messages, subset_message, verified

CANDIDATE_BUDGET = 128


def _support_line(family, point) -> tuple[Fraction, Fraction]:
    """The affine map t -> family(t)(point) as (intercept, slope)."""
    a = family(ZERO)(point)
    return a, family(ONE)(point) - a


def value_function_kinks(P: Polytope, family, lo: Fraction, hi: Fraction) -> list[Fraction]:
    """Exact kinks of t -> max_{x in P} family(t)(x) on [lo, hi].

    family(t) must be affine in t.  Chord search: supporting lines at both
    ends either coincide with the value function on the whole interval or
    their intersection exposes a new supporting line to recurse on.
    """

    def value_and_line(t):
        out = ratlp.maximize(family(t), P)
        if out.status is not LpStatus.OPTIMAL:
            raise AssertionError("kink search requires a feasible bounded polytope")
        return out.value, _support_line(family, out.point)

    kinks: set[Fraction] = set()

    def recurse(lo, line_lo, hi, line_hi):
        if line_lo == line_hi:
            return
        (a1, b1), (a2, b2) = line_lo, line_hi
        if b1 == b2:
            raise AssertionError("distinct parallel supporting lines cannot both touch")
        tx = (a2 - a1) / (b1 - b2)
        if tx <= lo or tx >= hi:
            return
        v, line_x = value_and_line(tx)
        if v == a1 + b1 * tx:
            kinks.add(tx)
            return
        recurse(lo, line_lo, tx, line_x)
        recurse(tx, line_x, hi, line_hi)

    _, line_lo = value_and_line(lo)
    _, line_hi = value_and_line(hi)
    recurse(lo, line_lo, hi, line_hi)
    return sorted(kinks)


def _roles(g: GameSpec):
    ps = participation_structure(g)
    if ps.classification is not Classification.CHAIN3:
        raise WrongClassification("the mixed construction needs two maximal pairs sharing a pivot")
    pivot = ps.pivot()
    others = sorted(set(range(3)) - {pivot})
    return pivot, others[0], others[1]


def mixed_three(g: GameSpec) -> Equilibrium:
    """Pure escape if one pair partition is incentive compatible, else the
    exact pivot-indifference split."""
    pivot, a, b = _roles(g)
    P, A, B = g.prior[pivot], g.prior[a], g.prior[b]
    u_raw = g.sender_u[pivot]
    # reservation utilities are translated away for the pivot comparisons
    util = AffineFn(u_raw.coeffs, u_raw.constant - g.reserve[pivot])
    neg_util = util.scaled(-1)
    v = g.receiver_v

    x_pa = acceptance_set(g, (pivot, a))
    x_pb = acceptance_set(g, (pivot, b))

    def posterior_q(t):
        w = [ZERO] * 3
        w[pivot] = (1 - t) * P / (P + A)
        w[a] = t + (1 - t) * A / (P + A)
        return tuple(w)

    def posterior_q2(t):
        d = A * B + t * P
        w = [ZERO] * 3
        w[pivot] = t * P * (P + A) / d
        w[b] = B * (A + t * P) / d
        return tuple(w)

    # pure escape: separate a, pool {pivot, b}
    cond_a = combine([P / (P + B), B / (P + B)], [v[pivot], v[b]])
    x_alone_a = ratlp.lex_maximize(v[a], neg_util, acceptance_set(g, (a,))).point
    x_pool_pb = ratlp.lex_maximize(cond_a, util, x_pb).point
    if util(x_alone_a) <= util(x_pool_pb):
        return _escape(g, pivot, (a,), x_alone_a, (pivot, b), x_pool_pb)

    # pure escape: separate b, pool {pivot, a}
    cond_b = combine([P / (P + A), A / (P + A)], [v[pivot], v[a]])
    x_pool_pa = ratlp.lex_maximize(cond_b, util, x_pa).point
    x_alone_b = ratlp.lex_maximize(v[b], neg_util, acceptance_set(g, (b,))).point
    if util(x_pool_pa) >= util(x_alone_b):
        return _escape(g, pivot, (b,), x_alone_b, (pivot, a), x_pool_pa)

    # indifference search on the posterior segments
    family_q = lambda t: combine(posterior_q(t), v)

    def family_q2(t):
        # scaled by the positive denominator of the second posterior so the
        # objective stays affine in t without changing any argmax
        w = [ZERO] * 3
        w[pivot] = t * P * (P + A)
        w[b] = B * (A + t * P)
        return combine(w, v)

    kinks = sorted(set(value_function_kinks(x_pa, family_q, ZERO, ONE))
                   | set(value_function_kinks(x_pb, family_q2, ZERO, ONE)))
    grid = [ZERO] + [t for t in kinks if 0 < t < 1] + [ONE]
    candidates = []
    for left, right in zip(grid, grid[1:]):
        candidates.append((left + right) / 2)
        if right != 1:
            candidates.append(right)
    if len(candidates) > CANDIDATE_BUDGET:
        raise BisectionBudgetExceeded(
            f"{len(candidates)} indifference candidates exceed the budget", bracket=(ZERO, ONE))

    for t in candidates:
        eq = _try_indifference(g, pivot, a, b, t, x_pa, x_pb,
                               family_q(t), family_q2(t), posterior_q(t), posterior_q2(t),
                               util)
        if eq is not None:
            return eq
    raise BisectionBudgetExceeded(
        "no candidate achieved exact pivot indifference", bracket=(ZERO, ONE))


def _escape(g: GameSpec, pivot, alone, x_alone, pooled, x_pooled) -> Equilibrium:
    labels = {subset_message(g, alone): x_alone, subset_message(g, pooled): x_pooled}
    eq = _partitional(g, [alone, pooled], "mixed-three", proposals=labels,
                      kind=Kind.PARTITIONAL)
    eq.metadata["pivot"] = g.type_names[pivot]
    eq.metadata["pure_escape"] = True
    return eq


def _try_indifference(g, pivot, a, b, t, x_pa, x_pb, obj_q, obj_q2, q, q2, util):
    """Feasibility of a pivot-indifferent pair on the two optimal faces at t."""
    phi = ratlp.maximize(obj_q, x_pa).value
    psi = ratlp.maximize(obj_q2, x_pb).value
    n = g.n
    pad = (ZERO,) * n
    rows = [(tuple(c) + pad, rhs) for c, rhs in x_pa.rows]
    rows += [(pad + tuple(c), rhs) for c, rhs in x_pb.rows]
    joint = Polytope(2 * n, tuple(rows))
    joint = joint.with_equality(AffineFn(obj_q.coeffs + pad, obj_q.constant), phi)
    joint = joint.with_equality(AffineFn(pad + obj_q2.coeffs, obj_q2.constant), psi)
    joint = joint.with_equality(
        AffineFn(util.coeffs + tuple(-c for c in util.coeffs)), ZERO)
    out = ratlp.feasible(joint)
    if out.status is not LpStatus.OPTIMAL:
        return None
    x, y = out.point[:n], out.point[n:]

    m_q = subset_message(g, (pivot, a))
    m_q2 = subset_message(g, (pivot, b))
    lam = g.prior[a] / q[a]
    mix_q = lam * q[pivot] / g.prior[pivot]
    labels = [m_q, m_q2]
    tau_map = {m_q: x, m_q2: y}
    labels, tau_map = pad_messages(labels, tau_map, g.k, m_q)
    rows = []
    for k in range(g.k):
        if k == pivot:
            row = [mix_q, 1 - mix_q] + [0] * (len(labels) - 2)
        elif k == a:
            row = [1, 0] + [0] * (len(labels) - 2)
        else:
            row = [0, 1] + [0] * (len(labels) - 2)
        rows.append(row)
    sigma = sender_strategy(labels, rows)
    tau = receiver_strategy([(m, tau_map[m]) for m in labels])
    return verified(g, Kind.MIXED, "mixed-three", sigma, tau, metadata={
        "pivot": g.type_names[pivot],
        "t": t,
        "posteriors": (q, q2),
        "indifference_payoff": g.sender_u[pivot](x),
    })
