"""Equilibrium condition checkers with exact violation witnesses.

Two checkers are provided: one for the limit game (exit is impossible, so a
profile must be without exit and the receiver optimises inside the
acceptance set of each posterior support) and one for the finite-exit game,
where the receiver may prefer to let some types walk away.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from . import ratlp
from .errors import MessageUndefined, TooManyTypes
from .model import (
    GameSpec,
    PosteriorTable,
    ReceiverStrategy,
    SenderStrategy,
    posteriors,
    validate_profile,
)
from .participation import MAX_TYPES, acceptance_set
from .ratlp import LpStatus, ZERO, combine, rat


@dataclass(frozen=True)
class CheckReport:
    """Per-condition verdicts with exact witnesses.

    For the limit game, overall is the conjunction of all three verdicts.
    For the exit game, no_exit_ok only reports whether some type exits on
    path (exit_types); an equilibrium there may legitimately involve exit,
    so overall conjoins the incentive and receiver-optimality verdicts.
    """

    no_exit_ok: bool
    exit_violations: tuple[tuple[int, str], ...]
    constrained_opt_ok: bool
    optimality_gaps: tuple[tuple[str, Fraction], ...]
    incentive_ok: bool
    incentive_violations: tuple[tuple[int, str, str, Fraction], ...]
    overall: bool
    interim_sender_payoffs: tuple[Fraction, ...]
    receiver_ex_ante: Fraction
    posterior_table: PosteriorTable
    exit_types: tuple[int, ...] = ()


def _require_total(sigma: SenderStrategy, tau: ReceiverStrategy):
    missing = [m for m in sigma.messages if m not in tau.messages]
    if missing:
        raise MessageUndefined(f"receiver strategy misses messages {missing}")


def check_limit_equilibrium(g: GameSpec, sigma: SenderStrategy,
                            tau: ReceiverStrategy) -> CheckReport:
    """No-exit, constrained-optimization and incentive conditions, exactly."""
    validate_profile(g, sigma, tau)
    _require_total(sigma, tau)
    table = posteriors(g, sigma)

    exit_violations = []
    gaps = []
    for entry in table.entries:
        x = tau.decision(entry.message)
        for k in entry.support:
            if g.sender_u[k](x) < g.reserve[k]:
                exit_violations.append((k, entry.message))
        objective = combine(entry.belief, g.receiver_v)
        best = ratlp.maximize(objective, acceptance_set(g, entry.support))
        if best.status is not LpStatus.OPTIMAL:
            continue  # empty support set: already witnessed by exit_violations
        gaps.append((entry.message, best.value - objective(x)))

    incentive_violations = []
    for k in range(g.k):
        u = g.sender_u[k]
        for j, m in enumerate(sigma.messages):
            if sigma.rows[k][j] == 0:
                continue
            own = u(tau.decision(m))
            for m2 in sigma.messages:
                gap = u(tau.decision(m2)) - own
                if gap > 0:
                    incentive_violations.append((k, m, m2, gap))

    interim = tuple(
        sum((sigma.rows[k][j] * g.sender_u[k](tau.decision(m))
             for j, m in enumerate(sigma.messages)), ZERO)
        for k in range(g.k)
    )
    ex_ante = sum(
        (entry.mass * combine(entry.belief, g.receiver_v)(tau.decision(entry.message))
         for entry in table.entries), ZERO)

    no_exit_ok = not exit_violations
    opt_ok = all(gap == 0 for _, gap in gaps) and len(gaps) == len(table.entries)
    ic_ok = not incentive_violations
    return CheckReport(
        no_exit_ok=no_exit_ok,
        exit_violations=tuple(exit_violations),
        constrained_opt_ok=opt_ok,
        optimality_gaps=tuple(gaps),
        incentive_ok=ic_ok,
        incentive_violations=tuple(incentive_violations),
        overall=no_exit_ok and opt_ok and ic_ok,
        interim_sender_payoffs=interim,
        receiver_ex_ante=ex_ante,
        posterior_table=table,
    )


@dataclass(frozen=True)
class ExitBestResponse:
    value: Fraction
    decision: tuple[Fraction, ...]
    exit_set: tuple[int, ...]


def receiver_best_with_exit(g: GameSpec, belief: Sequence[Fraction], v0) -> ExitBestResponse:
    """Best receiver value at a belief when rejecting types are worth v0.

    Maximises, over every subset L of the belief support with X(L) nonempty,
    the L-weighted receiver utility plus v0 times the excluded mass.  Ties
    prefer larger participation, then earlier subsets in lexicographic order.
    """
    v0 = rat(v0)
    belief = tuple(rat(b) for b in belief)
    support = tuple(k for k in range(len(belief)) if belief[k] > 0)
    if len(support) > MAX_TYPES:
        raise TooManyTypes(f"exit-set enumeration is capped at {MAX_TYPES} types")
    best = None
    for size in range(len(support), -1, -1):
        for combo in combinations(support, size):
            exit_mass = sum((belief[k] for k in support if k not in combo), ZERO)
            if combo:
                out = ratlp.maximize(combine([belief[k] for k in combo],
                                             [g.receiver_v[k] for k in combo]),
                                     acceptance_set(g, combo))
                if out.status is not LpStatus.OPTIMAL:
                    continue
                value, decision = out.value + v0 * exit_mass, out.point
            else:
                value = v0 * exit_mass
                decision = ratlp.feasible(g.X).point
            if best is None or value > best.value:
                best = ExitBestResponse(value, decision,
                                        tuple(k for k in support if k not in combo))
    return best


def check_v0_equilibrium(g: GameSpec, v0, sigma: SenderStrategy,
                         tau: ReceiverStrategy) -> CheckReport:
    """Equilibrium conditions of the exit game at the given v0.

    Sender comparisons use the approval-stage payoff max{U, u0}; the receiver
    must match the best exit-aware response at every on-path posterior.
    """
    v0 = rat(v0)
    validate_profile(g, sigma, tau)
    _require_total(sigma, tau)
    table = posteriors(g, sigma)

    exiting = []
    gaps = []
    for entry in table.entries:
        x = tau.decision(entry.message)
        achieved = ZERO
        for k in entry.support:
            if g.sender_u[k](x) >= g.reserve[k]:
                achieved += entry.belief[k] * g.receiver_v[k](x)
            else:
                achieved += entry.belief[k] * v0
                exiting.append((k, entry.message))
        best = receiver_best_with_exit(g, entry.belief, v0)
        gaps.append((entry.message, best.value - achieved))

    incentive_violations = []
    plus = lambda k, x: max(g.sender_u[k](x), g.reserve[k])
    for k in range(g.k):
        for j, m in enumerate(sigma.messages):
            if sigma.rows[k][j] == 0:
                continue
            own = plus(k, tau.decision(m))
            for m2 in sigma.messages:
                gap = plus(k, tau.decision(m2)) - own
                if gap > 0:
                    incentive_violations.append((k, m, m2, gap))

    interim = tuple(
        sum((sigma.rows[k][j] * plus(k, tau.decision(m))
             for j, m in enumerate(sigma.messages)), ZERO)
        for k in range(g.k)
    )
    ex_ante = ZERO
    for entry in table.entries:
        x = tau.decision(entry.message)
        for k in entry.support:
            w = g.receiver_v[k](x) if g.sender_u[k](x) >= g.reserve[k] else v0
            ex_ante += entry.mass * entry.belief[k] * w

    exit_types = tuple(sorted({k for k, _ in exiting}))
    opt_ok = all(gap == 0 for _, gap in gaps)
    ic_ok = not incentive_violations
    return CheckReport(
        no_exit_ok=not exiting,
        exit_violations=tuple(exiting),
        constrained_opt_ok=opt_ok,
        optimality_gaps=tuple(gaps),
        incentive_ok=ic_ok,
        incentive_violations=tuple(incentive_violations),
        overall=opt_ok and ic_ok,
        interim_sender_payoffs=interim,
        receiver_ex_ante=ex_ante,
        posterior_table=table,
        exit_types=exit_types,
    )
