"""Bridge between the limit game and the finite-exit game.

For a no-exit equilibrium, computes the largest exit payoff at which the
receiver still prefers full participation at every on-path posterior, and
the mechanism-design bound under which the receiver cannot do better by
letting any type walk away.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

from . import ratlp
from .construct.basic import _partition_kind, build_partitional_profile
from .construct.result import Equilibrium
from .errors import (
    NoPartitionalEquilibrium,
    NotAnEquilibrium,
    NotAPartition,
    TooManyTypes,
)
from .model import GameSpec, ReceiverStrategy, SenderStrategy, v0_bound
from .participation import acceptance_set
from .ratlp import LpStatus, ZERO, combine
from .verify import check_limit_equilibrium

MAX_PARTITION_TYPES = 8


@dataclass(frozen=True)
class ThresholdReport:
    """Exit thresholds of a no-exit profile.

    per_message holds the tightest exit-deviation bound at each on-path
    posterior (None marks a message with no binding alternative); deviation
    is their minimum, admissibility the model bound min_k min_x V^k, and
    overall the minimum of the two.
    """

    per_message: tuple[tuple[str, Optional[Fraction]], ...]
    deviation: Optional[Fraction]
    admissibility: Fraction
    overall: Fraction
    bound: Optional[Fraction] = None


def exit_threshold(g: GameSpec, sigma: SenderStrategy, tau: ReceiverStrategy) -> ThresholdReport:
    """Per-message and overall thresholds for a limit-game equilibrium.

    For every strict subset L of a posterior support with X(L) nonempty, the
    no-exit proposal must beat the L-optimal value plus v0 on the excluded
    mass; solving each inequality for v0 and taking minima gives the bound.
    """
    report = check_limit_equilibrium(g, sigma, tau)
    if not report.overall:
        raise NotAnEquilibrium("the profile fails the limit-game check")
    per_message = []
    for entry in report.posterior_table.entries:
        lhs = combine(entry.belief, g.receiver_v)(tau.decision(entry.message))
        best = None
        for size in range(len(entry.support)):
            for combo in combinations(entry.support, size):
                exit_mass = sum((entry.belief[k] for k in entry.support if k not in combo), ZERO)
                if combo:
                    out = ratlp.maximize(
                        combine([entry.belief[k] for k in combo],
                                [g.receiver_v[k] for k in combo]),
                        acceptance_set(g, combo))
                    if out.status is not LpStatus.OPTIMAL:
                        continue
                    val = out.value
                else:
                    val = ZERO
                cap = (lhs - val) / exit_mass
                if best is None or cap < best:
                    best = cap
        per_message.append((entry.message, best))
    bounds = [b for _, b in per_message if b is not None]
    deviation = min(bounds) if bounds else None
    admissibility = v0_bound(g)
    overall = admissibility if deviation is None else min(deviation, admissibility)
    return ThresholdReport(
        per_message=tuple(per_message),
        deviation=deviation,
        admissibility=admissibility,
        overall=overall,
    )


def _set_partitions(n: int):
    """All set partitions of range(n) via restricted growth strings."""
    a = [0] * n
    while True:
        blocks: dict[int, list[int]] = {}
        for i, label in enumerate(a):
            blocks.setdefault(label, []).append(i)
        yield [tuple(blocks[label]) for label in sorted(blocks)]
        i = n - 1
        while i > 0:
            if a[i] <= max(a[:i]):
                break
            i -= 1
        if i == 0:
            return
        a[i] += 1
        for j in range(i + 1, n):
            a[j] = 0


def best_partitional_value(g: GameSpec) -> tuple[Fraction, Equilibrium]:
    """Receiver-optimal partitional equilibrium by exhaustive partition search."""
    if g.k > MAX_PARTITION_TYPES:
        raise TooManyTypes(f"partition enumeration is capped at {MAX_PARTITION_TYPES} types")
    best = None
    for cells in _set_partitions(g.k):
        try:
            sigma, tau, cells = build_partitional_profile(g, cells)
        except NotAPartition:
            continue
        report = check_limit_equilibrium(g, sigma, tau)
        if not report.overall:
            continue
        value = report.receiver_ex_ante
        if best is None or value > best[0]:
            eq = Equilibrium(kind=_partition_kind(cells), provenance="partition-enumeration",
                             sigma=sigma, tau=tau, report=report,
                             metadata={"partition": tuple(cells)})
            best = (value, eq)
    if best is None:
        raise NoPartitionalEquilibrium("no partition of the types yields an equilibrium")
    return best


def mechanism_bound(g: GameSpec, v_star: Fraction) -> Fraction:
    """Exit payoff below which no with-exit outcome can beat v_star.

    Uses the single worst case: only the least likely type exits while the
    receiver earns his global maximum on everyone else.
    """
    v_bar = max(ratlp.maximize(v, g.X).value for v in g.receiver_v)
    p_min = min(g.prior)
    return (v_star - (1 - p_min) * v_bar) / p_min
