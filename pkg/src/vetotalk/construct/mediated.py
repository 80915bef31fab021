"""Mediated equilibrium for three types whose pairs are all serviceable.

A mediator collects a type report and recommends, with equal probability,
one of the two pair-optimal decisions involving the reported type.  Lying
routes half the probability to the pair excluding the true type, whose
decision the sender then vetoes; maximality of the pairs makes the veto
branch bite, so truth-telling is optimal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .. import ratlp
from ..errors import WrongClassification
from ..model import GameSpec, MediatedMechanism
from ..participation import Classification, acceptance_set, participation_structure
from ..ratlp import ZERO, combine, rat
from .result import Equilibrium, Kind


@dataclass(frozen=True)
class MediatedCheckReport:
    truth_telling_ok: bool
    truth_violations: tuple[tuple[int, int, Fraction], ...]
    obedience_ok: bool
    obedience_gaps: tuple[tuple[tuple[int, int], Fraction], ...]
    overall: bool
    interim_sender_payoffs: tuple[Fraction, ...]
    receiver_ex_ante: Fraction


def _veto_value(g: GameSpec, k: int, lottery) -> Fraction:
    """Expected sender payoff when each recommended decision can be vetoed."""
    return sum((p * max(g.sender_u[k](x), g.reserve[k]) for p, x in lottery), ZERO)


def check_mediated(g: GameSpec, mech: MediatedMechanism,
                   pair_decisions=None) -> MediatedCheckReport:
    """Veto-incentive compatibility for the sender, obedience for the receiver."""
    truth_violations = []
    for k in range(g.k):
        truthful = _veto_value(g, k, mech.lottery(k))
        for r in range(g.k):
            if r == k:
                continue
            gap = _veto_value(g, k, mech.lottery(r)) - truthful
            if gap > 0:
                truth_violations.append((k, r, gap))

    obedience_gaps = []
    if pair_decisions is not None:
        for pair, x in sorted(pair_decisions.items()):
            weights = [g.prior[k] / sum(g.prior[j] for j in pair) for k in pair]
            objective = combine(weights, [g.receiver_v[k] for k in pair])
            best = ratlp.maximize(objective, acceptance_set(g, pair))
            obedience_gaps.append((pair, best.value - objective(x)))
    obedience_ok = all(gap == 0 for _, gap in obedience_gaps)

    interim = tuple(_veto_value(g, k, mech.lottery(k)) for k in range(g.k))
    ex_ante = ZERO
    for k in range(g.k):
        for p, x in mech.lottery(k):
            if g.sender_u[k](x) >= g.reserve[k]:
                ex_ante += g.prior[k] * p * g.receiver_v[k](x)
            # a vetoed branch contributes the exit payoff, which the limit
            # game sends to minus infinity; truthful mechanisms never hit it
    ok = not truth_violations
    return MediatedCheckReport(
        truth_telling_ok=ok,
        truth_violations=tuple(truth_violations),
        obedience_ok=obedience_ok,
        obedience_gaps=tuple(obedience_gaps),
        overall=ok and obedience_ok,
        interim_sender_payoffs=interim,
        receiver_ex_ante=ex_ante,
    )


def mediated_three(g: GameSpec) -> Equilibrium:
    """Equal-probability pair mechanism for the all-pairs participation structure."""
    ps = participation_structure(g)
    if ps.classification is not Classification.PAIRWISE3:
        raise WrongClassification("the mediated construction needs all three pairs serviceable")
    half = rat("1/2")
    pair_decisions = {}
    for pair in combinations(range(3), 2):
        weights = [g.prior[k] / sum(g.prior[j] for j in pair) for k in pair]
        out = ratlp.maximize(combine(weights, [g.receiver_v[k] for k in pair]),
                             acceptance_set(g, pair))
        pair_decisions[pair] = out.point
    lotteries = []
    for k in range(3):
        pairs = sorted(p for p in pair_decisions if k in p)
        lotteries.append(tuple((half, pair_decisions[p]) for p in pairs))
    mech = MediatedMechanism(tuple(lotteries))
    report = check_mediated(g, mech, pair_decisions)
    if not report.overall:
        raise AssertionError("the pair mechanism must self-verify on this structure")
    return Equilibrium(kind=Kind.MEDIATED, provenance="mediated-three",
                       mechanism=mech, report=report,
                       metadata={"pair_decisions": {p: x for p, x in sorted(pair_decisions.items())}})
