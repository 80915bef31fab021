"""Game data model: types, prior, acceptance, posteriors and payoffs.

A game couples a bounded polytope of decisions with affine sender and
receiver utilities per type, strictly positive prior and per-type
reservation utilities.  All model assumptions are validated exactly at
construction time; violating objects cannot exist.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from . import ratlp
from .errors import (
    DecisionOutsideX,
    DimensionMismatch,
    RowMismatch,
    V0TooHigh,
    ValidationError,
)
from .ratlp import AffineFn, LpStatus, Polytope, ZERO, dot, rat, vec


@dataclass(frozen=True)
class GameSpec:
    """All primitives of a sender-approval game.

    private_values is derived (never user-asserted): it is true iff every
    receiver utility has identical coefficients and constant.
    """

    n: int
    type_names: tuple[str, ...]
    prior: tuple[Fraction, ...]
    reserve: tuple[Fraction, ...]
    X: Polytope
    sender_u: tuple[AffineFn, ...]
    receiver_v: tuple[AffineFn, ...]
    private_values: bool = field(init=False, compare=True)

    def __post_init__(self):
        k = len(self.type_names)
        if k == 0:
            raise ValidationError("a game needs at least one type")
        if len(set(self.type_names)) != k:
            raise ValidationError("type names must be unique")
        for name, seq in (("prior", self.prior), ("reserve", self.reserve),
                          ("sender_u", self.sender_u), ("receiver_v", self.receiver_v)):
            if len(seq) != k:
                raise ValidationError(f"{name} must have one entry per type")
        if self.X.dim != self.n:
            raise DimensionMismatch("decision set dimension does not match n")
        for f in self.sender_u + self.receiver_v:
            if len(f.coeffs) != self.n:
                raise DimensionMismatch("utility arity does not match the decision dimension")
        if any(p <= 0 for p in self.prior):
            raise ValidationError("prior must be strictly positive on every type")
        if sum(self.prior) != 1:
            raise ValidationError("prior must sum to one")
        if not ratlp.is_bounded(self.X):
            raise ValidationError("decision set must be bounded")
        if ratlp.feasible(self.X).status is not LpStatus.OPTIMAL:
            raise ValidationError("decision set must be nonempty")
        for idx, name in enumerate(self.type_names):
            if ratlp.feasible(acceptance_polytope(self, (idx,))).status is not LpStatus.OPTIMAL:
                raise ValidationError(f"no acceptable decision for type {name}")
        object.__setattr__(self, "private_values",
                           all(v == self.receiver_v[0] for v in self.receiver_v))

    @property
    def k(self) -> int:
        return len(self.type_names)

    def type_index(self, name: str) -> int:
        try:
            return self.type_names.index(name)
        except ValueError:
            raise ValidationError(f"unknown type name {name!r}") from None


def game(n, type_names, prior, reserve, X, sender_u, receiver_v) -> GameSpec:
    """Convenience constructor accepting ints/strings for all rationals."""
    return GameSpec(
        n=n,
        type_names=tuple(type_names),
        prior=vec(prior),
        reserve=vec(reserve),
        X=X,
        sender_u=tuple(sender_u),
        receiver_v=tuple(receiver_v),
    )


def acceptance_polytope(g: GameSpec, types: Sequence[int]) -> Polytope:
    """X intersected with {U^k(x) >= u0^k} for each listed type index."""
    extra = []
    for k in types:
        u = g.sender_u[k]
        extra.append((tuple(-c for c in u.coeffs), u.constant - g.reserve[k]))
    return g.X.with_rows(extra)


@dataclass(frozen=True)
class SenderStrategy:
    """Type -> distribution over a finite ordered message list."""

    messages: tuple[str, ...]
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(set(self.messages)) != len(self.messages):
            raise ValidationError("message labels must be unique")
        if len(self.messages) < len(self.rows):
            raise ValidationError("the message list must be at least as long as the type list")
        for row in self.rows:
            if len(row) != len(self.messages):
                raise ValidationError("every strategy row needs one entry per message")
            if any(p < 0 for p in row):
                raise ValidationError("message probabilities must be nonnegative")
            if sum(row) != 1:
                raise ValidationError("every strategy row must sum to one")

    @property
    def is_partitional(self) -> bool:
        return all(all(p in (0, 1) for p in row) for row in self.rows)

    def prob(self, message: str, k: int) -> Fraction:
        return self.rows[k][self.messages.index(message)]


def sender_strategy(messages, rows) -> SenderStrategy:
    return SenderStrategy(tuple(messages), tuple(vec(r) for r in rows))


@dataclass(frozen=True)
class ReceiverStrategy:
    """Message -> proposed decision."""

    proposals: tuple[tuple[str, tuple[Fraction, ...]], ...]

    def __post_init__(self):
        labels = [m for m, _ in self.proposals]
        if len(set(labels)) != len(labels):
            raise ValidationError("duplicate message in receiver strategy")

    def decision(self, message: str) -> tuple[Fraction, ...]:
        for m, x in self.proposals:
            if m == message:
                return x
        raise KeyError(message)

    @property
    def messages(self) -> tuple[str, ...]:
        return tuple(m for m, _ in self.proposals)


def receiver_strategy(proposals) -> ReceiverStrategy:
    if hasattr(proposals, "items"):
        proposals = proposals.items()
    return ReceiverStrategy(tuple((m, vec(x)) for m, x in proposals))


def validate_profile(g: GameSpec, sigma: SenderStrategy, tau: ReceiverStrategy):
    """Exact well-formedness of (sigma, tau) against the game."""
    if len(sigma.rows) != g.k:
        raise RowMismatch(f"strategy has {len(sigma.rows)} rows for {g.k} types")
    if len(sigma.messages) < g.k:
        raise ValidationError("the model requires at least as many messages as types")
    for m, x in tau.proposals:
        if len(x) != g.n:
            raise DimensionMismatch(f"proposal for {m!r} has the wrong dimension")
        if not g.X.contains(x):
            raise DecisionOutsideX(f"proposal for {m!r} lies outside the decision set")


@dataclass(frozen=True)
class PosteriorEntry:
    message: str
    mass: Fraction
    belief: tuple[Fraction, ...]
    support: tuple[int, ...]


@dataclass(frozen=True)
class PosteriorTable:
    entries: tuple[PosteriorEntry, ...]

    def by_message(self, message: str) -> PosteriorEntry:
        for e in self.entries:
            if e.message == message:
                return e
        raise KeyError(message)

    @property
    def messages(self) -> tuple[str, ...]:
        return tuple(e.message for e in self.entries)


def posteriors(g: GameSpec, sigma: SenderStrategy) -> PosteriorTable:
    """Exact Bayes update per message; zero-mass messages are omitted."""
    if len(sigma.rows) != g.k:
        raise RowMismatch(f"strategy has {len(sigma.rows)} rows for {g.k} types")
    entries = []
    for j, m in enumerate(sigma.messages):
        mass = sum((g.prior[k] * sigma.rows[k][j] for k in range(g.k)), ZERO)
        if mass == 0:
            continue
        belief = tuple(g.prior[k] * sigma.rows[k][j] / mass for k in range(g.k))
        support = tuple(k for k in range(g.k) if belief[k] > 0)
        entries.append(PosteriorEntry(m, mass, belief, support))
    return PosteriorTable(tuple(entries))


def approval_payoff(g: GameSpec, k: int, x: Sequence[Fraction]) -> Fraction:
    """Sender payoff with the approval stage folded in: max{U^k(x), u0^k}."""
    x = vec(x)
    if not g.X.contains(x):
        raise DecisionOutsideX("decision lies outside the decision set")
    return max(g.sender_u[k](x), g.reserve[k])


@lru_cache(maxsize=None)
def v0_bound(g: GameSpec) -> Fraction:
    """Largest admissible exit payoff for the receiver: min_k min_x V^k(x)."""
    worst = None
    for v in g.receiver_v:
        out = ratlp.maximize(v.scaled(-1), g.X)
        low = -out.value
        if worst is None or low < worst:
            worst = low
    return worst


def receiver_payoff_v0(g: GameSpec, k: int, x: Sequence[Fraction], v0) -> Fraction:
    """Receiver payoff against type k when exit is worth v0 to him."""
    v0 = rat(v0)
    if v0 > v0_bound(g):
        raise V0TooHigh(f"exit payoff {v0} exceeds the admissible bound {v0_bound(g)}")
    x = vec(x)
    if not g.X.contains(x):
        raise DecisionOutsideX("decision lies outside the decision set")
    if g.sender_u[k](x) >= g.reserve[k]:
        return g.receiver_v[k](x)
    return v0


@dataclass(frozen=True)
class MediatedMechanism:
    """Per reported type, a finite lottery over decisions."""

    lotteries: tuple[tuple[tuple[Fraction, tuple[Fraction, ...]], ...], ...]

    def __post_init__(self):
        for lot in self.lotteries:
            if any(p < 0 for p, _ in lot):
                raise ValidationError("lottery probabilities must be nonnegative")
            if sum((p for p, _ in lot), ZERO) != 1:
                raise ValidationError("every lottery must sum to one")

    def lottery(self, k: int):
        return self.lotteries[k]

    def mean_decision(self, k: int) -> tuple[Fraction, ...]:
        n = len(self.lotteries[k][0][1])
        out = [ZERO] * n
        for p, x in self.lotteries[k]:
            for i, xi in enumerate(x):
                out[i] += p * xi
        return tuple(out)
