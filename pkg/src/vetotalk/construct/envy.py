"""Leader/follower construction for type-independent receiver utility.

Each type gets the receiver-optimal decision inside its own acceptance set
(ties broken toward the type's own utility).  A type envies another when it
strictly prefers the other's decision; the envy relation is acyclic, and
walking the receiver-value levels from worst to best splits the types into
leaders, who announce themselves, and followers, who pool with the leader
they envy most.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .. import ratlp
from ..errors import NotPrivateValues
from ..model import GameSpec, receiver_strategy, sender_strategy
from ..participation import acceptance_set
from .result import Equilibrium, Kind, pad_messages, verified


@dataclass(frozen=True)
class EnvyGraph:
    best_decisions: tuple[tuple[Fraction, ...], ...]
    edges: frozenset[tuple[int, int]]
    levels: tuple[tuple[Fraction, tuple[int, ...]], ...]
    leaders: tuple[int, ...]
    followers: tuple[int, ...]


def split_leaders(level_groups, envied_by):
    """Walk the value levels in ascending order.

    A type joins the followers exactly when it envies a type already made a
    leader; types on the same level cannot envy each other, so the order
    inside a level does not matter.
    """
    leaders: list[int] = []
    followers: list[int] = []
    for group in level_groups:
        for k in sorted(group):
            if envied_by.get(k, frozenset()) & set(leaders):
                followers.append(k)
            else:
                leaders.append(k)
    return tuple(sorted(leaders)), tuple(sorted(followers))


def envy_graph(g: GameSpec) -> EnvyGraph:
    """Best per-type decisions, envy edges, value levels and the leader split."""
    if not g.private_values:
        raise NotPrivateValues("the leader/follower construction needs a common receiver utility")
    v = g.receiver_v[0]
    best = []
    for k in range(g.k):
        out = ratlp.lex_maximize(v, g.sender_u[k], acceptance_set(g, (k,)))
        best.append(out.point)
    edges = frozenset(
        (k, j)
        for k in range(g.k)
        for j in range(g.k)
        if k != j and g.sender_u[k](best[j]) > g.sender_u[k](best[k])
    )
    values = sorted({v(x) for x in best})
    levels = tuple(
        (alpha, tuple(k for k in range(g.k) if v(best[k]) == alpha)) for alpha in values
    )
    envied_by = {k: frozenset(j for kk, j in edges if kk == k) for k in range(g.k)}
    leaders, followers = split_leaders([grp for _, grp in levels], envied_by)
    return EnvyGraph(tuple(best), edges, levels, leaders, followers)


def leader_follower(g: GameSpec) -> Equilibrium:
    """Leaders announce themselves; followers pool with their favourite envied leader."""
    graph = envy_graph(g)
    labels = [f"m[{g.type_names[k]}]" for k in graph.leaders]
    by_leader = {k: i for i, k in enumerate(graph.leaders)}
    assignment = {}
    for k in graph.leaders:
        assignment[k] = by_leader[k]
    envied_by = {k: [j for kk, j in sorted(graph.edges) if kk == k] for k in range(g.k)}
    for k in graph.followers:
        candidates = [j for j in envied_by[k] if j in by_leader]
        best_u = max(g.sender_u[k](graph.best_decisions[j]) for j in candidates)
        target = min(j for j in candidates
                     if g.sender_u[k](graph.best_decisions[j]) == best_u)
        assignment[k] = by_leader[target]
    tau_map = {labels[i]: graph.best_decisions[graph.leaders[i]] for i in range(len(labels))}
    labels, tau_map = pad_messages(list(labels), tau_map, g.k, labels[0])
    rows = [[1 if assignment[k] == j else 0 for j in range(len(labels))] for k in range(g.k)]
    sigma = sender_strategy(labels, rows)
    tau = receiver_strategy([(m, tau_map[m]) for m in labels])
    if len(graph.leaders) == 1:
        kind = Kind.NONREVEALING
    elif len(graph.leaders) == g.k:
        kind = Kind.FULLY_REVEALING
    else:
        kind = Kind.PARTITIONAL
    return verified(g, kind, "leader-follower", sigma, tau,
                    metadata={"leaders": graph.leaders, "followers": graph.followers})
