"""Direct partitional constructions: pooling, two types, partition
structures and one-dimensional monotone games."""

from __future__ import annotations

from typing import Optional

from .. import ratlp
from ..errors import NotAPartition, NotOneDimensional, WrongTypeCount
from ..model import GameSpec, receiver_strategy, sender_strategy
from ..participation import Classification, acceptance_set, participation_structure
from ..ratlp import LpStatus, ZERO, combine
from .result import Equilibrium, Kind, pad_messages, subset_message, verified


def _cell_posterior(g: GameSpec, cell) -> list:
    mass = sum((g.prior[k] for k in cell), ZERO)
    return [g.prior[k] / mass for k in cell]


def build_partitional_profile(g: GameSpec, cells, proposals=None):
    """Pure sigma revealing the cell; tau optimal on each cell unless given.

    Raises NotAPartition when some cell has an empty acceptance set; the
    returned profile is NOT verified.
    """
    cells = [tuple(sorted(c)) for c in cells]
    labels = [subset_message(g, c) for c in cells]
    tau_map = {}
    for c, label in zip(cells, labels):
        if proposals is not None and label in proposals:
            tau_map[label] = proposals[label]
            continue
        out = ratlp.maximize(
            combine(_cell_posterior(g, c), [g.receiver_v[k] for k in c]),
            acceptance_set(g, c))
        if out.status is not LpStatus.OPTIMAL:
            raise NotAPartition(f"cell {c} has an empty acceptance set")
        tau_map[label] = out.point
    rows = []
    for k in range(g.k):
        (j,) = [i for i, c in enumerate(cells) if k in c]
        rows.append([1 if i == j else 0 for i in range(len(labels))])
    labels, tau_map = pad_messages(list(labels), tau_map, g.k, labels[0])
    rows = [row + [0] * (len(labels) - len(row)) for row in rows]
    sigma = sender_strategy(labels, rows)
    tau = receiver_strategy([(m, tau_map[m]) for m in labels])
    return sigma, tau, cells


def _partition_kind(cells) -> Kind:
    if len(cells) == 1:
        return Kind.NONREVEALING
    if all(len(c) == 1 for c in cells):
        return Kind.FULLY_REVEALING
    return Kind.PARTITIONAL


def _partitional(g: GameSpec, cells, provenance: str,
                 proposals=None, kind: Optional[Kind] = None) -> Equilibrium:
    sigma, tau, cells = build_partitional_profile(g, cells, proposals)
    return verified(g, kind or _partition_kind(cells), provenance, sigma, tau,
                    metadata={"partition": tuple(cells)})


def nonrevealing(g: GameSpec) -> Optional[Equilibrium]:
    """Pooling equilibrium when every type can participate at once, else None."""
    full = tuple(range(g.k))
    if ratlp.feasible(acceptance_set(g, full)).status is not LpStatus.OPTIMAL:
        return None
    return _partitional(g, [full], "nonrevealing")


def two_type(g: GameSpec) -> Equilibrium:
    """With two types: pool if both can participate, otherwise fully reveal."""
    if g.k != 2:
        raise WrongTypeCount("this construction requires exactly two types")
    eq = nonrevealing(g)
    if eq is not None:
        return Equilibrium(kind=eq.kind, provenance="two-type", sigma=eq.sigma,
                           tau=eq.tau, report=eq.report, metadata=eq.metadata)
    return _partitional(g, [(0,), (1,)], "two-type")


def partition_structure_eq(g: GameSpec) -> Equilibrium:
    """Reveal the participation cell when the maximal sets partition the types."""
    ps = participation_structure(g)
    if ps.classification is not Classification.PARTITION:
        raise NotAPartition("the participation structure is not a partition")
    return _partitional(g, ps.maximal, "partition-structure")


def monotone_interval_eq(g: GameSpec) -> Equilibrium:
    """One-dimensional decisions with monotone sender utilities.

    Decreasing types pool against increasing-or-constant types; the two
    acceptance sets are subintervals meeting only if everyone can be served
    at once, in which case the pooling construction applies.
    """
    if g.n != 1:
        raise NotOneDimensional("this construction requires a one-dimensional decision set")
    eq = nonrevealing(g)
    if eq is not None:
        return Equilibrium(kind=eq.kind, provenance="monotone-interval", sigma=eq.sigma,
                           tau=eq.tau, report=eq.report, metadata=eq.metadata)
    decreasing = tuple(k for k in range(g.k) if g.sender_u[k].coeffs[0] < 0)
    other = tuple(k for k in range(g.k) if g.sender_u[k].coeffs[0] >= 0)
    if not decreasing or not other:
        raise AssertionError("one-directional games always admit pooling")
    return _partitional(g, [decreasing, other], "monotone-interval")
