"""Acceptance sets X(L) and the participation structure.

The participation structure is the family of inclusion-maximal type subsets
whose joint acceptance set is nonempty.  For three types it is classified
into the shapes that drive the constructive procedures: a partition, the
three pairs, or two pairs sharing a pivot type.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Sequence

from . import ratlp
from .errors import EmptySubset, TooManyTypes
from .model import GameSpec, acceptance_polytope
from .ratlp import LpStatus, Polytope

MAX_TYPES = 16


class Classification(Enum):
    PARTITION = "partition"
    PAIRWISE3 = "pairwise3"
    CHAIN3 = "chain3"
    OTHER = "other"


@dataclass(frozen=True)
class ParticipationStructure:
    maximal: tuple[tuple[int, ...], ...]
    classification: Classification

    def pivot(self) -> int:
        """The type shared by both pairs of a chain structure."""
        if self.classification is not Classification.CHAIN3:
            raise ValueError("pivot is only defined for a two-pair chain")
        a, b = self.maximal
        (shared,) = set(a) & set(b)
        return shared


def acceptance_set(g: GameSpec, types: Sequence[int]) -> Polytope:
    """X(L): decisions every type in L weakly prefers to its outside option."""
    types = tuple(types)
    if not types:
        raise EmptySubset("acceptance set of the empty subset is not defined")
    return acceptance_polytope(g, types)


def _classify(k: int, maximal) -> Classification:
    covered = sorted(set().union(*map(set, maximal)))
    disjoint = sum(len(s) for s in maximal) == len(covered)
    if disjoint and covered == list(range(k)):
        return Classification.PARTITION
    if k != 3:
        return Classification.OTHER
    sets = {frozenset(s) for s in maximal}
    pairs = {frozenset(p) for p in combinations(range(3), 2)}
    if sets == pairs:
        return Classification.PAIRWISE3
    if len(sets) == 2 and all(len(s) == 2 for s in sets):
        a, b = sets
        if len(a & b) == 1:
            return Classification.CHAIN3
    return Classification.OTHER


def participation_structure(g: GameSpec) -> ParticipationStructure:
    """Inclusion-maximal feasible subsets, enumerated with downward pruning."""
    k = g.k
    if k > MAX_TYPES:
        raise TooManyTypes(f"subset enumeration is capped at {MAX_TYPES} types")
    feasible: set[frozenset[int]] = set()
    by_size: list[list[frozenset[int]]] = [[]]
    for size in range(1, k + 1):
        layer = []
        for combo in combinations(range(k), size):
            s = frozenset(combo)
            if size > 1 and any(s - {t} not in feasible for t in combo):
                continue
            if size == 1 or ratlp.feasible(acceptance_set(g, combo)).status is LpStatus.OPTIMAL:
                feasible.add(s)
                layer.append(s)
        by_size.append(layer)
    maximal = []
    for s in sorted(feasible, key=lambda s: (len(s), sorted(s))):
        if not any(s < other for other in feasible):
            maximal.append(tuple(sorted(s)))
    maximal.sort()
    return ParticipationStructure(tuple(maximal), _classify(k, maximal))
