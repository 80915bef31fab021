"""Dispatcher: try every applicable construction in a fixed order."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..errors import BisectionBudgetExceeded
from ..model import GameSpec
from ..participation import Classification, participation_structure
from .basic import monotone_interval_eq, nonrevealing, partition_structure_eq, two_type
from .envy import leader_follower
from .grid import grid_mixed_search
from .mediated import mediated_three
from .mixed import mixed_three
from .result import Equilibrium

DEFAULT_GRID_RESOLUTION = 60


@dataclass(frozen=True)
class SolveResult:
    equilibrium: Optional[Equilibrium]
    attempts: tuple[tuple[str, str], ...]

    @property
    def resolved(self) -> bool:
        return self.equilibrium is not None


def solve(g: GameSpec, grid_resolution: int = DEFAULT_GRID_RESOLUTION) -> SolveResult:
    """First applicable construction wins; the attempt log records the rest."""
    attempts = []
    ps = participation_structure(g)

    eq = nonrevealing(g)
    if eq is not None:
        return SolveResult(eq, tuple(attempts + [("nonrevealing", "equilibrium")]))
    attempts.append(("nonrevealing", "no joint acceptance set"))

    if g.k == 2:
        return SolveResult(two_type(g), tuple(attempts + [("two-type", "equilibrium")]))
    attempts.append(("two-type", "skipped: not a two-type game"))

    if ps.classification is Classification.PARTITION:
        return SolveResult(partition_structure_eq(g),
                           tuple(attempts + [("partition-structure", "equilibrium")]))
    attempts.append(("partition-structure", "skipped: structure is not a partition"))

    if g.n == 1:
        return SolveResult(monotone_interval_eq(g),
                           tuple(attempts + [("monotone-interval", "equilibrium")]))
    attempts.append(("monotone-interval", "skipped: decision set is not one-dimensional"))

    if g.private_values:
        return SolveResult(leader_follower(g),
                           tuple(attempts + [("leader-follower", "equilibrium")]))
    attempts.append(("leader-follower", "skipped: receiver utility is type-dependent"))

    if ps.classification is Classification.CHAIN3:
        try:
            return SolveResult(mixed_three(g),
                               tuple(attempts + [("mixed-three", "equilibrium")]))
        except BisectionBudgetExceeded as exc:
            attempts.append(("mixed-three", f"failed: {exc}"))
    else:
        attempts.append(("mixed-three", "skipped: structure is not a two-pair chain"))

    if ps.classification is Classification.PAIRWISE3:
        return SolveResult(mediated_three(g),
                           tuple(attempts + [("mediated-three", "equilibrium")]))
    attempts.append(("mediated-three", "skipped: not all three pairs serviceable"))

    if g.k == 3:
        eq = grid_mixed_search(g, grid_resolution)
        if eq is not None:
            return SolveResult(eq, tuple(attempts + [("grid-search", "equilibrium")]))
        attempts.append(("grid-search", f"not found at resolution {grid_resolution}"))
    else:
        attempts.append(("grid-search", "skipped: grid search covers three types only"))

    return SolveResult(None, tuple(attempts))
