"""Constructive equilibrium procedures and the dispatcher."""

from .basic import monotone_interval_eq, nonrevealing, partition_structure_eq, two_type
from .dispatch import DEFAULT_GRID_RESOLUTION, SolveResult, solve
from .envy import EnvyGraph, envy_graph, leader_follower, split_leaders
from .grid import enumerate_vertices, grid_mixed_search
from .mediated import MediatedCheckReport, check_mediated, mediated_three
from .mixed import mixed_three, value_function_kinks
from .result import Equilibrium, Kind

__all__ = [
    "DEFAULT_GRID_RESOLUTION",
    "Equilibrium",
    "EnvyGraph",
    "Kind",
    "MediatedCheckReport",
    "SolveResult",
    "check_mediated",
    "enumerate_vertices",
    "envy_graph",
    "grid_mixed_search",
    "leader_follower",
    "mediated_three",
    "mixed_three",
    "monotone_interval_eq",
    "nonrevealing",
    "partition_structure_eq",
    "solve",
    "split_leaders",
    "two_type",
    "value_function_kinks",
]
