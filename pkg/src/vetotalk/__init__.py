"""Exact equilibrium computation for sender-receiver games with an
approval/veto stage for the sender."""

from . import construct, errors, model, participation, ratlp, threshold, verify
from .construct import Equilibrium, Kind, SolveResult, solve
from .model import (
    GameSpec,
    MediatedMechanism,
    PosteriorTable,
    ReceiverStrategy,
    SenderStrategy,
    approval_payoff,
    game,
    posteriors,
    receiver_payoff_v0,
    receiver_strategy,
    sender_strategy,
    v0_bound,
)
from .participation import Classification, ParticipationStructure, acceptance_set, participation_structure
from .ratlp import AffineFn, LpOutcome, LpStatus, Polytope, Rational, affine, polytope, rat
from .threshold import ThresholdReport, best_partitional_value, exit_threshold, mechanism_bound
from .verify import (
    CheckReport,
    check_limit_equilibrium,
    check_v0_equilibrium,
    receiver_best_with_exit,
)

__version__ = "0.1.0"
