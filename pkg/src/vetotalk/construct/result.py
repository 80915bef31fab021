"""Constructed-equilibrium container and the self-verification gate."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from ..errors import ConstructionError
from ..model import GameSpec, MediatedMechanism, ReceiverStrategy, SenderStrategy
from ..verify import CheckReport, check_limit_equilibrium


class Kind(Enum):
    NONREVEALING = "nonrevealing"
    FULLY_REVEALING = "fully-revealing"
    PARTITIONAL = "partitional"
    MIXED = "mixed"
    MEDIATED = "mediated"


@dataclass(frozen=True)
class Equilibrium:
    kind: Kind
    provenance: str
    sigma: Optional[SenderStrategy] = None
    tau: Optional[ReceiverStrategy] = None
    mechanism: Optional[MediatedMechanism] = None
    report: object = None
    metadata: dict = field(default_factory=dict)


def verified(g: GameSpec, kind: Kind, provenance: str, sigma: SenderStrategy,
             tau: ReceiverStrategy, metadata: Optional[dict] = None) -> Equilibrium:
    """Run the limit-game checker on a freshly built profile.

    Constructors must never hand back a failing profile; a red report here
    is a bug in the construction, not a result.
    """
    report = check_limit_equilibrium(g, sigma, tau)
    if not report.overall:
        raise ConstructionError(
            f"{provenance} produced a profile that fails its own check: {report}"
        )
    return Equilibrium(kind=kind, provenance=provenance, sigma=sigma, tau=tau,
                       report=report, metadata=metadata or {})


def pad_messages(labels: list[str], proposals: dict, k: int, repeat_of: str):
    """Extend a message list to the model-required length |M| >= |K|.

    Padding messages repeat an on-path proposal, which never creates new
    profitable deviations.
    """
    i = 0
    while len(labels) < k:
        pad = f"pad{i}"
        while pad in labels:
            i += 1
            pad = f"pad{i}"
        labels.append(pad)
        proposals[pad] = proposals[repeat_of]
        i += 1
    return labels, proposals


def subset_message(g: GameSpec, types) -> str:
    """Messages are named after the type subset they announce."""
    return "m[" + ",".join(g.type_names[k] for k in sorted(types)) + "]"
