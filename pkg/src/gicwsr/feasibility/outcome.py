from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class FeasibilityOutcome:
    """Decision on an SINR target plus a witness allocation when feasible.

    ``witness`` is a dict: ``{"p": ...}`` for SISO, ``{"p": ..., "W": ...}``
    for SIMO and ``{"V": ...}`` for MISO.
    """

    feasible: bool
    witness: Optional[dict] = None
    info: dict = field(default_factory=dict)

    def __bool__(self):
        return self.feasible
