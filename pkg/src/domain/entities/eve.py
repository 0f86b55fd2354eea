from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from src.application.dto.transcript_schema import Event
from src.domain.entities.pad import PadStore
from src.domain.entities.quantum import MeasurementAngle


@dataclass(frozen=True)
class MeasuredBit:
    round: int
    qubit_id: int
    angle: MeasurementAngle
    bit: int


@dataclass
class EveState:
    """Tudo o que Eve observou ou obteve durante um cenário."""
    classical_log: list[Event] = field(default_factory=list)
    measured_bits: list[MeasuredBit] = field(default_factory=list)
    impersonation_pads: Optional[tuple[PadStore, PadStore]] = None
    recovered_plaintexts: list[np.ndarray] = field(default_factory=list)
    leaked_challenges: dict[str, list[np.ndarray]] = field(default_factory=dict)

    def observe(self, event: Event) -> None:
        self.classical_log.append(event)

    def leak_challenge(self, customer_id: str, challenge: np.ndarray) -> None:
        self.leaked_challenges.setdefault(customer_id, []).append(challenge.copy())

    def leak_plaintext(self, plaintext: np.ndarray) -> None:
        self.recovered_plaintexts.append(plaintext.copy())
