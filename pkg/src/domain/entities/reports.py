from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Optional

import numpy as np


class AbortReason(str, Enum):
    EAVESDROPPER_SUSPECTED = "EavesdropperSuspected"
    AMBIGUOUS_PARAMETER = "AmbiguousParameter"
    CHECKSUM_MISMATCH = "ChecksumMismatch"
    AUTHENTICATION_FAILED = "AuthenticationFailed"


# Nenhum ângulo passou no teste de m rodadas: mesmo aborto, outro nome
EXHAUSTED_CANDIDATES = AbortReason.EAVESDROPPER_SUSPECTED


@dataclass
class SessionReport:
    """
    Resultado medido de uma sessão. `eve_known_fraction` vem sempre do estado
    real do simulador, nunca do que Eve declara.
    """
    established: bool
    shared_index: Optional[int]
    discovery_rounds_used: int
    qber: float
    checksum_ok: bool
    eve_known_fraction: float
    aborted_reason: Optional[str]
    rounds_per_test: int
    confidence: float
    key_length: int

    def __post_init__(self):
        if self.established and not self.checksum_ok:
            raise ValueError("Sessão estabelecida exige checksum_ok.")
        for nome in ("qber", "eve_known_fraction"):
            valor = getattr(self, nome)
            if not (0.0 <= valor <= 1.0):
                raise ValueError(f"{nome} = {valor} fora de [0, 1]")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class MitmReport:
    completed: bool
    alice_leg: Optional[SessionReport]
    bob_leg: Optional[SessionReport]
    eve_plaintext_fraction: float
    pads_match: Optional[bool]
    blocked_reason: Optional[str] = None
    # O que Bob decifrou da mensagem retransmitida por Eve
    delivered: Optional[np.ndarray] = field(default=None, repr=False)

    def as_session_report(self, rounds_per_test: int, confidence: float, key_length: int) -> SessionReport:
        """Resume as duas pernas em um SessionReport do ponto de vista de Alice e Bob."""
        if not self.completed or self.alice_leg is None or self.bob_leg is None:
            return SessionReport(
                established=False,
                shared_index=None,
                discovery_rounds_used=0,
                qber=0.0,
                checksum_ok=False,
                eve_known_fraction=0.0,
                aborted_reason=self.blocked_reason,
                rounds_per_test=rounds_per_test,
                confidence=confidence,
                key_length=key_length,
            )
        a, b = self.alice_leg, self.bob_leg
        return SessionReport(
            established=a.established and b.established,
            shared_index=a.shared_index,
            discovery_rounds_used=a.discovery_rounds_used + b.discovery_rounds_used,
            qber=max(a.qber, b.qber),
            checksum_ok=a.checksum_ok and b.checksum_ok,
            eve_known_fraction=self.eve_plaintext_fraction,
            aborted_reason=a.aborted_reason or b.aborted_reason,
            rounds_per_test=rounds_per_test,
            confidence=confidence,
            key_length=key_length,
        )
