"""
Canais simulados de uma sessão.

- QuantumChannel: transfere a posse de um qubit (o handle do remetente morre)
  e aplica o gancho de ataque em trânsito, se houver.
- ClassicalChannel: publica mensagens no transcript e entrega uma cópia de
  cada evento a todos os observadores (Eve, quando presente).
"""

from dataclasses import dataclass
from typing import Callable, Optional

from src.application.dto.transcript_schema import Actor, ChannelKind, Event, EventKind
from src.application.services.quantum_service import QuantumRegistry
from src.domain.entities.quantum import Qubit
from src.domain.exceptions import ChannelClosed, SendingDeadQubit
from src.infrastructure.simulation.transcript import EventObserver, Transcript

QubitTap = Callable[[Qubit], Qubit]


class QuantumChannel:

    def __init__(self, registry: QuantumRegistry, transcript: Transcript, tap: Optional[QubitTap] = None):
        self.registry = registry
        self.transcript = transcript
        self.tap = tap
        self.closed = False

    def send_qubit(self, q: Qubit, sender: Actor) -> Qubit:
        """Entrega ao destinatário um handle vivo (possivelmente substituído pelo ataque)."""
        if self.closed:
            raise ChannelClosed("Canal quântico fechado.")
        if not q.alive:
            raise SendingDeadQubit(f"Qubit {q.id} não tem handle vivo para envio.")
        em_transito = self.registry.transfer(q)
        self.transcript.record(sender, ChannelKind.QUANTUM, EventKind.QUBIT_SENT, f"qubit={q.id}")
        if self.tap is not None:
            em_transito = self.tap(em_transito)
        return em_transito

    def close(self) -> None:
        self.closed = True


class ClassicalChannel:

    def __init__(self, transcript: Transcript):
        self.transcript = transcript
        self._observers: list[EventObserver] = []
        self.closed = False

    def attach(self, observer: EventObserver) -> None:
        self._observers.append(observer)

    def publish(self, actor: Actor, kind: EventKind, payload: str = "") -> Event:
        if self.closed:
            raise ChannelClosed("Canal clássico fechado.")
        event = self.transcript.record(actor, ChannelKind.CLASSICAL, kind, payload)
        for observer in self._observers:
            observer(event)
        return event

    def close(self) -> None:
        self.closed = True


@dataclass
class Channels:
    """Par de canais de uma sessão, com o registro quântico e o transcript compartilhados."""
    quantum: QuantumChannel
    classical: ClassicalChannel
    registry: QuantumRegistry
    transcript: Transcript

    @classmethod
    def open(
        cls,
        registry: Optional[QuantumRegistry] = None,
        transcript: Optional[Transcript] = None,
        tap: Optional[QubitTap] = None,
    ) -> "Channels":
        if registry is None:
            registry = QuantumRegistry()
        if transcript is None:
            transcript = Transcript()
        return cls(
            quantum=QuantumChannel(registry, transcript, tap),
            classical=ClassicalChannel(transcript),
            registry=registry,
            transcript=transcript,
        )

    def system(self, kind: EventKind, payload: str = "") -> Event:
        """Evento de bastidor do simulador (fora da visão de Eve)."""
        return self.transcript.record(Actor.SYSTEM, ChannelKind.OOB, kind, payload)

    def close(self) -> None:
        self.quantum.close()
        self.classical.close()
