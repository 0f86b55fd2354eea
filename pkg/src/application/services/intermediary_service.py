"""
Intermediário confiável (AL).

Cada cliente recebe fisicamente um drive com um pad exclusivo entre ele e AL.
AL autentica clientes por desafio-resposta consumindo bits do pad e pode
repassar mensagens entre clientes, decifrando com o pad do remetente e
recifrando com o do destinatário.

O ponto fraco muda de lugar: com um insider comprometido dentro de AL, todo
texto claro transitório vai parar com Eve.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np

from src.application.dto.transcript_schema import Actor, EventKind
from src.application.services.otp_service import mask, new_pad, unmask
from src.domain.entities.eve import EveState
from src.domain.entities.pad import PadStore
from src.domain.exceptions import DuplicateCustomer, PadExhausted, PadReuse, UnknownCustomer, ZeroPad
from src.infrastructure.simulation.channels import Channels
from src.shared.utils.bits import BitsLike, as_bits, bits_to_str
from src.shared.utils.random_source import RandomSource

logger = logging.getLogger(__name__)

DEFAULT_CHALLENGE_BITS = 64
DEFAULT_PASSWORD_BITS = 32


class CredentialKind(str, Enum):
    PAD = "pad"
    PASSWORD = "password"


@dataclass
class CustomerRecord:
    customer_id: str
    pad: PadStore
    drive: PadStore
    registered_at: int
    credential: CredentialKind = CredentialKind.PAD
    password: Optional[np.ndarray] = field(default=None, repr=False)
    actor: Actor = Actor.SYSTEM


@dataclass(frozen=True)
class Challenge:
    """Parte pública de um desafio. O texto claro fica guardado dentro de AL."""
    customer_id: str
    masked: np.ndarray
    offset: Optional[int]


@dataclass(frozen=True)
class Delivery:
    event_index: int
    recipient_id: str
    ciphertext: np.ndarray
    offset: int


Responder = Callable[[Challenge], np.ndarray]


class IntermediaryService:

    def __init__(
        self,
        channels: Channels,
        rng: RandomSource,
        *,
        insider_compromised: bool = False,
        eve: Optional[EveState] = None,
        credential: CredentialKind = CredentialKind.PAD,
        challenge_bits: int = DEFAULT_CHALLENGE_BITS,
        password_bits: int = DEFAULT_PASSWORD_BITS,
    ):
        if insider_compromised and eve is None:
            raise ValueError("Insider comprometido exige um EveState para receber os vazamentos.")
        self.channels = channels
        self.rng = rng
        self.insider_compromised = insider_compromised
        self.eve = eve
        self.credential = credential
        self.challenge_bits = challenge_bits
        self.password_bits = password_bits
        self.customers: dict[str, CustomerRecord] = {}
        self.relay_log: list[int] = []
        self._pending: dict[str, np.ndarray] = {}
        self._emitidos: dict[str, int] = {}

    # =====================================================
    # CADASTRO (visita física ao provedor)
    # =====================================================

    def register(self, customer_id: str, pad_size_bits: int, actor: Actor = Actor.SYSTEM) -> CustomerRecord:
        if customer_id in self.customers:
            raise DuplicateCustomer(f"Cliente '{customer_id}' já cadastrado.")
        if pad_size_bits < 1:
            raise ZeroPad(f"Pad de {pad_size_bits} bits para '{customer_id}': mínimo é 1.")

        pad = new_pad(self.rng.for_path("pad", customer_id), pad_size_bits, owner=Actor.AL.value)
        password = None
        if self.credential is CredentialKind.PASSWORD:
            password = self.rng.for_path("password", customer_id).bits(self.password_bits)

        # Só metadados vão para o canal; os bits seguem pelo drive físico
        evento = self.channels.classical.publish(
            Actor.AL,
            EventKind.REGISTRATION,
            f"customer={customer_id} pad_bits={pad_size_bits} credential={self.credential.value}",
        )
        record = CustomerRecord(
            customer_id=customer_id,
            pad=pad,
            drive=pad.copy_for(customer_id),
            registered_at=evento.index,
            credential=self.credential,
            password=password,
            actor=actor,
        )
        self.customers[customer_id] = record
        logger.info("Cliente '%s' cadastrado com pad de %d bits", customer_id, pad_size_bits)
        return record

    def get(self, customer_id: str) -> CustomerRecord:
        try:
            return self.customers[customer_id]
        except KeyError:
            raise UnknownCustomer(f"Cliente '{customer_id}' não cadastrado.") from None

    # =====================================================
    # AUTENTICAÇÃO
    # =====================================================

    def issue_challenge(self, customer_id: str) -> Challenge:
        """
        Desafio novo mascarado com o credencial do cliente. No modo pad os bits
        usados são consumidos; no modo senha a mesma senha mascara todo login.
        """
        record = self.get(customer_id)
        serie = self._emitidos.get(customer_id, 0)
        self._emitidos[customer_id] = serie + 1
        desafio = self.rng.for_path("challenge", customer_id, serie).bits(self.challenge_bits)
        if record.credential is CredentialKind.PAD:
            offset: Optional[int] = record.pad.consumed
            masked = mask(record.pad, desafio)
            publico = f"customer={customer_id} offset={offset} masked={bits_to_str(masked)}"
        else:
            offset = None
            masked = np.bitwise_xor(desafio, np.resize(record.password, len(desafio)))
            publico = f"customer={customer_id} masked={bits_to_str(masked)}"

        self._pending[customer_id] = desafio
        self.channels.classical.publish(Actor.AL, EventKind.AUTH_CHALLENGE, publico)
        if self.insider_compromised:
            self.eve.leak_challenge(customer_id, desafio)  # type: ignore[union-attr]
            self.channels.system(EventKind.INSIDER_LEAK, f"customer={customer_id} what=challenge")
        return Challenge(customer_id=customer_id, masked=masked, offset=offset)

    def verify(self, customer_id: str, challenge: Challenge, response: BitsLike) -> bool:
        """Confere a resposta contra o desafio pendente; cada desafio vale uma única vez."""
        esperado = self._pending.pop(customer_id, None)
        resposta = as_bits(response)
        ok = (
            esperado is not None
            and challenge.customer_id == customer_id
            and len(resposta) == len(esperado)
            and bool(np.array_equal(resposta, esperado))
        )
        self.channels.classical.publish(
            Actor.AL, EventKind.AUTH_RESULT, f"customer={customer_id} ok={str(ok).lower()}"
        )
        if not ok:
            logger.warning("Autenticação de '%s' falhou", customer_id)
        return ok

    # =====================================================
    # RETRANSMISSÃO
    # =====================================================

    def relay(
        self,
        sender_id: str,
        recipient_id: str,
        ciphertext: BitsLike,
        offset: Optional[int] = None,
    ) -> Delivery:
        """
        Decifra com o pad do remetente e recifra com o do destinatário. O texto
        claro existe só aqui dentro, exceto quando o insider o entrega a Eve.
        """
        remetente = self.get(sender_id)
        destinatario = self.get(recipient_id)
        cifrado = as_bits(ciphertext)
        n = len(cifrado)

        inicio = remetente.pad.consumed if offset is None else offset
        if inicio < remetente.pad.consumed:
            raise PadReuse(
                f"Offset {inicio} já consumido (cursor em {remetente.pad.consumed}) no pad de '{sender_id}'."
            )
        if inicio + n > len(remetente.pad) or destinatario.pad.remaining < n:
            raise PadExhausted(
                f"Pad insuficiente para retransmitir {n} bits de '{sender_id}' para '{recipient_id}'."
            )

        self.channels.classical.publish(
            remetente.actor, EventKind.RELAY_IN,
            f"from={sender_id} to={recipient_id} offset={inicio} ciphertext={bits_to_str(cifrado)}",
        )
        claro = unmask(remetente.pad, cifrado, inicio)
        if self.insider_compromised:
            self.eve.leak_plaintext(claro)  # type: ignore[union-attr]
            self.channels.system(EventKind.INSIDER_LEAK, f"from={sender_id} to={recipient_id} what=plaintext")

        saida_offset = destinatario.pad.consumed
        saida = mask(destinatario.pad, claro)
        evento = self.channels.classical.publish(
            Actor.AL, EventKind.RELAY_OUT,
            f"to={recipient_id} offset={saida_offset} ciphertext={bits_to_str(saida)}",
        )
        self.relay_log.append(evento.index)
        logger.info("AL retransmitiu %d bits de '%s' para '%s'", n, sender_id, recipient_id)
        return Delivery(event_index=evento.index, recipient_id=recipient_id, ciphertext=saida, offset=saida_offset)


# ================================================================
# PARTES AUTÊNTICAS
# ================================================================

def customer_responder(record: CustomerRecord) -> Responder:
    """Resposta do cliente legítimo, usando o drive ou a senha que recebeu no cadastro."""

    def responder(challenge: Challenge) -> np.ndarray:
        if record.credential is CredentialKind.PAD:
            return np.bitwise_xor(challenge.masked, record.drive.take(len(challenge.masked), challenge.offset))
        return np.bitwise_xor(challenge.masked, np.resize(record.password, len(challenge.masked)))

    return responder


def authenticate_peer(service: IntermediaryService, customer_id: str, responder: Responder,
                      actor: Optional[Actor] = None) -> bool:
    """Handshake completo: AL desafia `customer_id` e quem estiver na linha responde."""
    desafio = service.issue_challenge(customer_id)
    resposta = as_bits(responder(desafio))
    quem = actor if actor is not None else service.get(customer_id).actor
    service.channels.classical.publish(
        quem, EventKind.AUTH_RESPONSE, f"customer={customer_id} response={bits_to_str(resposta)}"
    )
    return service.verify(customer_id, desafio, resposta)


def send_via_intermediary(service: IntermediaryService, sender_id: str, recipient_id: str,
                          message: BitsLike) -> np.ndarray:
    """Mensagem ponta a ponta via AL; devolve o que o destinatário decifra."""
    remetente = service.get(sender_id)
    destinatario = service.get(recipient_id)
    offset = remetente.drive.consumed
    cifrado = mask(remetente.drive, message)
    entrega = service.relay(sender_id, recipient_id, cifrado, offset)
    return unmask(destinatario.drive, entrega.ciphertext, entrega.offset)
