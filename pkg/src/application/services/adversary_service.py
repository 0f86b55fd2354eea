"""
Capacidades de Eve.

- Monitoramento passivo: cópia de toda mensagem do canal clássico.
- Intercept-resend: mede o qubit em trânsito e reenvia um qubit novo preparado
  no ângulo e bit que obteve. Nunca existe cópia do original.
- MITM: roda o protocolo inteiro com Alice (fingindo ser Bob) e com Bob
  (fingindo ser Alice), retransmitindo cada mensagem.

Também ficam aqui os oráculos em forma fechada usados por testes e sweeps.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.application.dto.transcript_schema import Actor, ChannelKind, EventKind
from src.application.services.intermediary_service import Challenge, IntermediaryService, Responder, authenticate_peer
from src.application.services.otp_service import mask, unmask
from src.application.services.protocol_service import ProtocolConfig, ProtocolSession, checksum
from src.application.services.quantum_service import QuantumRegistry
from src.domain.entities.attack import AnglePolicy, AttackKind, AttackType
from src.domain.entities.eve import EveState, MeasuredBit
from src.domain.entities.quantum import AngleSet, MeasurementAngle, Qubit, agreement_probability
from src.domain.entities.reports import AbortReason, MitmReport
from src.infrastructure.simulation.channels import Channels
from src.infrastructure.simulation.transcript import Transcript
from src.shared.utils.bits import BitsLike, as_bits, bits_to_str
from src.shared.utils.random_source import RandomSource

logger = logging.getLogger(__name__)


# ================================================================
# INTERCEPT-RESEND
# ================================================================

def intercept_resend(
    registry: QuantumRegistry, q: Qubit, eve_angle: MeasurementAngle, rng: RandomSource
) -> tuple[int, Qubit]:
    """Mede `q` em `eve_angle`, consome o handle original e devolve um qubit novo com o resultado."""
    eve_bit = registry.measure(q, eve_angle, rng)
    registry.destroy(q)
    return eve_bit, registry.prepare(eve_angle, eve_bit)


@dataclass
class InterceptResendTap:
    """Gancho instalado no canal quântico; registra cada medição no EveState."""
    registry: QuantumRegistry
    transcript: Transcript
    eve: EveState
    angle_set: AngleSet
    policy: AnglePolicy
    rng: RandomSource

    def _angulo(self) -> MeasurementAngle:
        if self.policy.uniform:
            return self.angle_set[self.rng.index(self.angle_set.k)]
        return self.policy.fixed_angle  # type: ignore[return-value]

    def __call__(self, q: Qubit) -> Qubit:
        angulo = self._angulo()
        original = q.id
        bit, reenviado = intercept_resend(self.registry, q, angulo, self.rng)
        self.eve.measured_bits.append(
            MeasuredBit(round=len(self.eve.measured_bits), qubit_id=original, angle=angulo, bit=bit)
        )
        self.transcript.record(
            Actor.EVE, ChannelKind.QUANTUM, EventKind.QUBIT_RESENT, f"qubit={original} replaced_by={reenviado.id}"
        )
        return reenviado


def open_attacked_channels(
    attack: AttackKind,
    angle_set: AngleSet,
    rng: RandomSource,
    transcript: Optional[Transcript] = None,
) -> tuple[Channels, Optional[EveState]]:
    """Canais de uma sessão com Eve (se houver) já conectada ao canal clássico e ao quântico."""
    registry = QuantumRegistry()
    if transcript is None:
        transcript = Transcript()
    if not attack.eve_present:
        return Channels.open(registry, transcript), None

    eve = EveState()
    tap = None
    if attack.type is AttackType.INTERCEPT_RESEND:
        tap = InterceptResendTap(registry, transcript, eve, angle_set, attack.policy, rng.for_path("eve"))
    channels = Channels.open(registry, transcript, tap)
    channels.classical.attach(eve.observe)
    logger.debug("Eve conectada: %s", attack)
    return channels, eve


# ================================================================
# ORÁCULOS EM FORMA FECHADA
# ================================================================

def agreement_under_attack(
    alice_angle: MeasurementAngle, bob_angle: MeasurementAngle, eve_angle: MeasurementAngle
) -> float:
    """P(Bob = Alice) quando Eve mede em `eve_angle` e reenvia: c_ae·c_eb + (1−c_ae)(1−c_eb)."""
    c_ae = agreement_probability(alice_angle, eve_angle)
    c_eb = agreement_probability(eve_angle, bob_angle)
    return c_ae * c_eb + (1.0 - c_ae) * (1.0 - c_eb)


def _angulos_de_eve(policy: AnglePolicy, angle_set: Optional[AngleSet]) -> list[MeasurementAngle]:
    if not policy.uniform:
        return [policy.fixed_angle]  # type: ignore[list-item]
    if angle_set is None:
        raise ValueError("Política uniforme exige o conjunto de ângulos.")
    return list(angle_set.angles)


def per_round_agreement_under_attack(
    theta_ab: MeasurementAngle, policy: AnglePolicy, angle_set: Optional[AngleSet] = None
) -> float:
    """Concordância por rodada quando Alice e Bob usam o mesmo ângulo; média no conjunto se uniforme."""
    valores = [agreement_under_attack(theta_ab, theta_ab, e) for e in _angulos_de_eve(policy, angle_set)]
    return float(np.mean(valores))


def discovery_pass_probability(
    cfg: ProtocolConfig, alice_index: int, bob_index: int, policy: Optional[AnglePolicy] = None
) -> float:
    """Probabilidade de um candidato completar m concordâncias seguidas (sem ataque se policy=None)."""
    a, b = cfg.angle_set[alice_index], cfg.angle_set[bob_index]
    if policy is None:
        por_rodada = agreement_probability(a, b)
    else:
        por_rodada = float(np.mean([agreement_under_attack(a, b, e) for e in _angulos_de_eve(policy, cfg.angle_set)]))
    return por_rodada ** cfg.rounds_per_test


# ================================================================
# SENHA CURTA REUTILIZADA
# ================================================================

def _campos(payload: str) -> dict[str, str]:
    return dict(parte.split("=", 1) for parte in payload.split() if "=" in parte)


def replay_password_login(eve: EveState, customer_id: str, masked_challenge: BitsLike) -> Optional[np.ndarray]:
    """
    Melhor resposta de Eve a partir de logins já observados: senha = desafio
    mascarado ⊕ resposta em claro. Sem login observado devolve None.
    """
    pendente: Optional[np.ndarray] = None
    senha: Optional[np.ndarray] = None
    for evento in eve.classical_log:
        campos = _campos(evento.payload_summary)
        if campos.get("customer") != customer_id:
            continue
        if evento.kind is EventKind.AUTH_CHALLENGE and "offset" not in campos:
            pendente = as_bits(campos["masked"])
        elif evento.kind is EventKind.AUTH_RESPONSE and pendente is not None:
            resposta = as_bits(campos["response"])
            if len(resposta) == len(pendente):
                senha = np.bitwise_xor(pendente, resposta)
            pendente = None
    if senha is None:
        return None
    alvo = as_bits(masked_challenge)
    return np.bitwise_xor(alvo, np.resize(senha, len(alvo)))


def eve_challenge_responder(eve: EveState, customer_id: str, rng: RandomSource) -> Responder:
    """Eve respondendo no lugar de `customer_id`: vazamento do insider, replay de senha ou chute."""

    def responder(challenge: Challenge) -> np.ndarray:
        vazados = eve.leaked_challenges.get(customer_id)
        if vazados:
            return vazados[-1]
        if challenge.offset is None:
            replay = replay_password_login(eve, customer_id, challenge.masked)
            if replay is not None:
                return replay
        return rng.bits(len(challenge.masked))

    return responder


# ================================================================
# MAN-IN-THE-MIDDLE
# ================================================================

def mitm_run(
    cfg: ProtocolConfig,
    seed: int,
    *,
    service: Optional[IntermediaryService] = None,
    message: Optional[BitsLike] = None,
    channels: Optional[Channels] = None,
    eve: Optional[EveState] = None,
) -> MitmReport:
    """
    Eve no meio de Alice e Bob. Com `service`, cada lado exige que AL
    autentique o outro antes da troca de chave; Eve só passa se o insider
    tiver vazado os desafios.
    """
    rng = RandomSource(seed)
    if channels is None:
        channels = Channels.open()
    if eve is None:
        eve = EveState()
        channels.classical.attach(eve.observe)
    eve_rng = rng.for_path("eve")

    channels.system(EventKind.MITM_STATUS, f"mode=mitm authentication={'on' if service else 'off'}")

    if service is not None:
        # Alice pede a AL que autentique "bob"; Bob pede o mesmo sobre "alice". Eve responde aos dois
        for alvo in ("bob", "alice"):
            if not authenticate_peer(service, alvo, eve_challenge_responder(eve, alvo, eve_rng), actor=Actor.EVE):
                channels.system(EventKind.MITM_STATUS, f"blocked=true customer={alvo}")
                logger.warning("MITM bloqueado: Eve não respondeu ao desafio de '%s'", alvo)
                return MitmReport(
                    completed=False,
                    alice_leg=None,
                    bob_leg=None,
                    eve_plaintext_fraction=0.0,
                    pads_match=None,
                    blocked_reason=AbortReason.AUTHENTICATION_FAILED.value,
                )

    perna_alice = ProtocolSession(cfg, rng, channels, initiator=Actor.ALICE, responder=Actor.EVE)
    perna_bob = ProtocolSession(cfg, rng, channels, initiator=Actor.EVE, responder=Actor.BOB)
    rel_alice = perna_alice.run()
    rel_bob = perna_bob.run()

    completo = rel_alice.established and rel_bob.established
    if not completo:
        channels.system(EventKind.MITM_STATUS, "completed=false")
        return MitmReport(False, rel_alice, rel_bob, 0.0, None, rel_alice.aborted_reason or rel_bob.aborted_reason)

    pad_alice, pad_eve_a = perna_alice.alice.pad, perna_alice.bob.pad
    pad_eve_b, pad_bob = perna_bob.alice.pad, perna_bob.bob.pad
    eve.impersonation_pads = (pad_eve_a, pad_eve_b)
    # Gancho de teste: comparação de checksums fora de banda entre Alice e Bob
    pads_match = checksum(pad_alice.bits) == checksum(pad_bob.bits)

    fracao = 1.0
    entregue = None
    if message is not None:
        texto = as_bits(message)
        c1 = mask(pad_alice, texto)
        channels.classical.publish(Actor.ALICE, EventKind.MESSAGE, f"bits={len(c1)} ciphertext={bits_to_str(c1)}")
        lido = unmask(pad_eve_a, c1)
        eve.leak_plaintext(lido)
        c2 = mask(pad_eve_b, lido)
        channels.classical.publish(Actor.EVE, EventKind.RELAY_OUT, f"bits={len(c2)} ciphertext={bits_to_str(c2)}")
        entregue = unmask(pad_bob, c2)
        fracao = float(np.mean(lido == texto)) if len(texto) else 1.0

    channels.system(EventKind.MITM_STATUS, f"completed=true pads_match={str(pads_match).lower()}")
    logger.info("MITM completo; Eve lê %.0f%% do tráfego", 100 * fracao)
    return MitmReport(True, rel_alice, rel_bob, fracao, pads_match, delivered=entregue)
