"""
Protocolo de distribuição de chave por pares emaranhados.

Fluxo de uma sessão:
  - Conjunto de k ângulos publicado no canal clássico (Eve vê tudo).
  - Alice e Bob escolhem, cada um, um ângulo secreto.
  - Descoberta: Alice mede uma metade de cada par e envia a outra; Bob
    reporta publicamente o bit medido. Alice testa candidatos até sobrar um
    único que concorde m vezes seguidas. Bits de descoberta nunca viram chave.
  - Geração de chave no ângulo compartilhado (nenhum bit vai para o canal
    clássico) e comparação pública de CRC-32 dos pads.
"""

import logging
import math
import zlib
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from src.application.dto.transcript_schema import Actor, EventKind
from src.application.services.otp_service import mask
from src.domain.entities.attack import AttackKind, AttackType
from src.domain.entities.eve import EveState
from src.domain.entities.pad import PadStore
from src.domain.entities.quantum import AngleSet, MeasurementAngle
from src.domain.entities.reports import EXHAUSTED_CANDIDATES, AbortReason, SessionReport
from src.domain.exceptions import DegenerateBound, InvalidProtocolConfig
from src.infrastructure.simulation.channels import Channels
from src.shared.utils.bits import BitsLike, bits_to_str, pack_bits
from src.shared.utils.random_source import RandomSource

logger = logging.getLogger(__name__)

CHECKSUM_KINDS = ("crc32",)


# ================================================================
# PARÂMETROS
# ================================================================

def required_rounds(p_max: float, epsilon: float) -> int:
    """Menor m com p_max^m <= ε, conferido por exponenciação direta."""
    if p_max >= 1.0:
        raise DegenerateBound(f"p_max = {p_max} >= 1: nenhum m atinge a confiança pedida.")
    if not (0.0 < p_max < 1.0) or not (0.0 < epsilon < 1.0):
        raise ValueError(f"Esperado 0 < p_max < 1 e 0 < ε < 1, recebido ({p_max}, {epsilon}).")

    m = max(1, math.ceil(math.log(epsilon) / math.log(p_max)))
    # Corrige arredondamento do logaritmo nas fronteiras exatas
    while m > 1 and p_max ** (m - 1) <= epsilon:
        m -= 1
    while p_max ** m > epsilon:
        m += 1
    return m


def checksum(pad: np.ndarray) -> int:
    """CRC-32 (polinômio refletido 0xEDB88320) sobre o pad empacotado MSB-first."""
    return zlib.crc32(pack_bits(pad)) & 0xFFFFFFFF


@dataclass(frozen=True)
class ProtocolConfig:
    angle_set: AngleSet
    rounds_per_test: int
    confidence: float
    key_length: int
    checksum_kind: str = "crc32"

    def __post_init__(self):
        if self.angle_set.k < 2:
            raise InvalidProtocolConfig("São necessários ao menos 2 ângulos (k >= 2).")
        if self.key_length < 1:
            raise InvalidProtocolConfig("key_length deve ser >= 1.")
        if self.rounds_per_test < 1:
            raise InvalidProtocolConfig("rounds_per_test deve ser >= 1.")
        if not (0.0 < self.confidence < 1.0):
            raise InvalidProtocolConfig("confidence deve estar em (0, 1).")
        if self.angle_set.p_max ** self.rounds_per_test > self.confidence * (1 + 1e-9):
            raise InvalidProtocolConfig(
                f"m = {self.rounds_per_test} insuficiente: p_max^m = "
                f"{self.angle_set.p_max ** self.rounds_per_test:.6g} > ε = {self.confidence}."
            )
        if self.checksum_kind not in CHECKSUM_KINDS:
            raise InvalidProtocolConfig(f"checksum_kind '{self.checksum_kind}' não suportado.")

    @classmethod
    def from_confidence(cls, angle_set: AngleSet, confidence: float, key_length: int) -> "ProtocolConfig":
        m = required_rounds(angle_set.p_max, confidence)
        return cls(angle_set, m, confidence, key_length)

    @classmethod
    def from_rounds(cls, angle_set: AngleSet, rounds_per_test: int, key_length: int) -> "ProtocolConfig":
        return cls(angle_set, rounds_per_test, angle_set.p_max ** rounds_per_test, key_length)

    @property
    def k(self) -> int:
        return self.angle_set.k


@dataclass
class PartyState:
    role: Actor
    secret_angle_index: int
    pad: PadStore
    discovered_index: Optional[int] = None


@dataclass(frozen=True)
class DiscoveryResult:
    shared_index: Optional[int]
    rounds_used: int
    passed_indices: tuple[int, ...]
    aborted_reason: Optional[AbortReason]

    @property
    def ok(self) -> bool:
        return self.aborted_reason is None


# ================================================================
# DESCOBERTA DO PARÂMETRO
# ================================================================

def discovery_round(
    alice_angle: MeasurementAngle,
    bob_angle: MeasurementAngle,
    channels: Channels,
    rng: RandomSource,
    *,
    round_no: int = 0,
    alice: Actor = Actor.ALICE,
    bob: Actor = Actor.BOB,
) -> tuple[int, int]:
    """Uma rodada de teste; os dois bits ficam no transcript marcados como descartados."""
    registry = channels.registry
    q_alice, q_bob = registry.new_entangled_pair()
    alice_bit = registry.measure(q_alice, alice_angle, rng)
    recebido = channels.quantum.send_qubit(q_bob, sender=alice)
    bob_bit = registry.measure(recebido, bob_angle, rng)
    registry.destroy(q_alice)
    registry.destroy(recebido)

    channels.classical.publish(bob, EventKind.DISCOVERY_REPORT, f"round={round_no} bit={bob_bit} discarded")
    channels.classical.publish(
        alice,
        EventKind.DISCOVERY_VERDICT,
        f"round={round_no} alice_bit={alice_bit} agree={str(alice_bit == bob_bit).lower()} discarded",
    )
    return alice_bit, bob_bit


def run_parameter_discovery(
    cfg: ProtocolConfig,
    alice: PartyState,
    bob: PartyState,
    channels: Channels,
    rng: RandomSource,
) -> DiscoveryResult:
    """
    Só Alice itera candidatos; a escolha de Bob fica fixa.

    Primeira passada: a partir do próprio palpite, Alice testa cada candidato
    (ordem derivada da semente) por até m rodadas; uma discordância descarta o
    candidato na hora. Se mais de um candidato completar m concordâncias, os
    sobreviventes são retestados em rodízio com o orçamento restante (k·m no
    total) até sobrar um só.
    """
    m, k = cfg.rounds_per_test, cfg.k
    budget = k * m
    used = 0

    restantes = [i for i in rng.for_path("candidate-order").permutation(k) if i != alice.secret_angle_index]
    ordem = [alice.secret_angle_index] + restantes
    bob_angle = cfg.angle_set[bob.secret_angle_index]

    def testar(indice: int) -> bool:
        nonlocal used
        a_bit, b_bit = discovery_round(
            cfg.angle_set[indice], bob_angle, channels, rng,
            round_no=used, alice=alice.role, bob=bob.role,
        )
        used += 1
        return a_bit == b_bit

    aprovados: list[int] = []
    for indice in ordem:
        sequencia = 0
        while sequencia < m and used < budget:
            if not testar(indice):
                break
            sequencia += 1
        if sequencia == m:
            aprovados.append(indice)
        if used >= budget:
            break

    sobreviventes = list(aprovados)
    while len(sobreviventes) > 1 and used < budget:
        for indice in list(sobreviventes):
            if used >= budget:
                break
            if not testar(indice):
                sobreviventes.remove(indice)

    if not sobreviventes:
        reason: Optional[AbortReason] = EXHAUSTED_CANDIDATES
    elif len(sobreviventes) > 1:
        reason = AbortReason.AMBIGUOUS_PARAMETER
    else:
        reason = None

    logger.debug("Descoberta: %d rodadas, %d candidato(s) aprovados na primeira passada", used, len(aprovados))
    return DiscoveryResult(
        shared_index=sobreviventes[0] if reason is None else None,
        rounds_used=used,
        passed_indices=tuple(aprovados),
        aborted_reason=reason,
    )


# ================================================================
# GERAÇÃO DE CHAVE
# ================================================================

def run_key_generation(
    alice_angle: MeasurementAngle,
    bob_angle: MeasurementAngle,
    n: int,
    channels: Channels,
    rng: RandomSource,
    *,
    alice: Actor = Actor.ALICE,
    bob: Actor = Actor.BOB,
) -> tuple[PadStore, PadStore, list[int]]:
    """
    n pares medidos no ângulo descoberto por cada lado. Nenhum bit vai para o
    canal clássico. Devolve os dois pads e os ids dos qubits enviados, em
    ordem, para a contabilidade de Eve.
    """
    registry = channels.registry
    bits_alice = np.empty(n, dtype=np.uint8)
    bits_bob = np.empty(n, dtype=np.uint8)
    enviados: list[int] = []
    for i in range(n):
        q_alice, q_bob = registry.new_entangled_pair()
        bits_alice[i] = registry.measure(q_alice, alice_angle, rng)
        enviados.append(q_bob.id)
        recebido = channels.quantum.send_qubit(q_bob, sender=alice)
        bits_bob[i] = registry.measure(recebido, bob_angle, rng)
        registry.destroy(q_alice)
        registry.destroy(recebido)
    return (
        PadStore(bits=bits_alice, owner=alice.value),
        PadStore(bits=bits_bob, owner=bob.value),
        enviados,
    )


# ================================================================
# SESSÃO
# ================================================================

@dataclass
class ProtocolSession:
    """
    Contexto de uma sessão entre `initiator` (faz o papel de Alice) e
    `responder` (papel de Bob). Os rótulos permitem rodar as duas pernas de um
    MITM com o mesmo motor.
    """
    cfg: ProtocolConfig
    rng: RandomSource
    channels: Channels
    eve: Optional[EveState] = None
    initiator: Actor = Actor.ALICE
    responder: Actor = Actor.BOB
    alice: PartyState = field(init=False)
    bob: PartyState = field(init=False)
    discovery: Optional[DiscoveryResult] = field(default=None, init=False)
    key_qubit_ids: list[int] = field(default_factory=list, init=False)
    report: Optional[SessionReport] = field(default=None, init=False)

    def __post_init__(self):
        rotulo = f"{self.initiator.value}-{self.responder.value}"
        self._quantum_rng = self.rng.for_path(rotulo, "quantum")
        self._alice_rng = self.rng.for_path(rotulo, "initiator")
        self._bob_rng = self.rng.for_path(rotulo, "responder")
        vazio = np.empty(0, dtype=np.uint8)
        self.alice = PartyState(self.initiator, 0, PadStore(vazio, self.initiator.value))
        self.bob = PartyState(self.responder, 0, PadStore(vazio, self.responder.value))

    @classmethod
    def open(cls, cfg: ProtocolConfig, attack: AttackKind, seed: int) -> "ProtocolSession":
        """Sessão direta Alice↔Bob com o ataque (exceto MITM) já instalado nos canais."""
        from src.application.services import adversary_service

        rng = RandomSource(seed)
        channels, eve = adversary_service.open_attacked_channels(attack, cfg.angle_set, rng)
        return cls(cfg=cfg, rng=rng, channels=channels, eve=eve)

    def run(self) -> SessionReport:
        cfg, canais = self.cfg, self.channels
        canais.system(
            EventKind.SESSION_STARTED,
            f"initiator={self.initiator.value} responder={self.responder.value} k={cfg.k} "
            f"m={cfg.rounds_per_test} n={cfg.key_length}",
        )

        # Conjunto de ângulos em aberto
        angulos = ",".join(f"{r:.12f}" for r in cfg.angle_set.radians())
        canais.classical.publish(
            self.initiator, EventKind.ANGLE_SET_PUBLISHED, f"angles=[{angulos}] p_max={cfg.angle_set.p_max}"
        )

        # Escolhas secretas, nunca publicadas
        self.alice.secret_angle_index = self._alice_rng.index(cfg.k)
        self.bob.secret_angle_index = self._bob_rng.index(cfg.k)

        self.discovery = run_parameter_discovery(cfg, self.alice, self.bob, canais, self._quantum_rng)
        if not self.discovery.ok:
            motivo = self.discovery.aborted_reason.value  # type: ignore[union-attr]
            canais.classical.publish(self.initiator, EventKind.DISCOVERY_ABORTED, f"reason={motivo}")
            logger.warning("Sessão %s-%s abortada na descoberta: %s",
                           self.initiator.value, self.responder.value, motivo)
            return self._finish(checksum_ok=False, qber=0.0, known=0.0, reason=motivo)

        self.alice.discovered_index = self.discovery.shared_index
        self.bob.discovered_index = self.bob.secret_angle_index
        canais.classical.publish(
            self.initiator, EventKind.DISCOVERY_ACCEPTED, f"rounds={self.discovery.rounds_used}"
        )

        alice_angle = cfg.angle_set[self.alice.discovered_index]  # type: ignore[index]
        bob_angle = cfg.angle_set[self.bob.discovered_index]
        self.alice.pad, self.bob.pad, self.key_qubit_ids = run_key_generation(
            alice_angle, bob_angle, cfg.key_length, canais, self._quantum_rng,
            alice=self.initiator, bob=self.responder,
        )

        crc_alice = checksum(self.alice.pad.bits)
        crc_bob = checksum(self.bob.pad.bits)
        canais.classical.publish(self.initiator, EventKind.CHECKSUM, f"crc32=0x{crc_alice:08x}")
        canais.classical.publish(self.responder, EventKind.CHECKSUM, f"crc32=0x{crc_bob:08x}")
        checksum_ok = crc_alice == crc_bob

        qber = float(np.mean(self.alice.pad.bits != self.bob.pad.bits))
        known = self._eve_known_fraction(alice_angle)
        motivo = None if checksum_ok else AbortReason.CHECKSUM_MISMATCH.value
        if motivo:
            logger.warning("Checksums divergentes (qber=%.4f) na sessão %s-%s",
                           qber, self.initiator.value, self.responder.value)
        return self._finish(checksum_ok=checksum_ok, qber=qber, known=known, reason=motivo)

    def _eve_known_fraction(self, alice_angle: MeasurementAngle) -> float:
        """
        Posições da chave que Eve mediu exatamente no ângulo de Alice: só aí o
        bit dela é determinado. Acertos por sorte em outros ângulos não contam.
        """
        if self.eve is None or not self.key_qubit_ids:
            return 0.0
        por_qubit = {m.qubit_id: m for m in self.eve.measured_bits}
        conhecidos = 0
        for i, qid in enumerate(self.key_qubit_ids):
            medida = por_qubit.get(qid)
            if medida is not None and medida.angle == alice_angle and medida.bit == self.alice.pad.bits[i]:
                conhecidos += 1
        return conhecidos / len(self.key_qubit_ids)

    def _finish(self, *, checksum_ok: bool, qber: float, known: float, reason: Optional[str]) -> SessionReport:
        assert self.discovery is not None
        self.report = SessionReport(
            established=self.discovery.ok and checksum_ok,
            shared_index=self.discovery.shared_index,
            discovery_rounds_used=self.discovery.rounds_used,
            qber=qber,
            checksum_ok=checksum_ok,
            eve_known_fraction=known,
            aborted_reason=reason,
            rounds_per_test=self.cfg.rounds_per_test,
            confidence=self.cfg.confidence,
            key_length=self.cfg.key_length,
        )
        self.channels.system(
            EventKind.SESSION_RESULT,
            f"established={str(self.report.established).lower()} rounds={self.report.discovery_rounds_used} "
            f"qber={qber:.6f}",
        )
        logger.info("Sessão %s-%s: established=%s qber=%.4f",
                    self.initiator.value, self.responder.value, self.report.established, qber)
        return self.report


def run_session(cfg: ProtocolConfig, attack: AttackKind, seed: int) -> SessionReport:
    """Sessão completa de ponta a ponta; falhas são reportadas, nunca lançadas."""
    if attack.type is AttackType.MITM:
        from src.application.services import adversary_service

        mitm = adversary_service.mitm_run(cfg, seed)
        return mitm.as_session_report(cfg.rounds_per_test, cfg.confidence, cfg.key_length)
    return ProtocolSession.open(cfg, attack, seed).run()


# ================================================================
# MENSAGENS SOB O PAD
# ================================================================

def send_masked(pad: PadStore, message: BitsLike, channels: Channels, sender: Actor) -> np.ndarray:
    """Cifra com os próximos bits do pad e publica o texto cifrado no canal clássico."""
    cifrado = mask(pad, message)
    channels.classical.publish(sender, EventKind.MESSAGE, f"bits={len(cifrado)} ciphertext={bits_to_str(cifrado)}")
    return cifrado
