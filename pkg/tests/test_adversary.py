import math

import numpy as np
import pytest

from src.application.dto.transcript_schema import Actor, EventKind
from src.application.services.adversary_service import (
    agreement_under_attack,
    discovery_pass_probability,
    eve_challenge_responder,
    intercept_resend,
    mitm_run,
    open_attacked_channels,
    per_round_agreement_under_attack,
    replay_password_login,
)
from src.application.services.intermediary_service import (
    CredentialKind,
    IntermediaryService,
    authenticate_peer,
    customer_responder,
)
from src.application.services.protocol_service import ProtocolConfig, ProtocolSession, run_key_generation, run_session
from src.application.services.quantum_service import QuantumRegistry
from src.domain.entities.attack import AnglePolicy, AttackKind
from src.domain.entities.eve import EveState
from src.domain.entities.quantum import MeasurementAngle, Pure
from src.domain.entities.reports import AbortReason
from src.infrastructure.simulation.channels import Channels
from src.shared.utils.bits import text_to_bits
from src.shared.utils.random_source import RandomSource

ZERO = MeasurementAngle(0.0)
QUARTO = MeasurementAngle(math.pi / 4)
METADE = MeasurementAngle(math.pi / 2)


def canais_com_eve():
    canais = Channels.open()
    eve = EveState()
    canais.classical.attach(eve.observe)
    return canais, eve


class TestInterceptResend:

    def test_devolve_qubit_novo_e_puro(self, registry, rng):
        q, _ = registry.new_entangled_pair()
        bit, novo = intercept_resend(registry, q, QUARTO, rng)
        assert not q.alive and novo.alive
        assert novo.id != q.id
        assert novo.state == Pure(QUARTO, bit)

    def test_mesmo_angulo_eve_conhece_o_bit(self):
        registry, rng = QuantumRegistry(), RandomSource(21)
        for _ in range(500):
            q_alice, q_bob = registry.new_entangled_pair()
            eve_bit, reenviado = intercept_resend(registry, q_bob, ZERO, rng)
            alice_bit = registry.measure(q_alice, ZERO, rng)
            assert eve_bit == alice_bit == registry.measure(reenviado, ZERO, rng)

    def test_ortogonal_bob_concorda_e_eve_tem_complemento(self):
        registry, rng = QuantumRegistry(), RandomSource(22)
        for _ in range(500):
            q_alice, q_bob = registry.new_entangled_pair()
            eve_bit, reenviado = intercept_resend(registry, q_bob, METADE, rng)
            alice_bit = registry.measure(q_alice, ZERO, rng)
            assert eve_bit == 1 - alice_bit
            assert registry.measure(reenviado, ZERO, rng) == alice_bit

    def test_quarenta_e_cinco_graus_vira_moeda(self):
        registry, rng = QuantumRegistry(), RandomSource(23)
        iguais = 0
        for _ in range(10_000):
            q_alice, q_bob = registry.new_entangled_pair()
            _, reenviado = intercept_resend(registry, q_bob, QUARTO, rng)
            iguais += registry.measure(q_alice, ZERO, rng) == registry.measure(reenviado, ZERO, rng)
        assert iguais / 10_000 == pytest.approx(0.5, abs=0.02)


class TestOraculos:

    def test_concordancia_sob_ataque(self):
        assert agreement_under_attack(ZERO, ZERO, ZERO) == 1.0
        assert agreement_under_attack(ZERO, ZERO, METADE) == 1.0
        assert agreement_under_attack(ZERO, ZERO, QUARTO) == pytest.approx(0.5)

    def test_uniforme_da_tres_quartos(self, angles):
        for a in angles.angles:
            assert per_round_agreement_under_attack(a, AnglePolicy(), angles) == pytest.approx(0.75)

    def test_uniforme_sem_conjunto(self):
        with pytest.raises(ValueError):
            per_round_agreement_under_attack(ZERO, AnglePolicy())

    def test_probabilidade_de_passar_na_descoberta(self, angles):
        cfg = ProtocolConfig.from_rounds(angles, 5, 16)
        assert discovery_pass_probability(cfg, 0, 0) == 1.0
        assert discovery_pass_probability(cfg, 1, 0) == pytest.approx(0.5 ** 5)
        assert discovery_pass_probability(cfg, 2, 0) == 0.0
        assert discovery_pass_probability(cfg, 0, 0, AnglePolicy()) == pytest.approx(0.75 ** 5)
        assert discovery_pass_probability(cfg, 2, 0, AnglePolicy()) == pytest.approx(0.25 ** 5)


class TestAtaqueNoCanalQuantico:

    def test_qber_uniforme_um_quarto(self, angles):
        """10⁴ bits de chave sob intercept-resend uniforme: qber ≈ 0.25."""
        rng = RandomSource(31)
        canais, eve = open_attacked_channels(AttackKind.intercept_resend(), angles, rng)
        pa, pb, ids = run_key_generation(angles[1], angles[1], 10_000, canais, rng.for_path("quantum"))
        assert float(np.mean(pa.bits != pb.bits)) == pytest.approx(0.25, abs=0.02)
        assert [m.qubit_id for m in eve.measured_bits] == ids

    def test_eventos_de_reenvio(self, angles):
        rng = RandomSource(32)
        canais, _ = open_attacked_channels(AttackKind.intercept_resend(ZERO), angles, rng)
        run_key_generation(ZERO, ZERO, 10, canais, rng)
        tipos = [e.kind for e in canais.transcript]
        assert tipos.count(EventKind.QUBIT_SENT) == tipos.count(EventKind.QUBIT_RESENT) == 10

    def test_deteccao_em_cem_sementes(self, angles):
        """ε = 0.01: ao menos 99 de 100 sessões abortam ou falham no checksum."""
        cfg = ProtocolConfig.from_confidence(angles, 0.01, 256)
        detectadas = sum(not run_session(cfg, AttackKind.intercept_resend(), seed).established for seed in range(100))
        assert detectadas >= 99

    def test_fracao_conhecida_mede_estado_real(self, angles):
        """Eve acerta o ângulo de Alice em 1/4 das posições e só ali conhece o bit."""
        cfg = ProtocolConfig.from_rounds(angles, 1, 4000)
        for seed in range(50):
            sessao = ProtocolSession.open(cfg, AttackKind.intercept_resend(), seed)
            r = sessao.run()
            if r.shared_index is not None:
                assert r.eve_known_fraction == pytest.approx(0.25, abs=0.03)
                assert r.aborted_reason == AbortReason.CHECKSUM_MISMATCH.value
                return
        pytest.fail("nenhuma sessão chegou à geração de chave")

    def test_passiva_nao_aprende_nada(self, angles):
        cfg = ProtocolConfig.from_confidence(angles, 0.001, 128)
        sessao = ProtocolSession.open(cfg, AttackKind.passive(), 12)
        r = sessao.run()
        assert r.established and r.eve_known_fraction == 0.0
        assert sessao.eve.classical_log == sessao.channels.transcript.classical_events()
        assert sessao.eve.measured_bits == []


class TestMitm:

    def test_sem_autenticacao_eve_le_tudo(self, angles):
        cfg = ProtocolConfig.from_confidence(angles, 0.001, 128)
        msg = text_to_bits("oi bob")
        r = mitm_run(cfg, 5, message=msg)
        assert r.completed and r.pads_match is False
        assert r.eve_plaintext_fraction == 1.0
        assert np.array_equal(r.delivered, msg)

    def test_relatorio_de_sessao(self, angles):
        cfg = ProtocolConfig.from_confidence(angles, 0.001, 64)
        r = run_session(cfg, AttackKind.mitm(), 8)
        assert r.established and r.eve_known_fraction == 1.0

    def test_autenticacao_por_pad_bloqueia(self, angles):
        canais, eve = canais_com_eve()
        al = IntermediaryService(canais, RandomSource(3))
        al.register("alice", 1024, Actor.ALICE)
        al.register("bob", 1024, Actor.BOB)
        cfg = ProtocolConfig.from_confidence(angles, 0.001, 64)
        r = mitm_run(cfg, 3, service=al, channels=canais, eve=eve)
        assert not r.completed
        assert r.blocked_reason == AbortReason.AUTHENTICATION_FAILED.value
        assert r.alice_leg is None and r.eve_plaintext_fraction == 0.0

    def test_insider_abre_caminho(self, angles):
        canais, eve = canais_com_eve()
        al = IntermediaryService(canais, RandomSource(4), insider_compromised=True, eve=eve)
        al.register("alice", 1024, Actor.ALICE)
        al.register("bob", 1024, Actor.BOB)
        cfg = ProtocolConfig.from_confidence(angles, 0.001, 64)
        r = mitm_run(cfg, 4, service=al, channels=canais, eve=eve)
        assert r.completed and r.eve_plaintext_fraction == 1.0


class TestSenhaReutilizada:

    def _servico(self):
        canais, eve = canais_com_eve()
        al = IntermediaryService(canais, RandomSource(9), credential=CredentialKind.PASSWORD)
        return al, eve, al.register("alice", 512, Actor.ALICE), al.register("bob", 512, Actor.BOB)

    def test_sem_login_observado(self):
        al, eve, _, _ = self._servico()
        assert replay_password_login(eve, "bob", "0" * 64) is None

    def test_replay_apos_um_login(self):
        al, eve, _, bob = self._servico()
        assert authenticate_peer(al, "bob", customer_responder(bob))
        desafio = al.issue_challenge("bob")
        resposta = replay_password_login(eve, "bob", desafio.masked)
        assert al.verify("bob", desafio, resposta)

    def test_mitm_passa_com_senha(self, angles):
        al, eve, alice, bob = self._servico()
        authenticate_peer(al, "bob", customer_responder(bob))
        authenticate_peer(al, "alice", customer_responder(alice))
        cfg = ProtocolConfig.from_confidence(angles, 0.001, 64)
        r = mitm_run(cfg, 6, service=al, channels=al.channels, eve=eve)
        assert r.completed

    def test_pad_nao_se_repete(self):
        """No modo pad o login antigo não ajuda: o chute de Eve falha."""
        canais, eve = canais_com_eve()
        al = IntermediaryService(canais, RandomSource(10))
        bob = al.register("bob", 1024, Actor.BOB)
        assert authenticate_peer(al, "bob", customer_responder(bob))
        responder = eve_challenge_responder(eve, "bob", RandomSource(11))
        assert not authenticate_peer(al, "bob", responder, actor=Actor.EVE)
