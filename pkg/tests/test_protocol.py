import math
import zlib

import numpy as np
import pytest

from src.application.dto.transcript_schema import Actor, ChannelKind, EventKind
from src.application.services.adversary_service import open_attacked_channels
from src.application.services.protocol_service import (
    ProtocolConfig,
    ProtocolSession,
    checksum,
    discovery_round,
    required_rounds,
    run_key_generation,
    run_parameter_discovery,
    run_session,
)
from src.domain.entities.attack import AttackKind
from src.domain.entities.quantum import AngleSet
from src.domain.entities.reports import AbortReason
from src.domain.exceptions import DegenerateBound, InvalidProtocolConfig
from src.infrastructure.simulation.channels import Channels
from src.shared.utils.bits import as_bits, pack_bits
from src.shared.utils.random_source import RandomSource
from tests.conftest import party


def crc32_referencia(data: bytes) -> int:
    """CRC-32 bit a bit com o polinômio refletido 0xEDB88320."""
    crc = 0xFFFFFFFF
    for byte in data:
        crc ^= byte
        for _ in range(8):
            crc = (crc >> 1) ^ 0xEDB88320 if crc & 1 else crc >> 1
    return crc ^ 0xFFFFFFFF


class TestRequiredRounds:

    def test_meio_e_um_por_cento(self):
        assert required_rounds(0.5, 0.01) == 7

    def test_noventa_por_cento(self):
        assert required_rounds(0.9, 0.01) == 44

    @pytest.mark.parametrize("p,eps", [(0.5, 0.2), (0.5, 0.001), (0.3, 0.05), (0.75, 1e-6), (0.5, 0.25)])
    def test_confere_por_exponenciacao(self, p, eps):
        """m é o menor inteiro com p^m <= ε."""
        m = required_rounds(p, eps)
        assert p ** m <= eps
        assert m == 1 or p ** (m - 1) > eps

    def test_fronteira_exata(self):
        """0.5^2 = 0.25 exatamente: m = 2, não 3."""
        assert required_rounds(0.5, 0.25) == 2

    def test_p_max_degenerado(self):
        with pytest.raises(DegenerateBound):
            required_rounds(1.0, 0.01)


class TestChecksum:

    def test_vetor_padrao(self):
        """'123456789' → 0xCBF43926."""
        assert checksum(as_bits("".join(f"{b:08b}" for b in b"123456789"))) == 0xCBF43926

    def test_bate_com_implementacao_bit_a_bit(self):
        rng = np.random.default_rng(0)
        for n in (1, 7, 8, 64, 255, 256):
            bits = rng.integers(0, 2, size=n, dtype=np.uint8)
            assert checksum(bits) == crc32_referencia(pack_bits(bits)) == zlib.crc32(pack_bits(bits))

    def test_pad_vazio(self):
        assert checksum(np.empty(0, dtype=np.uint8)) == 0


class TestProtocolConfig:

    def test_from_confidence(self, angles):
        cfg = ProtocolConfig.from_confidence(angles, 0.01, 256)
        assert cfg.rounds_per_test == 7 and cfg.k == 4

    def test_from_rounds_deriva_confianca(self, angles):
        cfg = ProtocolConfig.from_rounds(angles, 3, 16)
        assert cfg.confidence == pytest.approx(0.125)

    def test_m_insuficiente(self, angles):
        with pytest.raises(InvalidProtocolConfig):
            ProtocolConfig(angles, 2, 0.01, 256)

    def test_chave_vazia(self, angles):
        with pytest.raises(InvalidProtocolConfig):
            ProtocolConfig.from_confidence(angles, 0.01, 0)

    def test_checksum_desconhecido(self, angles):
        with pytest.raises(InvalidProtocolConfig):
            ProtocolConfig(angles, 7, 0.01, 8, checksum_kind="md5")


class TestDiscoveryRound:

    def test_bits_descartados_publicados(self, angles, channels):
        a, b = discovery_round(angles[0], angles[0], channels, RandomSource(1))
        assert a == b
        classicos = channels.transcript.classical_events()
        assert [e.kind for e in classicos] == [EventKind.DISCOVERY_REPORT, EventKind.DISCOVERY_VERDICT]
        assert all("discarded" in e.payload_summary for e in classicos)

    def test_ortogonal_sempre_discorda(self, angles, channels):
        rng = RandomSource(2)
        for _ in range(100):
            a, b = discovery_round(angles[0], angles[2], channels, rng)
            assert a != b


class TestParameterDiscovery:

    def _descobrir(self, cfg, a_idx, b_idx, seed):
        return run_parameter_discovery(
            cfg, party(Actor.ALICE, a_idx), party(Actor.BOB, b_idx), Channels.open(), RandomSource(seed)
        )

    def test_encontra_angulo_de_bob(self, angles):
        cfg = ProtocolConfig.from_confidence(angles, 0.001, 8)
        for seed in range(50):
            r = self._descobrir(cfg, seed % 4, (seed * 3 + 1) % 4, seed)
            assert r.ok and r.shared_index == (seed * 3 + 1) % 4
            assert r.rounds_used <= cfg.k * cfg.rounds_per_test

    def test_sem_aprovado_aborta(self, angles):
        """
        Eve fixa em π/4 deixa toda hipótese com concordância 0.5 por rodada;
        com m = 20 nenhum candidato passa e a descoberta aborta.
        """
        cfg = ProtocolConfig.from_rounds(angles, 20, 8)
        rng = RandomSource(4)
        canais, _ = open_attacked_channels(AttackKind.intercept_resend(angles[1]), angles, rng)
        r = run_parameter_discovery(cfg, party(Actor.ALICE, 0), party(Actor.BOB, 0), canais, rng)
        assert r.aborted_reason is AbortReason.EAVESDROPPER_SUSPECTED
        assert r.shared_index is None and r.passed_indices == ()

    def test_conjunto_de_dois_angulos(self):
        conjunto = AngleSet.from_radians([0.0, math.pi / 4])
        cfg = ProtocolConfig.from_confidence(conjunto, 0.001, 8)
        r = self._descobrir(cfg, 0, 1, 8)
        assert r.ok and r.shared_index == 1

    def test_taxa_de_falso_aceite(self, angles):
        """
        Com ε = 0.2 (m = 3), a fração de descobertas em que algum ângulo errado
        completa m concordâncias fica abaixo de k·ε e cai quando m aumenta.
        """
        taxas = []
        for m in (3, 4, 5):
            cfg = ProtocolConfig.from_rounds(angles, m, 8)
            falsos = 0
            for seed in range(1000):
                bob_idx = seed % 4
                r = self._descobrir(cfg, (seed // 4) % 4, bob_idx, 10_000 * m + seed)
                falsos += any(i != bob_idx for i in r.passed_indices)
            taxas.append(falsos / 1000)
        assert required_rounds(0.5, 0.2) == 3
        assert taxas[0] <= 4 * 0.2
        assert taxas[0] > taxas[1] > taxas[2]
        # Dois vizinhos a π/4 por sessão: 1 − (1 − 0.5^m)²
        for m, taxa in zip((3, 4, 5), taxas):
            assert taxa == pytest.approx(1 - (1 - 0.5 ** m) ** 2, abs=0.04)


class TestKeyGeneration:

    def test_pads_iguais_no_mesmo_angulo(self, angles, channels):
        pa, pb, ids = run_key_generation(angles[1], angles[1], 256, channels, RandomSource(5))
        assert np.array_equal(pa.bits, pb.bits)
        assert len(ids) == 256 and pa.owner == "Alice" and pb.owner == "Bob"

    def test_registro_vazio_ao_fim(self, angles):
        """Qubits medidos são descartados; nem handles nem pares sobram no registro."""
        canais, _ = open_attacked_channels(AttackKind.intercept_resend(), angles, RandomSource(12))
        run_key_generation(angles[0], angles[0], 128, canais, RandomSource(13))
        discovery_round(angles[0], angles[1], canais, RandomSource(14))
        assert canais.registry.live_count == 0 and canais.registry.pair_count == 0

    def test_nenhum_bit_de_chave_no_canal_classico(self, angles, channels):
        run_key_generation(angles[0], angles[0], 64, channels, RandomSource(6))
        assert channels.transcript.classical_events() == []
        quanticos = [e for e in channels.transcript if e.channel is ChannelKind.QUANTUM]
        assert len(quanticos) == 64
        assert all(e.payload_summary.startswith("qubit=") for e in quanticos)


class TestSession:

    def test_sessao_limpa_cem_sementes(self, angles):
        """100/100 sementes estabelecem pads idênticos de 256 bits, qber 0 e CRC igual."""
        cfg = ProtocolConfig.from_confidence(angles, 0.001, 256)
        for seed in range(100):
            s = ProtocolSession.open(cfg, AttackKind.none(), seed)
            r = s.run()
            assert r.established and r.checksum_ok and r.qber == 0.0, seed
            assert np.array_equal(s.alice.pad.bits, s.bob.pad.bits)
            assert checksum(s.alice.pad.bits) == checksum(s.bob.pad.bits)

    def test_relatorio_ecoa_parametros(self, angles):
        cfg = ProtocolConfig.from_confidence(angles, 0.01, 32)
        r = run_session(cfg, AttackKind.none(), 42)
        assert (r.rounds_per_test, r.confidence, r.key_length) == (7, 0.01, 32)
        assert r.eve_known_fraction == 0.0

    def test_reprodutivel(self, angles):
        cfg = ProtocolConfig.from_confidence(angles, 0.01, 64)
        a = ProtocolSession.open(cfg, AttackKind.intercept_resend(), 9)
        b = ProtocolSession.open(cfg, AttackKind.intercept_resend(), 9)
        assert a.run() == b.run()
        assert a.channels.transcript.digest() == b.channels.transcript.digest()

    def test_escolhas_secretas_independem_do_ataque(self, angles):
        cfg = ProtocolConfig.from_confidence(angles, 0.01, 16)
        a = ProtocolSession.open(cfg, AttackKind.none(), 77)
        b = ProtocolSession.open(cfg, AttackKind.intercept_resend(), 77)
        a.run(), b.run()
        assert a.alice.secret_angle_index == b.alice.secret_angle_index
        assert a.bob.secret_angle_index == b.bob.secret_angle_index

    def test_indices_secretos_nunca_publicados(self, angles):
        cfg = ProtocolConfig.from_confidence(angles, 0.01, 16)
        s = ProtocolSession.open(cfg, AttackKind.passive(), 3)
        s.run()
        for e in s.channels.transcript.classical_events():
            assert "secret" not in e.payload_summary

    def test_eventos_de_inicio_e_fim(self, angles):
        cfg = ProtocolConfig.from_confidence(angles, 0.01, 16)
        s = ProtocolSession.open(cfg, AttackKind.none(), 1)
        s.run()
        tipos = [e.kind for e in s.channels.transcript]
        assert tipos[0] is EventKind.SESSION_STARTED
        assert tipos[1] is EventKind.ANGLE_SET_PUBLISHED
        assert tipos[-1] is EventKind.SESSION_RESULT
        assert EventKind.CHECKSUM in tipos

    def test_aborto_na_descoberta_zera_qber(self, angles):
        """Sessões que abortam na descoberta reportam qber 0 e nenhum índice."""
        cfg = ProtocolConfig.from_confidence(angles, 0.01, 64)
        for seed in range(60):
            r = run_session(cfg, AttackKind.intercept_resend(), seed)
            if r.aborted_reason in (AbortReason.EAVESDROPPER_SUSPECTED.value, AbortReason.AMBIGUOUS_PARAMETER.value):
                assert r.qber == 0.0 and r.shared_index is None and not r.established
                return
        pytest.fail("nenhuma sessão abortou na descoberta em 60 sementes")
