"""
Execução de cenários e varreduras de parâmetros.

Um cenário é: conexões (com Eve, se configurada), intermediário opcional,
estabelecimento de chave, mensagem opcional sob o pad e a contabilidade do
que Eve de fato sabe. A mesma configuração produz bytes idênticos.
"""

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union, get_args

import numpy as np
import pandas as pd
from pydantic import BaseModel, ValidationError

from src.application.dto.scenario_schema import IntermediaryMode, ScenarioConfig
from src.application.dto.transcript_schema import Actor
from src.application.services.adversary_service import mitm_run, open_attacked_channels
from src.application.services.intermediary_service import (
    IntermediaryService,
    authenticate_peer,
    customer_responder,
    send_via_intermediary,
)
from src.application.services.otp_service import unmask
from src.application.services.protocol_service import ProtocolSession, send_masked
from src.domain.entities.attack import AttackType
from src.domain.entities.eve import EveState
from src.domain.entities.pad import PadStore
from src.domain.entities.reports import AbortReason, MitmReport, SessionReport
from src.domain.exceptions import ConfigInvalid, UnknownParameter
from src.infrastructure.simulation.transcript import Transcript
from src.shared.utils.random_source import RandomSource, derive_seed

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = [
    "value",
    "seed",
    "established",
    "discovery_rounds_used",
    "qber",
    "eve_known_fraction",
    "abort_reason",
]


@dataclass
class ScenarioResult:
    report: SessionReport
    transcript: Transcript
    alice_pad: Optional[PadStore] = None
    delivered: Optional[np.ndarray] = None
    mitm: Optional[MitmReport] = None

    @property
    def summary(self) -> dict:
        return self.report.to_dict()


# ================================================================
# CARGA DE CONFIGURAÇÃO
# ================================================================

def _mensagens(erro: ValidationError) -> list[str]:
    mensagens = []
    for e in erro.errors():
        local = ".".join(str(p) for p in e["loc"]) or "config"
        mensagens.append(f"{local}: {e['msg']}")
    return mensagens


def validate_scenario(data: dict) -> ScenarioConfig:
    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigInvalid(_mensagens(e)) from None


def load_scenario(source: Union[str, Path, bytes]) -> ScenarioConfig:
    """Caminho de arquivo ou bytes JSON. Qualquer problema vira ConfigInvalid."""
    if isinstance(source, (str, Path)):
        try:
            conteudo = Path(source).read_bytes()
        except OSError as e:
            raise ConfigInvalid([f"{source}: {e.strerror or e}"]) from None
    else:
        conteudo = source
    try:
        return ScenarioConfig.model_validate_json(conteudo)
    except ValidationError as e:
        raise ConfigInvalid(_mensagens(e)) from None


# ================================================================
# EXECUÇÃO
# ================================================================

def _fracao_recuperada(eve: Optional[EveState], mensagem: np.ndarray) -> float:
    if eve is None or not len(mensagem):
        return 0.0
    fracoes = [
        float(np.mean(p == mensagem)) for p in eve.recovered_plaintexts if len(p) == len(mensagem)
    ]
    return max(fracoes, default=0.0)


def _autenticar_partes(service: IntermediaryService) -> bool:
    # Alice confirma Bob via AL e vice-versa
    ok_bob = authenticate_peer(service, "bob", customer_responder(service.get("bob")))
    ok_alice = authenticate_peer(service, "alice", customer_responder(service.get("alice")))
    return ok_bob and ok_alice


def run_scenario(cfg: ScenarioConfig) -> ScenarioResult:
    pcfg = cfg.protocol_config()
    ataque = cfg.attack_kind()
    rng = RandomSource(cfg.seed)
    mensagem = cfg.message_bits()

    transcript = Transcript()
    channels, eve = open_attacked_channels(ataque, pcfg.angle_set, rng, transcript)

    service: Optional[IntermediaryService] = None
    if cfg.intermediary is not IntermediaryMode.OFF:
        insider = cfg.intermediary is IntermediaryMode.ON_WITH_INSIDER
        if insider and eve is None:
            # Eve fora do fio, mas com alguém de dentro de AL
            eve = EveState()
        service = IntermediaryService(
            channels,
            rng.for_path("intermediary"),
            insider_compromised=insider,
            eve=eve,
            credential=cfg.credential,
            challenge_bits=cfg.challenge_bits,
            password_bits=cfg.password_bits,
        )
        service.register("alice", cfg.pad_bits, actor=Actor.ALICE)
        service.register("bob", cfg.pad_bits, actor=Actor.BOB)

    mitm: Optional[MitmReport] = None
    if ataque.type is AttackType.MITM:
        mitm = mitm_run(pcfg, cfg.seed, service=service, message=mensagem, channels=channels, eve=eve)
        if mitm.completed or mitm.blocked_reason != AbortReason.AUTHENTICATION_FAILED.value:
            relatorio = mitm.as_session_report(pcfg.rounds_per_test, pcfg.confidence, pcfg.key_length)
            return ScenarioResult(relatorio, transcript, delivered=mitm.delivered, mitm=mitm)
        # MITM barrado na autenticação: a sessão direta segue com Eve apenas escutando
        logger.info("MITM bloqueado; sessão direta Alice-Bob com Eve passiva")

    if service is not None and not _autenticar_partes(service):
        relatorio = SessionReport(
            established=False, shared_index=None, discovery_rounds_used=0, qber=0.0,
            checksum_ok=False, eve_known_fraction=0.0,
            aborted_reason=AbortReason.AUTHENTICATION_FAILED.value,
            rounds_per_test=pcfg.rounds_per_test, confidence=pcfg.confidence, key_length=pcfg.key_length,
        )
        return ScenarioResult(relatorio, transcript, mitm=mitm)

    sessao = ProtocolSession(pcfg, rng, channels, eve=eve)
    relatorio = sessao.run()

    entregue = None
    if relatorio.established and mensagem is not None:
        if service is not None:
            entregue = send_via_intermediary(service, "alice", "bob", mensagem)
        else:
            cifrado = send_masked(sessao.alice.pad, mensagem, channels, Actor.ALICE)
            entregue = unmask(sessao.bob.pad, cifrado)
        conhecido = max(relatorio.eve_known_fraction, _fracao_recuperada(eve, mensagem))
        relatorio = replace(relatorio, eve_known_fraction=conhecido)

    return ScenarioResult(
        relatorio,
        transcript,
        alice_pad=sessao.alice.pad if relatorio.established else None,
        delivered=entregue,
        mitm=mitm,
    )


# ================================================================
# VARREDURA
# ================================================================

def _tipos(anotacao: Any) -> tuple:
    return get_args(anotacao) or (anotacao,)


def _resolve_numeric_path(path: str) -> type:
    """Tipo numérico (int ou float) do campo em `path`; UnknownParameter caso não exista ou não seja numérico."""
    modelo: type[BaseModel] = ScenarioConfig
    partes = path.split(".")
    if not path or partes[0] == "seed":
        raise UnknownParameter(path)
    for i, parte in enumerate(partes):
        campo = modelo.model_fields.get(parte)
        if campo is None:
            raise UnknownParameter(path)
        tipos = _tipos(campo.annotation)
        if i < len(partes) - 1:
            sub = next((t for t in tipos if isinstance(t, type) and issubclass(t, BaseModel)), None)
            if sub is None:
                raise UnknownParameter(path)
            modelo = sub
            continue
        for t in (int, float):
            if t in tipos:
                return t
    raise UnknownParameter(path)


def _com_valor(base: dict, path: str, value: Any) -> dict:
    dados = json.loads(json.dumps(base))
    alvo = dados
    partes = path.split(".")
    for parte in partes[:-1]:
        if alvo.get(parte) is None:
            alvo[parte] = {}
        alvo = alvo[parte]
    alvo[partes[-1]] = value
    # m e ε são mutuamente exclusivos: varrer um descarta o outro
    if path == "rounds_per_test":
        dados["confidence"] = None
    elif path == "confidence":
        dados["rounds_per_test"] = None
    return dados


def sweep_seed(seed: int, value: Any, replicate: int) -> int:
    return derive_seed(seed, "sweep", repr(value), replicate)


def _executar_linha(tarefa: tuple[dict, Any, int]) -> dict:
    dados, valor, semente = tarefa
    relatorio = run_scenario(validate_scenario(dados)).report
    return {
        "value": valor,
        "seed": semente,
        "established": relatorio.established,
        "discovery_rounds_used": relatorio.discovery_rounds_used,
        "qber": relatorio.qber,
        "eve_known_fraction": relatorio.eve_known_fraction,
        "abort_reason": relatorio.aborted_reason or "",
    }


def sweep(
    base: ScenarioConfig,
    param: str,
    values: Sequence[float],
    seeds: Iterable[int],
    workers: int = 1,
) -> pd.DataFrame:
    """
    Uma linha por valor por semente, na ordem (valor, semente). Cada cenário
    roda com a semente derivada de (semente da linha, valor, réplica).
    """
    tipo = _resolve_numeric_path(param)
    sementes = list(seeds)
    base_dict = base.model_dump(mode="json")

    tarefas = []
    for valor in values:
        convertido = tipo(valor)
        if tipo is int and convertido != valor:
            raise ConfigInvalid([f"{param}: valor {valor!r} não é inteiro"])
        for replica, semente in enumerate(sementes):
            dados = _com_valor(base_dict, param, convertido)
            dados["seed"] = sweep_seed(semente, convertido, replica)
            # Falha cedo, antes de abrir o pool
            validate_scenario(dados)
            tarefas.append((dados, convertido, semente))

    logger.info("Sweep de '%s': %d valores x %d sementes (%d workers)", param, len(values), len(sementes), workers)
    if workers > 1 and len(tarefas) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            linhas = list(pool.map(_executar_linha, tarefas))
    else:
        linhas = [_executar_linha(t) for t in tarefas]
    return pd.DataFrame(linhas, columns=SWEEP_COLUMNS)


def detection_rate(df: pd.DataFrame) -> pd.Series:
    """Fração de linhas sem sessão estabelecida, por valor, na ordem de aparição."""
    return (~df["established"].astype(bool)).groupby(df["value"], sort=False).mean()
