import logging
from typing import Optional

from fastapi import APIRouter, File, HTTPException, UploadFile
from fastapi.responses import Response
from pydantic import BaseModel, Field

from src.application.dto.scenario_schema import ScenarioConfig
from src.application.services.demo_service import run_demo
from src.application.services.scenario_service import ScenarioResult, load_scenario, run_scenario, sweep
from src.domain.exceptions import ConfigInvalid, UnknownDemo, UnknownParameter
from src.infrastructure.config import get_settings

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/scenarios", tags=["Cenários"])

# Limites de uma requisição de sweep
MAX_SWEEP_ROWS = 2000


# ==========================================
# SANITIZAÇÃO DE ERROS
# ==========================================

def sanitizar_erro(erro: Exception) -> str:
    """
    Nunca expõe stack traces ou estado interno ao usuário.
    Retorna sempre uma mensagem limpa em português.
    """
    msg = str(erro).lower()

    if any(kw in msg for kw in ("pad", "qubit", "cursor")):
        return "A simulação falhou por um erro interno de estado. Revise a configuração e tente novamente."

    if any(kw in msg for kw in ("memory", "timeout", "broken process pool")):
        return "A simulação excedeu os recursos disponíveis. Reduza key_length ou o número de sementes."

    return "Erro interno de processamento. Tente novamente ou entre em contato com o administrador."


def _erro_config(erro: Exception) -> HTTPException:
    detalhes = erro.errors if isinstance(erro, ConfigInvalid) else [str(erro)]
    return HTTPException(status_code=422, detail=detalhes)


def _resposta(resultado: ScenarioResult, incluir_eventos: bool) -> dict:
    corpo = {
        "summary": resultado.summary,
        "transcript_sha256": resultado.transcript.digest(),
        "event_count": len(resultado.transcript),
    }
    if incluir_eventos:
        corpo["events"] = [e.model_dump(mode="json") for e in resultado.transcript]
    return corpo


# ==========================================
# ENDPOINT: EXECUTAR CENÁRIO
# ==========================================

@router.post("/run")
def executar_cenario(cfg: ScenarioConfig, include_events: bool = False):
    try:
        return _resposta(run_scenario(cfg), include_events)
    except Exception as e:
        logger.exception("Falha ao executar cenário")
        raise HTTPException(status_code=500, detail=sanitizar_erro(e))


@router.post("/upload")
async def upload_cenario(file: UploadFile = File(...), include_events: bool = False):
    if not file.filename or not file.filename.endswith(".json"):
        raise HTTPException(status_code=400, detail="Formato de arquivo não permitido. Envie um arquivo .json.")

    conteudo = await file.read()
    if len(conteudo) == 0:
        raise HTTPException(status_code=400, detail="O arquivo enviado está vazio.")

    limite = get_settings().max_config_bytes
    if len(conteudo) > limite:
        raise HTTPException(
            status_code=400,
            detail=f"O arquivo tem {len(conteudo)} bytes e excede o limite de {limite} bytes.",
        )

    try:
        cfg = load_scenario(conteudo)
    except ConfigInvalid as e:
        raise _erro_config(e)

    try:
        return _resposta(run_scenario(cfg), include_events)
    except Exception as e:
        logger.exception("Falha ao executar cenário enviado")
        raise HTTPException(status_code=500, detail=sanitizar_erro(e))


# ==========================================
# ENDPOINT: SWEEP (CSV)
# ==========================================

class SweepRequest(BaseModel):
    config: ScenarioConfig
    param: str
    values: list[float] = Field(min_length=1)
    seeds: list[int] = Field(default_factory=lambda: [0], min_length=1)


@router.post("/sweep")
def executar_sweep(req: SweepRequest):
    linhas = len(req.values) * len(req.seeds)
    if linhas > MAX_SWEEP_ROWS:
        raise HTTPException(status_code=400, detail=f"Sweep de {linhas} linhas excede o limite de {MAX_SWEEP_ROWS}.")
    try:
        df = sweep(req.config, req.param, req.values, req.seeds)
    except (ConfigInvalid, UnknownParameter) as e:
        raise _erro_config(e)
    except Exception as e:
        logger.exception("Falha no sweep")
        raise HTTPException(status_code=500, detail=sanitizar_erro(e))
    return Response(content=df.to_csv(index=False, lineterminator="\n"), media_type="text/csv")


# ==========================================
# ENDPOINT: DEMONSTRAÇÕES
# ==========================================

@router.get("/demos/{name}")
def demonstracao(name: str):
    try:
        return run_demo(name)
    except UnknownDemo as e:
        raise HTTPException(status_code=404, detail=str(e))
    except Exception as e:
        logger.exception("Falha na demonstração '%s'", name)
        raise HTTPException(status_code=500, detail=sanitizar_erro(e))


def bundled_config(name: str) -> Optional[ScenarioConfig]:
    """Configuração empacotada em `configs/` pelo nome, sem extensão."""
    caminho = get_settings().config_dir / f"{name}.json"
    return load_scenario(caminho) if caminho.exists() else None


@router.get("/configs/{name}")
def configuracao_empacotada(name: str):
    if not name.replace("_", "").isalnum():
        raise HTTPException(status_code=400, detail="Nome de configuração inválido.")
    try:
        cfg = bundled_config(name)
    except ConfigInvalid as e:
        raise _erro_config(e)
    if cfg is None:
        raise HTTPException(status_code=404, detail=f"Configuração '{name}' não encontrada.")
    return cfg.model_dump(mode="json")
