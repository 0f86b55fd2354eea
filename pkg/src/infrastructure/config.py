import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

# Carrega variáveis de ambiente do arquivo .env
load_dotenv()

_NIVEIS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

DEFAULT_CORS_ORIGINS = (
    "http://localhost:5173",
    "http://localhost:3000",
    "http://127.0.0.1:5173",
    "http://127.0.0.1:3000",
    "http://localhost:8000",
)


def _erro(variavel: str, valor: str, exemplo: str) -> ValueError:
    return ValueError(
        f"\n❌ ERRO: {variavel} inválida: {valor!r}\n"
        "\n📝 Passos para corrigir:"
        "\n1. Copie o arquivo .env.example para .env"
        f"\n2. Ajuste {variavel} no arquivo .env (ou remova para usar o padrão)"
        "\n3. Rode o comando novamente\n"
        f"\nExemplo:\n{variavel}={exemplo}\n"
    )


def _inteiro_positivo(variavel: str, padrao: int) -> int:
    bruto = os.getenv(variavel)
    if bruto is None or bruto.strip() == "":
        return padrao
    try:
        valor = int(bruto)
    except ValueError:
        raise _erro(variavel, bruto, str(padrao)) from None
    if valor < 1:
        raise _erro(variavel, bruto, str(padrao))
    return valor


@dataclass(frozen=True)
class Settings:
    log_level: str = "INFO"
    config_dir: Path = Path("configs")
    sweep_workers: int = 1
    cors_origins: tuple[str, ...] = field(default=DEFAULT_CORS_ORIGINS)
    max_config_bytes: int = 64 * 1024

    @classmethod
    def from_env(cls) -> "Settings":
        nivel = os.getenv("QKDSIM_LOG_LEVEL", "INFO").strip().upper()
        if nivel not in _NIVEIS:
            raise _erro("QKDSIM_LOG_LEVEL", nivel, "INFO")

        origens = os.getenv("QKDSIM_CORS_ORIGINS")
        cors = DEFAULT_CORS_ORIGINS
        if origens:
            cors = tuple(o.strip() for o in origens.split(",") if o.strip())

        return cls(
            log_level=nivel,
            config_dir=Path(os.getenv("QKDSIM_CONFIG_DIR", "configs")),
            sweep_workers=_inteiro_positivo("QKDSIM_SWEEP_WORKERS", 1),
            cors_origins=cors,
            max_config_bytes=_inteiro_positivo("QKDSIM_MAX_CONFIG_BYTES", 64 * 1024),
        )


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Lidas uma vez por processo; testes podem chamar reset_settings()."""
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def reset_settings() -> None:
    global _settings
    _settings = None
