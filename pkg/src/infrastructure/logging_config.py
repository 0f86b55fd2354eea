import logging
from typing import Optional

from src.infrastructure.config import get_settings

FORMATO = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"


def configure_logging(level: Optional[str] = None) -> None:
    """Configura o logger raiz uma vez; logs vão para stderr e nunca entram nos arquivos de saída."""
    nivel = (level or get_settings().log_level).upper()
    logging.basicConfig(level=nivel, format=FORMATO, force=True)
    # Ruído de bibliotecas
    logging.getLogger("multipart").setLevel(logging.WARNING)
