import numpy as np
import pytest

from src.application.dto.transcript_schema import Actor
from src.application.services.protocol_service import PartyState
from src.application.services.quantum_service import QuantumRegistry
from src.domain.entities.pad import PadStore
from src.domain.entities.quantum import default_angle_set
from src.infrastructure.config import reset_settings
from src.infrastructure.simulation.channels import Channels
from src.shared.utils.random_source import RandomSource


@pytest.fixture
def angles():
    return default_angle_set()


@pytest.fixture
def rng():
    return RandomSource(1234)


@pytest.fixture
def registry():
    return QuantumRegistry()


@pytest.fixture
def channels():
    return Channels.open()


@pytest.fixture(autouse=True)
def _settings_limpos(monkeypatch):
    """Cada teste lê as variáveis de ambiente do zero."""
    for nome in ("QKDSIM_LOG_LEVEL", "QKDSIM_CONFIG_DIR", "QKDSIM_SWEEP_WORKERS",
                 "QKDSIM_CORS_ORIGINS", "QKDSIM_MAX_CONFIG_BYTES"):
        monkeypatch.delenv(nome, raising=False)
    reset_settings()
    yield
    reset_settings()


def party(role: Actor, index: int) -> PartyState:
    return PartyState(role, index, PadStore(np.empty(0, dtype=np.uint8), role.value))
