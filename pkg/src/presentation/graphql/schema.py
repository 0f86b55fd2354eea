import strawberry
from typing import Optional


# ==========================================
# RESULTADO DE SESSÃO
# ==========================================

@strawberry.type
class SessionReportType:
    established: bool
    shared_index: Optional[int]
    discovery_rounds_used: int
    qber: float
    checksum_ok: bool
    eve_known_fraction: float
    aborted_reason: Optional[str]

    # Parâmetros efetivos (m ou ε derivado)
    rounds_per_test: int
    confidence: float
    key_length: int


@strawberry.type
class ScenarioRunType:
    report: SessionReportType
    transcript_sha256: str
    event_count: int


# ==========================================
# ESFORÇO COMPUTACIONAL
# ==========================================

@strawberry.type
class BreakEstimateType:
    years: float
    security_bits_at_risk_in_one_year: int
