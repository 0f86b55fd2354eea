import strawberry
from typing import Optional

from src.application.services.adversary_service import per_round_agreement_under_attack
from src.application.services.protocol_service import required_rounds as _required_rounds
from src.application.services.scenario_service import load_scenario, run_scenario as _run_scenario
from src.application.services.strawman_service import (
    WorkFactorModel,
    estimate_break_years as _estimate_break_years,
    security_bits_at_risk,
)
from src.domain.entities.attack import AnglePolicy
from src.domain.entities.quantum import MeasurementAngle, agreement_probability as _agreement, default_angle_set
from .schema import BreakEstimateType, ScenarioRunType, SessionReportType


@strawberry.type
class Query:

    @strawberry.field
    def required_rounds(self, p_max: float, epsilon: float) -> int:
        """Menor m com p_max^m <= ε."""
        return _required_rounds(p_max, epsilon)

    @strawberry.field
    def agreement_probability(self, a: float, b: float) -> float:
        return _agreement(MeasurementAngle(a), MeasurementAngle(b))

    @strawberry.field
    def per_round_agreement_under_attack(self, theta_ab: float, fixed_angle: Optional[float] = None) -> float:
        """
        Concordância por rodada sob intercept-resend. Sem fixed_angle, Eve
        sorteia no conjunto padrão de quatro ângulos.
        """
        politica = AnglePolicy(None if fixed_angle is None else MeasurementAngle(fixed_angle))
        return per_round_agreement_under_attack(MeasurementAngle(theta_ab), politica, default_angle_set())

    @strawberry.field
    def estimate_break_years(
        self,
        security_bits: int,
        ops_per_second: float,
        machines: int = 1,
        algorithmic_speedup: float = 1.0,
    ) -> BreakEstimateType:
        modelo = WorkFactorModel(security_bits, ops_per_second, machines, algorithmic_speedup)
        return BreakEstimateType(
            years=_estimate_break_years(modelo),
            security_bits_at_risk_in_one_year=security_bits_at_risk(modelo, 1.0),
        )

    @strawberry.field
    def run_scenario(self, config_json: str) -> ScenarioRunType:
        """Executa um cenário a partir do JSON de configuração (mesmo formato dos arquivos em configs/)."""
        resultado = _run_scenario(load_scenario(config_json.encode("utf-8")))
        return ScenarioRunType(
            report=SessionReportType(**resultado.summary),
            transcript_sha256=resultado.transcript.digest(),
            event_count=len(resultado.transcript),
        )
