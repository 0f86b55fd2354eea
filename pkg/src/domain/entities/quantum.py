import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Literal, Optional, Union

from src.domain.exceptions import InvalidAngle, InvalidAngleSet

MeasurementOutcome = Literal[0, 1]

# Tolerância para comparar p_max informado com o calculado (cos² tem ruído de ponto flutuante)
P_MAX_TOL = 1e-12
P_MAX_ORTOGONAL = 0.5


@dataclass(frozen=True, order=True)
class MeasurementAngle:
    """Parâmetro de medição Θ, em radianos, identificado módulo π."""
    radians: float

    def __post_init__(self):
        r = self.radians
        if isinstance(r, bool) or not isinstance(r, (int, float)):
            raise InvalidAngle(f"Ângulo deve ser numérico, recebido {r!r}")
        if not math.isfinite(r) or not (0.0 <= r < math.pi):
            raise InvalidAngle(f"Ângulo {r!r} fora de [0, π)")
        object.__setattr__(self, "radians", float(r))

    def __str__(self) -> str:
        return f"{self.radians:.6f}"


def agreement_probability(a: MeasurementAngle, b: MeasurementAngle) -> float:
    """
    Probabilidade de concordância entre medições nos ângulos a e b: cos²(a − b).

    Valores a menos de 1e-12 de 0 ou 1 são fixados exatamente, para que bases
    ortogonais e bases iguais sejam determinísticas.
    """
    p = math.cos(a.radians - b.radians) ** 2
    if p < P_MAX_TOL:
        return 0.0
    if p > 1.0 - P_MAX_TOL:
        return 1.0
    return p


@dataclass(frozen=True)
class AngleSet:
    angles: tuple[MeasurementAngle, ...]
    p_max: float

    def __post_init__(self):
        if len(set(self.angles)) != len(self.angles):
            raise InvalidAngleSet("Os ângulos do conjunto devem ser distintos.")
        if not (0.0 < self.p_max < 1.0):
            raise InvalidAngleSet(f"p_max = {self.p_max} deve estar em (0, 1).")
        for a, b in combinations(self.angles, 2):
            if agreement_probability(a, b) > self.p_max + P_MAX_TOL:
                raise InvalidAngleSet(
                    f"Ângulos {a} e {b} concordam com probabilidade "
                    f"{agreement_probability(a, b):.6f} > p_max = {self.p_max}."
                )

    @classmethod
    def from_radians(cls, values: list[float], p_max: Optional[float] = None) -> "AngleSet":
        angles = tuple(MeasurementAngle(v) for v in values)
        if p_max is None:
            pares = [agreement_probability(a, b) for a, b in combinations(angles, 2)]
            if not pares:
                raise InvalidAngleSet("São necessários ao menos dois ângulos.")
            # Conjunto todo ortogonal: nenhum ângulo errado concorda, qualquer cota em (0, 1) vale
            p_max = max(pares) or P_MAX_ORTOGONAL
        return cls(angles=angles, p_max=p_max)

    @property
    def k(self) -> int:
        return len(self.angles)

    def __getitem__(self, index: int) -> MeasurementAngle:
        return self.angles[index]

    def index_of(self, angle: MeasurementAngle) -> int:
        return self.angles.index(angle)

    def radians(self) -> list[float]:
        return [a.radians for a in self.angles]


def default_angle_set() -> AngleSet:
    """{0, π/4, π/2, 3π/4} com p_max = 0.5."""
    return AngleSet.from_radians([0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4], p_max=0.5)


# ================================================================
# ESTADOS DE QUBIT
# ================================================================

@dataclass(frozen=True)
class EntangledHalf:
    pair_id: int
    side: int


@dataclass(frozen=True)
class Pure:
    basis: MeasurementAngle
    bit: int


QubitState = Union[EntangledHalf, Pure]


@dataclass
class EntangledPairRecord:
    """Registro oculto compartilhado pelas duas metades; colapsa na primeira medição."""
    pair_id: int
    collapsed: Optional[tuple[MeasurementAngle, int]] = None


@dataclass(eq=False)
class Qubit:
    """
    Handle de um qubit. Só existe um handle vivo por id: enviar ou destruir
    invalida este objeto (alive=False) e, no envio, o destinatário recebe um
    handle novo com o mesmo id.
    """
    id: int
    state: QubitState
    alive: bool = field(default=True)

    def __repr__(self) -> str:
        # O estado oculto nunca aparece em logs
        return f"Qubit(id={self.id}, alive={self.alive})"
