from dataclasses import dataclass
from enum import Enum
from typing import Optional

from src.domain.entities.quantum import MeasurementAngle


class AttackType(str, Enum):
    NONE = "none"
    PASSIVE_CLASSICAL = "passive_classical"
    INTERCEPT_RESEND = "intercept_resend"
    MITM = "mitm"


@dataclass(frozen=True)
class AnglePolicy:
    """Política de ângulo de Eve: ângulo fixo ou uniforme no conjunto a cada qubit."""
    fixed_angle: Optional[MeasurementAngle] = None

    @property
    def uniform(self) -> bool:
        return self.fixed_angle is None

    def __str__(self) -> str:
        return "uniform" if self.uniform else f"fixed({self.fixed_angle})"


@dataclass(frozen=True)
class AttackKind:
    type: AttackType = AttackType.NONE
    policy: Optional[AnglePolicy] = None

    def __post_init__(self):
        if self.type is AttackType.INTERCEPT_RESEND and self.policy is None:
            raise ValueError("Intercept-resend exige uma política de ângulo.")
        if self.type is not AttackType.INTERCEPT_RESEND and self.policy is not None:
            raise ValueError("Política de ângulo só se aplica a intercept-resend.")

    @classmethod
    def none(cls) -> "AttackKind":
        return cls(AttackType.NONE)

    @classmethod
    def passive(cls) -> "AttackKind":
        return cls(AttackType.PASSIVE_CLASSICAL)

    @classmethod
    def intercept_resend(cls, fixed_angle: Optional[MeasurementAngle] = None) -> "AttackKind":
        return cls(AttackType.INTERCEPT_RESEND, AnglePolicy(fixed_angle))

    @classmethod
    def mitm(cls) -> "AttackKind":
        return cls(AttackType.MITM)

    @property
    def eve_present(self) -> bool:
        return self.type is not AttackType.NONE

    def __str__(self) -> str:
        if self.policy is not None:
            return f"{self.type.value}:{self.policy}"
        return self.type.value
