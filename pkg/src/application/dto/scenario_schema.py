"""
Configuração de cenário (JSON). Campos desconhecidos são erro, não aviso:
um typo num parâmetro de ataque invalidaria o experimento em silêncio.
"""

import math
from enum import Enum
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator, model_validator

from src.application.services.intermediary_service import (
    DEFAULT_CHALLENGE_BITS,
    DEFAULT_PASSWORD_BITS,
    CredentialKind,
)
from src.application.services.protocol_service import ProtocolConfig
from src.domain.entities.attack import AttackKind, AttackType
from src.domain.entities.quantum import AngleSet, MeasurementAngle
from src.shared.utils.bits import as_bits, text_to_bits

DEFAULT_ANGLES = [0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4]
MAX_SEED = (1 << 64) - 1


class IntermediaryMode(str, Enum):
    OFF = "off"
    ON = "on"
    ON_WITH_INSIDER = "on_with_insider"


class AttackSchema(BaseModel):
    model_config = ConfigDict(extra="forbid")

    type: AttackType = AttackType.NONE
    angle_policy: Optional[Literal["uniform", "fixed"]] = None
    fixed_angle: Optional[float] = None

    @field_validator("fixed_angle")
    @classmethod
    def _angulo_valido(cls, v: Optional[float]) -> Optional[float]:
        if v is not None:
            MeasurementAngle(v)
        return v

    @model_validator(mode="after")
    def _politica_coerente(self) -> "AttackSchema":
        if self.type is AttackType.INTERCEPT_RESEND:
            if self.angle_policy is None:
                raise ValueError("intercept_resend exige angle_policy ('uniform' ou 'fixed').")
            if self.angle_policy == "fixed" and self.fixed_angle is None:
                raise ValueError("angle_policy 'fixed' exige fixed_angle.")
            if self.angle_policy == "uniform" and self.fixed_angle is not None:
                raise ValueError("fixed_angle só vale com angle_policy 'fixed'.")
        elif self.angle_policy is not None or self.fixed_angle is not None:
            raise ValueError(f"Ataque '{self.type.value}' não aceita angle_policy/fixed_angle.")
        return self

    def to_attack_kind(self) -> AttackKind:
        if self.type is AttackType.INTERCEPT_RESEND:
            fixo = MeasurementAngle(self.fixed_angle) if self.angle_policy == "fixed" else None
            return AttackKind.intercept_resend(fixo)
        return AttackKind(self.type)


class MessagePayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    bits: Optional[str] = Field(default=None, pattern=r"^[01]*$")
    text: Optional[str] = None

    @model_validator(mode="after")
    def _um_formato(self) -> "MessagePayload":
        if (self.bits is None) == (self.text is None):
            raise ValueError("Informe exatamente um de 'bits' ou 'text'.")
        return self

    def to_bits(self) -> np.ndarray:
        if self.bits is not None:
            return as_bits(self.bits)
        return text_to_bits(self.text or "")


class ScenarioConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    p_max: Optional[float] = Field(default=None, gt=0, lt=1)
    angle_set: list[float] = Field(default_factory=lambda: list(DEFAULT_ANGLES), min_length=2)
    rounds_per_test: Optional[int] = Field(default=None, ge=1)
    confidence: Optional[float] = Field(default=None, gt=0, lt=1)
    key_length: int = Field(default=256, ge=1)
    attack: AttackSchema = Field(default_factory=AttackSchema)
    intermediary: IntermediaryMode = IntermediaryMode.OFF
    credential: CredentialKind = CredentialKind.PAD
    # Pad de cada cliente junto a AL (o "drive de 4TB", em escala de bancada)
    pad_bits: int = Field(default=8192, ge=1)
    challenge_bits: int = Field(default=DEFAULT_CHALLENGE_BITS, ge=1)
    password_bits: int = Field(default=DEFAULT_PASSWORD_BITS, ge=1)
    message: Optional[MessagePayload] = None
    seed: int = Field(default=0, ge=0, le=MAX_SEED)

    @field_validator("angle_set")
    @classmethod
    def _conjunto_valido(cls, v: list[float], info: ValidationInfo) -> list[float]:
        AngleSet.from_radians(v, info.data.get("p_max"))
        return v

    @model_validator(mode="after")
    def _coerencia(self) -> "ScenarioConfig":
        if (self.rounds_per_test is None) == (self.confidence is None):
            raise ValueError("Informe exatamente um de 'rounds_per_test' ou 'confidence'.")
        if self.message is not None and len(self.message.to_bits()) > self.key_length:
            raise ValueError(
                f"Mensagem de {len(self.message.to_bits())} bits excede key_length = {self.key_length}."
            )
        if self.intermediary is not IntermediaryMode.OFF:
            tamanho = 0 if self.message is None else len(self.message.to_bits())
            if tamanho + 2 * self.challenge_bits > self.pad_bits:
                raise ValueError("pad_bits insuficiente para autenticação e retransmissão da mensagem.")
        self.protocol_config()
        return self

    # =====================================================
    # CONVERSÕES PARA O DOMÍNIO
    # =====================================================

    def angle_set_obj(self) -> AngleSet:
        return AngleSet.from_radians(self.angle_set, self.p_max)

    def attack_kind(self) -> AttackKind:
        return self.attack.to_attack_kind()

    def protocol_config(self) -> ProtocolConfig:
        angulos = self.angle_set_obj()
        if self.rounds_per_test is not None:
            return ProtocolConfig.from_rounds(angulos, self.rounds_per_test, self.key_length)
        return ProtocolConfig.from_confidence(angulos, self.confidence, self.key_length)  # type: ignore[arg-type]

    def message_bits(self) -> Optional[np.ndarray]:
        return None if self.message is None else self.message.to_bits()
