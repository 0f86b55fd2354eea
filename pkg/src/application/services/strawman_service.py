"""
Contraponto clássico: a caixa com dois cadeados.

Alice tranca, Bob acrescenta o dele, Alice retira o seu e Bob abre. Com
cadeados XOR as operações comutam e o protocolo funciona, mas Eve recupera a
mensagem só com as três transmissões públicas.

O estimador de esforço ilustra o outro lado: segurança computacional depende
de quanto recurso Eve consegue reunir, e isso muda com o tempo.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.domain.exceptions import LengthMismatch
from src.shared.utils.bits import BitsLike, as_bits

# Ano juliano em segundos
SECONDS_PER_YEAR = 31_557_600


@dataclass(frozen=True)
class ThreePassTranscript:
    pass1: np.ndarray
    pass2: np.ndarray
    pass3: np.ndarray

    def __post_init__(self):
        tamanhos = {len(self.pass1), len(self.pass2), len(self.pass3)}
        if len(tamanhos) != 1:
            raise LengthMismatch(f"Transmissões com tamanhos diferentes: {sorted(tamanhos)}")


def _mesmo_tamanho(*seqs: np.ndarray) -> None:
    if len({len(s) for s in seqs}) != 1:
        raise LengthMismatch(f"Sequências de bits com tamanhos diferentes: {[len(s) for s in seqs]}")


def three_pass_exchange(message: BitsLike, alice_key: BitsLike, bob_key: BitsLike) -> ThreePassTranscript:
    m, a, b = as_bits(message), as_bits(alice_key), as_bits(bob_key)
    _mesmo_tamanho(m, a, b)

    pass1 = m ^ a
    pass2 = pass1 ^ b
    pass3 = pass2 ^ a
    # Bob retira o próprio cadeado
    assert np.array_equal(pass3 ^ b, m)
    return ThreePassTranscript(pass1, pass2, pass3)


def eve_break_three_pass(t: ThreePassTranscript) -> np.ndarray:
    """(m⊕a) ⊕ (m⊕a⊕b) ⊕ (m⊕b) = m, para quaisquer chaves."""
    _mesmo_tamanho(t.pass1, t.pass2, t.pass3)
    return t.pass1 ^ t.pass2 ^ t.pass3


# ================================================================
# ESFORÇO COMPUTACIONAL
# ================================================================

@dataclass(frozen=True)
class WorkFactorModel:
    security_bits: int
    ops_per_second: float
    machines: int = 1
    algorithmic_speedup: float = 1.0
    label: str = ""

    def __post_init__(self):
        for nome in ("security_bits", "ops_per_second", "machines", "algorithmic_speedup"):
            if not getattr(self, nome) > 0:
                raise ValueError(f"{nome} deve ser estritamente positivo, recebido {getattr(self, nome)!r}")

    @property
    def throughput(self) -> float:
        """Operações por segundo somando máquinas e ganho algorítmico."""
        return self.ops_per_second * self.machines * self.algorithmic_speedup

    @classmethod
    def calibrated(cls, security_bits: int, years: float, label: str = "") -> "WorkFactorModel":
        """Uma máquina cuja velocidade faz a quebra levar exatamente `years`."""
        ops = 2.0 ** security_bits / (years * SECONDS_PER_YEAR)
        return cls(security_bits=security_bits, ops_per_second=ops, label=label)

    def scaled(self, *, machines: Optional[int] = None, algorithmic_speedup: Optional[float] = None,
               label: str = "") -> "WorkFactorModel":
        return WorkFactorModel(
            security_bits=self.security_bits,
            ops_per_second=self.ops_per_second,
            machines=self.machines if machines is None else machines,
            algorithmic_speedup=self.algorithmic_speedup if algorithmic_speedup is None else algorithmic_speedup,
            label=label or self.label,
        )


def estimate_break_years(w: WorkFactorModel) -> float:
    return 2.0 ** w.security_bits / w.throughput / SECONDS_PER_YEAR


def security_bits_at_risk(w: WorkFactorModel, horizon_years: float) -> int:
    """
    Maior tamanho de parâmetro que os recursos de `w` quebram dentro do
    horizonte. O campo security_bits do modelo é ignorado.
    """
    if horizon_years <= 0:
        raise ValueError("O horizonte deve ser positivo.")
    orcamento = horizon_years * SECONDS_PER_YEAR * w.throughput
    if orcamento < 2.0:
        return 0
    bits = int(math.floor(math.log2(orcamento)))
    # log2 em ponto flutuante pode errar por um na fronteira
    while bits > 0 and 2.0 ** bits > orcamento:
        bits -= 1
    while 2.0 ** (bits + 1) <= orcamento:
        bits += 1
    return bits


# ================================================================
# CENÁRIOS ILUSTRATIVOS
# ================================================================

def supercomputer_scenario(security_bits: int = 80) -> list[tuple[WorkFactorModel, float]]:
    """500 anos num supercomputador; seis meses com mil deles ou com código mil vezes mais rápido."""
    base = WorkFactorModel.calibrated(security_bits, 500.0, label="1 supercomputador")
    modelos = [
        base,
        base.scaled(machines=1000, label="1000 supercomputadores"),
        base.scaled(algorithmic_speedup=1000.0, label="implementação 1000x mais rápida"),
    ]
    return [(m, estimate_break_years(m)) for m in modelos]


# Números ilustrativos, não medições: a mesma chave de 100 bits frente a
# máquinas e algoritmos de cada época.
RSA_ERAS: tuple[WorkFactorModel, ...] = (
    WorkFactorModel(security_bits=100, ops_per_second=1e6, label="estimativa de 1977"),
    WorkFactorModel(security_bits=100, ops_per_second=1e7, machines=1000, algorithmic_speedup=1e12,
                    label="quatro anos depois"),
    WorkFactorModel(security_bits=100, ops_per_second=1e9, machines=10_000, algorithmic_speedup=1.5e12,
                    label="2005"),
)


def rsa_anecdote() -> list[tuple[WorkFactorModel, float]]:
    return [(m, estimate_break_years(m)) for m in RSA_ERAS]
