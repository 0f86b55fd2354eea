from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from src.domain.exceptions import PadExhausted, PadReuse


@dataclass(eq=False)
class PadStore:
    """
    Sequência de bits aleatórios compartilhada, endereçada por bit.

    `consumed` é um cursor monotônico: nenhum índice abaixo dele é relido.
    Cada ponta controla o próprio cursor; dessincronização só aparece como
    lixo na decifração ou como checksum divergente.
    """
    bits: np.ndarray
    owner: str
    consumed: int = field(default=0)

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=np.uint8)
        if self.consumed < 0 or self.consumed > len(self.bits):
            raise ValueError(f"Cursor {self.consumed} fora do pad de {len(self.bits)} bits.")

    def __len__(self) -> int:
        return len(self.bits)

    @property
    def remaining(self) -> int:
        return len(self.bits) - self.consumed

    def take(self, count: int, offset: Optional[int] = None) -> np.ndarray:
        """
        Consome `count` bits a partir de `offset` (ou do cursor atual).

        Offset abaixo do cursor → PadReuse. Offset acima do cursor é permitido:
        os bits pulados também passam a contar como consumidos.
        """
        inicio = self.consumed if offset is None else offset
        if inicio < self.consumed:
            raise PadReuse(
                f"Offset {inicio} já consumido (cursor em {self.consumed}) no pad de '{self.owner}'."
            )
        if inicio + count > len(self.bits):
            raise PadExhausted(
                f"Pad de '{self.owner}' tem {len(self.bits) - inicio} bits livres a partir de "
                f"{inicio}; necessários {count}."
            )
        trecho = self.bits[inicio:inicio + count].copy()
        if count:
            self.consumed = inicio + count
        return trecho

    def copy_for(self, owner: str) -> "PadStore":
        """Cópia independente (mesmos bits, mesmo cursor) entregue a outra parte."""
        return PadStore(bits=self.bits.copy(), owner=owner, consumed=self.consumed)
