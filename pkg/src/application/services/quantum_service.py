"""
Substrato quântico: pares emaranhados, medição parametrizada, colapso e
no-cloning.

Modelo de correlação: P(concordância) = cos²(Δθ), ângulos módulo π. Após a
medição o qubit vira um estado puro na base medida, então remedições em
outro ângulo seguem a mesma lei. O emaranhamento é um registro oculto
compartilhado que colapsa na primeira medição de qualquer metade.

Um QuantumRegistry pertence a uma única sessão e não deve ser mutado por
threads concorrentes.
"""

import logging
from itertools import count
from typing import NoReturn

from src.domain.entities.quantum import (
    EntangledHalf,
    EntangledPairRecord,
    MeasurementAngle,
    MeasurementOutcome,
    Pure,
    Qubit,
    agreement_probability,
)
from src.domain.exceptions import CloningForbidden, MeasuringDeadQubit
from src.shared.utils.random_source import RandomSource

logger = logging.getLogger(__name__)


def _project(basis: MeasurementAngle, bit: int, angle: MeasurementAngle, rng: RandomSource) -> int:
    """Mede um estado puro (basis, bit) no ângulo `angle`."""
    p = agreement_probability(basis, angle)
    if p == 1.0:
        return bit
    if p == 0.0:
        return 1 - bit
    return bit if rng.uniform() < p else 1 - bit


class QuantumRegistry:

    def __init__(self):
        self._pairs: dict[int, EntangledPairRecord] = {}
        self._live: dict[int, Qubit] = {}
        self._halves: dict[int, set[int]] = {}
        self._pair_of: dict[int, int] = {}
        self._qubit_ids = count(1)
        self._pair_ids = count(1)

    # =====================================================
    # CRIAÇÃO
    # =====================================================

    def new_entangled_pair(self) -> tuple[Qubit, Qubit]:
        """Par novo com `collapsed` vazio; o bit só é sorteado na primeira medição."""
        record = EntangledPairRecord(pair_id=next(self._pair_ids))
        self._pairs[record.pair_id] = record
        q1 = self._issue(EntangledHalf(record.pair_id, 0))
        q2 = self._issue(EntangledHalf(record.pair_id, 1))
        self._halves[record.pair_id] = {q1.id, q2.id}
        self._pair_of.update({q1.id: record.pair_id, q2.id: record.pair_id})
        return q1, q2

    def prepare(self, angle: MeasurementAngle, bit: int) -> Qubit:
        if bit not in (0, 1):
            raise ValueError(f"Bit inválido: {bit!r}")
        if not isinstance(angle, MeasurementAngle):
            raise TypeError("prepare() exige um MeasurementAngle.")
        return self._issue(Pure(angle, int(bit)))

    def _issue(self, state) -> Qubit:
        q = Qubit(id=next(self._qubit_ids), state=state)
        self._live[q.id] = q
        return q

    # =====================================================
    # MEDIÇÃO
    # =====================================================

    def measure(self, q: Qubit, angle: MeasurementAngle, rng: RandomSource) -> MeasurementOutcome:
        if not q.alive:
            raise MeasuringDeadQubit(f"Qubit {q.id} já foi enviado ou destruído.")

        state = q.state
        if isinstance(state, EntangledHalf):
            record = self._pairs[state.pair_id]
            if record.collapsed is None:
                bit = rng.bit()
                record.collapsed = (angle, bit)
            else:
                basis, b0 = record.collapsed
                bit = _project(basis, b0, angle, rng)
        else:
            bit = _project(state.basis, state.bit, angle, rng)

        q.state = Pure(angle, bit)
        return bit  # type: ignore[return-value]

    def try_clone(self, q: Qubit) -> NoReturn:
        # A proibição vem antes de qualquer checagem de vida do handle
        raise CloningForbidden(f"O estado do qubit {q.id} não pode ser copiado.")

    # =====================================================
    # POSSE DO HANDLE
    # =====================================================

    def transfer(self, q: Qubit) -> Qubit:
        """Invalida o handle atual e devolve o único handle vivo com o mesmo id."""
        if not q.alive or self._live.get(q.id) is not q:
            raise MeasuringDeadQubit(f"Qubit {q.id} não possui handle vivo para transferir.")
        q.alive = False
        novo = Qubit(id=q.id, state=q.state)
        self._live[q.id] = novo
        return novo

    def destroy(self, q: Qubit) -> None:
        """Descarta o handle; o registro do par some junto com a última metade."""
        if not q.alive:
            raise MeasuringDeadQubit(f"Qubit {q.id} já foi enviado ou destruído.")
        q.alive = False
        self._live.pop(q.id, None)
        pair_id = self._pair_of.pop(q.id, None)
        if pair_id is not None:
            restantes = self._halves[pair_id]
            restantes.discard(q.id)
            if not restantes:
                del self._halves[pair_id]
                del self._pairs[pair_id]

    def is_live(self, qubit_id: int) -> bool:
        return qubit_id in self._live

    def pair(self, pair_id: int) -> EntangledPairRecord:
        return self._pairs[pair_id]

    @property
    def live_count(self) -> int:
        return len(self._live)

    @property
    def pair_count(self) -> int:
        return len(self._pairs)
