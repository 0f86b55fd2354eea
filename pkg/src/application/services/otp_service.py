"""
One-time pad: máscara XOR bit a bit com uso único estrito.

mask e unmask têm o mesmo contrato (XOR é involução); as duas pontas devem
estar com os cursores sincronizados.
"""

from pathlib import Path
from typing import Optional, Union

import numpy as np

from src.domain.entities.pad import PadStore
from src.shared.utils.bits import BitsLike, as_bits, pack_bits, unpack_bytes


def mask(pad: PadStore, message: BitsLike, offset: Optional[int] = None) -> np.ndarray:
    """ciphertext[i] = message[i] XOR bits[consumed + i]; o cursor avança len(message)."""
    bits = as_bits(message)
    return np.bitwise_xor(bits, pad.take(len(bits), offset))


def unmask(pad: PadStore, ciphertext: BitsLike, offset: Optional[int] = None) -> np.ndarray:
    return mask(pad, ciphertext, offset)


def new_pad(rng, size_bits: int, owner: str) -> PadStore:
    return PadStore(bits=rng.bits(size_bits), owner=owner)


# ================================================================
# ARQUIVOS DE PAD
# Bytes crus, bit mais significativo primeiro, sem cabeçalho.
# ================================================================

def save_pad(pad: PadStore, path: Union[str, Path]) -> None:
    Path(path).write_bytes(pack_bits(pad.bits))


def load_pad(path: Union[str, Path], owner: str) -> PadStore:
    return PadStore(bits=unpack_bytes(Path(path).read_bytes()), owner=owner)
