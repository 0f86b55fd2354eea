"""
Utilitários de sequências de bits.

Bits são sempre arrays numpy `uint8` com valores 0/1. Empacotamento em bytes
é big-endian dentro de cada byte (bit mais significativo primeiro) e
completado com zeros até a fronteira de byte.
"""

from typing import Iterable, Union

import numpy as np

BitsLike = Union[np.ndarray, str, bytes, Iterable[int]]


def as_bits(value: BitsLike) -> np.ndarray:
    """
    Converte qualquer representação aceita em array de bits.

    - "1010"          → [1, 0, 1, 0]
    - [1, 0, 1]       → [1, 0, 1]
    - array numpy     → cópia uint8 (validada)
    Bytes NÃO são aceitos aqui: use `unpack_bytes` para deixar a intenção explícita.
    """
    if isinstance(value, (bytes, bytearray)):
        raise TypeError("Use unpack_bytes() para converter bytes em bits.")
    if isinstance(value, str):
        texto = value.strip()
        if any(c not in "01" for c in texto):
            raise ValueError(f"Sequência de bits inválida: '{value}'")
        return np.frombuffer(texto.encode("ascii"), dtype=np.uint8) - ord("0")
    arr = np.asarray(list(value) if not isinstance(value, np.ndarray) else value)
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError("Bits devem valer 0 ou 1.")
    return arr.astype(np.uint8, copy=True)


def bits_to_str(bits: np.ndarray) -> str:
    return "".join("1" if b else "0" for b in np.asarray(bits).ravel())


def pack_bits(bits: np.ndarray) -> bytes:
    return np.packbits(np.asarray(bits, dtype=np.uint8), bitorder="big").tobytes()


def unpack_bytes(data: bytes) -> np.ndarray:
    return np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8), bitorder="big")


def bits_to_hex(bits: np.ndarray) -> str:
    return pack_bits(bits).hex()


def text_to_bits(text: str) -> np.ndarray:
    return unpack_bytes(text.encode("utf-8"))
