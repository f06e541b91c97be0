"""Bit strings and ternary traversal codes."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Iterator

import numpy as np


class BitString:
    """Immutable sequence of bits backed by a read-only ``uint8`` array.

    Packing is most-significant-bit first, zero padded to a byte boundary.
    """

    __slots__ = ("_bits",)

    def __init__(self, bits: Iterable[int] | np.ndarray = ()):
        if isinstance(bits, str):
            raise TypeError("use BitString.from_str for text input")
        if not isinstance(bits, (np.ndarray, list, tuple)):
            bits = list(bits)
        arr = np.array(bits, dtype=np.uint8).reshape(-1)
        if arr.size and int(arr.max()) > 1:
            raise ValueError("bits must be 0 or 1")
        arr.setflags(write=False)
        self._bits = arr

    @classmethod
    def from_str(cls, text: str) -> "BitString":
        if set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls(np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0"))

    @classmethod
    def unpack(cls, data: bytes, nbits: int) -> "BitString":
        if nbits > 8 * len(data):
            raise ValueError("bit length exceeds payload size")
        arr = np.unpackbits(np.frombuffer(data, dtype=np.uint8))[:nbits]
        return cls(arr)

    @property
    def array(self) -> np.ndarray:
        return self._bits

    def pack(self) -> bytes:
        return np.packbits(self._bits).tobytes()

    def count_ones(self) -> int:
        return int(self._bits.sum())

    def __len__(self) -> int:
        return int(self._bits.size)

    def __iter__(self) -> Iterator[int]:
        return iter(self._bits.tolist())

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return BitString(self._bits[idx])
        return int(self._bits[idx])

    def __add__(self, other: "BitString") -> "BitString":
        return BitString(np.concatenate([self._bits, other._bits]))

    def __eq__(self, other) -> bool:
        if isinstance(other, str):
            return str(self) == other
        if not isinstance(other, BitString):
            return NotImplemented
        return np.array_equal(self._bits, other._bits)

    def __hash__(self) -> int:
        return hash((len(self), self.pack()))

    def __str__(self) -> str:
        return (self._bits + ord("0")).tobytes().decode("ascii")

    def __repr__(self) -> str:
        s = str(self)
        if len(s) > 64:
            s = s[:61] + "..."
        return f"BitString({s!r}, len={len(self)})"


class PCSymbol(IntEnum):
    UP = 0  # climb to an unvisited node
    UPSEEN = 1  # climb back to the node a fall started from
    FALL = 2  # fall to the leftmost leaf of the next subtree


class TDSymbol(IntEnum):
    LEAF = 0
    NONLEAF = 1
    TUNNEL = 2


_KINDS = {"pc": (PCSymbol, PCSymbol.FALL), "td": (TDSymbol, TDSymbol.TUNNEL)}


@dataclass(frozen=True)
class TernaryCode:
    """A ternary traversal code; ``kind`` is ``"pc"`` or ``"td"``."""

    kind: str
    symbols: tuple

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown ternary code kind {self.kind!r}")
        enum, no_repeat = _KINDS[self.kind]
        syms = tuple(enum(s) for s in self.symbols)
        for a, b in zip(syms, syms[1:]):
            if a == no_repeat and b == no_repeat:
                raise ValueError(f"two consecutive {no_repeat.name} symbols")
        object.__setattr__(self, "symbols", syms)

    def __len__(self) -> int:
        return len(self.symbols)

    def pack(self) -> BitString:
        """Two bits per symbol, symbol value written most-significant bit first."""
        vals = np.fromiter((int(s) for s in self.symbols), dtype=np.uint8, count=len(self.symbols))
        out = np.empty(2 * vals.size, dtype=np.uint8)
        out[0::2] = vals >> 1
        out[1::2] = vals & 1
        return BitString(out)

    @classmethod
    def unpack(cls, kind: str, bits: BitString) -> "TernaryCode":
        arr = bits.array
        if arr.size % 2:
            raise ValueError("ternary payload must have even bit length")
        vals = (arr[0::2] << 1) | arr[1::2]
        if vals.size and int(vals.max()) > 2:
            raise ValueError("invalid ternary symbol 3 in payload")
        return cls(kind, tuple(vals.tolist()))
