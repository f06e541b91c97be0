"""Bit-exact container for encoded trees.

Layout (little-endian integers)::

    b"ATC1" | codec id (u8) | node count (u32) | payload bits (u32)
    | payload, MSB first, zero padded to a byte
    | optional trailer: count (u32) then count x u32

The trailer carries node labels for labeled payloads; SGT-LZW frames use it to
record the alphabet size the payload was coded with.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from ..bits import BitString, TernaryCode
from ..trees import OrderedTree
from . import baselines, traversal

MAGIC = b"ATC1"
_HEADER = struct.Struct("<4sBII")


class CodecId(IntEnum):
    PC = 0
    TD = 1
    TREEEXPLORER = 2
    ADJLIST = 3
    NEWICK = 4
    SGT_LZW = 5
    ER_LZ78 = 6


CODEC_NAMES = {
    "pc": CodecId.PC,
    "td": CodecId.TD,
    "treeexplorer": CodecId.TREEEXPLORER,
    "adjlist": CodecId.ADJLIST,
    "newick": CodecId.NEWICK,
    "sgt-lzw": CodecId.SGT_LZW,
    "er-lz78": CodecId.ER_LZ78,
}


class FrameError(ValueError):
    """Malformed or corrupted frame bytes."""


@dataclass(frozen=True)
class CodecFrame:
    codec: CodecId
    n: int
    payload: BitString
    labels: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "codec", CodecId(self.codec))
        if not 0 <= self.n < 2**32 or len(self.payload) >= 2**32:
            raise FrameError("node count or payload length exceeds 32 bits")

    def to_bytes(self) -> bytes:
        out = _HEADER.pack(MAGIC, int(self.codec), self.n, len(self.payload)) + self.payload.pack()
        if self.labels is not None:
            out += struct.pack(f"<I{len(self.labels)}I", len(self.labels), *self.labels)
        return out

    @classmethod
    def from_bytes(cls, data: bytes) -> "CodecFrame":
        if len(data) < _HEADER.size:
            raise FrameError(f"frame shorter than its {_HEADER.size}-byte header")
        magic, cid, n, nbits = _HEADER.unpack_from(data)
        if magic != MAGIC:
            raise FrameError(f"bad magic {magic!r}")
        try:
            codec = CodecId(cid)
        except ValueError:
            raise FrameError(f"unknown codec id {cid}") from None
        nbytes = (nbits + 7) // 8
        end = _HEADER.size + nbytes
        if len(data) < end:
            raise FrameError("payload truncated")
        body = data[_HEADER.size:end]
        if nbits % 8 and body[-1] & ((1 << (8 - nbits % 8)) - 1):
            raise FrameError("nonzero padding bits")
        payload = BitString.unpack(body, nbits)
        rest = data[end:]
        labels = None
        if rest:
            if len(rest) < 4:
                raise FrameError("truncated trailer")
            (k,) = struct.unpack_from("<I", rest)
            if len(rest) != 4 + 4 * k:
                raise FrameError("trailer length mismatch")
            labels = struct.unpack_from(f"<{k}I", rest, 4)
        return cls(codec, n, payload, labels)


# tree <-> frame dispatch ------------------------------------------------------


_NEWICK_SYM = {"(": (0, 0), ")": (0, 1), ",": (1, 0)}
_NEWICK_CHR = {v: k for k, v in _NEWICK_SYM.items()}


def encode_tree(t: OrderedTree, codec: str | CodecId, *, check_unique: bool = True) -> CodecFrame:
    """Frame an ordered tree with one of the structural codecs (ids 0-4).

    PC frames hold the binary PC code; with ``check_unique`` the encoder refuses
    trees whose binary code has several parses.  TD and TreeExplorer frames use
    the ternary packing, which always decodes.
    """
    cid = CODEC_NAMES[codec] if isinstance(codec, str) else CodecId(codec)
    if cid == CodecId.PC:
        bits = traversal.pc_encode(t)
        if check_unique and traversal.pc_parse_count(bits) != 1:
            raise traversal.AmbiguousCodeError("binary PC code of this tree is not uniquely decodable")
        return CodecFrame(cid, t.n, bits)
    if cid == CodecId.TD:
        return CodecFrame(cid, t.n, traversal.td_encode(t).pack())
    if cid == CodecId.TREEEXPLORER:
        return CodecFrame(cid, t.n, traversal.treeexplorer_pack(t))
    if cid == CodecId.ADJLIST:
        w = baselines.ceil_log2(t.n)
        par = t.parents()
        vals = [x for c in range(1, t.n) for x in (par[c], c)]
        return CodecFrame(cid, t.n, BitString(_int_bits(vals, w)))
    if cid == CodecId.NEWICK:
        text = baselines.newick_emit(t)
        return CodecFrame(cid, t.n, BitString([b for ch in text for b in _NEWICK_SYM[ch]]))
    raise ValueError(f"codec {cid.name} frames are built by the lz pipelines")


def decode_frame(frame: CodecFrame):
    """Inverse of ``encode_tree``, ``compress_sgt`` and ``compress_er_tree``."""
    cid = frame.codec
    try:
        if cid == CodecId.PC:
            t = traversal.pc_decode(frame.payload)
        elif cid == CodecId.TD:
            t = traversal.td_decode(TernaryCode.unpack("td", frame.payload))
        elif cid == CodecId.TREEEXPLORER:
            t = traversal.treeexplorer_unpack(frame.payload)
        elif cid == CodecId.ADJLIST:
            t = _adjlist_decode(frame)
        elif cid == CodecId.NEWICK:
            p = frame.payload.array
            if p.size % 2:
                raise FrameError("odd Newick payload length")
            pairs = zip(p[0::2].tolist(), p[1::2].tolist())
            t = baselines.newick_parse("".join(_NEWICK_CHR[pr] for pr in pairs))
        else:
            from .. import lzpipe

            if cid == CodecId.SGT_LZW:
                return lzpipe.decompress_sgt(frame)
            return lzpipe.decompress_er_tree(frame)
    except KeyError as exc:
        raise FrameError(f"invalid symbol in payload: {exc}") from None
    except traversal.AmbiguousCodeError:
        raise
    except (ValueError, StopIteration) as exc:
        if isinstance(exc, FrameError):
            raise
        raise FrameError(f"payload does not decode: {exc}") from exc
    if t.n != frame.n:
        raise FrameError(f"frame says n={frame.n}, payload decodes to n={t.n}")
    return t


def _int_bits(vals, width: int) -> np.ndarray:
    if width == 0 or not vals:
        return np.zeros(0, dtype=np.uint8)
    v = np.asarray(vals, dtype=np.int64)[:, None]
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)[None, :]
    return ((v >> shifts) & 1).astype(np.uint8).reshape(-1)


def _adjlist_decode(frame: CodecFrame) -> OrderedTree:
    n = frame.n
    w = baselines.ceil_log2(n)
    arr = frame.payload.array
    if arr.size != 2 * (n - 1) * w:
        raise FrameError("adjacency payload has the wrong length")
    if n == 1:
        return OrderedTree.single()
    vals = arr.reshape(-1, w).astype(np.int64) @ (1 << np.arange(w - 1, -1, -1, dtype=np.int64))
    kids: list[list[int]] = [[] for _ in range(n)]
    for par, c in vals.reshape(-1, 2).tolist():
        if not (0 <= par < n and 0 < c < n):
            raise FrameError("adjacency entry out of range")
        kids[par].append(c)
    return OrderedTree.from_child_lists(kids)
