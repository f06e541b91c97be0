"""Dictionary-coding pipelines for random trees.

SGT trees go through their BFS child-count sequence and LZW; labeled trees go
through bit extraction (the informative subset of the adjacency matrix) and
LZ78.  Code conventions:

* LZ78: phrase ``j`` (1-based) is ``ceil(log2 j)`` prefix-index bits plus
  ``ceil(log2 A)`` symbol bits.  After the full phrases one flag bit follows:
  ``0`` ends the stream, ``1`` is followed by the index of a final partial
  phrase.  The empty sequence codes to zero bits.
* LZW: the table starts with the alphabet, the k-th code is written with
  ``ceil(log2(A + k - 1))`` bits, no reset and no end code.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .bits import BitString
from .codec.frame import CodecFrame, CodecId, FrameError
from .codec.traversal import DecodeError
from .entropy import er_tree_upper, labeled_entropy
from .randtree import (
    ChildrenDistribution,
    RngSpec,
    as_generator,
    sample_er_spanning,
    sample_sgt,
    sample_uniform_labeled,
    sgt_log2_probability,
)
from .trees import LabeledTree, OrderedTree


def ceil_log2(j: int) -> int:
    return (j - 1).bit_length() if j > 1 else 0


@dataclass(frozen=True, eq=False)
class SymbolSequence:
    alphabet: int
    symbols: np.ndarray

    def __post_init__(self):
        arr = np.array(self.symbols, dtype=np.int64).reshape(-1)
        if self.alphabet < 1:
            raise ValueError("alphabet size must be >= 1")
        if arr.size and (arr.min() < 0 or arr.max() >= self.alphabet):
            raise ValueError(f"symbols must lie in 0..{self.alphabet - 1}")
        arr.setflags(write=False)
        object.__setattr__(self, "symbols", arr)

    def __len__(self) -> int:
        return int(self.symbols.size)

    def tolist(self) -> list[int]:
        return self.symbols.tolist()

    def __eq__(self, other) -> bool:
        return (isinstance(other, SymbolSequence) and self.alphabet == other.alphabet
                and np.array_equal(self.symbols, other.symbols))

    def __repr__(self) -> str:
        body = self.tolist() if len(self) <= 20 else f"{self.tolist()[:20]}..."
        return f"SymbolSequence(A={self.alphabet}, {body})"


class PhraseTable:
    """Insertion-ordered phrase -> index map that must stay prefix-closed."""

    def __init__(self, base: Iterable[tuple] = ()):
        self._index: dict[tuple, int] = {}
        self._phrases: list[tuple] = []
        for ph in base:
            self._insert(tuple(ph))

    def _insert(self, phrase: tuple) -> int:
        self._index[phrase] = len(self._phrases)
        self._phrases.append(phrase)
        return self._index[phrase]

    def add(self, phrase: Sequence[int]) -> int:
        phrase = tuple(phrase)
        if phrase in self._index:
            raise ValueError(f"phrase {phrase} already present")
        if len(phrase) > 1 and phrase[:-1] not in self._index:
            raise ValueError(f"prefix of {phrase} missing")
        return self._insert(phrase)

    def index(self, phrase: Sequence[int]) -> int:
        return self._index[tuple(phrase)]

    def __contains__(self, phrase) -> bool:
        return tuple(phrase) in self._index

    def __len__(self) -> int:
        return len(self._phrases)

    def phrases(self) -> list[tuple]:
        return list(self._phrases)

    def is_prefix_closed(self) -> bool:
        return all(len(p) <= 1 or p[:-1] in self._index for p in self._phrases)


def _seq_array(s) -> tuple[np.ndarray, int]:
    if isinstance(s, SymbolSequence):
        return s.symbols, s.alphabet
    raise TypeError("expected a SymbolSequence")


def _pack(vals: list[int], widths: list[int]) -> BitString:
    if not vals:
        return BitString()
    v = np.asarray(vals, dtype=np.int64)
    w = np.asarray(widths, dtype=np.int64)
    total = int(w.sum())
    owner = np.repeat(np.arange(v.size), w)
    ends = np.cumsum(w)
    shift = ends[owner] - 1 - np.arange(total)
    return BitString(((v[owner] >> shift) & 1).astype(np.uint8))


def _read(bits: np.ndarray, pos: int, width: int) -> int:
    v = 0
    for b in bits[pos:pos + width].tolist():
        v = (v << 1) | b
    return v


def _join(parts: list, alphabet: int) -> np.ndarray:
    if alphabet <= 256:
        return np.frombuffer(b"".join(parts), dtype=np.uint8).astype(np.int64)
    return np.array([x for p in parts for x in p], dtype=np.int64)


def _unit(alphabet: int, x: int):
    return bytes((x,)) if alphabet <= 256 else (x,)


# LZ78 -------------------------------------------------------------------------


def lz78_parse(s: SymbolSequence) -> tuple[list[tuple[int, int]], int]:
    """Greedy LZ78 parse: ``(prefix index, symbol)`` per full phrase, plus the
    index of the trailing partial phrase (0 when there is none)."""
    seq, _ = _seq_array(s)
    trie: dict[tuple[int, int], int] = {}
    out = []
    node = 0
    for x in seq.tolist():
        c = trie.get((node, x))
        if c is not None:
            node = c
            continue
        out.append((node, x))
        trie[(node, x)] = len(out)
        node = 0
    return out, node


def lz78_phrase_table(s: SymbolSequence) -> PhraseTable:
    pairs, _ = lz78_parse(s)
    table = PhraseTable([()])
    seen: list[tuple] = [()]
    for pre, x in pairs:
        seen.append(seen[pre] + (x,))
        table.add(seen[-1])
    return table


def lz78_encode(s: SymbolSequence) -> tuple[BitString, int]:
    """Return the LZ78 bits and the number of phrases (a partial one included)."""
    seq, A = _seq_array(s)
    if A < 2:
        raise ValueError("LZ78 needs an alphabet of at least 2 symbols")
    pairs, tail = lz78_parse(s)
    sb = ceil_log2(A)
    vals: list[int] = []
    widths: list[int] = []
    for j, (pre, x) in enumerate(pairs, 1):
        vals += (pre, x)
        widths += (ceil_log2(j), sb)
    phrases = len(pairs)
    if seq.size:
        j = len(pairs) + 1
        if tail:
            vals += (1, tail)
            widths += (1, ceil_log2(j))
            phrases += 1
        else:
            vals.append(0)
            widths.append(1)
    return _pack(vals, widths), phrases


def lz78_decode(b: BitString, alphabet: int) -> SymbolSequence:
    bits = b.array
    L = bits.size
    if L == 0:
        return SymbolSequence(alphabet, [])
    sb = ceil_log2(alphabet)
    exp = [b"" if alphabet <= 256 else ()]
    out = []
    pos = 0
    j = 1
    while True:
        rem = L - pos
        w = ceil_log2(j)
        if rem == 1:
            if bits[pos] != 0 or j == 1:
                raise DecodeError("bad LZ78 terminator")
            break
        if rem == 1 + w and j > 1:
            if bits[pos] != 1:
                raise DecodeError("bad LZ78 partial-phrase flag")
            idx = _read(bits, pos + 1, w)
            if not 1 <= idx < j:
                raise DecodeError(f"partial phrase index {idx} out of range")
            out.append(exp[idx])
            break
        if rem < w + sb + 1:
            raise DecodeError("truncated LZ78 stream")
        idx = _read(bits, pos, w)
        x = _read(bits, pos + w, sb)
        if idx >= j or x >= alphabet:
            raise DecodeError(f"LZ78 phrase {j} has invalid fields")
        ph = exp[idx] + _unit(alphabet, x)
        exp.append(ph)
        out.append(ph)
        pos += w + sb
        j += 1
    return SymbolSequence(alphabet, _join(out, alphabet))


def lz78_code_length(s: SymbolSequence | np.ndarray, alphabet: int | None = None) -> int:
    """Bit length of ``lz78_encode`` without materializing the bits."""
    if isinstance(s, SymbolSequence):
        seq, alphabet = s.symbols, s.alphabet
    else:
        seq = np.asarray(s)
    _, total = _kernels.lz78_cost(np.ascontiguousarray(seq, dtype=np.int64), int(alphabet))
    return int(total)


# LZW --------------------------------------------------------------------------


def lzw_codes(s: SymbolSequence) -> list[int]:
    seq, A = _seq_array(s)
    if seq.size == 0:
        return []
    table: dict[tuple[int, int], int] = {}
    size = A
    codes = []
    xs = seq.tolist()
    w = xs[0]
    for x in xs[1:]:
        c = table.get((w, x))
        if c is not None:
            w = c
            continue
        codes.append(w)
        table[(w, x)] = size
        size += 1
        w = x
    codes.append(w)
    return codes


def lzw_phrase_table(s: SymbolSequence) -> PhraseTable:
    seq, A = _seq_array(s)
    table = PhraseTable((x,) for x in range(A))
    codes = lzw_codes(s)
    phrases = table.phrases()
    pos = 0
    for k, c in enumerate(codes):
        ph = phrases[c]
        pos += len(ph)
        if k + 1 < len(codes):
            table.add(ph + (int(seq[pos]),))
            phrases = table.phrases()
    return table


def lzw_encode(s: SymbolSequence) -> BitString:
    _, A = _seq_array(s)
    if A < 2:
        raise ValueError("LZW needs an alphabet of at least 2 symbols")
    codes = lzw_codes(s)
    widths = [ceil_log2(A + k) for k in range(len(codes))]
    return _pack(codes, widths)


def lzw_code_length(s: SymbolSequence) -> int:
    codes = len(lzw_codes(s))
    A = s.alphabet
    return sum(ceil_log2(A + k) for k in range(codes))


def lzw_decode(b: BitString, alphabet: int) -> SymbolSequence:
    bits = b.array
    L = bits.size
    A = alphabet
    exp = [_unit(A, x) for x in range(A)]
    out = []
    pos = 0
    prev = None
    k = 0
    while pos < L:
        w = ceil_log2(A + k)
        if pos + w > L:
            raise DecodeError("truncated LZW stream")
        c = _read(bits, pos, w)
        pos += w
        if c < len(exp):
            entry = exp[c]
        elif c == len(exp) and prev is not None:
            entry = exp[prev] + exp[prev][:1]
        else:
            raise DecodeError(f"LZW code {c} not in table")
        if prev is not None:
            exp.append(exp[prev] + entry[:1])
        out.append(entry)
        prev = c
        k += 1
    return SymbolSequence(A, _join(out, A))


# SGT pipeline -------------------------------------------------------------------


def sgt_sequence(t: OrderedTree, alphabet: int | None = None) -> SymbolSequence:
    A = max(t.degrees) + 1 if alphabet is None else alphabet
    return SymbolSequence(A, t.degrees)


def sgt_sequence_inverse(s: SymbolSequence) -> OrderedTree:
    return OrderedTree(s.tolist())


def split_sgt_stream(symbols: Sequence[int]) -> list[OrderedTree]:
    """Cut a concatenation of SGT sequences back into trees."""
    trees = []
    start = 0
    need = 1
    seen = 0
    for i, x in enumerate(symbols):
        seen += 1
        need += x
        if seen == need:
            trees.append(OrderedTree(symbols[start:i + 1]))
            start, need, seen = i + 1, 1, 0
    if seen:
        raise DecodeError("stream ends inside a tree")
    return trees


def _check_alphabet(trees: Iterable[OrderedTree], K: int) -> None:
    if K < 2:
        raise ValueError("alphabet bound K must be >= 2")
    for t in trees:
        if max(t.degrees) >= K:
            raise ValueError(f"child count {max(t.degrees)} does not fit alphabet K={K}")


def compress_sgt(t: OrderedTree, K: int) -> CodecFrame:
    _check_alphabet([t], K)
    return CodecFrame(CodecId.SGT_LZW, t.n, lzw_encode(sgt_sequence(t, K)), labels=(K,))


def compress_sgt_stream(trees: Sequence[OrderedTree], K: int) -> CodecFrame:
    _check_alphabet(trees, K)
    seq = np.concatenate([np.asarray(t.degrees, dtype=np.int64) for t in trees]) if trees else []
    s = SymbolSequence(K, seq)
    return CodecFrame(CodecId.SGT_LZW, len(s), lzw_encode(s), labels=(K,))


def _sgt_symbols(frame: CodecFrame) -> list[int]:
    if frame.codec != CodecId.SGT_LZW:
        raise FrameError("not an SGT-LZW frame")
    if not frame.labels or len(frame.labels) != 1:
        raise FrameError("SGT-LZW frame lacks its alphabet trailer")
    try:
        s = lzw_decode(frame.payload, frame.labels[0])
    except ValueError as exc:
        raise FrameError(str(exc)) from exc
    if len(s) != frame.n:
        raise FrameError(f"payload decodes to {len(s)} symbols, header says {frame.n}")
    return s.tolist()


def decompress_sgt_stream(frame: CodecFrame) -> list[OrderedTree]:
    try:
        return split_sgt_stream(_sgt_symbols(frame))
    except FrameError:
        raise
    except ValueError as exc:
        raise FrameError(str(exc)) from exc


def decompress_sgt(frame: CodecFrame) -> OrderedTree:
    trees = decompress_sgt_stream(frame)
    if len(trees) != 1:
        raise FrameError(f"frame holds {len(trees)} trees, expected one")
    return trees[0]


def sgt_size_mass_bound(dist: ChildrenDistribution, n: int) -> float:
    """(1 - p0)^n, the bound on P(N = n) used in the redundancy estimate."""
    return (1.0 - dist.p0) ** n


def sgt_redundancy_bound(dist: ChildrenDistribution, C_alpha: float | None = None) -> float:
    """Leading-order LZW redundancy per symbol for SGT sequences."""
    h = dist.entropy
    p0 = dist.p0
    if h <= 0:
        raise ValueError("children entropy is zero")
    if not 0 < p0 < 1:
        raise ValueError("p0 must lie strictly between 0 and 1")
    c = float(dist.max_children + 1) if C_alpha is None else float(C_alpha)
    k = math.log2(c * math.log2(math.e) / h) / math.log(2)
    lp = math.log2(p0)
    return k * (p0 - lp - 1) - lp + 1 / p0 + p0 * (1 + lp + math.log2(c)) - 2


# ER pipeline ----------------------------------------------------------------------


@dataclass(frozen=True)
class ExtractionTrace:
    """Processing order, bits emitted per processed node, and the bits."""

    n: int
    order: tuple
    counts: tuple
    bits: BitString

    @property
    def total(self) -> int:
        return len(self.bits)

    def pairs(self) -> list[tuple[int, int]]:
        rem = list(range(2, self.n + 1))
        out = []
        pos = 0
        arr = self.bits.array.tolist()
        for u, k in zip(self.order, self.counts):
            out += [(u, w) for w in rem]
            keep = [w for w, b in zip(rem, arr[pos:pos + k]) if not b]
            pos += k
            rem = keep
        return out


def bit_extract(t: LabeledTree) -> tuple[BitString, ExtractionTrace]:
    """Emit one bit per pair that is not yet decided by the revealed edges.

    Nodes are processed in BFS order from label 1 (new neighbours in ascending
    label order).  The revealed component always contains every processed node
    and all nodes outside it are isolated, so the undecided pairs of node u are
    exactly (u, w) for w outside the component.
    """
    n = t.n
    adj = [np.asarray(a, dtype=np.int64) for a in t.adjacency()]
    rem = np.arange(2, n + 1, dtype=np.int64)
    mark = np.zeros(n + 1, dtype=bool)
    order = [1]
    counts = []
    chunks = []
    i = 0
    while i < len(order):
        u = order[i]
        counts.append(int(rem.size))
        if rem.size:
            mark[adj[u]] = True
            b = mark[rem]
            mark[adj[u]] = False
            chunks.append(b.astype(np.uint8))
            order.extend(rem[b].tolist())
            rem = rem[~b]
        i += 1
    bits = BitString(np.concatenate(chunks) if chunks else np.zeros(0, np.uint8))
    return bits, ExtractionTrace(n, tuple(order), tuple(counts), bits)


def tree_csr(t: LabeledTree) -> tuple[np.ndarray, np.ndarray]:
    """Sorted CSR adjacency over labels 0..n (row 0 empty)."""
    e = np.asarray(t.edges, dtype=np.int64).reshape(-1, 2)
    src = np.concatenate([e[:, 0], e[:, 1]])
    dst = np.concatenate([e[:, 1], e[:, 0]])
    o = np.lexsort((dst, src))
    indptr = np.zeros(t.n + 2, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=t.n + 1), out=indptr[1:])
    return indptr, dst[o]


def bit_extract_fast(t: LabeledTree) -> np.ndarray:
    """Same bits as ``bit_extract`` from the compiled kernel."""
    indptr, indices = tree_csr(t)
    bits, _ = _kernels.extract_bits(t.n, indptr, indices)
    return bits


def bit_extract_inverse(b: BitString, n: int) -> LabeledTree:
    if n < 1:
        raise ValueError("n must be >= 1")
    arr = b.array.astype(bool)
    rem = np.arange(2, n + 1, dtype=np.int64)
    order = [1]
    edges = []
    pos = 0
    i = 0
    while i < len(order) and rem.size:
        u = order[i]
        k = rem.size
        if pos + k > arr.size:
            raise DecodeError("extraction bits end early")
        sel = arr[pos:pos + k]
        pos += k
        new = rem[sel].tolist()
        edges += [(u, w) for w in new]
        order += new
        rem = rem[~sel]
        i += 1
    if rem.size:
        raise DecodeError("bits do not describe a spanning tree")
    if pos != arr.size:
        raise DecodeError(f"{arr.size - pos} trailing bits after the tree is complete")
    return LabeledTree(n, tuple(edges))


def compress_er_tree(t: LabeledTree) -> CodecFrame:
    bits, _ = bit_extract(t)
    payload, _ = lz78_encode(SymbolSequence(2, bits.array))
    return CodecFrame(CodecId.ER_LZ78, t.n, payload)


def decompress_er_tree(frame: CodecFrame) -> LabeledTree:
    if frame.codec != CodecId.ER_LZ78:
        raise FrameError("not an ER-LZ78 frame")
    try:
        bits = lz78_decode(frame.payload, 2)
        return bit_extract_inverse(BitString(bits.symbols.astype(np.uint8)), frame.n)
    except ValueError as exc:
        raise FrameError(str(exc)) from exc


def extracted_bits_recursion(n: int, p: float) -> list[float]:
    """E[A_1..A_n] from the first-order recursion of the Bernoulli model."""
    if n < 1 or not 0 < p <= 1:
        raise ValueError("need n >= 1 and 0 < p <= 1")
    out = [float(n - 1)]
    for _ in range(1, n):
        out.append((1 - p) * out[-1] - 1 + p)
    return out


def expected_extracted_bits(n: int, p: float) -> float:
    """h(n): closed-form sum of the recursion above."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    q = (1 - p) ** n
    return (n * p * p - q - p * (n * q - 2 * q + 2) + 1) / (p * p)


def lz78_redundancy_bound(l: int) -> float:
    """Leading term ln ln l / ln l of the LZ78 per-symbol redundancy."""
    if l < 3:
        raise ValueError("l must be >= 3")
    return math.log(math.log(l)) / math.log(l)


# measurement --------------------------------------------------------------------


@dataclass(frozen=True)
class SGTSource:
    dist: ChildrenDistribution
    node_cap: int = 1_000_000
    name: str = "sgt"


@dataclass(frozen=True)
class ERSource:
    n: int
    p: float
    name: str = "er"


@dataclass(frozen=True)
class RedundancyReport:
    model: str
    n: int | None
    p: float | None
    trials: int
    bits_mean: float
    bits_stderr: float
    redundancy_mean: float
    symbols_mean: float
    reference_bits: float

    COLUMNS = ("model", "n", "p", "trials", "bits_mean", "bits_stderr", "redundancy_mean")

    def row(self) -> dict:
        return {k: getattr(self, k) for k in self.COLUMNS}


CHUNK = 16


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("ARBORET_THREADS", "1")))
    except ValueError:
        return 1


def _root_spec(rng) -> RngSpec:
    if isinstance(rng, RngSpec):
        return rng
    if isinstance(rng, (int, np.integer)):
        return RngSpec(int(rng))
    return RngSpec(int(as_generator(rng).integers(2**63)))


def _sgt_chunk(src: SGTSource, spec: RngSpec, k: int, K: int):
    gen = spec.generator()
    rows = []
    for _ in range(k):
        t = sample_sgt(src.dist, gen, src.node_cap)
        bits = lzw_code_length(sgt_sequence(t, K))
        rows.append((bits, -sgt_log2_probability(src.dist, t), t.n))
    return rows


def _er_chunk(src: ERSource, spec: RngSpec, k: int):
    gen = spec.generator()
    rows = []
    for _ in range(k):
        if src.p == 1.0:
            t = sample_uniform_labeled(src.n, gen)
        else:
            t = sample_er_spanning(src.n, src.p, gen)
        bits = bit_extract_fast(t)
        rows.append((lz78_code_length(bits, 2), 0.0, int(bits.size)))
    return rows


def measure_redundancy(source: SGTSource | ERSource, trials: int, rng, threads: int | None = None) -> RedundancyReport:
    """Per-tree code lengths and redundancy per coded symbol.

    SGT trees: LZW on the SGT sequence against -log2 p(t); symbols are nodes.
    ER trees: LZ78 on extracted bits against the exact entropy at p = 1 and the
    upper bound otherwise (so the redundancy is then a lower estimate); symbols
    are extracted bits.  Trials run in fixed chunks with their own derived
    streams, so results do not depend on ``threads``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    root = _root_spec(rng)
    sizes = [min(CHUNK, trials - s) for s in range(0, trials, CHUNK)]
    if isinstance(source, SGTSource):
        K = max(2, source.dist.max_children + 1)
        jobs = [(_sgt_chunk, (source, root.derive(c), k, K)) for c, k in enumerate(sizes)]
    else:
        jobs = [(_er_chunk, (source, root.derive(c), k)) for c, k in enumerate(sizes)]
    workers = threads or default_threads()
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda job: job[0](*job[1]), jobs))
    else:
        parts = [f(*a) for f, a in jobs]
    rows = np.array([r for part in parts for r in part], dtype=float)
    bits, info, syms = rows[:, 0], rows[:, 1], rows[:, 2]
    se = float(bits.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    if isinstance(source, SGTSource):
        ref = float(info.mean())
        red = float((bits.sum() - info.sum()) / syms.sum())
        return RedundancyReport(source.name, None, None, trials, float(bits.mean()), se, red,
                                float(syms.mean()), ref)
    ref = labeled_entropy(source.n) if source.p == 1.0 else er_tree_upper(source.n, source.p)
    red = float((bits.mean() - ref) / syms.mean())
    return RedundancyReport(source.name, source.n, source.p, trials, float(bits.mean()), se, red,
                            float(syms.mean()), ref)


def lzw_iid_rate(dist: ChildrenDistribution, length: int, rng) -> float:
    """LZW bits per symbol on ``length`` i.i.d. child counts."""
    K = max(2, dist.max_children + 1)
    seq = SymbolSequence(K, dist.sample(as_generator(rng), length))
    return lzw_code_length(seq) / length
