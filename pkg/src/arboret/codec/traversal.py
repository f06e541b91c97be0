"""Pit-climbing (PC), tunnel-digging (TD) and TreeExplorer traversal codes.

PC walks the tree bottom-up from the leftmost leaf: ``UP`` climbs to a new
parent, ``FALL`` drops to the leftmost leaf of the next sibling subtree and
``UPSEEN`` climbs back to the node a fall started from.  A node with children
``c1..ck`` is written

    k = 0:  (nothing)
    k = 1:  pc(c1) UP
    k >= 2: pc(c1) UP FALL pc(c2) [UPSEEN FALL pc(ci)]... UPSEEN

TD lists the children of every non-leaf node (BFS order of the parents) as
LEAF/NONLEAF marks, with a TUNNEL between consecutive sibling groups.

The ternary forms are always uniquely decodable.  The binary forms use
UP=1, FALL=0, UPSEEN=00 and LEAF=1, NONLEAF=00, TUNNEL=0; neither mapping
is uniquely decodable in general, which is why binary decoders here report
ambiguity instead of guessing.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

from .. import _kernels
from ..bits import BitString, PCSymbol, TDSymbol, TernaryCode
from ..trees import OrderedTree


class DecodeError(ValueError):
    pass


class AmbiguousCodeError(DecodeError):
    """A binary string has more than one valid parse."""


UP, UPSEEN, FALL = PCSymbol.UP, PCSymbol.UPSEEN, PCSymbol.FALL
LEAF, NONLEAF, TUNNEL = TDSymbol.LEAF, TDSymbol.NONLEAF, TDSymbol.TUNNEL

_PC_BITS = {UP: (1,), FALL: (0,), UPSEEN: (0, 0)}
_TD_BITS = {LEAF: (1,), NONLEAF: (0, 0), TUNNEL: (0,)}


def _binarize(code: TernaryCode, table) -> BitString:
    if not code.symbols:
        return BitString()
    vals = np.fromiter((int(s) for s in code.symbols), dtype=np.int64, count=len(code))
    widths = np.array([len(table[s]) for s in type(code.symbols[0])], dtype=np.int64)[vals]
    first = np.array([table[s][0] for s in type(code.symbols[0])], dtype=np.uint8)[vals]
    out = np.zeros(int(widths.sum()), dtype=np.uint8)
    starts = np.concatenate(([0], np.cumsum(widths)[:-1]))
    out[starts] = first  # every two-bit word is "00"
    return BitString(out)


# PC -------------------------------------------------------------------------


def pc_symbols(t: OrderedTree) -> TernaryCode:
    out: list[PCSymbol] = []
    stack = [[0, 0]]
    while stack:
        top = stack[-1]
        v, j = top
        k = t.degree(v)
        if j < k:
            if j == 1:
                out += (UP, FALL)
            elif j >= 2:
                out += (UPSEEN, FALL)
            top[1] = j + 1
            stack.append([t.children(v)[j], 0])
        else:
            if k == 1:
                out.append(UP)
            elif k >= 2:
                out.append(UPSEEN)
            stack.pop()
    return TernaryCode("pc", tuple(out))


def pc_encode(t: OrderedTree) -> BitString:
    return _binarize(pc_symbols(t), _PC_BITS)


def pc_length(n: int, l: int) -> int:
    if not 1 <= l <= n or (l == n and n > 1):
        raise ValueError(f"no tree has n={n} nodes and l={l} leaves")
    return 0 if n == 1 else n + 2 * l - 3


def pc_decode_ternary(code: TernaryCode) -> OrderedTree:
    if code.kind != "pc":
        raise DecodeError(f"expected a pc code, got {code.kind!r}")
    kids: list[list[int]] = [[]]
    cur = 0
    falls: list[int] = []
    prev = None
    for i, s in enumerate(code.symbols):
        if s == UP:
            kids.append([cur])
            cur = len(kids) - 1
        elif s == FALL:
            if prev is None or prev == FALL:
                raise DecodeError(f"FALL not allowed at symbol {i}")
            falls.append(cur)
            kids.append([])
            cur = len(kids) - 1
        else:
            if not falls:
                raise DecodeError(f"UPSEEN with no open fall at symbol {i}")
            origin = falls.pop()
            kids[origin].append(cur)
            cur = origin
        prev = s
    if falls:
        raise DecodeError("code ends inside an unfinished sibling group")
    return OrderedTree.from_child_lists(kids, root=cur)


def pc_parse_count(b: BitString) -> int:
    """Number of valid ternary parses of a binary PC string, saturated at 2."""
    count, _ = _kernels.pc_parse(np.ascontiguousarray(b.array))
    return int(count)


def pc_decode(b: BitString) -> OrderedTree:
    """Decode a binary PC code; raises AmbiguousCodeError when it has several parses."""
    count, syms = _kernels.pc_parse(np.ascontiguousarray(b.array))
    if count == 0:
        raise DecodeError("bits are not a PC code of any tree")
    if count > 1:
        raise AmbiguousCodeError("binary PC code has more than one parse")
    return pc_decode_ternary(TernaryCode("pc", tuple(syms.tolist())))


def pc_parses(b: BitString) -> Iterator[TernaryCode]:
    """All ternary parses of a binary PC string (exponential; for small inputs)."""
    bits = list(b)
    L = len(bits)
    path: list[PCSymbol] = []

    def rec(p: int, depth: int, prev):
        if p == L:
            if depth == 0:
                yield TernaryCode("pc", tuple(path))
            return
        options = []
        if bits[p] == 1:
            options.append((UP, 1, depth))
        else:
            if prev is not None and prev != FALL:
                options.append((FALL, 1, depth + 1))
            if p + 1 < L and bits[p + 1] == 0 and depth:
                options.append((UPSEEN, 2, depth - 1))
        for sym, w, d in options:
            path.append(sym)
            yield from rec(p + w, d, sym)
            path.pop()

    yield from rec(0, 0, None)


# TD -------------------------------------------------------------------------


def td_encode(t: OrderedTree) -> TernaryCode:
    out: list[TDSymbol] = []
    for v in range(t.n):
        if t.degree(v) == 0:
            continue
        if out:
            out.append(TUNNEL)
        out.extend(NONLEAF if t.degree(c) else LEAF for c in t.children(v))
    return TernaryCode("td", tuple(out))


def td_decode(code: TernaryCode) -> OrderedTree:
    if code.kind != "td":
        raise DecodeError(f"expected a td code, got {code.kind!r}")
    syms = code.symbols
    if not syms:
        return OrderedTree.single()
    sizes = [0]  # group sizes: root first, then NONLEAF nodes in order
    is_inner: list[bool] = []
    nonleaf_seen = 0
    group = 0
    for i, s in enumerate(syms):
        if s == TUNNEL:
            if sizes[group] == 0:
                raise DecodeError(f"empty sibling group before TUNNEL at symbol {i}")
            group += 1
            if group > nonleaf_seen:
                raise DecodeError(f"TUNNEL at symbol {i} opens a group with no parent")
            sizes.append(0)
        else:
            sizes[group] += 1
            is_inner.append(s == NONLEAF)
            if s == NONLEAF:
                nonleaf_seen += 1
    if sizes[group] == 0:
        raise DecodeError("code ends with an empty sibling group")
    if group != nonleaf_seen:
        raise DecodeError(f"{nonleaf_seen - group} NONLEAF nodes have no child group")
    it = iter(sizes[1:])
    deg = [sizes[0]] + [next(it) if inner else 0 for inner in is_inner]
    return OrderedTree(deg)


def td_bits(code: TernaryCode) -> BitString:
    if code.kind != "td":
        raise ValueError(f"expected a td code, got {code.kind!r}")
    return _binarize(code, _TD_BITS)


def td_length(n: int, l: int) -> int:
    if not 1 <= l <= n or (l == n and n > 1):
        raise ValueError(f"no tree has n={n} nodes and l={l} leaves")
    return 0 if n == 1 else 3 * n - 2 * l - 3


def td_parses(b: BitString) -> Iterator[TernaryCode]:
    """All ternary TD codes whose binary form is ``b`` (exponential; small inputs)."""
    bits = list(b)
    L = len(bits)
    path: list[TDSymbol] = []

    def rec(p: int, groups_open: int, cur_size: int, prev):
        # groups_open: child groups announced by NONLEAF marks but not started
        if p == L:
            if path and cur_size and groups_open == 0:
                yield TernaryCode("td", tuple(path))
            elif not path:
                yield TernaryCode("td", ())
            return
        options = []
        if bits[p] == 1:
            options.append((LEAF, 1, groups_open, cur_size + 1))
        else:
            if p + 1 < L and bits[p + 1] == 0:
                options.append((NONLEAF, 2, groups_open + 1, cur_size + 1))
            if prev is not None and prev != TUNNEL and cur_size and groups_open:
                options.append((TUNNEL, 1, groups_open - 1, 0))
        for sym, w, g, c in options:
            path.append(sym)
            yield from rec(p + w, g, c, sym)
            path.pop()

    yield from rec(0, 0, 0, None)


def td_decode_bits(b: BitString) -> OrderedTree:
    """Decode binary TD by exhaustive parsing; raises on ambiguity."""
    found = []
    for code in td_parses(b):
        found.append(code)
        if len(found) > 1:
            raise AmbiguousCodeError("binary TD code has more than one parse")
    if not found:
        raise DecodeError("bits are not a TD code of any tree")
    return td_decode(found[0])


# TreeExplorer ---------------------------------------------------------------


def treeexplorer_uses_pc(n: int, l: int) -> bool:
    return 2 * l < n


def treeexplorer_encode(t: OrderedTree) -> BitString:
    """One selector bit then the shorter binary branch (PC when 2l < n, else TD)."""
    if treeexplorer_uses_pc(t.n, t.leaves):
        return BitString((0,)) + pc_encode(t)
    return BitString((1,)) + td_bits(td_encode(t))


def treeexplorer_length(n: int, l: int) -> int:
    return 1 + (pc_length(n, l) if treeexplorer_uses_pc(n, l) else td_length(n, l))


def treeexplorer_decode(b: BitString) -> OrderedTree:
    """Prefix 0: binary PC payload.  Prefix 1: ternary-packed TD payload."""
    if len(b) == 0:
        raise DecodeError("empty TreeExplorer code")
    body = b[1:]
    if b[0] == 0:
        return pc_decode(body)
    try:
        return td_decode(TernaryCode.unpack("td", body))
    except ValueError as exc:
        raise DecodeError(str(exc)) from exc


def treeexplorer_pack(t: OrderedTree) -> BitString:
    """Lossless storage form: selector bit then the chosen branch, ternary-packed."""
    if treeexplorer_uses_pc(t.n, t.leaves):
        return BitString((0,)) + pc_symbols(t).pack()
    return BitString((1,)) + td_encode(t).pack()


def treeexplorer_unpack(b: BitString) -> OrderedTree:
    if len(b) == 0:
        raise DecodeError("empty TreeExplorer code")
    try:
        if b[0] == 0:
            return pc_decode_ternary(TernaryCode.unpack("pc", b[1:]))
        return td_decode(TernaryCode.unpack("td", b[1:]))
    except DecodeError:
        raise
    except ValueError as exc:
        raise DecodeError(str(exc)) from exc
