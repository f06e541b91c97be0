"""Quick oracle checks behind ``arboret selftest``."""

from __future__ import annotations

import math
from typing import Callable, TextIO

from .bits import BitString
from .codec import frame as frames
from .codec.baselines import newick_emit, prufer_decode
from .codec.traversal import pc_decode, pc_encode, td_bits, td_decode, td_encode
from .entropy import binary_entropy, kirchhoff_count, sgt_entropy
from .lzpipe import SymbolSequence, bit_extract, expected_extracted_bits, lz78_decode, lz78_encode, lzw_encode
from .randtree import ChildrenDistribution, count_unordered, enumerate_ordered
from .trees import LabeledTree, SimpleGraph, double_node, double_node_inverse, parse_paren, to_paren


def _checks() -> list[tuple[str, Callable[[], bool]]]:
    cherry = parse_paren("(()())")
    return [
        ("paren round trip n<=8", lambda: all(parse_paren(to_paren(t)) == t
                                              for n in range(1, 9) for t in enumerate_ordered(n))),
        ("pc code of a cherry is 1000", lambda: str(pc_encode(cherry)) == "1000" and pc_decode(pc_encode(cherry)) == cherry),
        ("td code of a 3-path is 0001", lambda: str(td_bits(td_encode(parse_paren("((()))")))) == "0001"),
        ("td ternary round trip n<=8", lambda: all(td_decode(td_encode(t)) == t
                                                   for n in range(1, 9) for t in enumerate_ordered(n))),
        ("double-node bijection n<=7", lambda: all(double_node_inverse(double_node(t)) == t
                                                   for n in range(1, 8) for t in enumerate_ordered(n))),
        ("newick of a cherry is (,)", lambda: newick_emit(cherry) == "(,)"),
        ("unordered counts 1..8", lambda: [count_unordered(n) for n in range(1, 9)] == [1, 1, 2, 4, 9, 20, 48, 115]),
        ("pruefer n=4 is a bijection", lambda: len({prufer_decode((a, b), 4) for a in range(1, 5) for b in range(1, 5)}) == 16),
        ("kirchhoff K4 = 16", lambda: kirchhoff_count(SimpleGraph.complete(4)) == 16),
        ("binary entropy H(0.1)", lambda: abs(binary_entropy(0.1) - 0.4690) < 1e-4),
        ("sgt entropy {0:.5,1:.5} = 2", lambda: sgt_entropy(ChildrenDistribution((0.5, 0.5))) == 2.0),
        ("h(10, 0.5) = 9.98046875", lambda: math.isclose(expected_extracted_bits(10, 0.5), 9.98046875, abs_tol=1e-12)),
        ("bit extraction example", lambda: str(bit_extract(LabeledTree(4, ((1, 2), (1, 3), (2, 4))))[0]) == "1101"),
        ("lz78 round trip", lambda: lz78_decode(lz78_encode(SymbolSequence(2, [0, 0, 1, 0, 1, 1]))[0], 2).tolist()
         == [0, 0, 1, 0, 1, 1]),
        ("lzw [0,0,1] is 5 bits", lambda: len(lzw_encode(SymbolSequence(2, [0, 0, 1]))) == 5),
        ("frame round trip", lambda: frames.decode_frame(frames.CodecFrame.from_bytes(
            frames.encode_tree(cherry, "treeexplorer").to_bytes())) == cherry),
        ("frame bit length", lambda: frames.CodecFrame.from_bytes(
            frames.CodecFrame(0, 1, BitString.from_str("101")).to_bytes()).payload == "101"),
    ]


def run_selftest(out: TextIO) -> bool:
    ok = True
    for name, fn in _checks():
        try:
            passed = bool(fn())
        except Exception as exc:  # report, keep going
            passed = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        ok &= passed
        out.write(f"{'PASS' if passed else 'FAIL'}  {name}\n")
    return ok
