"""Structural tree codecs and their container format."""

from .baselines import (
    adjlist_cost,
    label_overhead,
    newick_cost,
    newick_emit,
    newick_parse,
    prufer_decode,
    prufer_encode,
)
from .frame import CODEC_NAMES, CodecFrame, CodecId, FrameError, decode_frame, encode_tree
from .traversal import (
    AmbiguousCodeError,
    DecodeError,
    pc_decode,
    pc_decode_ternary,
    pc_encode,
    pc_length,
    pc_parse_count,
    pc_parses,
    pc_symbols,
    td_bits,
    td_decode,
    td_decode_bits,
    td_encode,
    td_length,
    td_parses,
    treeexplorer_decode,
    treeexplorer_encode,
    treeexplorer_length,
    treeexplorer_pack,
    treeexplorer_unpack,
)
