"""Random tree sources, their entropies, and tree compression codecs."""

from .bits import BitString, PCSymbol, TDSymbol, TernaryCode
from .trees import (
    LabeledTree,
    NotFullBinaryError,
    OrderedTree,
    ParseError,
    SimpleGraph,
    bfs_order,
    double_node,
    double_node_inverse,
    leaf_count,
    parse_paren,
    to_paren,
    tree_from_json,
    tree_to_json,
)
from .randtree import (
    CapExceeded,
    ChildrenDistribution,
    Exhausted,
    NotConnected,
    RngSpec,
    count_ordered,
    count_unordered,
    enumerate_ordered,
    enumerate_unordered,
    sample_cgw,
    sample_er_graph,
    sample_er_spanning,
    sample_sgt,
    sample_uniform_labeled,
    sample_uniform_ordered,
    sample_uniform_spanning_tree,
    sgt_tree_probability,
)
from .codec import CodecFrame, CodecId, FrameError, decode_frame, encode_tree

__version__ = "0.1.0"
