# coding: utf-8

# # Dictionary coding of trees
#
# An SGT tree becomes its breadth-first list of child counts, which LZW then
# codes. A labeled tree becomes the adjacency bits that are still unknown once
# acyclicity is taken into account, which LZ78 then codes.

# %%

from arboret.codec import CodecFrame, decode_frame
from arboret.lzpipe import (
    ERSource,
    bit_extract,
    compress_er_tree,
    compress_sgt_stream,
    decompress_sgt_stream,
    expected_extracted_bits,
    measure_redundancy,
    sgt_sequence,
)
from arboret.randtree import ChildrenDistribution, RngSpec, sample_sgt, sample_uniform_labeled
from arboret.trees import LabeledTree, parse_paren

print(sgt_sequence(parse_paren("(()(()))")).tolist())
b, trace = bit_extract(LabeledTree(4, ((1, 2), (1, 3), (2, 4))))
print("extracted", b, "pairs", trace.pairs())

# %%

dist = ChildrenDistribution((0.5, 0.3, 0.2))
rng = RngSpec(3).generator()
trees = [sample_sgt(dist, rng) for _ in range(20_000)]
frame = compress_sgt_stream(trees, 3)
symbols = sum(t.n for t in trees)
print(f"{len(frame.payload) / symbols:.4f} bits per node vs H_C {dist.entropy:.4f}")
print("stream decodes:", decompress_sgt_stream(CodecFrame.from_bytes(frame.to_bytes())) == trees)

# %% [markdown]
# For labeled trees the extracted length is about n bits on average under the
# independence model, and the coded length moves towards the entropy as n grows.

# %%

print("h(1000, 0.3) =", round(expected_extracted_bits(1000, 0.3), 2))
t = sample_uniform_labeled(300, rng)
print("round trip:", decode_frame(compress_er_tree(t)) == t)
for n in (50, 200, 800):
    r = measure_redundancy(ERSource(n, 1.0), 64, RngSpec(n))
    print(f"n={n}: {r.bits_mean:9.1f} bits, entropy {r.reference_bits:9.1f}, redundancy/bit {r.redundancy_mean:.4f}")
