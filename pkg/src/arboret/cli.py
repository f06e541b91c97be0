"""``arboret`` command line: generate, encode, decode, entropy, experiment, selftest.

Exit codes: 0 ok, 2 usage or domain error, 3 corrupted or undecodable data.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import entropy
from .codec import frame as frames
from .codec.traversal import AmbiguousCodeError, DecodeError
from .experiments import FIGURES, ExperimentConfig, experiment_csv
from .lzpipe import compress_er_tree, compress_sgt, compress_sgt_stream, decompress_sgt_stream
from .randtree import (
    CapExceeded,
    ChildrenDistribution,
    Exhausted,
    RngSpec,
    sample_cgw,
    sample_er_spanning,
    sample_sgt,
    sample_uniform_labeled,
    sample_uniform_ordered,
)
from .trees import LabeledTree, OrderedTree, ParseError, parse_paren, to_paren

EXIT_OK, EXIT_DOMAIN, EXIT_CORRUPT = 0, 2, 3

MODELS = ("uniform-ordered", "uniform-labeled", "sgt", "cgw", "er-spanning")
ENTROPY_MODELS = ("uniform-unordered", "uniform-ordered", "labeled", "sgt", "cgw", "er", "er-graph", "giant")
CODECS = ("pc", "td", "treeexplorer", "adjlist", "newick", "sgt-lzw", "er-lz78")


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_DOMAIN):
        super().__init__(message)
        self.code = code


_PAIR = re.compile(r"(\d+)\s*:\s*([-+0-9.eE]+)")


def parse_dist(text: str) -> ChildrenDistribution:
    """Read a children distribution from a file, JSON, or ``{0:.5,2:.5}`` shorthand."""
    if not text.lstrip().startswith("{") and Path(text).is_file():
        text = Path(text).read_text(encoding="utf-8")
    text = text.strip()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        obj = None
    try:
        if isinstance(obj, dict) and "support" in obj:
            return ChildrenDistribution.from_json(obj)
        if isinstance(obj, dict):
            return ChildrenDistribution.from_mapping({int(k): float(v) for k, v in obj.items()})
        pairs = _PAIR.findall(text)
        if not pairs or not re.fullmatch(r"\{\s*" + r"[^{}]*" + r"\}", text):
            raise ValueError(f"cannot read distribution {text!r}")
        return ChildrenDistribution.from_mapping({int(k): float(v) for k, v in pairs})
    except (KeyError, TypeError) as exc:
        raise ValueError(f"cannot read distribution: {exc}") from exc


def _need(args, *names):
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise CliError(f"model {args.model!r} needs --{', --'.join(missing)}")


def _write_text(path: str | None, text: str) -> None:
    if path and path != "-":
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _read_input(path: str | None, binary: bool = False):
    if path and path != "-":
        p = Path(path)
        return p.read_bytes() if binary else p.read_text(encoding="utf-8")
    return sys.stdin.buffer.read() if binary else sys.stdin.read()


# commands -----------------------------------------------------------------------


def cmd_generate(args) -> int:
    gen = RngSpec(args.seed).generator()
    out = []
    for _ in range(args.count):
        if args.model == "uniform-ordered":
            _need(args, "n")
            out.append(to_paren(sample_uniform_ordered(args.n, gen)) + "\n")
        elif args.model == "uniform-labeled":
            _need(args, "n")
            out.append(sample_uniform_labeled(args.n, gen).to_text())
        elif args.model == "sgt":
            _need(args, "dist")
            out.append(to_paren(sample_sgt(parse_dist(args.dist), gen, args.node_cap)) + "\n")
        elif args.model == "cgw":
            _need(args, "dist", "n")
            out.append(to_paren(sample_cgw(parse_dist(args.dist), args.n, gen, args.max_rejects)) + "\n")
        else:
            _need(args, "n", "p")
            out.append(sample_er_spanning(args.n, args.p, gen, args.max_retries).to_text())
    sep = "\n" if args.model in ("uniform-labeled", "er-spanning") else ""
    _write_text(args.out, sep.join(out))
    return EXIT_OK


def _read_ordered(text: str) -> list[OrderedTree]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise CliError("no tree in input")
    try:
        return [parse_paren(ln) for ln in lines]
    except ParseError as exc:
        raise CliError(f"bad tree text: {exc}") from exc


def cmd_encode(args) -> int:
    text = _read_input(args.input)
    if args.codec == "er-lz78":
        try:
            t = LabeledTree.from_text(text, args.n)
        except ValueError as exc:
            raise CliError(f"bad edge list: {exc}") from exc
        fr = compress_er_tree(t)
    else:
        trees = _read_ordered(text)
        if args.codec == "sgt-lzw":
            k = args.k if args.k is not None else max(2, max(max(t.degrees) for t in trees) + 1)
            fr = compress_sgt(trees[0], k) if len(trees) == 1 else compress_sgt_stream(trees, k)
        else:
            if len(trees) != 1:
                raise CliError(f"codec {args.codec} frames hold one tree; got {len(trees)}")
            try:
                fr = frames.encode_tree(trees[0], args.codec)
            except AmbiguousCodeError as exc:
                raise CliError(f"{exc}; use td or treeexplorer") from exc
    data = fr.to_bytes()
    if args.out and args.out != "-":
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
    return EXIT_OK


def cmd_decode(args) -> int:
    data = _read_input(args.input, binary=True)
    try:
        fr = frames.CodecFrame.from_bytes(data)
        if args.codec and fr.codec != frames.CODEC_NAMES[args.codec]:
            raise frames.FrameError(f"frame holds codec {fr.codec.name}, expected {args.codec}")
        if fr.codec == frames.CodecId.SGT_LZW:
            trees = decompress_sgt_stream(fr)
            text = "".join(to_paren(t) + "\n" for t in trees)
        else:
            obj = frames.decode_frame(fr)
            text = obj.to_text() if isinstance(obj, LabeledTree) else to_paren(obj) + "\n"
    except (frames.FrameError, DecodeError) as exc:
        raise CliError(f"corrupt frame: {exc}", EXIT_CORRUPT) from exc
    _write_text(args.out, text)
    return EXIT_OK


def cmd_entropy(args) -> int:
    m = args.model
    if m == "uniform-unordered":
        _need(args, "n")
        rep = entropy.uniform_unordered_entropy(args.n)
    elif m == "uniform-ordered":
        _need(args, "n")
        rep = entropy.uniform_ordered_entropy(args.n)
    elif m == "labeled":
        _need(args, "n")
        rep = entropy.EntropyReport("labeled", {"n": args.n, "rooted": args.rooted},
                                    exact=entropy.labeled_entropy(args.n, args.rooted))
    elif m == "sgt":
        _need(args, "dist")
        d = parse_dist(args.dist)
        rep = entropy.EntropyReport("sgt", {"dist": d.to_json()}, exact=entropy.sgt_entropy(d),
                                    extra={"expected_nodes": entropy.sgt_expected_nodes(d)})
    elif m == "cgw":
        _need(args, "dist", "n")
        d = parse_dist(args.dist)
        exact = entropy.cgw_exact_entropy(d, args.n) if args.n <= 12 else None
        first = entropy.cgw_bound_first(d, args.n) if args.n >= 2 else entropy.cgw_bound_zero(d, args.n)
        rep = entropy.EntropyReport("cgw", {"dist": d.to_json(), "n": args.n}, exact=exact, bound=first,
                                    kind="upper", extra={"zero_order": entropy.cgw_bound_zero(d, args.n)})
    elif m == "er":
        _need(args, "n", "p")
        rep = entropy.EntropyReport("er", {"n": args.n, "p": args.p}, bound=entropy.er_tree_upper(args.n, args.p),
                                    kind="upper",
                                    extra={"graph_entropy": entropy.er_graph_entropy(args.n, args.p),
                                           "tree_max": entropy.labeled_entropy(args.n)})
    elif m == "er-graph":
        _need(args, "n", "p")
        rep = entropy.EntropyReport("er-graph", {"n": args.n, "p": args.p},
                                    exact=entropy.er_graph_entropy(args.n, args.p))
    else:
        _need(args, "n")
        rep = entropy.EntropyReport("giant", {"n": args.n}, bound=entropy.giant_threshold_upper(args.n),
                                    kind="upper")
    _write_text(args.out, json.dumps(rep.to_json()) + "\n")
    return EXIT_OK


def _int_list(text: str) -> tuple[int, ...]:
    out = []
    for part in text.split(","):
        if ":" in part or ".." in part:
            a, b = re.split(r":|\.\.", part)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return tuple(out)


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(","))


def cmd_experiment(args) -> int:
    cfg = ExperimentConfig(
        figure=args.figure,
        n_values=_int_list(args.n) if args.n else (),
        p_values=_float_list(args.p) if args.p else (),
        trials=args.trials,
        seed=args.seed,
        out=args.out,
        threads=args.threads,
        dist=parse_dist(args.dist) if args.dist else None,
    )
    _write_text(cfg.out, experiment_csv(cfg))
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    ok = run_selftest(sys.stdout)
    return EXIT_OK if ok else 1


# parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="arboret", description="Random tree sources, entropies and tree codecs.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="sample random trees")
    g.add_argument("--model", choices=MODELS, required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--p", type=float)
    g.add_argument("--dist", help="file, JSON, or shorthand like {0:.5,2:.5}")
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--node-cap", type=int, default=1_000_000)
    g.add_argument("--max-rejects", type=int, default=1_000_000)
    g.add_argument("--max-retries", type=int, default=10_000)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    e = sub.add_parser("encode", help="write a CodecFrame for a tree file")
    e.add_argument("--codec", choices=CODECS, required=True)
    e.add_argument("--in", "--input", dest="input")
    e.add_argument("--out")
    e.add_argument("--n", type=int, help="node count for edge lists (default: edges + 1)")
    e.add_argument("--k", type=int, help="alphabet bound for sgt-lzw")
    e.set_defaults(func=cmd_encode)

    d = sub.add_parser("decode", help="read a CodecFrame back into tree text")
    d.add_argument("--codec", choices=CODECS, help="expected codec; a mismatch counts as corruption")
    d.add_argument("--in", "--input", dest="input")
    d.add_argument("--out")
    d.set_defaults(func=cmd_decode)

    h = sub.add_parser("entropy", help="print an entropy report as JSON")
    h.add_argument("--model", choices=ENTROPY_MODELS, required=True)
    h.add_argument("--n", type=int)
    h.add_argument("--p", type=float)
    h.add_argument("--dist")
    h.add_argument("--rooted", action="store_true")
    h.add_argument("--out")
    h.set_defaults(func=cmd_entropy)

    x = sub.add_parser("experiment", help="write a figure's data as CSV")
    x.add_argument("--figure", choices=FIGURES, required=True)
    x.add_argument("--n", help="comma list, ranges as a..b")
    x.add_argument("--p", help="comma list")
    x.add_argument("--trials", type=int, default=100)
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--threads", type=int, default=None)
    x.add_argument("--dist")
    x.add_argument("--out")
    x.set_defaults(func=cmd_experiment)

    s = sub.add_parser("selftest", help="run quick built-in oracle checks")
    s.set_defaults(func=cmd_selftest)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"arboret: {exc}", file=sys.stderr)
        return exc.code
    except (ValueError, Exhausted, CapExceeded, OSError) as exc:
        print(f"arboret: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
