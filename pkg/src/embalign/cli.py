"""Command-line interface: map, align, eval subcommands.

Exit codes: 0 success, 1 runtime failure, 2 usage error. Configuration
precedence is flags over --config file over built-in defaults.
"""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import __version__
from .alignments import read_pharaoh
from .config import TrainConfig, config_lines, load_config_file, make_config
from .embeddings import (
    apply_map,
    load_vectors,
    preprocess,
    procrustes,
    read_seed_pairs,
    resolve_seed_pairs,
    save_vectors,
    seed_residual,
)
from .evaluate import per_sentence_rows, read_gold, score
from .exceptions import EmbalignError
from .pipeline import run_align

log = logging.getLogger("embalign")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="embalign",
        description="Statistical word alignment with an embedding-similarity prior",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-q", "--quiet", action="store_true", help="suppress progress logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p_map = sub.add_parser(
        "map", help="map two monolingual vector files into a shared space"
    )
    p_map.add_argument("src_vectors")
    p_map.add_argument("tgt_vectors")
    p_map.add_argument("seeds", help="seed lexicon: one 'src_word tgt_word' per line")
    p_map.add_argument("--out-src", required=True, help="output path for the mapped source space")
    p_map.add_argument("--out-tgt", required=True, help="output path for the (preprocessed) target space")
    p_map.add_argument("--vocab-limit", type=int, default=None)
    p_map.add_argument(
        "--map-direction", choices=("src2tgt", "tgt2src"), default="src2tgt",
        help="which space gets rotated into the other (default src2tgt)",
    )

    p_align = sub.add_parser(
        "align", help="align a parallel corpus, bidirectionally, and symmetrize"
    )
    p_align.add_argument("src_corpus")
    p_align.add_argument("tgt_corpus")
    p_align.add_argument("-o", "--out", required=True, help="Pharaoh output path")
    p_align.add_argument("--src-vectors", default=None, help="mapped source vectors")
    p_align.add_argument("--tgt-vectors", default=None, help="mapped target vectors")
    p_align.add_argument("--config", default=None, help="key=value config file")
    p_align.add_argument("--run-dir", default=None, help="directory for run artifacts")
    _add_config_flags(p_align)

    p_eval = sub.add_parser("eval", help="score a Pharaoh prediction against gold")
    p_eval.add_argument("pred", help="Pharaoh prediction file")
    p_eval.add_argument("gold", help="gold file: 'sid src tgt [S|P]' per line")
    p_eval.add_argument(
        "--indexing", choices=("one", "zero"), default=None,
        help="gold file index base (default one)",
    )
    p_eval.add_argument("--per-sentence", default=None, help="write a per-sentence TSV here")
    return parser


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("training configuration (override config file)")
    g.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="prior interpolation weight (default 10000)")
    g.add_argument("--tau", type=float, default=None, help="softmax temperature (default 0.1)")
    g.add_argument("--k", type=int, default=None, help="neighborhood size (default 10)")
    g.add_argument("--m1-iters", type=int, default=None)
    g.add_argument("--hmm-iters", type=int, default=None)
    g.add_argument("--vocab-limit", type=int, default=None)
    g.add_argument("--p0", type=float, default=None, help="HMM NULL transition probability")
    g.add_argument("--max-jump", type=int, default=None)
    g.add_argument("--neighborhood", choices=("own", "cross"), default=None)
    g.add_argument("--no-enhance", dest="enhance", action="store_false", default=None,
                   help="train the plain baseline even when vectors are given")
    g.add_argument("--enhance-initial", action="store_true", default=None,
                   help="also update the uniform init table before the first iteration")
    g.add_argument("--symmetrization", choices=("intersect", "union", "grow-diag-final"),
                   default=None)
    g.add_argument("--lowercase", action="store_true", default=None,
                   help="lowercase corpus tokens at load")
    g.add_argument("--lowercase-fallback", action="store_true", default=None,
                   help="retry vector lookups with the lowercased surface form")


_CONFIG_FLAGS = (
    "lam", "tau", "k", "m1_iters", "hmm_iters", "vocab_limit", "p0", "max_jump",
    "neighborhood", "enhance", "enhance_initial", "symmetrization",
    "lowercase", "lowercase_fallback",
)


def _config_from_args(args: argparse.Namespace) -> TrainConfig:
    file_values = load_config_file(args.config) if args.config else None
    overrides = {name: getattr(args, name) for name in _CONFIG_FLAGS}
    return make_config(file_values, overrides)


def cmd_map(args: argparse.Namespace) -> int:
    limit = args.vocab_limit or TrainConfig.vocab_limit
    src = preprocess(load_vectors(args.src_vectors, limit))
    tgt = preprocess(load_vectors(args.tgt_vectors, limit))
    seeds = read_seed_pairs(args.seeds)
    if args.map_direction == "src2tgt":
        w = procrustes(src, tgt, seeds)
        src = apply_map(src, w)
    else:
        w = procrustes(tgt, src, [(b, a) for a, b in seeds])
        tgt = apply_map(tgt, w)
    absres, relres = seed_residual(src, tgt, seeds, np.eye(src.dim))
    src.mapped = True
    tgt.mapped = True
    xi, _, skipped = resolve_seed_pairs(src, tgt, seeds)
    print(f"seeds: {len(xi)} resolved, {skipped} skipped")
    print(f"seed residual: {absres:.6g} (relative {relres:.6g})")
    save_vectors(src, args.out_src)
    save_vectors(tgt, args.out_tgt)
    log.info("wrote %s and %s", args.out_src, args.out_tgt)
    return 0


def cmd_align(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    for line in config_lines(config):
        log.info("config %s", line)
    run_align(
        args.src_corpus, args.tgt_corpus,
        args.src_vectors, args.tgt_vectors,
        args.out, config, run_dir=args.run_dir,
    )
    log.info("wrote %s", args.out)
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    pred = read_pharaoh(args.pred)
    gold = read_gold(args.gold, indexing=args.indexing or "one")
    metrics = score(pred, gold)
    print(metrics.line())
    if args.per_sentence:
        with open(args.per_sentence, "w", encoding="utf-8") as fh:
            fh.write("sentence\taer\tprecision\trecall\tn_pred\tn_sure\n")
            for sid, m in per_sentence_rows(pred, gold):
                fh.write(
                    f"{sid}\t{m.aer:.4f}\t{m.precision:.4f}\t{m.recall:.4f}"
                    f"\t{m.n_pred}\t{m.n_sure}\n"
                )
    return 0


_COMMANDS = {"map": cmd_map, "align": cmd_align, "eval": cmd_eval}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return _COMMANDS[args.command](args)
    except FileNotFoundError as exc:
        print(f"embalign: error: {exc}", file=sys.stderr)
        return 2
    except (EmbalignError, OSError) as exc:
        print(f"embalign: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
