"""End-to-end bidirectional alignment.

Each direction builds its own cooccurrence index, frequencies and prior
over its own source side, trains Model 1 + HMM, and decodes; the two
directional alignments are then combined by the configured heuristic. The
whole pipeline is deterministic: identical inputs and configuration give
bit-identical outputs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from .aligner import AlignerModel, decode, train
from .alignments import SentenceAlignment, transpose, write_pharaoh
from .config import TrainConfig, config_lines
from .corpus import ParallelCorpus, build_cooccurrence, load_parallel_corpus
from .csls import MapDistribution, build_p_map
from .embeddings import EmbeddingSpace, load_vectors
from .exceptions import ConfigError
from .symmetrize import grow_diag_final, intersect, union
from .table import dump_table

log = logging.getLogger(__name__)

_COMBINERS = {
    "grow-diag-final": grow_diag_final,
    "intersect": intersect,
    "union": union,
}


@dataclass
class DirectionResult:
    model: AlignerModel
    alignment: list[SentenceAlignment]  # in this direction's own orientation
    pmap: MapDistribution | None = None


@dataclass
class BidirectionalResult:
    prediction: list[SentenceAlignment]
    forward: DirectionResult
    backward: DirectionResult
    config: TrainConfig = field(default=None)


def align_direction(
    corpus: ParallelCorpus,
    src_space: EmbeddingSpace | None,
    tgt_space: EmbeddingSpace | None,
    config: TrainConfig,
) -> DirectionResult:
    cooc = build_cooccurrence(corpus)
    pmap = None
    if src_space is not None and tgt_space is not None and config.enhance:
        pmap = build_p_map(
            src_space, tgt_space, corpus.src_vocab, corpus.tgt_vocab, cooc,
            tau=config.tau, k=config.k, neighborhood=config.neighborhood,
            lowercase_fallback=config.lowercase_fallback,
        )
    model = train(corpus, pmap, config, cooc=cooc)
    return DirectionResult(model, decode(model, corpus), pmap)


def align_bidirectional(
    corpus: ParallelCorpus,
    src_space: EmbeddingSpace | None = None,
    tgt_space: EmbeddingSpace | None = None,
    config: TrainConfig | None = None,
) -> BidirectionalResult:
    """Train and decode both directions, then symmetrize."""
    config = config or TrainConfig()
    config.validate()
    log.info("training forward direction (%d pairs)", len(corpus))
    fwd = align_direction(corpus, src_space, tgt_space, config)
    log.info("training backward direction")
    bwd = align_direction(corpus.swapped(), tgt_space, src_space, config)
    combine = _COMBINERS[config.symmetrization]
    prediction = combine(fwd.alignment, transpose(bwd.alignment))
    return BidirectionalResult(prediction, fwd, bwd, config)


def run_align(
    src_corpus_path: str,
    tgt_corpus_path: str,
    src_vectors_path: str | None,
    tgt_vectors_path: str | None,
    out_path: str,
    config: TrainConfig,
    run_dir: str | None = None,
) -> BidirectionalResult:
    """File-level orchestration used by the align subcommand.

    Vector files, when given, must already live in a shared space (output
    of the map subcommand or an external mapper). Run artifacts (effective
    config, per-direction training logs, table dumps, directional
    alignments) land in ``run_dir`` when one is named.
    """
    if (src_vectors_path is None) != (tgt_vectors_path is None):
        raise ConfigError("provide both vector files or neither")
    corpus = load_parallel_corpus(
        src_corpus_path, tgt_corpus_path, lowercase=config.lowercase
    )
    src_space = tgt_space = None
    if src_vectors_path is not None:
        src_space = load_vectors(src_vectors_path, config.vocab_limit)
        tgt_space = load_vectors(tgt_vectors_path, config.vocab_limit)
        # consumed as already mapped; cosine handles any norm drift
        src_space.mapped = True
        tgt_space.mapped = True

    result = align_bidirectional(corpus, src_space, tgt_space, config)
    write_pharaoh(result.prediction, out_path)

    if run_dir is not None:
        rd = Path(run_dir)
        rd.mkdir(parents=True, exist_ok=True)
        (rd / "config.txt").write_text(
            "\n".join(config_lines(config)) + "\n", encoding="utf-8"
        )
        for name, direction, cur in (
            ("fwd", result.forward, corpus),
            ("bwd", result.backward, corpus.swapped()),
        ):
            (rd / f"train.{name}.log").write_text(
                "".join(r.line() + "\n" for r in direction.model.history),
                encoding="utf-8",
            )
            write_pharaoh(direction.alignment, str(rd / f"align.{name}.pharaoh"))
            with open(rd / f"ttable.{name}.txt", "w", encoding="utf-8") as fh:
                dump_table(direction.model.table, cur.src_vocab, cur.tgt_vocab, fh)
        write_pharaoh(result.prediction, str(rd / "prediction.pharaoh"))
    return result
