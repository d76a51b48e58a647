"""EM training of the Model 1 and HMM aligners, with optional per-iteration
folding of the embedding prior into the translation table.

The training schedule is Model 1 for a few iterations, then the HMM stage
seeded with the Model 1 table. When a prior distribution is given, the
table is updated after every M-step, and the updated table starts the next
E-step, for both stages.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .alignments import SentenceAlignment
from .config import TrainConfig
from .corpus import CooccurrenceIndex, ParallelCorpus, build_cooccurrence
from .csls import MapDistribution
from .exceptions import AlignerError
from .table import (
    PROB_FLOOR,
    TranslationTable,
    enhance_table,
    init_uniform_table,
    normalize_rows,
)

log = logging.getLogger(__name__)


@dataclass
class HmmParams:
    """Jump-width transition weights plus the fixed NULL entry probability.

    ``jump_weights[d + max_jump]`` is the unnormalized weight of a jump of
    d source positions, d clamped to [-max_jump, max_jump]; rows of the
    implied transition matrix are normalized per sentence length.
    """

    jump_weights: np.ndarray
    p0: float
    max_jump: int

    @classmethod
    def init(cls, max_jump: int = 7, p0: float = 0.2) -> "HmmParams":
        n = 2 * max_jump + 1
        return cls(np.full(n, 1.0 / n), p0, max_jump)


@dataclass
class IterationRecord:
    stage: str
    iteration: int
    loglik: float
    enhanced: bool

    def line(self) -> str:
        return f"{self.stage} {self.iteration} {self.loglik:.6f} enhanced={int(self.enhanced)}"


@dataclass
class AlignerModel:
    table: TranslationTable
    hmm: HmmParams | None
    history: list[IterationRecord] = field(default_factory=list)


@dataclass
class PackedCorpus:
    """Kernel-ready view of a corpus bound to one table's sparsity layout.

    idx holds, per pair, an (l, m+1) row-major block of positions into the
    table's value array: column 0 the NULL entry for target token j,
    column i >= 1 the entry for source token i-1. Valid for any table
    sharing the same row_ptr/col arrays.
    """

    mlens: np.ndarray
    llens: np.ndarray
    idx: np.ndarray
    idx_off: np.ndarray
    out_off: np.ndarray


def pack_corpus(corpus: ParallelCorpus, table: TranslationTable) -> PackedCorpus:
    n = len(corpus.pairs)
    if n == 0:
        raise AlignerError("empty corpus")
    mlens = np.array([len(s) for s, _ in corpus.pairs], dtype=np.int32)
    llens = np.array([len(t) for _, t in corpus.pairs], dtype=np.int32)
    row_ptr, col = table.row_ptr, table.col
    null_base = row_ptr[table.null_row]
    blocks = []
    for s, t in corpus.pairs:
        block = np.empty((len(t), len(s) + 1), dtype=np.int64)
        block[:, 0] = null_base + t  # NULL row columns are the identity
        for i, x in enumerate(s):
            lo, hi = row_ptr[x], row_ptr[x + 1]
            pos = lo + np.searchsorted(col[lo:hi], t)
            if pos.max(initial=lo) >= hi or not np.array_equal(col[pos], t):
                raise AlignerError(
                    f"table row {int(x)} does not cover all cooccurring targets"
                )
            block[:, i + 1] = pos
        blocks.append(block.ravel())
    sizes = (mlens.astype(np.int64) + 1) * llens
    idx_off = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(sizes, out=idx_off[1:])
    out_off = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(llens, out=out_off[1:])
    return PackedCorpus(mlens, llens, np.concatenate(blocks), idx_off, out_off)


def _check_positive(table: TranslationTable) -> None:
    # flooring keeps trained tables positive; a zero entry means a target
    # token could receive zero total mass, which must fail loudly
    if not np.all(table.val > 0.0):
        raise AlignerError("translation table contains nonpositive probabilities")


def model1_em_iteration(
    corpus: ParallelCorpus,
    table: TranslationTable,
    packed: PackedCorpus | None = None,
) -> tuple[TranslationTable, float]:
    """One Model 1 EM step; returns the re-estimated table and the corpus
    log-likelihood under the incoming table."""
    if packed is None:
        packed = pack_corpus(corpus, table)
    _check_positive(table)
    counts = np.zeros_like(table.val)
    ll = kernels.model1_estep(
        packed.idx, packed.idx_off, packed.mlens, packed.llens, table.val, counts
    )
    return table.copy_with(normalize_rows(counts, table.row_ptr)), float(ll)


def hmm_em_iteration(
    corpus: ParallelCorpus,
    table: TranslationTable,
    params: HmmParams,
    packed: PackedCorpus | None = None,
) -> tuple[TranslationTable, HmmParams, float]:
    """One HMM EM step (forward-backward); re-estimates the table and the
    jump weights, returns the log-likelihood under the incoming model."""
    if packed is None:
        packed = pack_corpus(corpus, table)
    _check_positive(table)
    lex = np.zeros_like(table.val)
    jumps = np.zeros_like(params.jump_weights)
    ll = kernels.hmm_estep(
        packed.idx, packed.idx_off, packed.mlens, packed.llens,
        table.val, params.p0, params.jump_weights, params.max_jump,
        lex, jumps,
    )
    jw = np.maximum(jumps, PROB_FLOOR)
    jw /= jw.sum()
    new_params = HmmParams(jw, params.p0, params.max_jump)
    return table.copy_with(normalize_rows(lex, table.row_ptr)), new_params, float(ll)


def train(
    corpus: ParallelCorpus,
    pmap: MapDistribution | None = None,
    config: TrainConfig | None = None,
    cooc: CooccurrenceIndex | None = None,
) -> AlignerModel:
    """Run the full schedule: m1_iters Model 1 steps then hmm_iters HMM steps.

    With a prior, the table update runs after every iteration of both
    stages. Likelihoods of enhanced runs are recorded but carry no
    monotonicity guarantee (the update is outside the EM objective).
    """
    config = config or TrainConfig()
    config.validate()
    if cooc is None:
        cooc = build_cooccurrence(corpus)
    table = init_uniform_table(cooc, len(corpus.tgt_vocab))
    freq = corpus.src_vocab.freq_array()
    enhanced = pmap is not None
    if enhanced and config.enhance_initial:
        table = enhance_table(table, pmap, freq, config.lam)
    packed = pack_corpus(corpus, table)
    history: list[IterationRecord] = []

    for it in range(1, config.m1_iters + 1):
        table, ll = model1_em_iteration(corpus, table, packed)
        if enhanced:
            table = enhance_table(table, pmap, freq, config.lam)
        rec = IterationRecord("m1", it, ll, enhanced)
        history.append(rec)
        log.info("%s", rec.line())

    hmm = None
    if config.hmm_iters > 0:
        hmm = HmmParams.init(config.max_jump, config.p0)
        for it in range(1, config.hmm_iters + 1):
            table, hmm, ll = hmm_em_iteration(corpus, table, hmm, packed)
            if enhanced:
                table = enhance_table(table, pmap, freq, config.lam)
            rec = IterationRecord("hmm", it, ll, enhanced)
            history.append(rec)
            log.info("%s", rec.line())

    return AlignerModel(table, hmm, history)


def decode(model: AlignerModel, corpus: ParallelCorpus) -> list[SentenceAlignment]:
    """Directional alignment of the corpus under the trained model.

    HMM models decode with Viterbi; Model-1-only models link each target
    position to the argmax source token (lowest index on ties), dropping
    the link when NULL scores strictly higher.
    """
    packed = pack_corpus(corpus, model.table)
    out = np.empty(int(packed.out_off[-1]), dtype=np.int32)
    if model.hmm is not None:
        kernels.hmm_viterbi(
            packed.idx, packed.idx_off, packed.mlens, packed.llens,
            model.table.val, model.hmm.p0, model.hmm.jump_weights,
            model.hmm.max_jump, out, packed.out_off,
        )
    else:
        val = model.table.val
        for p in range(len(corpus.pairs)):
            m1 = int(packed.mlens[p]) + 1
            l = int(packed.llens[p])
            block = packed.idx[packed.idx_off[p]:packed.idx_off[p] + m1 * l].reshape(l, m1)
            probs = val[block]
            best = probs[:, 1:].argmax(axis=1)
            bestp = probs[np.arange(l), best + 1]
            links = np.where(probs[:, 0] > bestp, -1, best)
            out[packed.out_off[p]:packed.out_off[p] + l] = links

    result = []
    for p, (s, t) in enumerate(corpus.pairs):
        lo = int(packed.out_off[p])
        links = {
            (int(out[lo + j]), j) for j in range(len(t)) if out[lo + j] >= 0
        }
        result.append(SentenceAlignment(links, len(s), len(t)))
    return result
