"""Shared test utilities: small corpus builders and random instances."""

from __future__ import annotations

import numpy as np

from embalign.corpus import ParallelCorpus, Vocabulary, build_cooccurrence
from embalign.table import TranslationTable, init_uniform_table, normalize_rows


def make_corpus(lines: list[tuple[str, str]]) -> ParallelCorpus:
    """Build a corpus from (source line, target line) strings."""
    sv, tv = Vocabulary(), Vocabulary()
    pairs = []
    for s, t in lines:
        pairs.append(
            (
                np.array([sv.add(w) for w in s.split()], dtype=np.int32),
                np.array([tv.add(w) for w in t.split()], dtype=np.int32),
            )
        )
    return ParallelCorpus(pairs, sv, tv)


def random_corpus(
    rng: np.random.Generator,
    n_pairs: int = 50,
    max_len: int = 4,
    n_src_words: int = 12,
    n_tgt_words: int = 12,
) -> ParallelCorpus:
    lines = []
    for _ in range(n_pairs):
        m = int(rng.integers(1, max_len + 1))
        l = int(rng.integers(1, max_len + 1))
        s = " ".join(f"s{int(rng.integers(0, n_src_words))}" for _ in range(m))
        t = " ".join(f"t{int(rng.integers(0, n_tgt_words))}" for _ in range(l))
        lines.append((s, t))
    return make_corpus(lines)


def random_table(corpus: ParallelCorpus, rng: np.random.Generator) -> TranslationTable:
    """A valid random table over the corpus cooccurrence support."""
    cooc = build_cooccurrence(corpus)
    table = init_uniform_table(cooc, len(corpus.tgt_vocab))
    raw = rng.random(len(table.val)) + 0.1
    return table.copy_with(normalize_rows(raw, table.row_ptr))


def table_counts_by_word(table, corpus, counts: np.ndarray) -> dict:
    """Flatten a count array in table layout into {(src_id|None, tgt_id): count}."""
    out = {}
    for x in range(table.n_src + 1):
        lo, hi = table.row_ptr[x], table.row_ptr[x + 1]
        key = None if x == table.n_src else x
        for pos in range(lo, hi):
            c = counts[pos]
            if c != 0.0:
                out[(key, int(table.col[pos]))] = float(c)
    return out
