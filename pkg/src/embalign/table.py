"""Sparse lexical translation tables restricted to cooccurrence support.

Rows are conditional distributions p(target | source) stored CSR-style.
Row ids 0..n_src-1 are real source words; row n_src is the NULL source,
whose support is the whole target vocabulary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import CooccurrenceIndex, Vocabulary
from .csls import MapDistribution
from .exceptions import AlignerError, ConfigError

# Counts are floored at this value before row renormalization so no stored
# probability can reach zero through a sparse E-step.
PROB_FLOOR = 1e-12

NULL_WORD = "<NULL>"


@dataclass
class TranslationTable:
    row_ptr: np.ndarray  # int64 (n_src + 2,)
    col: np.ndarray      # int32 target ids, ascending within each row
    val: np.ndarray      # float64 probabilities
    n_src: int

    @property
    def null_row(self) -> int:
        return self.n_src

    @property
    def n_rows(self) -> int:
        return self.n_src + 1

    def row(self, x: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.row_ptr[x], self.row_ptr[x + 1]
        return self.col[lo:hi], self.val[lo:hi]

    def prob(self, x: int, y: int) -> float:
        """p(y | x); raises KeyError when y is outside row x's support."""
        lo, hi = self.row_ptr[x], self.row_ptr[x + 1]
        pos = lo + np.searchsorted(self.col[lo:hi], y)
        if pos >= hi or self.col[pos] != y:
            raise KeyError((x, y))
        return float(self.val[pos])

    def row_sums(self) -> np.ndarray:
        return np.add.reduceat(self.val, self.row_ptr[:-1])

    def copy_with(self, val: np.ndarray) -> "TranslationTable":
        return TranslationTable(self.row_ptr, self.col, val, self.n_src)


def init_uniform_table(cooc: CooccurrenceIndex, n_tgt: int) -> TranslationTable:
    """Uniform over Co(x) per source row; NULL row uniform over all targets."""
    if len(cooc) == 0:
        raise AlignerError("empty cooccurrence index")
    n_src = len(cooc)
    sizes = np.empty(n_src + 1, dtype=np.int64)
    cols = []
    for x in range(n_src):
        t = cooc.targets(x)
        if len(t) == 0:
            raise AlignerError(f"source id {x} has an empty cooccurrence set")
        sizes[x] = len(t)
        cols.append(t)
    sizes[n_src] = n_tgt
    cols.append(np.arange(n_tgt, dtype=np.int32))

    row_ptr = np.zeros(n_src + 2, dtype=np.int64)
    np.cumsum(sizes, out=row_ptr[1:])
    col = np.concatenate(cols)
    val = np.empty(len(col), dtype=np.float64)
    for x in range(n_src + 1):
        lo, hi = row_ptr[x], row_ptr[x + 1]
        val[lo:hi] = 1.0 / (hi - lo)
    return TranslationTable(row_ptr, col, val, n_src)


def normalize_rows(
    counts: np.ndarray, row_ptr: np.ndarray, floor: float = PROB_FLOOR
) -> np.ndarray:
    """Floor counts and renormalize each row to sum to 1."""
    floored = np.maximum(counts, floor)
    sums = np.add.reduceat(floored, row_ptr[:-1])
    sizes = np.diff(row_ptr)
    return floored / np.repeat(sums, sizes)


def enhance_table(
    table: TranslationTable,
    pmap: MapDistribution,
    src_freq: np.ndarray,
    lam: float,
) -> TranslationTable:
    """Fold the embedding prior into the table and renormalize per row.

    A pair (x, y) with a prior entry gets score
    lam * p_map(y|x) / freq(x) + p_align(y|x); pairs without one keep
    p_align alone; the whole row is then renormalized. Rows with no prior
    entries, and the NULL row, pass through untouched. Dividing by the raw
    corpus frequency is what shifts trust toward the prior exactly for the
    words the aligner sees too rarely to learn.
    """
    if lam < 0:
        raise ConfigError(f"lambda must be nonnegative, got {lam}")
    if lam == 0:
        # exact identity, so an enhanced run with lambda=0 is bit-equal to
        # a baseline run
        return table
    val = table.val.copy()
    row_ptr, col = table.row_ptr, table.col
    for x, (ids, probs) in pmap.rows.items():
        fx = src_freq[x]
        if fx < 1:
            raise AlignerError(f"source id {x} has frequency {fx}; need >= 1")
        lo, hi = row_ptr[x], row_ptr[x + 1]
        pos = lo + np.searchsorted(col[lo:hi], ids)
        if pos.max(initial=-1) >= hi or not np.array_equal(col[pos], ids):
            raise AlignerError(
                f"prior row {x} contains targets outside the table support"
            )
        val[pos] += lam * probs / fx
        row = val[lo:hi]
        row /= row.sum()
    return table.copy_with(val)


def dump_table(
    table: TranslationTable,
    src_vocab: Vocabulary,
    tgt_vocab: Vocabulary,
    fh,
) -> None:
    """Diagnostic listing: 'src_word tgt_word prob', source word sorted,
    then descending probability."""
    names = list(src_vocab.id2word) + [NULL_WORD]
    order = sorted(range(table.n_rows), key=lambda x: names[x])
    for x in order:
        cols, vals = table.row(x)
        by_prob = sorted(
            range(len(cols)), key=lambda i: (-vals[i], tgt_vocab.id2word[cols[i]])
        )
        for i in by_prob:
            fh.write(f"{names[x]} {tgt_vocab.id2word[cols[i]]} {vals[i]:.8g}\n")
