"""Parallel corpus ingestion: vocabularies, token frequencies, cooccurrence.

Input is pre-tokenized text, one sentence per line, tokens separated by
spaces. Line i of the source file pairs with line i of the target file.
Tokenization itself is upstream of this toolkit.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .exceptions import CorpusFormatError

log = logging.getLogger(__name__)


@dataclass
class Vocabulary:
    """Dense word<->id maps plus raw token counts for one corpus side."""

    word2id: dict[str, int] = field(default_factory=dict)
    id2word: list[str] = field(default_factory=list)
    freq: list[int] = field(default_factory=list)

    def add(self, word: str) -> int:
        """Intern a token occurrence and return its id."""
        wid = self.word2id.get(word)
        if wid is None:
            wid = len(self.id2word)
            self.word2id[word] = wid
            self.id2word.append(word)
            self.freq.append(0)
        self.freq[wid] += 1
        return wid

    def id(self, word: str) -> int:
        return self.word2id[word]

    def word(self, wid: int) -> str:
        return self.id2word[wid]

    def freq_array(self) -> np.ndarray:
        return np.asarray(self.freq, dtype=np.float64)

    def __len__(self) -> int:
        return len(self.id2word)

    def __contains__(self, word: str) -> bool:
        return word in self.word2id


@dataclass
class ParallelCorpus:
    """Sentence pairs as int32 token-id arrays over two vocabularies."""

    pairs: list[tuple[np.ndarray, np.ndarray]]
    src_vocab: Vocabulary
    tgt_vocab: Vocabulary
    dropped: int = 0

    def __len__(self) -> int:
        return len(self.pairs)

    def swapped(self) -> "ParallelCorpus":
        """The same corpus with source and target roles exchanged."""
        return ParallelCorpus(
            [(t, s) for s, t in self.pairs], self.tgt_vocab, self.src_vocab, self.dropped
        )

    def src_lines(self) -> list[str]:
        words = self.src_vocab.id2word
        return [" ".join(words[tok] for tok in s) for s, _ in self.pairs]

    def tgt_lines(self) -> list[str]:
        words = self.tgt_vocab.id2word
        return [" ".join(words[tok] for tok in t) for _, t in self.pairs]


class CooccurrenceIndex:
    """For each source id, the sorted target ids sharing at least one pair."""

    def __init__(self, targets: list[np.ndarray]):
        self._targets = targets

    def targets(self, src_id: int) -> np.ndarray:
        return self._targets[src_id]

    def __len__(self) -> int:
        return len(self._targets)

    @property
    def n_links(self) -> int:
        return sum(len(t) for t in self._targets)


def load_parallel_corpus(
    src_path: str, tgt_path: str, lowercase: bool = False
) -> ParallelCorpus:
    """Read two line-aligned token files into a ParallelCorpus.

    Pairs where either side has no tokens are dropped (counted in
    ``corpus.dropped``). Unequal line counts are a hard error since the
    pairing would be ambiguous.
    """
    with open(src_path, encoding="utf-8") as fh:
        src_lines = fh.read().splitlines()
    with open(tgt_path, encoding="utf-8") as fh:
        tgt_lines = fh.read().splitlines()
    if len(src_lines) != len(tgt_lines):
        raise CorpusFormatError(
            f"line count mismatch: {src_path} has {len(src_lines)} lines, "
            f"{tgt_path} has {len(tgt_lines)}"
        )

    src_vocab = Vocabulary()
    tgt_vocab = Vocabulary()
    pairs = []
    dropped = 0
    for src_line, tgt_line in zip(src_lines, tgt_lines):
        if lowercase:
            src_line = src_line.lower()
            tgt_line = tgt_line.lower()
        src_toks = src_line.split()
        tgt_toks = tgt_line.split()
        if not src_toks or not tgt_toks:
            dropped += 1
            continue
        s = np.array([src_vocab.add(w) for w in src_toks], dtype=np.int32)
        t = np.array([tgt_vocab.add(w) for w in tgt_toks], dtype=np.int32)
        pairs.append((s, t))
    log.info(
        "loaded %d sentence pairs from %s / %s (%d dropped with an empty side)",
        len(pairs), src_path, tgt_path, dropped,
    )
    return ParallelCorpus(pairs, src_vocab, tgt_vocab, dropped)


def build_cooccurrence(corpus: ParallelCorpus) -> CooccurrenceIndex:
    """Exact cooccurrence sets; duplicates inside a sentence collapse."""
    sets: list[set[int]] = [set() for _ in range(len(corpus.src_vocab))]
    for s, t in corpus.pairs:
        tset = set(t.tolist())
        for x in set(s.tolist()):
            sets[x] |= tset
    targets = [np.array(sorted(ys), dtype=np.int32) for ys in sets]
    return CooccurrenceIndex(targets)
