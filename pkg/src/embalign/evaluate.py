"""Gold alignments with sure/possible labels and AER scoring.

Gold files carry one link per line: ``sentence_id src_pos tgt_pos [S|P]``,
label S (sure) when omitted. Counts are aggregated corpus-level:

    AER = 1 - (|A .. S| + |A .. P|) / (|A| + |S|)

with precision |A..P|/|A| and recall |A..S|/|S|, where A is the predicted
link set, S the sure gold links and P the possible ones (S is a subset of
P by construction).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .alignments import SentenceAlignment
from .exceptions import EvalError, GoldFormatError


@dataclass
class GoldSentence:
    sure: set[tuple[int, int]]
    poss: set[tuple[int, int]]  # always a superset of sure


@dataclass
class Metrics:
    aer: float
    precision: float
    recall: float
    n_pred: int
    n_sure: int
    n_pred_sure: int
    n_pred_poss: int

    def line(self) -> str:
        return (
            f"AER={self.aer:.4f} P={self.precision:.4f} R={self.recall:.4f} "
            f"|A|={self.n_pred} |S|={self.n_sure}"
        )


def read_gold(path: str, indexing: str = "one") -> dict[int, GoldSentence]:
    """Parse a gold file; ``indexing`` "one" shifts all three fields down
    to the internal 0-based convention. Sure links are added to the
    possible set when absent."""
    if indexing not in ("one", "zero"):
        raise GoldFormatError(f"indexing must be 'one' or 'zero', got {indexing!r}")
    shift = 1 if indexing == "one" else 0
    gold: dict[int, GoldSentence] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) not in (3, 4):
                raise GoldFormatError(
                    f"{path}:{lineno}: expected 'sid src tgt [S|P]', got {line!r}"
                )
            try:
                sid, i, j = (int(parts[0]) - shift, int(parts[1]) - shift,
                             int(parts[2]) - shift)
            except ValueError:
                raise GoldFormatError(
                    f"{path}:{lineno}: non-integer field in {line!r}"
                ) from None
            if sid < 0 or i < 0 or j < 0:
                raise GoldFormatError(
                    f"{path}:{lineno}: index underflow with {indexing}-based indexing"
                )
            label = parts[3] if len(parts) == 4 else "S"
            if label not in ("S", "P"):
                raise GoldFormatError(
                    f"{path}:{lineno}: unknown label {label!r} (expected S or P)"
                )
            sent = gold.setdefault(sid, GoldSentence(set(), set()))
            sent.poss.add((i, j))
            if label == "S":
                sent.sure.add((i, j))
    return gold


def aggregate(
    pred_links: Sequence[set[tuple[int, int]]], gold: Mapping[int, GoldSentence]
) -> Metrics:
    """Corpus-level AER over parallel lists of link sets."""
    n = len(pred_links)
    bad = [sid for sid in gold if sid >= n]
    if bad:
        raise EvalError(
            f"gold references sentence {max(bad)} but prediction has only {n} sentences"
        )
    a = s = a_s = a_p = 0
    for sid, links in enumerate(pred_links):
        g = gold.get(sid, _EMPTY)
        a += len(links)
        s += len(g.sure)
        a_s += len(links & g.sure)
        a_p += len(links & g.poss)
    aer = 1.0 - (a_s + a_p) / (a + s) if (a + s) > 0 else 0.0
    precision = a_p / a if a > 0 else (1.0 if s == 0 else 0.0)
    recall = a_s / s if s > 0 else 1.0
    return Metrics(aer, precision, recall, a, s, a_s, a_p)


_EMPTY = GoldSentence(set(), set())


def score(
    pred: Sequence[SentenceAlignment], gold: Mapping[int, GoldSentence]
) -> Metrics:
    """AER, precision, recall of a predicted alignment against gold.

    Gold sentences absent from the mapping count as unannotated (empty
    sure and possible sets)."""
    return aggregate([p.links for p in pred], gold)


def per_sentence_rows(
    pred: Sequence[SentenceAlignment], gold: Mapping[int, GoldSentence]
):
    """Yield (sentence_id, metrics) for a per-sentence TSV report."""
    for sid, p in enumerate(pred):
        yield sid, aggregate([p.links], {0: gold.get(sid, _EMPTY)})
