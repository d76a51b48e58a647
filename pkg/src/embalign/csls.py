"""CSLS similarity and the softmax translation prior over cooccurring pairs.

CSLS(x, y) = 2 cos(x, y) - avg(x, k) - avg(y, k), where avg(v, k) is the
mean cosine between v and its k nearest neighbors. The penalty terms pull
down hub words that are near everything. The prior for a source word is a
temperature softmax over the CSLS scores of its cooccurring, embedded
target candidates.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .corpus import CooccurrenceIndex, Vocabulary
from .embeddings import ZERO_NORM, EmbeddingSpace
from .exceptions import MappingError

log = logging.getLogger(__name__)


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity; 0.0 when either vector is zero."""
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu < ZERO_NORM or nv < ZERO_NORM:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def mean_knn_similarity(
    query: np.ndarray,
    space: EmbeddingSpace,
    k: int,
    exclude_index: int | None = None,
) -> float:
    """Mean cosine between the query and its k nearest rows of the space.

    The query's own row, when it lives in the space, must be passed as
    ``exclude_index`` so the trivial cos=1 term does not inflate the mean.
    Flagged zero rows are never eligible. With fewer than k eligible rows
    all of them are used (degraded k, logged).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    sims = []
    for i in range(space.n):
        if i == exclude_index or space.zero_rows[i]:
            continue
        sims.append(cosine(query, space.vectors[i]))
    if not sims:
        log.warning("no eligible neighbors in space; avg defined as 0.0")
        return 0.0
    if len(sims) < k:
        log.warning("only %d eligible neighbors for k=%d (degraded)", len(sims), k)
        k = len(sims)
    arr = np.asarray(sims)
    # top-k by value via partition, then summed largest-first
    top = np.sort(np.partition(arr, len(arr) - k)[len(arr) - k:])[::-1]
    total = 0.0
    for s in top:
        total += float(s)
    return total / k


def csls(x_vec: np.ndarray, y_vec: np.ndarray, avg_x: float, avg_y: float) -> float:
    """2 cos(x, y) - avg_x - avg_y."""
    return 2.0 * cosine(x_vec, y_vec) - avg_x - avg_y


@dataclass
class MapDistribution:
    """Per source id, a distribution over embedded cooccurring target ids.

    Rows exist only for source words with an embedding row and at least one
    embedded cooccurring target; each row's probabilities are strictly
    positive and sum to 1.
    """

    rows: dict[int, tuple[np.ndarray, np.ndarray]]  # src id -> (tgt ids asc, probs)
    avg_src: dict[int, float]  # src id -> avg(x, k)
    avg_tgt: dict[int, float]  # tgt id -> avg(y, k)
    tau: float
    k: int
    degraded: int = 0
    stats: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.rows)


def _unit_or_zero(v: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(v, axis=1)
    safe = np.where(norms < ZERO_NORM, 1.0, norms)
    return v / safe[:, None]


def _avg_cache(
    query_rows: np.ndarray,
    qn: np.ndarray,
    neigh: np.ndarray,
    neigh_zero: np.ndarray,
    k: int,
    same_space: bool,
    chunk: int = 1024,
) -> tuple[np.ndarray, int]:
    """Batched avg(v, k) for the given query row indices.

    ``same_space`` excludes each query's own row from its neighborhood.
    Returns the means and the number of degraded-k queries.
    """
    out = np.zeros(len(query_rows), dtype=np.float64)
    degraded = 0
    eligible = int((~neigh_zero).sum())
    for lo in range(0, len(query_rows), chunk):
        rows = query_rows[lo:lo + chunk]
        sims = qn[rows] @ neigh.T
        sims[:, neigh_zero] = -np.inf
        n_elig = np.full(len(rows), eligible)
        if same_space:
            own_ok = ~neigh_zero[rows]
            sims[np.arange(len(rows)), rows] = -np.inf
            n_elig -= own_ok.astype(int)
        for r in range(len(rows)):
            ne = int(n_elig[r])
            if ne <= 0:
                degraded += 1
                continue
            kk = min(k, ne)
            if kk < k:
                degraded += 1
            top = np.sort(np.partition(sims[r], sims.shape[1] - kk)[sims.shape[1] - kk:])[::-1]
            total = 0.0
            for s in top:
                total += float(s)
            out[lo + r] = total / kk
    return out, degraded


def build_p_map(
    src_space: EmbeddingSpace,
    tgt_space: EmbeddingSpace,
    src_vocab: Vocabulary,
    tgt_vocab: Vocabulary,
    cooc: CooccurrenceIndex,
    tau: float = 0.1,
    k: int = 10,
    neighborhood: str = "own",
    lowercase_fallback: bool = False,
) -> MapDistribution:
    """Softmax over CSLS/tau across each source word's embedded candidates.

    Both spaces must already live in the shared coordinate system. Source
    words without an embedding row, or whose cooccurring targets have none,
    simply get no row; the aligner keeps its own distribution for those.

    ``neighborhood`` picks where avg(v, k) finds its neighbors: "own" uses
    the word's own space, "cross" uses the opposite space.
    """
    if not (src_space.mapped and tgt_space.mapped):
        raise MappingError("both spaces must be mapped into the shared space")
    if neighborhood not in ("own", "cross"):
        raise MappingError(f"unknown neighborhood mode {neighborhood!r}")
    if tau <= 0:
        raise MappingError(f"tau must be positive, got {tau}")

    xn = _unit_or_zero(src_space.vectors)
    yn = _unit_or_zero(tgt_space.vectors)

    # corpus id -> embedding row (or -1)
    src_rows = np.array(
        [_lookup(src_space, w, lowercase_fallback) for w in src_vocab.id2word],
        dtype=np.int64,
    )
    tgt_rows = np.array(
        [_lookup(tgt_space, w, lowercase_fallback) for w in tgt_vocab.id2word],
        dtype=np.int64,
    )

    src_ids = np.nonzero(src_rows >= 0)[0]
    tgt_ids = np.nonzero(tgt_rows >= 0)[0]

    if neighborhood == "own":
        avg_s, deg_s = _avg_cache(src_rows[src_ids], xn, xn, src_space.zero_rows, k, True)
        avg_t, deg_t = _avg_cache(tgt_rows[tgt_ids], yn, yn, tgt_space.zero_rows, k, True)
    else:
        avg_s, deg_s = _avg_cache(src_rows[src_ids], xn, yn, tgt_space.zero_rows, k, False)
        avg_t, deg_t = _avg_cache(tgt_rows[tgt_ids], yn, xn, src_space.zero_rows, k, False)
    avg_src = {int(x): float(a) for x, a in zip(src_ids, avg_s)}
    avg_tgt = {int(y): float(a) for y, a in zip(tgt_ids, avg_t)}

    avg_tgt_arr = np.zeros(len(tgt_vocab), dtype=np.float64)
    for y, a in avg_tgt.items():
        avg_tgt_arr[y] = a

    rows: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for x in src_ids:
        cand = cooc.targets(int(x))
        cand = cand[tgt_rows[cand] >= 0]
        if len(cand) == 0:
            continue
        cos = yn[tgt_rows[cand]] @ xn[src_rows[x]]
        scores = (2.0 * cos - avg_src[int(x)] - avg_tgt_arr[cand]) / tau
        scores -= scores.max()  # keeps exp() in range at small tau
        e = np.exp(scores)
        rows[int(x)] = (cand.astype(np.int32), e / e.sum())

    dist = MapDistribution(
        rows, avg_src, avg_tgt, tau=tau, k=k, degraded=deg_s + deg_t,
        stats={
            "src_embedded": len(src_ids),
            "tgt_embedded": len(tgt_ids),
            "rows": len(rows),
        },
    )
    log.info(
        "p_map: %d/%d source words embedded, %d rows, %d degraded-k queries",
        len(src_ids), len(src_vocab), len(rows), dist.degraded,
    )
    return dist


def _lookup(space: EmbeddingSpace, word: str, lowercase_fallback: bool) -> int:
    r = space.row(word, lowercase_fallback)
    return -1 if r is None else r
