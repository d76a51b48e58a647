"""embalign: statistical word alignment with an embedding-similarity prior.

IBM Model 1 and HMM aligners trained by EM over a parallel corpus, whose
lexical translation tables can be interpolated after every iteration with
a CSLS-softmax distribution computed from cross-lingual word embeddings.
Includes orthogonal Procrustes mapping, grow-diag-final symmetrization and
AER evaluation.
"""

__version__ = "0.1.0"

from .aligner import (
    AlignerModel,
    HmmParams,
    decode,
    hmm_em_iteration,
    model1_em_iteration,
    train,
)
from .alignments import SentenceAlignment, read_pharaoh, transpose, write_pharaoh
from .config import TrainConfig
from .corpus import (
    CooccurrenceIndex,
    ParallelCorpus,
    Vocabulary,
    build_cooccurrence,
    load_parallel_corpus,
)
from .csls import MapDistribution, build_p_map, cosine, csls, mean_knn_similarity
from .embeddings import (
    EmbeddingSpace,
    apply_map,
    load_vectors,
    preprocess,
    procrustes,
    save_vectors,
)
from .evaluate import GoldSentence, Metrics, read_gold, score
from .pipeline import align_bidirectional, run_align
from .symmetrize import grow_diag_final, intersect, union
from .table import TranslationTable, enhance_table, init_uniform_table

__all__ = [
    "AlignerModel", "HmmParams", "decode", "hmm_em_iteration",
    "model1_em_iteration", "train",
    "SentenceAlignment", "read_pharaoh", "transpose", "write_pharaoh",
    "TrainConfig",
    "CooccurrenceIndex", "ParallelCorpus", "Vocabulary",
    "build_cooccurrence", "load_parallel_corpus",
    "MapDistribution", "build_p_map", "cosine", "csls", "mean_knn_similarity",
    "EmbeddingSpace", "apply_map", "load_vectors", "preprocess", "procrustes",
    "save_vectors",
    "GoldSentence", "Metrics", "read_gold", "score",
    "align_bidirectional", "run_align",
    "grow_diag_final", "intersect", "union",
    "TranslationTable", "enhance_table", "init_uniform_table",
]
