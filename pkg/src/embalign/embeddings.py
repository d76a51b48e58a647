"""Embedding spaces: text-format IO, unit-center-unit normalization, Procrustes.

The vector file format is the common text one: a header line ``n d``
followed by ``word c_1 ... c_d`` rows with single-space separators. Files
written by this module use the identical layout.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .exceptions import MappingError, VectorFormatError

log = logging.getLogger(__name__)

# Row norms below this are treated as exactly zero to avoid overflow when
# dividing; such rows are flagged and excluded from nearest-neighbor sets.
ZERO_NORM = 1e-150


@dataclass
class EmbeddingSpace:
    """A word -> row map over an (n, d) float64 matrix."""

    words: list[str]
    word2row: dict[str, int]
    vectors: np.ndarray
    preprocessed: bool = False
    mapped: bool = False
    zero_rows: np.ndarray = field(default=None)  # bool (n,); rows zeroed by centering
    n_duplicates: int = 0
    n_malformed: int = 0

    def __post_init__(self):
        if self.zero_rows is None:
            self.zero_rows = np.zeros(len(self.words), dtype=bool)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def row(self, word: str, lowercase_fallback: bool = False) -> int | None:
        """Row index for a surface form, or None if absent."""
        r = self.word2row.get(word)
        if r is None and lowercase_fallback:
            r = self.word2row.get(word.lower())
        return r


def load_vectors(path: str, vocab_limit: int = 200000) -> EmbeddingSpace:
    """Load the first ``min(n, vocab_limit)`` valid rows of a vector file.

    Duplicate words keep their first occurrence; rows whose components fail
    to parse as floats are skipped. Both are counted and logged. A row with
    the wrong number of fields contradicts the header and is a hard error.
    """
    if vocab_limit < 1:
        raise VectorFormatError(f"vocab_limit must be >= 1, got {vocab_limit}")
    with open(path, encoding="utf-8", errors="surrogateescape") as fh:
        header = fh.readline()
        parts = header.split()
        try:
            if len(parts) != 2:
                raise ValueError
            n, d = int(parts[0]), int(parts[1])
            if n <= 0 or d <= 0:
                raise ValueError
        except ValueError:
            raise VectorFormatError(
                f"{path}: expected header 'n d' with positive integers, got {header!r}"
            ) from None

        limit = min(n, vocab_limit)
        words: list[str] = []
        word2row: dict[str, int] = {}
        rows: list[np.ndarray] = []
        n_dup = 0
        n_bad = 0
        for lineno, line in enumerate(fh, start=2):
            if len(rows) >= limit:
                break
            line = line.rstrip("\n")
            if not line.strip():
                n_bad += 1
                continue
            fields = [f for f in line.split(" ") if f]
            if len(fields) != d + 1:
                raise VectorFormatError(
                    f"{path}:{lineno}: expected {d} components per header, "
                    f"found {len(fields) - 1}"
                )
            word = fields[0]
            try:
                vec = np.array([float(c) for c in fields[1:]], dtype=np.float64)
            except ValueError:
                n_bad += 1
                continue
            if word in word2row:
                n_dup += 1
                continue
            word2row[word] = len(words)
            words.append(word)
            rows.append(vec)

    if n_dup or n_bad:
        log.warning(
            "%s: skipped %d duplicate and %d malformed rows", path, n_dup, n_bad
        )
    matrix = np.vstack(rows) if rows else np.empty((0, d), dtype=np.float64)
    return EmbeddingSpace(words, word2row, matrix, n_duplicates=n_dup, n_malformed=n_bad)


def save_vectors(space: EmbeddingSpace, path: str) -> None:
    """Write a space in the text vector format (exact float round-trip)."""
    with open(path, "w", encoding="utf-8", errors="surrogateescape") as fh:
        fh.write(f"{space.n} {space.dim}\n")
        for word, vec in zip(space.words, space.vectors):
            fh.write(word + " " + " ".join(repr(float(c)) for c in vec) + "\n")


def preprocess(space: EmbeddingSpace) -> EmbeddingSpace:
    """Length-normalize rows, mean-center columns, length-normalize again.

    A row that becomes the zero vector (possible after centering) is left
    zero and flagged; flagged rows never enter nearest-neighbor sets.
    """
    if space.preprocessed:
        raise MappingError("space is already preprocessed")
    if space.n == 0:
        raise MappingError("cannot preprocess an empty space")
    v = space.vectors.astype(np.float64, copy=True)
    v = _unit_rows(v)
    v -= v.mean(axis=0)
    v = _unit_rows(v)
    zero = np.linalg.norm(v, axis=1) < ZERO_NORM
    if zero.any():
        log.warning("%d rows became zero vectors during preprocessing", int(zero.sum()))
    return EmbeddingSpace(
        space.words, space.word2row, v,
        preprocessed=True, mapped=space.mapped, zero_rows=zero,
        n_duplicates=space.n_duplicates, n_malformed=space.n_malformed,
    )


def _unit_rows(v: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(v, axis=1)
    safe = np.where(norms < ZERO_NORM, 1.0, norms)
    return v / safe[:, None]


def resolve_seed_pairs(
    x_space: EmbeddingSpace, y_space: EmbeddingSpace, seeds: list[tuple[str, str]]
) -> tuple[np.ndarray, np.ndarray, int]:
    """Map seed word pairs to row indices; returns (x_rows, y_rows, n_skipped)."""
    xi, yi = [], []
    skipped = 0
    for sw, tw in seeds:
        a = x_space.word2row.get(sw)
        b = y_space.word2row.get(tw)
        if a is None or b is None:
            skipped += 1
            continue
        xi.append(a)
        yi.append(b)
    return np.array(xi, dtype=np.int64), np.array(yi, dtype=np.int64), skipped


def procrustes(
    x_space: EmbeddingSpace, y_space: EmbeddingSpace, seeds: list[tuple[str, str]]
) -> np.ndarray:
    """Orthogonal map W minimizing ||X_s W - Y_s||_F over the seed rows.

    Closed form from the singular value decomposition of the seed
    cross-covariance; the returned W satisfies W W^T = I.
    """
    if not x_space.preprocessed or not y_space.preprocessed:
        raise MappingError("both spaces must be preprocessed before mapping")
    if x_space.dim != y_space.dim:
        raise MappingError(
            f"dimension mismatch: {x_space.dim} vs {y_space.dim}"
        )
    xi, yi, skipped = resolve_seed_pairs(x_space, y_space, seeds)
    if skipped:
        log.warning("%d seed pairs not resolvable in both vocabularies", skipped)
    n_seeds = len(xi)
    if n_seeds < 2:
        raise MappingError(
            f"need at least 2 resolvable seed pairs, got {n_seeds} of {len(seeds)}"
        )
    if n_seeds < x_space.dim:
        log.warning(
            "only %d seed pairs for dimension %d; map may be rank-deficient",
            n_seeds, x_space.dim,
        )
    xs = x_space.vectors[xi]
    ys = y_space.vectors[yi]
    u, _, vt = np.linalg.svd(ys.T @ xs)
    return vt.T @ u.T


def apply_map(space: EmbeddingSpace, w: np.ndarray) -> EmbeddingSpace:
    """Right-multiply every row by an orthogonal map; norms are unchanged."""
    if w.shape != (space.dim, space.dim):
        raise MappingError(
            f"map shape {w.shape} does not match space dimension {space.dim}"
        )
    return EmbeddingSpace(
        space.words, space.word2row, space.vectors @ w,
        preprocessed=space.preprocessed, mapped=True, zero_rows=space.zero_rows.copy(),
        n_duplicates=space.n_duplicates, n_malformed=space.n_malformed,
    )


def seed_residual(
    x_space: EmbeddingSpace,
    y_space: EmbeddingSpace,
    seeds: list[tuple[str, str]],
    w: np.ndarray,
) -> tuple[float, float]:
    """Frobenius residual ||X_s W - Y_s||_F on seeds, absolute and relative."""
    xi, yi, _ = resolve_seed_pairs(x_space, y_space, seeds)
    diff = x_space.vectors[xi] @ w - y_space.vectors[yi]
    absres = float(np.linalg.norm(diff))
    ynorm = float(np.linalg.norm(y_space.vectors[yi]))
    return absres, absres / ynorm if ynorm > 0 else absres


def read_seed_pairs(path: str) -> list[tuple[str, str]]:
    """Read a seed lexicon: two whitespace-separated words per line."""
    seeds = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 2:
                raise VectorFormatError(
                    f"{path}:{lineno}: expected 'src_word tgt_word', got {line!r}"
                )
            seeds.append((parts[0], parts[1]))
    return seeds
