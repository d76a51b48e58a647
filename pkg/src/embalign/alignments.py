"""Per-sentence alignment link sets and Pharaoh-format IO.

Pharaoh files carry one line per sentence pair with space-separated "i-j"
links, 0-indexed, ascending. An empty line means no links.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exceptions import SymmetrizationError


@dataclass
class SentenceAlignment:
    """Link set for one sentence pair; links are (source idx, target idx)."""

    links: set[tuple[int, int]]
    src_len: int
    tgt_len: int


def transpose(aset: list[SentenceAlignment]) -> list[SentenceAlignment]:
    """Swap link orientation and sentence lengths."""
    return [
        SentenceAlignment({(j, i) for i, j in a.links}, a.tgt_len, a.src_len)
        for a in aset
    ]


def write_pharaoh(aset: list[SentenceAlignment], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for a in aset:
            fh.write(" ".join(f"{i}-{j}" for i, j in sorted(a.links)) + "\n")


def read_pharaoh(path: str) -> list[SentenceAlignment]:
    """Read a Pharaoh file; sentence lengths are inferred as max index + 1."""
    result = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            links = set()
            for token in line.split():
                parts = token.split("-")
                if len(parts) != 2:
                    raise SymmetrizationError(
                        f"{path}:{lineno}: bad link token {token!r}"
                    )
                try:
                    i, j = int(parts[0]), int(parts[1])
                except ValueError:
                    raise SymmetrizationError(
                        f"{path}:{lineno}: bad link token {token!r}"
                    ) from None
                if i < 0 or j < 0:
                    raise SymmetrizationError(
                        f"{path}:{lineno}: negative index in {token!r}"
                    )
                links.add((i, j))
            src_len = 1 + max((i for i, _ in links), default=-1)
            tgt_len = 1 + max((j for _, j in links), default=-1)
            result.append(SentenceAlignment(links, src_len, tgt_len))
    return result
