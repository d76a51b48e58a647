"""Combining two directional alignments: intersection, union, grow-diag-final.

Both inputs must already be expressed in the same (source idx, target idx)
orientation; use ``alignments.transpose`` on the reverse-direction output
first. The grow-diag-final result depends on scan order, so it is fixed
and documented here: grid cells are visited ascending in target index,
then source index; candidate neighbors in the order below; links are added
immediately, affecting the rest of the pass; the FINAL stage considers
forward links before backward links, same cell order.
"""

from __future__ import annotations

from .alignments import SentenceAlignment
from .exceptions import SymmetrizationError

NEIGHBORS = ((-1, 0), (0, -1), (1, 0), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1))


def _check(fwd: list[SentenceAlignment], bwd: list[SentenceAlignment]) -> None:
    if len(fwd) != len(bwd):
        raise SymmetrizationError(
            f"sentence count mismatch: {len(fwd)} vs {len(bwd)}"
        )
    for n, (a, b) in enumerate(zip(fwd, bwd)):
        if a.src_len != b.src_len or a.tgt_len != b.tgt_len:
            raise SymmetrizationError(
                f"sentence {n}: length mismatch "
                f"({a.src_len},{a.tgt_len}) vs ({b.src_len},{b.tgt_len})"
            )


def intersect(
    fwd: list[SentenceAlignment], bwd: list[SentenceAlignment]
) -> list[SentenceAlignment]:
    _check(fwd, bwd)
    return [
        SentenceAlignment(a.links & b.links, a.src_len, a.tgt_len)
        for a, b in zip(fwd, bwd)
    ]


def union(
    fwd: list[SentenceAlignment], bwd: list[SentenceAlignment]
) -> list[SentenceAlignment]:
    _check(fwd, bwd)
    return [
        SentenceAlignment(a.links | b.links, a.src_len, a.tgt_len)
        for a, b in zip(fwd, bwd)
    ]


def grow_diag_final(
    fwd: list[SentenceAlignment], bwd: list[SentenceAlignment]
) -> list[SentenceAlignment]:
    """Start from the intersection, grow into neighboring union links, then
    add remaining union links covering an unaligned source or target."""
    _check(fwd, bwd)
    out = []
    for a, b in zip(fwd, bwd):
        out.append(
            SentenceAlignment(
                _gdf_sentence(a.links, b.links, a.src_len, a.tgt_len),
                a.src_len,
                a.tgt_len,
            )
        )
    return out


def _gdf_sentence(
    f: set[tuple[int, int]], b: set[tuple[int, int]], m: int, l: int
) -> set[tuple[int, int]]:
    uni = f | b
    links = set(f & b)
    asrc = {i for i, _ in links}
    atgt = {j for _, j in links}

    changed = True
    while changed:
        changed = False
        for j in range(l):
            for i in range(m):
                if (i, j) not in links:
                    continue
                for di, dj in NEIGHBORS:
                    ni, nj = i + di, j + dj
                    if (ni, nj) in links or (ni, nj) not in uni:
                        continue
                    if ni not in asrc or nj not in atgt:
                        links.add((ni, nj))
                        asrc.add(ni)
                        atgt.add(nj)
                        changed = True

    for cand in (f, b):
        for i, j in sorted(cand, key=lambda ij: (ij[1], ij[0])):
            if (i, j) in links:
                continue
            if i not in asrc or j not in atgt:
                links.add((i, j))
                asrc.add(i)
                atgt.add(j)
    return links
