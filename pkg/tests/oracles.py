"""Brute-force oracles, independent of the library's computation paths.

Everything here enumerates explicitly (all alignments, all state
sequences, full sorts) and is kept free of the CSR layout and the
forward-backward recursions it checks.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def model1_enumerate(pairs, prob):
    """Enumerate all (m+1)^l alignments of each pair.

    ``prob(x, y)`` is the lexical probability with x=None for NULL.
    Returns (log-likelihood, {(src_id|None, tgt_id): expected count}).
    """
    total_ll = 0.0
    counts: dict = {}
    for s_toks, t_toks in pairs:
        m, l = len(s_toks), len(t_toks)
        sources = [None] + [int(x) for x in s_toks]
        seqs = []
        weights = []
        for a in itertools.product(range(m + 1), repeat=l):
            p = 1.0
            for j, aj in enumerate(a):
                p *= prob(sources[aj], int(t_toks[j])) / (m + 1)
            seqs.append(a)
            weights.append(p)
        z = sum(weights)
        total_ll += math.log(z)
        for a, p in zip(seqs, weights):
            w = p / z
            for j, aj in enumerate(a):
                key = (sources[aj], int(t_toks[j]))
                counts[key] = counts.get(key, 0.0) + w
    return total_ll, counts


def _clamp(d, max_jump):
    return max(-max_jump, min(max_jump, d)) + max_jump


def hmm_enumerate(pairs, prob, p0, jump_w, max_jump):
    """Enumerate all (2m)^l state sequences of the augmented-state HMM.

    States 0..m-1 are real source positions, m..2m-1 their NULL twins
    (memory = state - m). Initial distribution uniform over all 2m states;
    transition into a NULL twin keeps the memory with probability p0;
    transitions into real states carry (1-p0) times the length-normalized
    jump weight. Returns log-likelihood, expected lexical counts keyed like
    the Model 1 oracle, expected jump counts, and the best (Viterbi) source
    path per pair with -1 for NULL.
    """
    total_ll = 0.0
    lex: dict = {}
    jumps = np.zeros(2 * max_jump + 1)
    paths = []
    for s_toks, t_toks in pairs:
        m, l = len(s_toks), len(t_toks)

        def emit(state, j):
            x = int(s_toks[state]) if state < m else None
            return prob(x, int(t_toks[j]))

        def trans(s1, s2):
            mem = s1 % m
            if s2 >= m:
                return p0 if (s2 - m) == mem else 0.0
            z = sum(jump_w[_clamp(ip - mem, max_jump)] for ip in range(m))
            return (1.0 - p0) * jump_w[_clamp(s2 - mem, max_jump)] / z

        z_total = 0.0
        post: dict = {}
        jp = np.zeros_like(jumps)
        best_p = -1.0
        best_seq = None
        for seq in itertools.product(range(2 * m), repeat=l):
            p = emit(seq[0], 0) / (2 * m)
            for j in range(1, l):
                p *= trans(seq[j - 1], seq[j]) * emit(seq[j], j)
            if p > best_p:
                best_p = p
                best_seq = seq
            if p == 0.0:
                continue
            z_total += p
            for j, st in enumerate(seq):
                post[(j, st)] = post.get((j, st), 0.0) + p
            for j in range(1, l):
                if seq[j] < m:
                    jp[_clamp(seq[j] - (seq[j - 1] % m), max_jump)] += p

        total_ll += math.log(z_total)
        for (j, st), mass in post.items():
            key = (int(s_toks[st]) if st < m else None, int(t_toks[j]))
            lex[key] = lex.get(key, 0.0) + mass / z_total
        jumps += jp / z_total
        paths.append([st if st < m else -1 for st in best_seq])
    return total_ll, lex, jumps, paths


def knn_mean_oracle(query, space, k, exclude_index=None):
    """Full-sort version of the mean k-nearest cosine similarity."""
    sims = []
    for i in range(space.n):
        if i == exclude_index or space.zero_rows[i]:
            continue
        v = space.vectors[i]
        nu = float(np.linalg.norm(query))
        nv = float(np.linalg.norm(v))
        if nu < 1e-150 or nv < 1e-150:
            sims.append(0.0)
        else:
            sims.append(float(np.dot(query, v) / (nu * nv)))
    if not sims:
        return 0.0
    k = min(k, len(sims))
    top = sorted(sims, reverse=True)[:k]
    return sum(top) / k


def cooccurrence_bruteforce(corpus):
    """Quadratic double loop over every (pair, s token, t token) triple."""
    sets = {}
    for s, t in corpus.pairs:
        for x in s:
            for y in t:
                sets.setdefault(int(x), set()).add(int(y))
    return sets
