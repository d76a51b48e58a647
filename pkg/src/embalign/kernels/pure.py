"""Numpy fallback for the EM hot kernels.

Same contracts as the compiled backend in ``_em.pyx``; keep the math in
the two files in sync. Floating-point results agree with the compiled
backend only up to summation order, so comparisons across backends are
tolerance-based, while each backend on its own is bit-deterministic.

Shared data layout: each sentence pair owns a (l, m+1) block of indices
into the table's value array, flattened into ``idx``. Column 0 of a block
addresses the NULL row entry for target token j; column i >= 1 addresses
the entry for source token i-1.
"""

from __future__ import annotations

import math

import numpy as np

NAME = "pure"


def model1_estep(idx, idx_off, mlens, llens, val, counts):
    """One Model 1 E-step; accumulates expected counts, returns log-likelihood."""
    ll = 0.0
    for p in range(len(mlens)):
        m1 = int(mlens[p]) + 1
        l = int(llens[p])
        block = idx[idx_off[p]:idx_off[p] + m1 * l].reshape(l, m1)
        probs = val[block]
        denom = probs.sum(axis=1)
        ll += float(np.log(denom).sum()) - l * math.log(m1)
        np.add.at(counts, block, probs / denom[:, None])
    return ll


def _jump_structure(m, p0, jump_w, max_jump, cache):
    """Per-length transition matrix over real positions and its jump buckets."""
    hit = cache.get(m)
    if hit is not None:
        return hit
    pos = np.arange(m)
    delta = np.clip(pos[None, :] - pos[:, None], -max_jump, max_jump) + max_jump
    w = jump_w[delta]
    trans = (1.0 - p0) * w / w.sum(axis=1, keepdims=True)
    cache[m] = (trans, delta)
    return trans, delta


def hmm_estep(idx, idx_off, mlens, llens, val, p0, jump_w, max_jump,
              lex_counts, jump_counts):
    """One forward-backward E-step for the jump-parameterized HMM.

    States per sentence: m real source positions plus m NULL twins that
    remember the last real position. The initial distribution is uniform
    over all 2m states; NULL is entered with fixed probability p0.
    Per-position scaling keeps the recursion in range; the scale factors
    sum to the log-likelihood.
    """
    ll = 0.0
    cache = {}
    for p in range(len(mlens)):
        m = int(mlens[p])
        l = int(llens[p])
        block = idx[idx_off[p]:idx_off[p] + (m + 1) * l].reshape(l, m + 1)
        e = val[block]  # e[:, 0] is the NULL emission row
        trans, delta = _jump_structure(m, p0, jump_w, max_jump, cache)

        alpha = np.empty((l, 2 * m))
        c = np.empty(l)
        alpha[0, :m] = e[0, 1:] / (2.0 * m)
        alpha[0, m:] = e[0, 0] / (2.0 * m)
        c[0] = alpha[0].sum()
        alpha[0] /= c[0]
        for j in range(1, l):
            comb = alpha[j - 1, :m] + alpha[j - 1, m:]
            alpha[j, :m] = (comb @ trans) * e[j, 1:]
            alpha[j, m:] = p0 * comb * e[j, 0]
            c[j] = alpha[j].sum()
            alpha[j] /= c[j]
        ll += float(np.log(c).sum())

        beta = np.empty((l, 2 * m))
        beta[l - 1] = 1.0
        for j in range(l - 2, -1, -1):
            down = e[j + 1, 1:] * beta[j + 1, :m]
            bmem = trans @ down + p0 * e[j + 1, 0] * beta[j + 1, m:]
            beta[j, :m] = bmem
            beta[j, m:] = bmem
            beta[j] /= c[j + 1]

        gamma = alpha * beta
        np.add.at(lex_counts, block[:, 1:], gamma[:, :m])
        np.add.at(lex_counts, block[:, 0], gamma[:, m:].sum(axis=1))

        if l > 1:
            xi = np.zeros((m, m))
            for j in range(l - 1):
                comb = alpha[j, :m] + alpha[j, m:]
                xi += (comb[:, None] * trans) * (e[j + 1, 1:] * beta[j + 1, :m])[None, :] / c[j + 1]
            np.add.at(jump_counts, delta, xi)
    return ll


def hmm_viterbi(idx, idx_off, mlens, llens, val, p0, jump_w, max_jump, out, out_off):
    """Most likely state path per pair; fills out[j] with the aligned source
    position or -1 for NULL. Ties resolve to the lowest state index, with
    real states ordered before NULL twins."""
    cache = {}
    logp0 = math.log(p0)
    for p in range(len(mlens)):
        m = int(mlens[p])
        l = int(llens[p])
        block = idx[idx_off[p]:idx_off[p] + (m + 1) * l].reshape(l, m + 1)
        le = np.log(val[block])
        trans, _ = _jump_structure(m, p0, jump_w, max_jump, cache)
        ltrans = np.log(trans)

        delta = np.empty((l, 2 * m))
        psi = np.empty((l, 2 * m), dtype=np.int64)
        start = -math.log(2.0 * m)
        delta[0, :m] = start + le[0, 1:]
        delta[0, m:] = start + le[0, 0]
        for j in range(1, l):
            cand = np.empty((2 * m, m))
            cand[:m] = delta[j - 1, :m, None] + ltrans
            cand[m:] = delta[j - 1, m:, None] + ltrans
            best = np.argmax(cand, axis=0)
            delta[j, :m] = cand[best, np.arange(m)] + le[j, 1:]
            psi[j, :m] = best
            a = delta[j - 1, :m] + logp0
            b = delta[j - 1, m:] + logp0
            take_real = a >= b  # tie prefers the lower (real) state index
            delta[j, m:] = np.where(take_real, a, b) + le[j, 0]
            psi[j, m:] = np.where(take_real, np.arange(m), np.arange(m) + m)

        state = int(np.argmax(delta[l - 1]))
        o = out_off[p]
        for j in range(l - 1, -1, -1):
            out[o + j] = state if state < m else -1
            if j > 0:
                state = int(psi[j, state])
