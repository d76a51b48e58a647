# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled EM hot kernels.

Same contracts and data layout as the numpy fallback in ``pure.py``; keep
the math in the two files in sync.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, log

NAME = "compiled"


cdef inline Py_ssize_t _clamp(Py_ssize_t d, int mj) noexcept:
    if d > mj:
        d = mj
    if d < -mj:
        d = -mj
    return d + mj


def model1_estep(cnp.int64_t[::1] idx, cnp.int64_t[::1] idx_off,
                 cnp.int32_t[::1] mlens, cnp.int32_t[::1] llens,
                 double[::1] val, double[::1] counts):
    """One Model 1 E-step; accumulates expected counts, returns log-likelihood."""
    cdef Py_ssize_t npairs = mlens.shape[0]
    cdef Py_ssize_t p, j, i, m1, l
    cdef cnp.int64_t base, off, k
    cdef double denom, lp, ll = 0.0
    for p in range(npairs):
        base = idx_off[p]
        m1 = mlens[p] + 1
        l = llens[p]
        lp = log(<double> m1)
        for j in range(l):
            off = base + j * m1
            denom = 0.0
            for i in range(m1):
                denom += val[idx[off + i]]
            ll += log(denom) - lp
            for i in range(m1):
                k = idx[off + i]
                counts[k] += val[k] / denom
    return ll


def hmm_estep(cnp.int64_t[::1] idx, cnp.int64_t[::1] idx_off,
              cnp.int32_t[::1] mlens, cnp.int32_t[::1] llens,
              double[::1] val, double p0, double[::1] jump_w, int max_jump,
              double[::1] lex_counts, double[::1] jump_counts):
    """One forward-backward E-step for the jump-parameterized HMM.

    States per sentence: m real source positions plus m NULL twins that
    remember the last real position. Initial distribution uniform over all
    2m states; NULL entered with fixed probability p0. Per-position scaling
    factors sum to the log-likelihood.
    """
    cdef Py_ssize_t npairs = mlens.shape[0]
    cdef Py_ssize_t p, j, i, ip, m, l, sm, m1, d
    cdef cnp.int64_t base
    cdef double q0 = 1.0 - p0
    cdef double ll = 0.0
    cdef double s, cj, init, enull, bmem, nsum, coef

    cdef Py_ssize_t max_m = 0, max_l = 0
    for p in range(npairs):
        if mlens[p] > max_m:
            max_m = mlens[p]
        if llens[p] > max_l:
            max_l = llens[p]

    cdef double[::1] alpha = np.empty(max_l * 2 * max_m, dtype=np.float64)
    cdef double[::1] beta = np.empty(max_l * 2 * max_m, dtype=np.float64)
    cdef double[::1] c = np.empty(max_l, dtype=np.float64)
    cdef double[::1] comb = np.empty(max_m, dtype=np.float64)
    cdef double[::1] wnorm = np.empty(max_m, dtype=np.float64)
    cdef double[::1] down = np.empty(max_m, dtype=np.float64)

    for p in range(npairs):
        base = idx_off[p]
        m = mlens[p]
        l = llens[p]
        m1 = m + 1
        sm = 2 * m

        for i in range(m):
            s = 0.0
            for ip in range(m):
                s += jump_w[_clamp(ip - i, max_jump)]
            wnorm[i] = s

        # forward
        init = 1.0 / (<double> sm)
        cj = 0.0
        for i in range(m):
            alpha[i] = val[idx[base + i + 1]] * init
            alpha[m + i] = val[idx[base]] * init
            cj += alpha[i] + alpha[m + i]
        for i in range(sm):
            alpha[i] /= cj
        c[0] = cj
        ll += log(cj)
        for j in range(1, l):
            for i in range(m):
                comb[i] = alpha[(j - 1) * sm + i] + alpha[(j - 1) * sm + m + i]
            enull = val[idx[base + j * m1]]
            cj = 0.0
            for ip in range(m):
                s = 0.0
                for i in range(m):
                    s += comb[i] * jump_w[_clamp(ip - i, max_jump)] / wnorm[i]
                alpha[j * sm + ip] = q0 * s * val[idx[base + j * m1 + ip + 1]]
                cj += alpha[j * sm + ip]
            for i in range(m):
                alpha[j * sm + m + i] = p0 * comb[i] * enull
                cj += alpha[j * sm + m + i]
            for i in range(sm):
                alpha[j * sm + i] /= cj
            c[j] = cj
            ll += log(cj)

        # backward
        for i in range(sm):
            beta[(l - 1) * sm + i] = 1.0
        for j in range(l - 2, -1, -1):
            enull = val[idx[base + (j + 1) * m1]]
            for ip in range(m):
                down[ip] = val[idx[base + (j + 1) * m1 + ip + 1]] * beta[(j + 1) * sm + ip]
            for i in range(m):
                s = 0.0
                for ip in range(m):
                    s += jump_w[_clamp(ip - i, max_jump)] * down[ip]
                bmem = q0 * s / wnorm[i] + p0 * enull * beta[(j + 1) * sm + m + i]
                bmem /= c[j + 1]
                beta[j * sm + i] = bmem
                beta[j * sm + m + i] = bmem

        # lexical posteriors
        for j in range(l):
            nsum = 0.0
            for i in range(m):
                lex_counts[idx[base + j * m1 + i + 1]] += alpha[j * sm + i] * beta[j * sm + i]
                nsum += alpha[j * sm + m + i] * beta[j * sm + m + i]
            lex_counts[idx[base + j * m1]] += nsum

        # jump posteriors over transitions into real states
        for j in range(l - 1):
            for ip in range(m):
                down[ip] = val[idx[base + (j + 1) * m1 + ip + 1]] * beta[(j + 1) * sm + ip]
            for i in range(m):
                coef = (alpha[j * sm + i] + alpha[j * sm + m + i]) * q0 / (wnorm[i] * c[j + 1])
                for ip in range(m):
                    d = _clamp(ip - i, max_jump)
                    jump_counts[d] += coef * jump_w[d] * down[ip]
    return ll


def hmm_viterbi(cnp.int64_t[::1] idx, cnp.int64_t[::1] idx_off,
                cnp.int32_t[::1] mlens, cnp.int32_t[::1] llens,
                double[::1] val, double p0, double[::1] jump_w, int max_jump,
                cnp.int32_t[::1] out, cnp.int64_t[::1] out_off):
    """Most likely state path per pair; out[j] is the aligned source
    position or -1 for NULL. Ties resolve to the lowest state index, real
    states ordered before NULL twins."""
    cdef Py_ssize_t npairs = mlens.shape[0]
    cdef Py_ssize_t p, j, i, ip, m, l, sm, m1, state, arg
    cdef cnp.int64_t base, o
    cdef double logp0 = log(p0)
    cdef double log1mp0 = log(1.0 - p0)
    cdef double s, best, cand

    cdef Py_ssize_t max_m = 0, max_l = 0
    for p in range(npairs):
        if mlens[p] > max_m:
            max_m = mlens[p]
        if llens[p] > max_l:
            max_l = llens[p]

    cdef Py_ssize_t nw = 2 * max_jump + 1
    cdef double[::1] ltw = np.empty(nw, dtype=np.float64)
    for i in range(nw):
        ltw[i] = log(jump_w[i])
    cdef double[::1] lwnorm = np.empty(max_m, dtype=np.float64)
    cdef double[::1] delta = np.empty(max_l * 2 * max_m, dtype=np.float64)
    cdef double[::1] le = np.empty(max_l * (max_m + 1), dtype=np.float64)
    cdef cnp.int64_t[::1] psi = np.empty(max_l * 2 * max_m, dtype=np.int64)

    for p in range(npairs):
        base = idx_off[p]
        o = out_off[p]
        m = mlens[p]
        l = llens[p]
        m1 = m + 1
        sm = 2 * m

        for j in range(l):
            for i in range(m1):
                le[j * m1 + i] = log(val[idx[base + j * m1 + i]])
        for i in range(m):
            s = 0.0
            for ip in range(m):
                s += jump_w[_clamp(ip - i, max_jump)]
            lwnorm[i] = log(s)

        s = -log(<double> sm)
        for i in range(m):
            delta[i] = s + le[i + 1]
            delta[m + i] = s + le[0]
        for j in range(1, l):
            for ip in range(m):
                best = -INFINITY
                arg = 0
                for i in range(sm):
                    cand = delta[(j - 1) * sm + i] + log1mp0 \
                        + ltw[_clamp(ip - (i % m), max_jump)] - lwnorm[i % m]
                    if cand > best:
                        best = cand
                        arg = i
                delta[j * sm + ip] = best + le[j * m1 + ip + 1]
                psi[j * sm + ip] = arg
            for i in range(m):
                # entering the NULL twin of memory i: from real i or null i
                best = delta[(j - 1) * sm + i] + logp0
                arg = i
                cand = delta[(j - 1) * sm + m + i] + logp0
                if cand > best:
                    best = cand
                    arg = m + i
                delta[j * sm + m + i] = best + le[j * m1]
                psi[j * sm + m + i] = arg

        best = -INFINITY
        state = 0
        for i in range(sm):
            if delta[(l - 1) * sm + i] > best:
                best = delta[(l - 1) * sm + i]
                state = i
        for j in range(l - 1, -1, -1):
            if state < m:
                out[o + j] = <cnp.int32_t> state
            else:
                out[o + j] = -1
            if j > 0:
                state = psi[j * sm + state]
