#!/usr/bin/env python3
"""Benchmark the compiled EM kernels against the numpy fallback.

Generates a synthetic corpus, runs one Model 1 E-step, one HMM E-step and
one Viterbi pass per backend, and reports timings plus the numerical
agreement between the two implementations.

    python3 benchmarks/bench_kernels.py --pairs 2000 --max-len 15
"""

import argparse
import time

import numpy as np

from embalign import kernels
from embalign.aligner import HmmParams, pack_corpus
from embalign.corpus import ParallelCorpus, Vocabulary, build_cooccurrence
from embalign.table import init_uniform_table, normalize_rows


def synth_corpus(rng, n_pairs, max_len, vocab):
    sv, tv = Vocabulary(), Vocabulary()
    pairs = []
    for _ in range(n_pairs):
        m = int(rng.integers(3, max_len + 1))
        l = int(rng.integers(3, max_len + 1))
        s = np.array([sv.add(f"s{rng.integers(0, vocab)}") for _ in range(m)], dtype=np.int32)
        t = np.array([tv.add(f"t{rng.integers(0, vocab)}") for _ in range(l)], dtype=np.int32)
        pairs.append((s, t))
    return ParallelCorpus(pairs, sv, tv)


def bench(fn, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--pairs", type=int, default=2000)
    ap.add_argument("--max-len", type=int, default=15)
    ap.add_argument("--vocab", type=int, default=3000)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    corpus = synth_corpus(rng, args.pairs, args.max_len, args.vocab)
    table = init_uniform_table(build_cooccurrence(corpus), len(corpus.tgt_vocab))
    raw = rng.random(len(table.val)) + 0.1
    table = table.copy_with(normalize_rows(raw, table.row_ptr))
    params = HmmParams.init()
    packed = pack_corpus(corpus, table)
    out = np.empty(int(packed.out_off[-1]), dtype=np.int32)
    print(f"{args.pairs} pairs, lengths 3..{args.max_len}, "
          f"{len(table.val)} table entries, backends: {kernels.available()}")

    rows = {}
    for name in kernels.available():
        kernels.use(name)

        def m1():
            counts = np.zeros_like(table.val)
            ll = kernels.model1_estep(
                packed.idx, packed.idx_off, packed.mlens, packed.llens,
                table.val, counts)
            return ll, counts

        def hmm():
            lex = np.zeros_like(table.val)
            jumps = np.zeros_like(params.jump_weights)
            ll = kernels.hmm_estep(
                packed.idx, packed.idx_off, packed.mlens, packed.llens,
                table.val, params.p0, params.jump_weights, params.max_jump,
                lex, jumps)
            return ll, lex, jumps

        def vit():
            kernels.hmm_viterbi(
                packed.idx, packed.idx_off, packed.mlens, packed.llens,
                table.val, params.p0, params.jump_weights, params.max_jump,
                out, packed.out_off)
            return out.copy()

        rows[name] = {
            "m1": bench(m1, args.repeats),
            "hmm": bench(hmm, args.repeats),
            "viterbi": bench(vit, args.repeats),
        }
    kernels.use("auto")

    print(f"\n{'kernel':<10}" + "".join(f"{n:>12}" for n in rows) +
          ("     speedup" if len(rows) == 2 else ""))
    for kernel in ("m1", "hmm", "viterbi"):
        times = [rows[n][kernel][0] for n in rows]
        line = f"{kernel:<10}" + "".join(f"{t * 1e3:>10.1f}ms" for t in times)
        if len(times) == 2:
            line += f"{times[0] / times[1]:>11.1f}x"
        print(line)

    if len(rows) == 2:
        (ll_p, counts_p), (ll_c, counts_c) = rows["pure"]["m1"][1], rows["compiled"]["m1"][1]
        hp, hc = rows["pure"]["hmm"][1], rows["compiled"]["hmm"][1]
        vp, vc = rows["pure"]["viterbi"][1], rows["compiled"]["viterbi"][1]
        print("\nagreement (pure vs compiled):")
        print(f"  model1 loglik   rel diff {abs(ll_p - ll_c) / abs(ll_p):.2e}")
        print(f"  model1 counts   max diff {np.abs(counts_p - counts_c).max():.2e}")
        print(f"  hmm loglik      rel diff {abs(hp[0] - hc[0]) / abs(hp[0]):.2e}")
        print(f"  hmm lex counts  max diff {np.abs(hp[1] - hc[1]).max():.2e}")
        print(f"  viterbi paths   {'identical' if np.array_equal(vp, vc) else 'DIFFER'}")


if __name__ == "__main__":
    main()
