import numpy as np
import pytest

from embalign.corpus import build_cooccurrence
from embalign.csls import build_p_map, cosine, csls, mean_knn_similarity
from embalign.embeddings import EmbeddingSpace
from embalign.exceptions import MappingError

from .helpers import make_corpus
from .oracles import knn_mean_oracle


def space_from(words, matrix, mapped=True):
    return EmbeddingSpace(
        list(words), {w: i for i, w in enumerate(words)},
        np.asarray(matrix, dtype=np.float64), mapped=mapped,
    )


def random_space(rng, n, d, prefix="w", mapped=True):
    return space_from([f"{prefix}{i}" for i in range(n)],
                      rng.standard_normal((n, d)), mapped=mapped)


class TestMeanKnn:
    def test_own_row_excluded(self):
        space = space_from(["a", "b"], [[1.0, 0.0], [0.0, 1.0]])
        assert mean_knn_similarity(space.vectors[0], space, k=1, exclude_index=0) == 0.0

    def test_identical_single_neighbor(self):
        space = space_from(["a"], [[0.0, 2.0]])
        assert mean_knn_similarity(np.array([0.0, 1.0]), space, k=1) == pytest.approx(1.0)

    def test_matches_sort_oracle_exactly(self):
        rng = np.random.default_rng(11)
        space = random_space(rng, 50, 8)
        for k in (1, 3, 10, 49):
            for q in range(0, 50, 7):
                mine = mean_knn_similarity(space.vectors[q], space, k, exclude_index=q)
                ref = knn_mean_oracle(space.vectors[q], space, k, exclude_index=q)
                assert mine == ref

    def test_degraded_k_uses_all(self):
        space = space_from(["a", "b"], [[1.0, 0.0], [1.0, 1.0]])
        got = mean_knn_similarity(np.array([1.0, 0.0]), space, k=10)
        ref = knn_mean_oracle(np.array([1.0, 0.0]), space, 10)
        assert got == ref

    def test_k_validation(self):
        space = space_from(["a"], [[1.0, 0.0]])
        with pytest.raises(ValueError):
            mean_knn_similarity(np.array([1.0, 0.0]), space, k=0)


class TestCsls:
    def test_plug_in(self):
        x = np.array([0.6, 0.8])
        assert csls(x, x, 0.5, 0.5) == pytest.approx(1.0)

    def test_orthogonal_zero(self):
        assert csls(np.array([1.0, 0.0]), np.array([0.0, 1.0]), 0.0, 0.0) == 0.0

    def test_symmetry(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            x, y = rng.standard_normal(6), rng.standard_normal(6)
            ax, ay = rng.random(), rng.random()
            assert csls(x, y, ax, ay) == csls(y, x, ay, ax)

    def test_zero_vector_cosine(self):
        assert cosine(np.zeros(3), np.array([1.0, 0.0, 0.0])) == 0.0


def tiny_setup(src_words, tgt_words, src_vecs, tgt_vecs, lines):
    corpus = make_corpus(lines)
    src_space = space_from(src_words, src_vecs)
    tgt_space = space_from(tgt_words, tgt_vecs)
    cooc = build_cooccurrence(corpus)
    return corpus, src_space, tgt_space, cooc


class TestBuildPMap:
    def test_singleton_candidate(self):
        corpus, xs, ys, cooc = tiny_setup(
            ["a"], ["x"], [[1.0, 0.0]], [[1.0, 0.0]], [("a", "x")]
        )
        pmap = build_p_map(xs, ys, corpus.src_vocab, corpus.tgt_vocab, cooc, k=1)
        ids, probs = pmap.rows[corpus.src_vocab.id("a")]
        assert probs.tolist() == [1.0]

    def test_equal_scores_split_evenly(self):
        # both targets identical vectors -> identical CSLS -> 0.5 each
        corpus, xs, ys, cooc = tiny_setup(
            ["a"], ["x", "y"], [[1.0, 0.0]],
            [[1.0, 0.0], [1.0, 0.0]], [("a", "x y")]
        )
        pmap = build_p_map(xs, ys, corpus.src_vocab, corpus.tgt_vocab, cooc, k=1)
        _, probs = pmap.rows[0]
        assert np.allclose(probs, [0.5, 0.5], atol=1e-12)

    def test_temperature_softmax_values(self):
        # CSLS gap of 1.0 at tau=0.1: probabilities e^10/(e^10+1), 1/(e^10+1)
        corpus = make_corpus([("a", "x y")])
        xs = space_from(["a"], [[1.0, 0.0]])
        # cos(a,x)=1, cos(a,y)=0.5; equal avg terms cancel in the gap: 2*(1-0.5)=1
        ys = space_from(["x", "y"], [[1.0, 0.0], [0.5, np.sqrt(3) / 2]])
        cooc = build_cooccurrence(corpus)
        pmap = build_p_map(xs, ys, corpus.src_vocab, corpus.tgt_vocab, cooc,
                           tau=0.1, k=1)
        _, probs = pmap.rows[0]
        # avg(x,1) and avg(y,1) are cos(x,y)=0.5 for both, so they cancel
        expected_hi = np.exp(10.0) / (np.exp(10.0) + 1.0)
        assert probs[0] == pytest.approx(expected_hi, rel=1e-12)
        assert probs[1] == pytest.approx(1.0 - expected_hi, rel=1e-9)

    def test_rows_only_for_embedded_words(self):
        corpus, xs, ys, cooc = tiny_setup(
            ["a"], ["x"], [[1.0, 0.0]], [[1.0, 0.0]],
            [("a b", "x"), ("b", "z")],
        )
        pmap = build_p_map(xs, ys, corpus.src_vocab, corpus.tgt_vocab, cooc, k=1)
        assert set(pmap.rows) == {corpus.src_vocab.id("a")}

    def test_row_absent_when_no_embedded_candidates(self):
        corpus = make_corpus([("a", "z")])
        xs = space_from(["a"], [[1.0, 0.0]])
        ys = space_from(["x"], [[1.0, 0.0]])  # "z" has no vector
        pmap = build_p_map(xs, ys, corpus.src_vocab, corpus.tgt_vocab,
                           build_cooccurrence(corpus), k=1)
        assert len(pmap.rows) == 0

    def test_requires_mapped_spaces(self):
        corpus, xs, ys, cooc = tiny_setup(
            ["a"], ["x"], [[1.0, 0.0]], [[1.0, 0.0]], [("a", "x")]
        )
        xs.mapped = False
        with pytest.raises(MappingError, match="mapped"):
            build_p_map(xs, ys, corpus.src_vocab, corpus.tgt_vocab, cooc)


class TestPMapProperties:
    def setup_method(self):
        rng = np.random.default_rng(23)
        lines = []
        for _ in range(60):
            s = " ".join(f"s{rng.integers(0, 30)}" for _ in range(rng.integers(1, 6)))
            t = " ".join(f"t{rng.integers(0, 30)}" for _ in range(rng.integers(1, 6)))
            lines.append((s, t))
        self.corpus = make_corpus(lines)
        self.xs = space_from([f"s{i}" for i in range(30)], rng.standard_normal((30, 8)))
        self.ys = space_from([f"t{i}" for i in range(30)], rng.standard_normal((30, 8)))
        self.cooc = build_cooccurrence(self.corpus)

    def build(self, tau=0.1, neighborhood="own"):
        return build_p_map(
            self.xs, self.ys, self.corpus.src_vocab, self.corpus.tgt_vocab,
            self.cooc, tau=tau, k=5, neighborhood=neighborhood,
        )

    def test_rows_sum_to_one_and_positive(self):
        pmap = self.build()
        assert pmap.rows
        for _, probs in pmap.rows.values():
            assert abs(probs.sum() - 1.0) <= 1e-9
            assert (probs > 0).all()

    def test_argmax_matches_csls(self):
        pmap = self.build()
        for x, (ids, probs) in pmap.rows.items():
            scores = [
                csls(
                    self.xs.vectors[self.xs.word2row[self.corpus.src_vocab.word(x)]],
                    self.ys.vectors[self.ys.word2row[self.corpus.tgt_vocab.word(y)]],
                    pmap.avg_src[x], pmap.avg_tgt[int(y)],
                )
                for y in ids
            ]
            assert int(np.argmax(probs)) == int(np.argmax(scores))

    def test_avg_caches_match_scalar_op(self):
        pmap = self.build()
        for x, a in list(pmap.avg_src.items())[:10]:
            word = self.corpus.src_vocab.word(x)
            row = self.xs.word2row[word]
            ref = mean_knn_similarity(self.xs.vectors[row], self.xs, 5, exclude_index=row)
            assert a == pytest.approx(ref, abs=1e-10)

    def test_lower_tau_sharpens_rows(self):
        soft = self.build(tau=0.5)
        sharp = self.build(tau=0.05)
        for x in soft.rows:
            assert sharp.rows[x][1].max() >= soft.rows[x][1].max() - 1e-12

    def test_cross_neighborhood_mode_valid(self):
        pmap = self.build(neighborhood="cross")
        for _, probs in pmap.rows.values():
            assert abs(probs.sum() - 1.0) <= 1e-9

    def test_cross_neighborhoods_use_opposite_space(self):
        pmap = self.build(neighborhood="cross")
        for x, a in list(pmap.avg_src.items())[:5]:
            row = self.xs.word2row[self.corpus.src_vocab.word(x)]
            ref = mean_knn_similarity(self.xs.vectors[row], self.ys, 5)
            assert a == pytest.approx(ref, abs=1e-10)
        for y, a in list(pmap.avg_tgt.items())[:5]:
            row = self.ys.word2row[self.corpus.tgt_vocab.word(y)]
            ref = mean_knn_similarity(self.ys.vectors[row], self.xs, 5)
            assert a == pytest.approx(ref, abs=1e-10)
