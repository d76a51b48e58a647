import numpy as np
import pytest

from embalign.aligner import train
from embalign.config import TrainConfig
from embalign.corpus import build_cooccurrence
from embalign.csls import build_p_map
from embalign.table import enhance_table, init_uniform_table

from .helpers import make_corpus
from .synthdata import build_synth


@pytest.fixture(scope="module")
def synth():
    return build_synth()


def build_prior(data, corpus):
    return build_p_map(
        data.src_space, data.tgt_space, corpus.src_vocab, corpus.tgt_vocab,
        build_cooccurrence(corpus),
    )


class TestTrainWithPrior:
    def test_lambda_zero_matches_baseline_exactly(self, synth):
        cfg0 = TrainConfig(m1_iters=2, hmm_iters=2)
        base = train(synth.corpus, config=cfg0)
        pmap = build_prior(synth, synth.corpus)
        enh = train(synth.corpus, pmap, TrainConfig(m1_iters=2, hmm_iters=2, lam=0.0))
        np.testing.assert_array_equal(base.table.val, enh.table.val)
        np.testing.assert_array_equal(
            base.hmm.jump_weights, enh.hmm.jump_weights
        )

    def test_history_flags_enhancement(self, synth):
        pmap = build_prior(synth, synth.corpus)
        model = train(synth.corpus, pmap, TrainConfig(m1_iters=1, hmm_iters=1))
        assert all(r.enhanced for r in model.history)
        base = train(synth.corpus, config=TrainConfig(m1_iters=1, hmm_iters=1))
        assert not any(r.enhanced for r in base.history)

    def test_rows_normalized_every_iteration(self, synth):
        pmap = build_prior(synth, synth.corpus)
        cfg = TrainConfig(m1_iters=3, hmm_iters=2)
        model = train(synth.corpus, pmap, cfg)
        assert np.allclose(model.table.row_sums(), 1.0, atol=1e-9)

    def test_rare_word_shifts_toward_prior(self, synth):
        """A singleton whose statistics are ambiguous must gain probability
        on its embedding-nearest translation when the prior is active."""
        corpus = synth.corpus
        pmap = build_prior(synth, corpus)
        cfg = TrainConfig()
        base = train(corpus, config=cfg)
        enh = train(corpus, pmap, cfg)
        sv, tv = corpus.src_vocab, corpus.tgt_vocab
        improved = 0
        for i in range(synth.n_singletons):
            word = f"r{i}"
            if word not in sv:
                continue
            x = sv.id(word)
            y = tv.id(synth.dictionary[word])
            if enh.table.prob(x, y) > base.table.prob(x, y):
                improved += 1
        assert improved == synth.n_singletons

    def test_enhance_initial_flag_changes_start(self, synth):
        pmap = build_prior(synth, synth.corpus)
        cfg_a = TrainConfig(m1_iters=1, hmm_iters=0)
        cfg_b = TrainConfig(m1_iters=1, hmm_iters=0, enhance_initial=True)
        a = train(synth.corpus, pmap, cfg_a)
        b = train(synth.corpus, pmap, cfg_b)
        assert not np.array_equal(a.table.val, b.table.val)


def test_uniform_prior_preserves_rank_order():
    corpus = make_corpus([("a", "x y z"), ("a", "x y"), ("a", "x")])
    cooc = build_cooccurrence(corpus)
    table = init_uniform_table(cooc, 3)
    # skew the row first so there is an order to preserve
    from embalign.table import normalize_rows
    raw = table.val.copy()
    raw[table.row_ptr[0]:table.row_ptr[1]] = [0.5, 0.3, 0.2]
    table = table.copy_with(normalize_rows(raw, table.row_ptr))
    from embalign.csls import MapDistribution
    ids = cooc.targets(0)
    uniform = np.full(len(ids), 1.0 / len(ids))
    pmap = MapDistribution({0: (ids, uniform)}, {}, {}, 0.1, 10)
    out = enhance_table(table, pmap, np.array([3.0]), 42.0)
    before = table.row(0)[1]
    after = out.row(0)[1]
    assert np.array_equal(np.argsort(-before), np.argsort(-after))
