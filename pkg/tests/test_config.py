import pytest

from embalign.config import TrainConfig, config_lines, load_config_file, make_config
from embalign.exceptions import ConfigError


class TestDefaults:
    def test_documented_defaults(self):
        cfg = TrainConfig()
        assert cfg.lam == 10000.0
        assert cfg.tau == 0.1
        assert cfg.k == 10
        assert cfg.m1_iters == 5
        assert cfg.hmm_iters == 5
        assert cfg.vocab_limit == 200000
        assert cfg.p0 == 0.2
        assert cfg.max_jump == 7
        assert cfg.symmetrization == "grow-diag-final"
        assert cfg.gold_indexing == "one"


class TestValidation:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"lam": -1.0},
            {"tau": 0.0},
            {"k": 0},
            {"m1_iters": -1},
            {"m1_iters": 0, "hmm_iters": 0},
            {"vocab_limit": 0},
            {"p0": 0.0},
            {"p0": 1.0},
            {"max_jump": 0},
            {"neighborhood": "sideways"},
            {"symmetrization": "majority"},
            {"gold_indexing": "two"},
        ],
    )
    def test_rejected(self, kwargs):
        with pytest.raises(ConfigError):
            TrainConfig(**kwargs).validate()

    def test_model1_only_is_valid(self):
        TrainConfig(m1_iters=5, hmm_iters=0).validate()


class TestFileAndPrecedence:
    def test_file_parsing(self, tmp_path):
        p = tmp_path / "run.conf"
        p.write_text("lambda=500\ntau = 0.2\n# comment\nenhance=false\nk=4\n")
        values = load_config_file(str(p))
        assert values == {"lam": 500.0, "tau": 0.2, "enhance": False, "k": 4}

    def test_unknown_key(self, tmp_path):
        p = tmp_path / "run.conf"
        p.write_text("velocity=9\n")
        with pytest.raises(ConfigError, match="velocity"):
            load_config_file(str(p))

    def test_bad_value(self, tmp_path):
        p = tmp_path / "run.conf"
        p.write_text("k=three\n")
        with pytest.raises(ConfigError, match="three"):
            load_config_file(str(p))

    def test_flags_beat_file_beats_defaults(self):
        cfg = make_config({"lam": 5.0, "k": 3}, {"lam": 7.0, "tau": None})
        assert cfg.lam == 7.0   # flag wins
        assert cfg.k == 3       # file wins over default
        assert cfg.tau == 0.1   # default survives None flag

    def test_echo_round_trips(self, tmp_path):
        cfg = make_config({"lam": 123.0, "enhance": False}, {})
        p = tmp_path / "echo.conf"
        p.write_text("\n".join(config_lines(cfg)) + "\n")
        again = make_config(load_config_file(str(p)), {})
        assert again == cfg
