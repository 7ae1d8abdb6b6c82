from pathlib import Path
from unittest import mock

import pytest

from config import environment
from config.ranker_configs import get_ranker_configs, uses_gaze, variant_for
from config.run_config import DATA_FILES, RANKER_MODES, RunConfig, load_run_config
from utils.errors import ConfigError


def _config_file(tmp_path, text):
    path = tmp_path / "run.env"
    path.write_text(text, encoding="utf-8")
    return path


class TestRunConfig:
    def test_defaults(self):
        config = RunConfig()
        assert (config.ranker, config.mode, config.dtype, config.gain) == ("cross", "baseline", "float32", "exp")
        assert config.seed == environment.DEFAULT_SEED
        assert config.max_steps is None

    def test_mode_must_belong_to_ranker(self):
        with pytest.raises(ConfigError, match="not a cross mode"):
            RunConfig(ranker="cross", mode="maxsim")

    @pytest.mark.parametrize(
        "field",
        [{"ranker": "sparse"}, {"gain": "log"}, {"dtype": "float16"}, {"k": 0}, {"workers": 0}],
    )
    def test_invalid_values(self, field):
        with pytest.raises(ConfigError):
            RunConfig(**field)

    def test_every_bi_mode_is_accepted(self):
        for mode in RANKER_MODES["bi"]:
            assert RunConfig(ranker="bi", mode=mode).mode == mode

    def test_path_falls_back_to_data_dir(self):
        config = RunConfig(data_dir="/srv/data", qrels="/elsewhere/q.txt")
        assert config.path("collection") == Path("/srv/data") / DATA_FILES["collection"]
        assert config.path("qrels") == Path("/elsewhere/q.txt")

    def test_word_vectors_have_no_default_path(self):
        with pytest.raises(ConfigError, match="word_vectors"):
            RunConfig().path("word_vectors")

    def test_require_lists_missing_files(self, tmp_path):
        (tmp_path / DATA_FILES["vocab"]).write_text("x\n", encoding="utf-8")
        config = RunConfig(data_dir=str(tmp_path))
        config.require("vocab")
        with pytest.raises(ConfigError, match="qrels="):
            config.require("vocab", "qrels")

    def test_with_overrides_skips_none(self):
        config = RunConfig().with_overrides(epochs=5, lr=None)
        assert config.epochs == 5
        assert config.lr == RunConfig().lr


class TestLoadRunConfig:
    def test_file_values_are_typed(self, tmp_path):
        path = _config_file(
            tmp_path,
            "# bi-encoder run\nranker=bi\nmode=combined\nepochs=2\nlr=5e-4\nfreeze_gaze=yes\nmax_steps=none\n",
        )
        config = load_run_config(path)
        assert (config.ranker, config.mode, config.epochs) == ("bi", "combined", 2)
        assert config.lr == pytest.approx(5e-4)
        assert config.freeze_gaze is True
        assert config.max_steps is None

    def test_overrides_beat_file(self, tmp_path):
        path = _config_file(tmp_path, "epochs=2\nmax_steps=7\n")
        config = load_run_config(path, epochs=4, batch_size=None)
        assert config.epochs == 4
        assert config.max_steps == 7

    def test_unknown_key(self, tmp_path):
        with pytest.raises(ConfigError, match="unknown config key"):
            load_run_config(_config_file(tmp_path, "learning_rate=1\n"))

    def test_unknown_override(self):
        with pytest.raises(ConfigError, match="unknown overrides"):
            load_run_config(learning_rate=1.0)

    @pytest.mark.parametrize("line", ["freeze_gaze=maybe", "epochs=two", "lr=fast"])
    def test_bad_values(self, tmp_path, line):
        with pytest.raises(ConfigError, match="bad value"):
            load_run_config(_config_file(tmp_path, line + "\n"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_run_config(tmp_path / "absent.env")

    def test_seed_from_environment_wins(self, tmp_path, monkeypatch):
        monkeypatch.setenv("GAZBY_SEED", "99")
        config = load_run_config(_config_file(tmp_path, "seed=3\n"), seed=4)
        assert config.seed == 99


class TestVariantRegistry:
    def test_every_mode_has_a_variant(self):
        for ranker, modes in RANKER_MODES.items():
            for mode in modes:
                assert variant_for(ranker, mode)["ranker"] == ranker

    def test_names_are_unique(self):
        names = [c["name"] for c in get_ranker_configs()]
        assert len(names) == len(set(names))
        assert variant_for("bi", "tfidf")["name"] == "colbert-tfidf"

    def test_disabled_variant_is_not_built(self):
        configs = [{**c, "enabled": c["mode"] != "combined"} for c in get_ranker_configs()]
        with mock.patch("config.ranker_configs.get_ranker_configs", return_value=configs):
            with pytest.raises(KeyError):
                variant_for("bi", "combined")

    def test_unregistered_mode(self):
        with pytest.raises(KeyError):
            variant_for("cross", "tfidf")

    @pytest.mark.parametrize(("mode", "expected"), [("baseline", False), ("tfidf", False), ("combined", True)])
    def test_uses_gaze(self, mode, expected):
        assert uses_gaze(mode) is expected
