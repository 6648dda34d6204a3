"""Tests for experiment configuration loading and validation."""
import json
from pathlib import Path

import pytest

from src.errors import ConfigError
from src.models.config import Engine, ExperimentConfig, NoiseKind
from src.models.element import NumericMode
from src.utils.config_manager import ConfigManager

CONFIG_DIR = Path(__file__).resolve().parent.parent / "config"

EXAMPLE_TOML = """
instance-name = "vector-uc:3:sup"
engine = "both"
depth = 20
v-scale = 1.5

[base-map]
coefficient = 2.0
offsets = [1.0, -0.5]

[noise]
kind = "bounded-sin"
magnitude = 0.1
seed = 11
anchor-origin = true

[domain]
count = 5
spacing = 0.5
"""


class TestLoad:
    def test_toml(self, tmp_path):
        path = tmp_path / "experiment.toml"
        path.write_text(EXAMPLE_TOML, encoding="utf-8")
        config = ConfigManager(path).load()
        assert config.instance_name == "vector-uc:3:sup"
        assert config.engine is Engine.BOTH
        assert config.base_map.offsets == (1.0, -0.5)
        assert config.noise.kind is NoiseKind.BOUNDED_SIN
        assert config.noise.anchor_origin
        assert config.domain.count == 5

    def test_json_with_snake_case_keys(self, tmp_path):
        path = tmp_path / "experiment.json"
        data = {"instance_name": "intervals", "numeric_mode": "float", "noise": {"seed": 2}}
        path.write_text(json.dumps(data), encoding="utf-8")
        config = ConfigManager(path).load()
        assert config.instance_name == "intervals"
        assert config.numeric_mode is NumericMode.FLOAT
        assert config.noise.seed == 2

    def test_defaults(self, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text("{}", encoding="utf-8")
        config = ConfigManager(path).load()
        assert config == ExperimentConfig()
        assert config.depth == 24 and config.v_scale == 1.0
        assert not config.include_timing

    def test_config_property_loads_lazily(self, tmp_path):
        path = tmp_path / "experiment.json"
        path.write_text(json.dumps({"depth": 12}), encoding="utf-8")
        assert ConfigManager(path).config.depth == 12

    @pytest.mark.parametrize("name", ["example.toml", "both_engines.json"])
    def test_shipped_examples(self, name):
        config = ConfigManager(CONFIG_DIR / name).load()
        assert config.noise.magnitude == 0.25


class TestErrors:
    def test_unsupported_suffix(self, tmp_path):
        path = tmp_path / "experiment.yaml"
        path.write_text("depth: 3", encoding="utf-8")
        with pytest.raises(ConfigError, match="Unsupported"):
            ConfigManager(path).load()

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            ConfigManager(tmp_path / "absent.json").load()

    def test_unparsable(self, tmp_path):
        path = tmp_path / "broken.toml"
        path.write_text("depth = = 3", encoding="utf-8")
        with pytest.raises(ConfigError, match="Cannot parse"):
            ConfigManager(path).load()

    def test_top_level_must_be_a_table(self):
        with pytest.raises(ConfigError):
            ConfigManager.parse([1, 2, 3])

    @pytest.mark.parametrize(
        "data",
        [
            {"instance-name": "vector-uc:0:sup"},
            {"instance-name": "vector-uc:2:taxicab"},
            {"depth": 0},
            {"depth": 41},
            {"v-scale": 0},
            {"r": 1.0},
            {"noise": {"magnitude": -0.1}},
            {"noise": {"kind": "gaussian"}},
            {"base-map": {"interval": [2.0, 1.0]}},
            {"base-map": {"matrix": [[1.0, 2.0], [3.0]]}},
            {"instance-name": "ext-reals-nonneg", "base-map": {"coefficient": -1.0}},
            {"instance-name": "intervals", "infinite-origin": True},
            {"domain": {"dimension": 2}},
            {"unknown-key": 1},
        ],
    )
    def test_invalid_values(self, data):
        with pytest.raises(ConfigError):
            ConfigManager.parse(data)


class TestSave:
    def test_save_and_reload(self, tmp_path):
        path = tmp_path / "saved.json"
        config = ConfigManager.parse({"instance-name": "intervals", "depth": 18})
        manager = ConfigManager(path)
        manager.save(config)
        raw = json.loads(path.read_text(encoding="utf-8"))
        assert raw["instance-name"] == "intervals"
        assert ConfigManager(path).load() == config

    def test_save_without_config_is_a_noop(self, tmp_path, caplog):
        path = tmp_path / "saved.json"
        ConfigManager(path).save()
        assert not path.exists()
        assert "No configuration to save" in caplog.text
