import json
import logging

import pytest

from RelayDMT.channel import AntennaConfig
from RelayDMT.config import OutputFormat, RunMode, load_config, parse_config
from RelayDMT.errors import ConfigError
from RelayDMT.exponents import SearchMethod
from RelayDMT.protocols import ProtocolKind
from RelayDMT.results import Table, read_metadata, write_results


def simulate_doc(**overrides):
    doc = {
        "mode": "simulate",
        "antennas": {"m1": 1, "mr": 1, "m2": 1},
        "protocol": {"name": "CF"},
        "multiplexing": {"r1": 0.25, "r2": 0.25},
        "grids": {"snr_db": [25, 30, 35, 40]},
        "plan": {"trials_per_point": 1000, "workers": 2},
    }
    doc.update(overrides)
    return doc


class TestParseConfig:
    def test_minimal_analytic(self):
        config = parse_config(
            '{"mode": "analytic", "antennas": {"m1": 1, "mr": 1, "m2": 1},'
            ' "grids": {"r": {"start": 0, "stop": 1, "step": 0.25}}}'
        )
        assert config.mode is RunMode.ANALYTIC
        assert config.antennas == AntennaConfig(1, 1, 1)
        assert config.r_grid == (0.0, 0.25, 0.5, 0.75, 1.0)
        assert config.protocol is ProtocolKind.CF
        assert config.snr_grid.points_db == (15.0, 20.0, 25.0, 30.0, 35.0, 40.0)
        assert config.method is SearchMethod.GRID_REFINE
        assert config.resolution == 0.01
        assert config.output_format is OutputFormat.CSV
        assert config.output_path is None
        assert config.timestamp

    def test_default_r_grid(self):
        config = parse_config({"mode": "analytic", "antennas": {"m1": 2, "mr": 1, "m2": 3}})
        assert config.r_grid[0] == 0.0
        assert config.r_grid[-1] == 1.0
        assert len(config.r_grid) == 21

    def test_simulate_seed_defaults(self, caplog):
        with caplog.at_level(logging.INFO, logger="RelayDMT.config"):
            config = parse_config(simulate_doc())
        assert config.plan.seed == 0
        assert config.plan.trials_per_point == 1000
        assert "plan.seed not set, using 0" in caplog.text

    def test_r2_follows_r1(self):
        doc = simulate_doc(multiplexing={"r1": 0.3})
        assert parse_config(doc).multiplexing.r2 == 0.3

    def test_one_way_r2_defaults_to_zero(self):
        doc = simulate_doc(protocol={"name": "DDF"}, multiplexing={"r1": 0.3})
        assert parse_config(doc).multiplexing.r2 == 0.0

    def test_dcf_second_rate(self):
        doc = simulate_doc(protocol={"name": "DCF"}, multiplexing={"r1": 0.25, "r2": 0.3})
        with pytest.raises(ConfigError, match="r2 must be 0") as err:
            parse_config(doc)
        assert err.value.key == "multiplexing.r2"

    def test_unknown_key(self):
        doc = simulate_doc(grids={"snr_db": [10, 20], "snr": [1, 2]})
        with pytest.raises(ConfigError, match="unknown key") as err:
            parse_config(doc)
        assert err.value.key == "grids.snr"

    def test_unknown_section(self):
        with pytest.raises(ConfigError) as err:
            parse_config(simulate_doc(extras={}))
        assert err.value.key == "extras"

    # fmt: off
    @pytest.mark.parametrize(
        "overrides, key",
        [
            pytest.param({"mode": "plot"},                             "mode",                   id="bad_mode"),
            pytest.param({"antennas": {"m1": 1, "mr": 0, "m2": 1}},     "antennas",               id="zero_antennas"),
            pytest.param({"antennas": {"m1": 1, "mr": 1}},             "antennas.m2",            id="missing_antenna"),
            pytest.param({"antennas": {"m1": 1.5, "mr": 1, "m2": 1}},   "antennas.m1",            id="fractional_antenna"),
            pytest.param({"protocol": {"name": "AF"}},                 "protocol.name",          id="bad_protocol"),
            pytest.param({"protocol": {"name": "CF", "listen_fraction": 0.5}},
                                                                       "protocol.listen_fraction", id="listen_not_dcf"),
            pytest.param({"plan": {"seed": "zero"}},                    "plan.seed",              id="seed_type"),
            pytest.param({"plan": {"trials_per_point": 0}},             "plan.trials_per_point",  id="no_trials"),
            pytest.param({"grids": {"snr_db": [30, 20]}},               "grids.snr_db",           id="decreasing_snr"),
            pytest.param({"grids": {"snr_db": [-5, 10]}},               "grids.snr_db",           id="snr_below_zero_db"),
            pytest.param({"grids": {}},                                 "grids.snr_db",           id="missing_snr"),
            pytest.param({"multiplexing": {"r1": 2.0}},                 "multiplexing",           id="rate_too_high"),
            pytest.param({"optimizer": {"method": "anneal"}},           "optimizer.method",       id="bad_method"),
            pytest.param({"output": {"format": "xml"}},                 "output.format",          id="bad_format"),
            pytest.param({"output": {"timestamp": "yes"}},              "output.timestamp",       id="timestamp_type"),
        ],
    )
    # fmt: on
    def test_rejected(self, overrides, key):
        with pytest.raises(ConfigError) as err:
            parse_config(simulate_doc(**overrides))
        assert err.value.key == key
        assert str(err.value).startswith(f"{key}: ")

    def test_missing_plan(self):
        doc = simulate_doc()
        del doc["plan"]
        with pytest.raises(ConfigError) as err:
            parse_config(doc)
        assert err.value.key == "plan"

    def test_optimize_needs_r_grid(self):
        with pytest.raises(ConfigError) as err:
            parse_config({"mode": "optimize", "antennas": {"m1": 1, "mr": 1, "m2": 1}})
        assert err.value.key == "grids.r"

    def test_optimize_defaults_to_dcf(self):
        config = parse_config(
            {"mode": "optimize", "antennas": {"m1": 1, "mr": 1, "m2": 1}, "grids": {"r": [0, 0.25]}}
        )
        assert config.protocol is ProtocolKind.DCF

    # fmt: off
    @pytest.mark.parametrize(
        "mode, antennas, r",
        [
            pytest.param("optimize", (1, 1, 1), [0.25, 1.5],                          id="optimize_past_curve"),
            pytest.param("analytic", (2, 1, 2), [0, 1.05],                            id="analytic_past_relay"),
            pytest.param("analytic", (1, 3, 3), {"start": 0, "stop": 2, "step": 0.5}, id="range_past_m_star"),
            pytest.param("optimize", (2, 2, 2), [-0.1, 0.5],                          id="negative_gain"),
        ],
    )
    # fmt: on
    def test_r_grid_within_curve(self, mode, antennas, r):
        doc = {"mode": mode, "antennas": dict(zip(("m1", "mr", "m2"), antennas)), "grids": {"r": r}}
        with pytest.raises(ConfigError, match=r"must lie in \[0, ") as err:
            parse_config(doc)
        assert err.value.key == "grids.r"

    def test_r_grid_reaches_curve_end(self):
        doc = {"mode": "optimize", "antennas": {"m1": 2, "mr": 3, "m2": 2}, "grids": {"r": [0, 2]}}
        assert parse_config(doc).r_grid == (0.0, 2.0)

    @pytest.mark.parametrize("name", ["CF", "DF"])
    def test_optimize_rejects_two_way(self, name):
        doc = {
            "mode": "optimize",
            "antennas": {"m1": 1, "mr": 1, "m2": 1},
            "protocol": {"name": name},
            "grids": {"r": [0, 0.25]},
        }
        with pytest.raises(ConfigError) as err:
            parse_config(doc)
        assert err.value.key == "protocol.name"

    def test_optimize_accepts_ddf(self):
        doc = {
            "mode": "optimize",
            "antennas": {"m1": 1, "mr": 1, "m2": 1},
            "protocol": {"name": "DDF"},
            "grids": {"r": [0, 0.25]},
        }
        assert parse_config(doc).protocol is ProtocolKind.DDF

    def test_region_needs_diversity(self):
        with pytest.raises(ConfigError) as err:
            parse_config({"mode": "region", "antennas": {"m1": 1, "mr": 1, "m2": 1}})
        assert err.value.key == "grids.diversity"

    def test_diversity_range(self):
        doc = {"mode": "region", "antennas": {"m1": 1, "mr": 1, "m2": 1}, "grids": {"diversity": 2}}
        with pytest.raises(ConfigError, match=r"\[0, 1\]"):
            parse_config(doc)

    def test_malformed_json_line(self):
        with pytest.raises(ConfigError) as err:
            parse_config('{\n  "mode": "analytic",\n  "antennas": {,}\n}')
        assert err.value.line == 3
        assert str(err.value).startswith("line 3: ")

    def test_round_trip(self):
        config = parse_config(
            simulate_doc(
                protocol={"name": "DCF", "listen_fraction": 0.5},
                multiplexing={"r1": 0.25},
                optimizer={"resolution": 0.05, "method": "grid"},
                output={"path": "out.json", "format": "json", "timestamp": False},
            )
        )
        assert parse_config(config.to_document()) == config
        assert parse_config(json.dumps(config.to_document())) == config

    def test_load_config(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps(simulate_doc()))
        assert load_config(path) == parse_config(simulate_doc())


class TestMetadata:
    @pytest.fixture
    def tables(self):
        table = Table("curve", ("r", "d"))
        table.add(0.0, 1.0)
        table.add(0.5, 0.5)
        return [table]

    @pytest.mark.parametrize("fmt", ["csv", "json"])
    def test_read_metadata(self, tmp_path, tables, fmt):
        path = tmp_path / f"out.{fmt}"
        config = parse_config(simulate_doc(output={"path": str(path), "format": fmt}))
        write_results(config, tables)
        assert read_metadata(path) == config

    def test_csv_layout(self, tmp_path, tables):
        path = tmp_path / "out.csv"
        config = parse_config(simulate_doc(output={"path": str(path), "timestamp": False}))
        text = write_results(config, tables)
        lines = text.splitlines()
        assert lines[0].startswith("# config: {")
        assert lines[1:] == ["r,d", "0.0,1.0", "0.5,0.5"]
        assert path.read_text() == text

    def test_timestamp_line(self, tmp_path, tables):
        config = parse_config(simulate_doc(output={"path": str(tmp_path / "o.csv")}))
        lines = write_results(config, tables).splitlines()
        assert lines[1].startswith("# generated_at: ")

    def test_json_layout(self, tmp_path, tables):
        path = tmp_path / "out.json"
        config = parse_config(simulate_doc(output={"path": str(path), "format": "json"}))
        doc = json.loads(write_results(config, tables))
        assert doc["tables"]["curve"] == [{"r": 0.0, "d": 1.0}, {"r": 0.5, "d": 0.5}]
        assert "generated_at" in doc["metadata"]
        assert doc["metadata"]["config"]["mode"] == "simulate"

    def test_no_metadata(self, tmp_path):
        path = tmp_path / "bare.csv"
        path.write_text("r,d\n0,1\n")
        with pytest.raises(ConfigError):
            read_metadata(path)

    def test_row_width_checked(self):
        with pytest.raises(ValueError):
            Table("curve", ("r", "d")).add(1.0)
