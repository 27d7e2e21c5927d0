import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest
from hypothesis import given, strategies as st

from flexmimo.config import ConfigError, SystemConfig, dumps, load_config, parse_config, to_dict
from flexmimo.io import fmt, write_csv, write_json, write_svg


class TestFormat:
    def test_values(self):
        assert fmt(3) == "3" and fmt(np.int64(-2)) == "-2"
        assert fmt(0.1) == "0.1" and fmt(1 / 3) == "0.333333333"
        assert fmt(float("nan")) == "nan" and fmt(-np.inf) == "-inf" and fmt(True) == "1"

    @given(st.floats(allow_nan=False, allow_infinity=False))
    def test_float_reparses_close(self, x):
        assert float(fmt(x)) == pytest.approx(x, rel=1e-8, abs=0)


class TestCsv:
    def test_header_first_and_stable(self, tmp_path):
        rows = [{"a": 1, "b": 0.5}, {"a": 2, "b": 1e-20}]
        write_csv(rows, tmp_path / "x.csv")
        write_csv(rows, tmp_path / "y.csv")
        data = (tmp_path / "x.csv").read_bytes()
        assert data == (tmp_path / "y.csv").read_bytes()
        assert data.decode().splitlines() == ["a,b", "1,0.5", "2,1e-20"]
        assert b"\r" not in data

    def test_empty_needs_columns(self, tmp_path):
        with pytest.raises(ValueError):
            write_csv([], tmp_path / "x.csv")
        write_csv([], tmp_path / "x.csv", columns=["a"])
        assert (tmp_path / "x.csv").read_text() == "a\n"


class TestJsonSvg:
    def test_json_sorted(self, tmp_path):
        write_json({"b": np.float64(0.1), "a": [np.int32(1)]}, tmp_path / "s.json")
        text = (tmp_path / "s.json").read_text()
        assert text.index('"a"') < text.index('"b"')
        assert json.loads(text) == {"a": [1], "b": 0.1}

    @pytest.mark.parametrize("series", [{}, {"one": ([1.0], [2.0])},
                                        {"a": ([1, 10, 100], [1e-3, 1e-2, 1e-1]), "b": ([], [])}])
    def test_svg_parses(self, tmp_path, series):
        write_svg(series, tmp_path / "p.svg", "t", "x", "y", logx=True, logy=True)
        root = ET.parse(tmp_path / "p.svg").getroot()
        assert root.tag.endswith("svg")


class TestConfig:
    def test_default_roundtrip(self, tmp_path):
        text = dumps(SystemConfig())
        (tmp_path / "c.json").write_text(text)
        assert dumps(load_config(tmp_path / "c.json")) == text
        assert text.endswith("\n") and json.loads(text) == to_dict(SystemConfig())

    def test_partial_config_fills_defaults(self):
        cfg = parse_config({"seed": 5, "trajectory": {"optimizer": "cem", "diffusion": {"hidden": [8]}}})
        assert cfg.seed == 5 and cfg.trajectory.optimizer == "cem"
        assert cfg.trajectory.diffusion.hidden == (8,)
        assert cfg.trajectory.budget == SystemConfig().trajectory.budget

    @pytest.mark.parametrize("data", [
        {"sede": 1},
        {"trajectory": {"optimiser": "cem"}},
        {"seed": "one"},
        {"seed": -1},
        {"seed": 1.5},
        {"trajectory": {"optimizer": "adam"}},
        {"trajectory": {"objective": "max_se"}},
        {"scene": {"region_size": 10.0}},
        {"hardening": {"trials": True}},
        [],
    ])
    def test_rejects(self, data):
        with pytest.raises(ConfigError):
            parse_config(data)

    def test_bad_json(self, tmp_path):
        (tmp_path / "c.json").write_text("{")
        with pytest.raises(ConfigError):
            load_config(tmp_path / "c.json")
