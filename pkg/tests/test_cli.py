import json

import pytest

from flexmimo.cli import run

FAST = {
    "seed": 3,
    "hardening": {"trials": 2000, "n_max": 30, "m_max": 6, "curve_k": [1, 2]},
    "se_ee": {"trials": 500, "points": 7},
    "trajectory": {
        "random_samples": 64, "pg_episodes": 4, "grid_resolution": 5,
        "cem": {"iterations": 3, "population": 16},
        "diffusion": {"outer_iterations": 3, "samples_per_iteration": 16, "train_epochs": 10, "hidden": [16]},
    },
}


@pytest.fixture
def cfg_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(FAST))
    return path


def read_dir(path):
    return {p.name: p.read_bytes() for p in sorted(path.iterdir())}


class TestExitCodes:
    def test_usage_errors(self, capsys):
        assert run([]) == 2
        assert run(["bogus"]) == 2
        assert run(["trajectory", "--optimizer", "sgd"]) == 2
        assert "usage" in capsys.readouterr().err

    def test_help(self, capsys):
        assert run(["--help"]) == 0
        assert "hardening" in capsys.readouterr().out

    def test_config_errors(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"trajectory": {"unknown": 1}}))
        assert run(["trajectory", "--config", str(bad)]) == 1
        assert run(["hardening", "--config", str(tmp_path / "missing.json")]) == 1
        assert run(["hardening", "--positions", "0"]) == 1
        assert "error" in capsys.readouterr().err


class TestOutputs:
    def test_trajectory_files(self, tmp_path, cfg_file):
        out = tmp_path / "out"
        assert run(["trajectory", "--config", str(cfg_file), "--optimizer", "diffusion", "--out", str(out)]) == 0
        assert {"trajectory.csv", "curve.csv", "curve.svg", "summary.json"} <= set(read_dir(out))
        lines = (out / "trajectory.csv").read_text().splitlines()
        assert lines[0] == "antenna,step,x,y"
        summary = json.loads((out / "summary.json").read_text())
        assert summary["optimizer"] == "diffusion" and summary["seed"] == 3
        assert summary["evaluations"] == 48

    @pytest.mark.parametrize("argv", [
        ["hardening", "--flexible", "2", "--positions", "12"],
        ["se-ee"],
        ["trajectory", "--optimizer", "diffusion"],
        ["trajectory", "--optimizer", "cem", "--objective", "total_ee"],
        ["trajectory", "--optimizer", "random"],
        ["trajectory", "--optimizer", "pg"],
    ])
    def test_byte_identical_reruns(self, tmp_path, cfg_file, argv):
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert run(argv + ["--config", str(cfg_file), "--out", str(out)]) == 0
            outs.append(read_dir(out))
        assert outs[0] == outs[1] and len(outs[0]) >= 3

    def test_oracle_small_scene(self, tmp_path):
        cfg = dict(FAST, scene={"region_size": 20.0, "users": [[3.0, 4.0], [15.0, 12.0]],
                                "antenna_init": [[10.0, 10.0]]})
        path = tmp_path / "small.json"
        path.write_text(json.dumps(cfg))
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert run(["trajectory", "--optimizer", "oracle", "--config", str(path), "--out", str(out)]) == 0
            outs.append(read_dir(out))
        assert outs[0] == outs[1]
        assert json.loads(outs[0]["summary.json"])["evaluations"] > 0

    def test_seed_changes_output(self, tmp_path, cfg_file):
        dirs = []
        for seed in ("1", "2"):
            out = tmp_path / seed
            assert run(["hardening", "--config", str(cfg_file), "--seed", seed, "--out", str(out)]) == 0
            dirs.append((out / "summary.json").read_bytes())
        assert dirs[0] != dirs[1]

    def test_stdout_only(self, capsys):
        assert run(["hardening", "--trials", "1000", "--positions", "20"]) == 0
        assert "variance" in capsys.readouterr().out
