import csv

import pytest
import yaml

from rsma.cli import main


def write_cfg(tmp_path, name="cfg.yaml", **updates):
    data = {
        "scenario": "downlink",
        "dims": {"n_tx": 2, "n_users": 2},
        "sweep": {"snr_db": [10.0], "alpha": 0.5, "trials": 2},
        "run": {"master_seed": 5, "schemes": ["rsma", "sdma"], "output": "results.csv"},
        "optimizer": {"grid_size": 5},
    }
    for key, value in updates.items():
        section, _, field = key.partition(".")
        if field:
            data.setdefault(section, {})[field] = value
        else:
            data[section] = value
    path = tmp_path / name
    path.write_text(yaml.safe_dump(data))
    return path


def read_rows(path):
    with open(path) as handle:
        lines = [l for l in handle if not l.startswith("#")]
    reader = csv.DictReader(lines)
    return list(reader)


class TestValidate:
    def test_ok(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path)
        assert main(["validate", "--config", str(cfg)]) == 0
        out = capsys.readouterr().out
        assert "config ok" in out and "scenario=downlink" in out

    def test_bad_config(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, **{"run.schemes": ["bogus"]})
        assert main(["validate", "--config", str(cfg)]) == 1
        assert "run.schemes" in capsys.readouterr().err


class TestRun:
    def test_missing_config_names_path(self, tmp_path, capsys):
        missing = tmp_path / "nope.yaml"
        assert main(["run", "--config", str(missing)]) == 1
        assert "nope.yaml" in capsys.readouterr().err

    def test_unknown_flag(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path)
        assert main(["run", "--config", str(cfg), "--frobnicate"]) == 1

    def test_no_subcommand(self, capsys):
        assert main([]) == 1

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0

    def test_writes_csv(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path)
        out_dir = tmp_path / "out"
        assert main(["run", "--config", str(cfg), "--out", str(out_dir)]) == 0
        rows = read_rows(out_dir / "results.csv")
        assert len(rows) == 4
        assert {r["scheme"] for r in rows} == {"rsma", "sdma"}

    def test_seed_changes_only_seeded_columns(self, tmp_path):
        cfg = write_cfg(tmp_path)
        for seed, name in ((1, "a"), (2, "b")):
            assert main([
                "run", "--config", str(cfg), "--out", str(tmp_path / name),
                "--seed", str(seed),
            ]) == 0
        rows_a = read_rows(tmp_path / "a" / "results.csv")
        rows_b = read_rows(tmp_path / "b" / "results.csv")
        for ra, rb in zip(rows_a, rows_b):
            for fixed in ("scenario", "scheme", "snr_db", "alpha", "trial", "status"):
                assert ra[fixed] == rb[fixed]
            assert ra["seed"] != rb["seed"]
            assert ra["sum_rate"] != rb["sum_rate"]

    def test_set_override(self, tmp_path):
        cfg = write_cfg(tmp_path)
        out_dir = tmp_path / "out"
        assert main([
            "run", "--config", str(cfg), "--out", str(out_dir),
            "--set", "sweep.trials=3",
        ]) == 0
        assert len(read_rows(out_dir / "results.csv")) == 6

    def test_set_unknown_key(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path)
        assert main(["run", "--config", str(cfg), "--set", "sweep.bogus=1"]) == 1
        assert "sweep.bogus" in capsys.readouterr().err

    def test_output_escape_rejected(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, **{"run.output": "../escape.csv"})
        assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "out")]) == 1
        assert "run.output" in capsys.readouterr().err

    def test_threads_env_default(self, tmp_path, monkeypatch):
        cfg = write_cfg(tmp_path)
        assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "a"),
                     "--threads", "1"]) == 0
        monkeypatch.setenv("RSMA_THREADS", "4")
        assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "b")]) == 0
        bytes_a = (tmp_path / "a" / "results.csv").read_bytes()
        bytes_b = (tmp_path / "b" / "results.csv").read_bytes()
        assert bytes_a == bytes_b

    def test_threads_env_invalid(self, tmp_path, monkeypatch, capsys):
        cfg = write_cfg(tmp_path)
        monkeypatch.setenv("RSMA_THREADS", "many")
        assert main(["run", "--config", str(cfg)]) == 1
        assert "RSMA_THREADS" in capsys.readouterr().err


class TestRegion:
    def region_cfg(self, tmp_path):
        return write_cfg(
            tmp_path,
            scenario="region",
            fixture="unit",
            **{
                "dims.n_tx": 1,
                "sweep.snr_db": [0.0],
                "run.output": "region.csv",
                "optimizer.split_grid": 41,
            },
        )

    def test_writes_both_clouds(self, tmp_path):
        cfg = self.region_cfg(tmp_path)
        out_dir = tmp_path / "out"
        assert main(["region", "--config", str(cfg), "--out", str(out_dir)]) == 0
        points = read_rows(out_dir / "region_points.csv")
        pentagon = read_rows(out_dir / "region_pentagon.csv")
        assert len(points) > 0 and len(pentagon) == 1
        r1_max = float(pentagon[0]["r1_max"])
        r2_max = float(pentagon[0]["r2_max"])
        sum_max = float(pentagon[0]["sum_max"])
        for row in points:
            r1, r2 = float(row["r1"]), float(row["r2"])
            assert r1 <= r1_max + 1e-9
            assert r2 <= r2_max + 1e-9
            assert r1 + r2 <= sum_max + 1e-9

    def test_run_delegates_region(self, tmp_path):
        cfg = self.region_cfg(tmp_path)
        out_dir = tmp_path / "out2"
        assert main(["run", "--config", str(cfg), "--out", str(out_dir)]) == 0
        assert (out_dir / "region_points.csv").exists()

    def test_region_requires_region_scenario(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path)
        assert main(["region", "--config", str(cfg)]) == 1
        assert "scenario" in capsys.readouterr().err


class TestSweep:
    def test_expands_grid(self, tmp_path):
        cfg = write_cfg(tmp_path)
        out_dir = tmp_path / "out"
        assert main([
            "sweep", "--config", str(cfg), "--out", str(out_dir),
            "--set", "sweep.alpha=0.25,0.75",
        ]) == 0
        assert (out_dir / "results__sweep-alpha=0.25.csv").exists()
        assert (out_dir / "results__sweep-alpha=0.75.csv").exists()

    def test_needs_a_swept_key(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path)
        assert main(["sweep", "--config", str(cfg), "--set", "sweep.alpha=0.5"]) == 1
        assert "--set" in capsys.readouterr().err
