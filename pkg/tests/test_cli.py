import json

import pytest

from bitpredict.cli import main
from bitpredict.bitstream import read_corpus


@pytest.fixture()
def corpus_path(tmp_path):
    path = tmp_path / "corpus.txt"
    code = main(
        [
            "generate",
            "--out", str(path),
            "--count", "4",
            "--length", "200",
            "--coefficients", "0,0,1",
            "--flip", "0.2",
            "--seed", "5",
        ]
    )
    assert code == 0
    return path


class TestGenerate:
    def test_writes_loadable_corpus(self, corpus_path):
        streams = read_corpus(corpus_path)
        assert len(streams) == 4
        assert all(len(s) == 200 for s in streams)
        assert all(s.source == "synthetic" for s in streams)

    def test_deterministic_given_seed(self, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        args = ["generate", "--count", "2", "--length", "50", "--seed", "9"]
        main(args + ["--out", str(a)])
        main(args + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestAnalyze:
    def test_prints_stats(self, corpus_path, capsys):
        assert main(["analyze", "--corpus", str(corpus_path), "--depth", "3"]) == 0
        out = capsys.readouterr().out
        assert "f0=" in out and "mean_cp(d=3)=" in out


class TestTrain:
    def test_writes_checkpoint(self, corpus_path, tmp_path):
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps({"kind": "oracle", "options": {"mode": "argmax"}}))
        out_path = tmp_path / "model.json"
        code = main(
            [
                "train",
                "--corpus", str(corpus_path),
                "--width", "100",
                "--depth", "3",
                "--predictor", str(spec_path),
                "--out", str(out_path),
            ]
        )
        assert code == 0
        checkpoint = json.loads(out_path.read_text())
        assert checkpoint["spec"]["kind"] == "oracle"
        assert checkpoint["model"]["kind"] == "oracle"

    def test_quantum_checkpoint(self, corpus_path, tmp_path):
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(
            json.dumps(
                {
                    "kind": "quantum",
                    "options": {"restarts": 1, "max_iterations": 3, "tolerance": 1e-3},
                }
            )
        )
        out_path = tmp_path / "model.json"
        code = main(
            [
                "train",
                "--corpus", str(corpus_path),
                "--width", "60",
                "--depth", "3",
                "--predictor", str(spec_path),
                "--out", str(out_path),
            ]
        )
        assert code == 0
        checkpoint = json.loads(out_path.read_text())
        assert len(checkpoint["model"]["params"]) == 8


class TestEvaluateAndSweep:
    def test_evaluate_single_spec(self, corpus_path, tmp_path, capsys):
        spec_path = tmp_path / "exp.json"
        spec_path.write_text(
            json.dumps(
                {
                    "predictor": {"kind": "oracle", "options": {"mode": "argmax"}},
                    "depth": 3,
                    "window_width": 100,
                    "segments": 5,
                    "seed": 3,
                }
            )
        )
        out_json = tmp_path / "report.json"
        code = main(
            [
                "evaluate",
                "--corpus", str(corpus_path),
                "--spec", str(spec_path),
                "--out-json", str(out_json),
            ]
        )
        assert code == 0
        assert "d=3" in capsys.readouterr().out
        (report,) = json.loads(out_json.read_text())
        assert len(report["scores"]) == 5

    def test_sweep_emits_tables_and_reports(self, corpus_path, tmp_path, capsys):
        grid_path = tmp_path / "grid.json"
        grid = [
            {
                "predictor": {"kind": "oracle", "options": {"mode": "argmax"}},
                "depth": d,
                "window_width": w,
                "segments": 4,
                "seed": i,
                "label": "ORACLE",
            }
            for i, (d, w) in enumerate([(3, 100), (3, 125), (4, 100), (4, 125)])
        ]
        grid_path.write_text(json.dumps(grid))
        out_dir = tmp_path / "out"
        code = main(
            [
                "sweep",
                "--corpus", str(corpus_path),
                "--grid", str(grid_path),
                "--parallelism", "2",
                "--out-dir", str(out_dir),
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "ORACLE" in out and "L=100" in out and "L=125" in out
        assert (out_dir / "reports.json").exists()
        assert (out_dir / "reports.csv").exists()
        assert (out_dir / "tables.txt").exists()
