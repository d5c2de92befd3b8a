import csv
import os

import numpy as np
import pytest

import svadf
from svadf.cli import main
from svadf.data import ingest_csv, series_to_csv


@pytest.fixture
def bubble_csv(tmp_path):
    sim = svadf.simulate(
        svadf.DgpSpec(
            n=600,
            vol=svadf.VolSpec(),
            bubble=svadf.BubbleSpec(0.3, 0.6, 1.0, 0.5),
            seed=2,
        )
    )
    # shift into positive territory so log-price and volatility work too
    shifted = svadf.PriceSeries(values=sim.values - sim.values.min() + 10.0)
    p = tmp_path / "bubble.csv"
    series_to_csv(shifted, p)
    return p


@pytest.fixture
def walk_csv(tmp_path):
    sim = svadf.simulate(svadf.DgpSpec(n=400, vol=svadf.VolSpec(), seed=7))
    p = tmp_path / "walk.csv"
    series_to_csv(sim, p)
    return p


class TestSimulateCommand:
    def test_simulate_writes_ingestible_csv(self, tmp_path):
        out = tmp_path / "sim.csv"
        rc = main([
            "simulate", "--n", "300", "--r-e", "0.3", "--r-f", "0.6",
            "--seed", "5", "--out", str(out),
        ])
        assert rc == 0
        s = ingest_csv(out)
        assert len(s) == 300
        direct = svadf.simulate(
            svadf.DgpSpec(n=300, vol=svadf.VolSpec(),
                          bubble=svadf.BubbleSpec(0.3, 0.6, 1.0, 0.5), seed=5)
        )
        assert np.array_equal(s.values, direct.values)

    def test_pwy_reinit_flag(self, tmp_path):
        out = tmp_path / "sim.csv"
        rc = main([
            "simulate", "--n", "200", "--r-e", "0.4", "--r-f", "0.6",
            "--pwy-reinit", "--reset-sd", "1.0", "--seed", "3", "--out", str(out),
        ])
        assert rc == 0
        assert len(ingest_csv(out)) == 200


class TestTestCommand:
    def test_bubble_flagged_explosive(self, bubble_csv, capsys):
        rc = main(["test", "--input", str(bubble_csv)])
        assert rc == 0
        outp = capsys.readouterr().out
        assert "full-sample statistic" in outp and "decision" in outp

    def test_random_walk_not_flagged(self, walk_csv, capsys):
        rc = main(["test", "--input", str(walk_csv)])
        assert rc == 0
        assert "no explosive evidence" in capsys.readouterr().out


class TestDatestampCommand:
    def test_emits_path_and_episode(self, bubble_csv, tmp_path, capsys):
        ppath = tmp_path / "path.csv"
        pep = tmp_path / "episode.csv"
        rc = main([
            "datestamp", "--input", str(bubble_csv), "--min-below", "12",
            "--out-path", str(ppath), "--out-episode", str(pep),
        ])
        assert rc == 0
        out = capsys.readouterr().out
        assert "r_e_hat" in out
        lines = ppath.read_text().splitlines()
        assert lines[1].split(",") == [
            "index", "date", "r", "statistic", "cv_origination", "cv_collapse",
        ]
        assert len(lines) == 2 + (600 - 60 + 1)
        rows = [r for r in csv.DictReader(
            [ln for ln in pep.read_text().splitlines() if not ln.startswith("#")]
        )]
        assert len(rows) == 1
        assert abs(float(rows[0]["r_e_hat"]) - 0.3) < 0.1

    def test_pwy_mode(self, bubble_csv, capsys):
        rc = main(["datestamp", "--input", str(bubble_csv), "--pwy"])
        assert rc == 0


class TestInferCommand:
    def test_prints_intervals(self, bubble_csv, capsys):
        rc = main(["infer", "--input", str(bubble_csv)])
        assert rc == 0
        out = capsys.readouterr().out
        assert "delta_hat" in out and "ci_delta" in out and "classification" in out


class TestCalibrateCommand:
    def test_writes_table(self, tmp_path, capsys):
        out = tmp_path / "cv.csv"
        rc = main([
            "calibrate", "--hypothesis", "null", "--sizes", "150",
            "--B", "100", "--seed", "2", "--out", str(out),
        ])
        assert rc == 0
        rows = list(csv.DictReader(out.open()))
        assert len(rows) == 1 and rows[0]["n"] == "150"


class TestBenchCommand:
    def test_reinit_gap_runs(self, tmp_path, capsys):
        out = tmp_path / "gap.csv"
        rc = main([
            "bench", "--experiment", "reinit-gap", "--sizes", "60,120",
            "--B", "60", "--seed", "4", "--out", str(out),
        ])
        assert rc == 0
        rows = list(csv.DictReader(
            [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
        ))
        assert len(rows) == 4  # 2 sizes x 2 regimes


class TestReportCommand:
    def test_combined_summary(self, bubble_csv, capsys):
        rc = main(["report", "--input", str(bubble_csv), "--min-below", "12"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "episode" in out and "rolling volatility" in out


class TestErrorsAndConfig:
    def test_missing_file_is_machine_parseable(self, capsys):
        rc = main(["test", "--input", "/nonexistent/prices.csv"])
        assert rc == 1
        err = capsys.readouterr().err
        assert err.startswith("error:") or ":" in err.splitlines()[0]

    def test_schema_error_category(self, tmp_path, capsys):
        p = tmp_path / "bad.csv"
        p.write_text("time,close\n2024-01-02,1.0\n")
        rc = main(["test", "--input", str(p)])
        assert rc == 1
        assert capsys.readouterr().err.startswith("schema:")

    def test_config_file_supplies_defaults(self, bubble_csv, tmp_path, capsys):
        ini = tmp_path / "svadf.ini"
        ini.write_text(f"[test]\ninput = {bubble_csv}\nr0 = 0.2\n")
        rc = main(["--config", str(ini), "test", "--input", str(bubble_csv)])
        assert rc == 0

    def test_env_seed_default(self, tmp_path, monkeypatch):
        out = tmp_path / "a.csv"
        monkeypatch.setenv("SVADF_SEED", "123")
        main(["simulate", "--n", "100", "--out", str(out)])
        a = ingest_csv(out).values
        out2 = tmp_path / "b.csv"
        rc = main(["simulate", "--n", "100", "--seed", "123", "--out", str(out2)])
        assert rc == 0
        assert np.array_equal(a, ingest_csv(out2).values)
