import pytest

import svadf
from svadf.calibration import (
    CalibrationTable,
    NuisanceSampler,
    calibrate_alternative,
    calibrate_null,
    read_table_csv,
    write_table_csv,
)
from svadf.dgp import make_rng
from svadf.errors import InvalidSpecError


class TestCalibrateNull:
    def test_deterministic_for_seed(self):
        a = calibrate_null([120, 200], B=100, q=0.9, seed=5)
        b = calibrate_null([120, 200], B=100, q=0.9, seed=5)
        assert a == b
        c = calibrate_null([120, 200], B=100, q=0.9, seed=6)
        assert a != c

    def test_quantiles_monotone_in_q(self):
        lo = calibrate_null([150], B=200, q=0.5, seed=1)
        hi = calibrate_null([150], B=200, q=0.9, seed=1)
        assert lo.values[0] <= hi.values[0]

    def test_null_median_negative(self):
        table = calibrate_null([300], B=200, q=0.5, seed=2)
        assert table.values[0] < 0

    def test_q90_in_plausible_band(self):
        # demeaned coefficient statistic under a unit root: the right-tail
        # 90% point sits around -0.9 at these sizes
        table = calibrate_null([500], B=500, q=0.9, seed=3)
        assert -1.3 < table.values[0] < -0.5

    def test_parallel_matches_serial(self):
        a = calibrate_null([150], B=120, q=0.9, seed=9, n_jobs=1)
        b = calibrate_null([150], B=120, q=0.9, seed=9, n_jobs=2)
        assert a.values == b.values

    def test_validation(self):
        with pytest.raises(InvalidSpecError):
            calibrate_null([100], B=50, q=0.9)
        with pytest.raises(InvalidSpecError):
            calibrate_null([100], B=100, q=1.2)


class TestCalibrateAlternative:
    def test_deterministic_and_shapes(self):
        t = calibrate_alternative([150, 250], q=0.1, seed=4, b_outer=5, b_inner=30)
        t2 = calibrate_alternative([150, 250], q=0.1, seed=4, b_outer=5, b_inner=30)
        assert t == t2
        assert t.sizes == (150, 250)
        assert t.replications == 150

    def test_sampler_draw_ranges(self):
        sampler = NuisanceSampler()
        rng = make_rng(0)
        for _ in range(200):
            bubble, vol = sampler.draw(rng)
            assert 0.2 <= bubble.r_e <= 0.5
            assert bubble.r_e + 0.15 <= bubble.r_f <= 1.0 or bubble.r_f == 1.0
            assert 0.5 <= bubble.c <= 2.0
            assert 0.25 <= bubble.alpha <= 0.65
            assert vol.kind == "logar1"
            assert 0.0 <= vol.eta <= 1.0
            assert 0.5 <= vol.sigma0 <= 2.0


class TestTableCsv:
    def test_roundtrip(self, tmp_path):
        table = calibrate_null([120, 180], B=100, q=0.9, seed=7)
        path = tmp_path / "table.csv"
        write_table_csv(table, path)
        back = read_table_csv(path)
        assert back == table

    def test_missing_column_rejected(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("hypothesis,variant,n\nnull,coefficient,100\n")
        with pytest.raises(InvalidSpecError):
            read_table_csv(p)


class TestTableInvariants:
    def test_sizes_must_increase(self):
        with pytest.raises(InvalidSpecError):
            CalibrationTable(
                hypothesis="null",
                variant="coefficient",
                sizes=(200, 100),
                values=(0.1, 0.2),
                quantile_level=0.9,
                replications=100,
                seed=0,
            )

    def test_value_interpolation(self):
        t = CalibrationTable(
            hypothesis="null",
            variant="coefficient",
            sizes=(100, 200),
            values=(1.0, 2.0),
            quantile_level=0.9,
            replications=100,
            seed=0,
        )
        assert t.value_at(150) == pytest.approx(1.5)
