"""Command-line interface: exit codes, emitted files, round trips.

All commands run in-process through spindiff.cli.main. Solver-backed
commands use a coarse, small-extent grid to stay fast.
"""
import numpy as np
import pytest

from spindiff import (DecaySeries, YKind, read_fit_report, read_table,
                      write_measured_csv)
from spindiff.cli import main

FAST_SOLVER = """\
[solver]
d_cm2s = 1e-13
dr_nm = 1.0
dz_nm = 0.625
dt_s = 0.05
extent_factor = 6

[geometry]
radius_nm = 10
height_nm = 5

[protocol]
t_dark_s = 4

[output]
sample_every_s = 1.0
"""


def write_config(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestConvert:
    def test_ohs_to_degree(self, capsys):
        assert main(["convert", "38"]) == 0
        out = capsys.readouterr().out
        assert "polarization_degree = 0.287879" in out

    def test_full_shift_is_unity(self, capsys):
        assert main(["convert", "132"]) == 0
        assert "polarization_degree = 1" in capsys.readouterr().out

    def test_unphysical_shift_exits_2(self, capsys):
        assert main(["convert", "200"]) == 2
        assert "error" in capsys.readouterr().err

    def test_degree_to_ohs(self, capsys):
        assert main(["convert", "0.5", "--kind", "degree"]) == 0
        assert "ohs_uev = 66" in capsys.readouterr().out

    def test_field_requires_g_factor(self, capsys):
        assert main(["convert", "1.0", "--kind", "field_t"]) == 2

    def test_field_with_g_factor(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "[material]\ng_e_abs = 1.0\n"
                                     "[geometry]\nradius_nm = 10\n"
                                     "height_nm = 5\n")
        assert main(["convert", "1.0", "--kind", "field_t",
                     "--config", cfg]) == 0
        out = capsys.readouterr().out
        assert "ohs_uev = 57.8838" in out


class TestSimulate:
    def test_writes_decay_and_snapshots(self, tmp_path, capsys):
        cfg = write_config(tmp_path, FAST_SOLVER
                           + "snapshot_times_s = 0, 4\n")
        out = str(tmp_path / "out")
        assert main(["simulate", "--config", cfg, "--out", out]) == 0
        cols, meta = read_table(tmp_path / "out" / "decay.csv")
        assert list(cols) == ["t_s", "dot_average"]
        assert cols["dot_average"][0] == 1.0
        assert np.all(np.diff(cols["dot_average"]) < 0)
        assert meta["preset"] == "paper-decay"
        snaps, _ = read_table(tmp_path / "out" / "field_snapshots.csv")
        assert set(np.unique(snaps["t_s"])) == {0.0, 4.0}

    def test_zeeman_column_with_g_factors(self, tmp_path):
        cfg = write_config(tmp_path, FAST_SOLVER
                           + "\n[material]\ng_e_abs = 0.54\ng_h_abs = 1.4\n")
        out = str(tmp_path / "out")
        assert main(["simulate", "--config", cfg, "--out", out,
                     "--quiet"]) == 0
        cols, _ = read_table(tmp_path / "out" / "decay.csv")
        assert "zeeman_uev" in cols

    def test_zero_d_constant_column(self, tmp_path):
        cfg = write_config(tmp_path,
                           FAST_SOLVER.replace("d_cm2s = 1e-13",
                                               "d_cm2s = 0"))
        out = str(tmp_path / "out")
        assert main(["simulate", "--config", cfg, "--out", out,
                     "--quiet"]) == 0
        cols, _ = read_table(tmp_path / "out" / "decay.csv")
        np.testing.assert_array_equal(cols["dot_average"], 1.0)

    def test_missing_geometry_key_exits_2(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "[geometry]\nradius_nm = 10\n"
                                     "[solver]\nd_cm2s = 1e-13\n"
                                     "[protocol]\nt_dark_s = 1\n")
        assert main(["simulate", "--config", cfg]) == 2
        assert "height_nm" in capsys.readouterr().err

    def test_missing_d_exits_2(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "[geometry]\nradius_nm = 10\n"
                                     "height_nm = 5\n"
                                     "[protocol]\nt_dark_s = 1\n")
        assert main(["simulate", "--config", cfg]) == 2
        assert "d_cm2s" in capsys.readouterr().err

    def test_config_required(self, capsys):
        assert main(["simulate"]) == 2

    def test_decay_csv_round_trips(self, tmp_path):
        cfg = write_config(tmp_path, FAST_SOLVER)
        out = str(tmp_path / "out")
        assert main(["simulate", "--config", cfg, "--out", out,
                     "--quiet"]) == 0
        first, meta = read_table(tmp_path / "out" / "decay.csv")
        copy = tmp_path / "copy.csv"
        from spindiff import write_table
        write_table(copy, first, meta)
        second, meta2 = read_table(copy)
        assert meta2 == meta
        for k in first:
            np.testing.assert_array_equal(second[k], first[k])


class TestSweep:
    def test_family_ordered_by_d(self, tmp_path):
        cfg = write_config(tmp_path, FAST_SOLVER.replace(
            "d_cm2s = 1e-13", "d_list_cm2s = 2e-15, 1e-13, 1e-12"))
        out = str(tmp_path / "out")
        assert main(["sweep", "--config", cfg, "--out", out, "--quiet"]) == 0
        cols, _ = read_table(tmp_path / "out" / "sweep.csv")
        assert list(cols) == ["d_cm2s", "t_s", "p"]
        curves = {d: cols["p"][cols["d_cm2s"] == d]
                  for d in (2e-15, 1e-13, 1e-12)}
        t = cols["t_s"][cols["d_cm2s"] == 2e-15]
        for lo_d, hi_d in ((2e-15, 1e-13), (1e-13, 1e-12)):
            assert np.all(curves[hi_d][t > 0] < curves[lo_d][t > 0])

    def test_single_d_matches_simulate(self, tmp_path):
        cfg = write_config(tmp_path, FAST_SOLVER)
        sim_out = str(tmp_path / "sim")
        sweep_out = str(tmp_path / "sweep")
        assert main(["simulate", "--config", cfg, "--out", sim_out,
                     "--quiet"]) == 0
        assert main(["sweep", "--config", cfg, "--out", sweep_out,
                     "--quiet"]) == 0
        decay, _ = read_table(tmp_path / "sim" / "decay.csv")
        sweep, _ = read_table(tmp_path / "sweep" / "sweep.csv")
        np.testing.assert_array_equal(sweep["p"], decay["dot_average"])
        np.testing.assert_array_equal(sweep["t_s"], decay["t_s"])

    def test_empty_d_list_exits_2(self, tmp_path):
        cfg = write_config(tmp_path, FAST_SOLVER.replace(
            "d_cm2s = 1e-13", "d_list_cm2s ="))
        assert main(["sweep", "--config", cfg, "--quiet"]) == 2

    def test_no_d_key_exits_2(self, tmp_path, capsys):
        cfg = write_config(tmp_path, FAST_SOLVER.replace(
            "d_cm2s = 1e-13\n", ""))
        assert main(["sweep", "--config", cfg, "--quiet"]) == 2
        assert "d_list_cm2s" in capsys.readouterr().err


class TestFitRise:
    def rise_csv(self, tmp_path, tau=0.4, rows=None):
        t = np.arange(0.0, 6.01, 0.2) if rows is None else np.arange(rows,
                                                                     dtype=float)
        y = 38.0 * (1.0 - np.exp(-t / tau))
        path = tmp_path / "rise.csv"
        write_measured_csv(path, DecaySeries(
            t=t, y=y, y_kind=YKind.ZEEMAN_SPLITTING_UEV))
        return str(path)

    def test_recovers_tau(self, tmp_path, capsys):
        path = self.rise_csv(tmp_path, tau=3.4)
        assert main(["fit-rise", path, "--out", str(tmp_path),
                     "--quiet"]) == 0
        out = capsys.readouterr().out
        assert "tau_s = 3.4" in out
        overlay, _ = read_table(tmp_path / "rise_overlay.csv")
        assert list(overlay) == ["t_s", "measured", "model"]

    def test_three_rows_exit_2(self, tmp_path):
        path = self.rise_csv(tmp_path, rows=3)
        assert main(["fit-rise", path, "--quiet", "--out",
                     str(tmp_path)]) == 2

    def test_constant_csv_exits_4(self, tmp_path):
        path = tmp_path / "const.csv"
        write_measured_csv(path, DecaySeries(
            t=np.arange(6.0), y=np.full(6, 5.0),
            y_kind=YKind.ZEEMAN_SPLITTING_UEV))
        assert main(["fit-rise", str(path), "--quiet", "--out",
                     str(tmp_path)]) == 4


class TestFitD:
    FIT_CONFIG = """\
[solver]
d_bounds_cm2s = 1e-15, 1e-14
dr_nm = 1.0
dz_nm = 0.625
dt_s = 0.2
extent_factor = 5

[geometry]
radius_nm = 10
height_nm = 5

[protocol]
t_pump_s = 10
"""

    def synthetic_csv(self, tmp_path):
        from spindiff import DotGeometry, build_grid, simulate_decay_curve
        grid = build_grid(DotGeometry(), 1.0, 0.625, extent_factor=5.0)
        s = simulate_decay_curve(4e-15, 10.0, 60.0, 10.0, DotGeometry(),
                                 grid, dt=0.2)
        path = tmp_path / "measured.csv"
        write_measured_csv(path, DecaySeries(
            t=s.t, y=60.0 + 38.0 * s.y, y_kind=YKind.ZEEMAN_SPLITTING_UEV))
        return str(path)

    def test_round_trip(self, tmp_path, capsys):
        cfg = write_config(tmp_path, self.FIT_CONFIG)
        out = str(tmp_path / "out")
        assert main(["fit-d", self.synthetic_csv(tmp_path), "--config", cfg,
                     "--out", out]) == 0
        stdout = capsys.readouterr().out
        assert "d_qd_cm2s = " in stdout
        report = read_fit_report(tmp_path / "out" / "fit.json")
        assert report["d_qd_cm2s"] == pytest.approx(4e-15, rel=0.05)
        assert report["scale_uev"] == pytest.approx(38.0, rel=0.02)
        assert report["offset_uev"] == pytest.approx(60.0, rel=0.02)
        assert report["warnings"] == []
        overlay, _ = read_table(tmp_path / "out" / "fit_overlay.csv")
        assert list(overlay) == ["t_s", "measured", "model"]
        rms = np.sqrt(np.mean((overlay["measured"] - overlay["model"]) ** 2))
        assert rms < 0.1

    def test_constant_csv_exits_4(self, tmp_path):
        cfg = write_config(tmp_path, self.FIT_CONFIG)
        path = tmp_path / "const.csv"
        write_measured_csv(path, DecaySeries(
            t=np.arange(0.0, 60.0, 10.0), y=np.full(6, 60.0),
            y_kind=YKind.ZEEMAN_SPLITTING_UEV))
        assert main(["fit-d", str(path), "--config", cfg, "--quiet",
                     "--out", str(tmp_path)]) == 4

    def test_non_monotonic_csv_exits_2(self, tmp_path):
        cfg = write_config(tmp_path, self.FIT_CONFIG)
        path = tmp_path / "bad.csv"
        path.write_text("# y_kind=zeeman_splitting_uev\ndelay_s,value\n"
                        "0,98\n20,80\n10,90\n30,75\n40,70\n",
                        encoding="utf-8")
        assert main(["fit-d", str(path), "--config", cfg, "--quiet",
                     "--out", str(tmp_path)]) == 2
