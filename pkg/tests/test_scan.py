"""Batch sweeps: configuration, curves, ensembles, CSV/SVG emission."""

import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from gmedyn import (DephasingParams, ScanConfig, ScanResult, Series, e_curve,
                    emit_csv, emit_f_curve, emit_svg, ensemble_mean,
                    f_function, ghz, run_scan)


def svg_data_line_count(path) -> int:
    """Number of plotted data lines: direct line2d children of the axes."""
    root = ET.parse(path).getroot()
    stack = [root]
    while stack:
        el = stack.pop()
        if el.get("id", "").startswith("axes_"):
            return sum(1 for ch in el if ch.get("id", "").startswith("line2d"))
        stack.extend(el)
    raise AssertionError("no axes group found")


class TestScanConfig:
    def test_defaults(self):
        cfg = ScanConfig(state="ghz3")
        assert cfg.a == 1.0 and cfg.tau == (5.0,) and cfg.steps == 101
        assert cfg.ensemble_size == 100 and cfg.fmt == "csv"

    @pytest.mark.parametrize("kwargs", [
        dict(state="nope"),
        dict(state="ghz3", steps=1),
        dict(state="ghz3", nu_max=0.0),
        dict(state="ghz3", ensemble_size=0),
        dict(state="ghz3", tau=()),
        dict(state="ghz3", tau=(-1.0,)),
        dict(state="ghz3", a=0.0),
        dict(state="ghz3", fmt="png"),
        dict(state="random-pure", n_qubits=5),
    ])
    def test_rejects_bad_config(self, kwargs):
        with pytest.raises(ValueError):
            ScanConfig(**kwargs)


class TestScanResult:
    def test_grid_must_increase(self):
        with pytest.raises(ValueError, match="increasing"):
            ScanResult(np.array([0.0, 0.0, 1.0]), ())

    def test_series_length_checked(self):
        with pytest.raises(ValueError, match="length"):
            ScanResult(np.array([0.0, 1.0]), (Series("x", np.zeros(3)),))

    def test_by_name(self):
        res = ScanResult(np.array([0.0, 1.0]), (Series("x", np.zeros(2)),))
        assert res.by_name("x").name == "x"
        with pytest.raises(KeyError):
            res.by_name("y")


class TestEnsembleMean:
    def test_single_curve(self):
        mean, std = ensemble_mean([np.array([0.1, 0.2])])
        assert np.array_equal(mean, [0.1, 0.2])
        assert np.array_equal(std, [0.0, 0.0])

    def test_two_constant_curves(self):
        mean, std = ensemble_mean([np.full(3, 0.2), np.full(3, 0.4)])
        assert np.allclose(mean, 0.3)
        assert np.allclose(std, math.sqrt(0.02), atol=1e-12)  # ~0.1414

    def test_rejects_mismatched(self):
        with pytest.raises(ValueError):
            ensemble_mean(np.zeros(3))


class TestRunScan:
    def test_named_state_columns(self):
        cfg = ScanConfig(state="ghz3", steps=5, nu_max=0.2)
        res = run_scan(cfg)
        assert [s.name for s in res.series] == ["ghz3"]
        assert res.by_name("ghz3").values[0] == pytest.approx(0.5, abs=1e-6)

    def test_multi_tau_suffixes(self):
        cfg = ScanConfig(state="ghz3", steps=3, nu_max=0.05, tau=(5.0, 2.0))
        res = run_scan(cfg)
        assert [s.name for s in res.series] == ["ghz3_tau5", "ghz3_tau2"]

    def test_with_f_column(self):
        cfg = ScanConfig(state="ghz3", steps=3, nu_max=0.1, with_f=True)
        res = run_scan(cfg)
        f = res.by_name("f_over_10")
        assert f.role == "f"
        p = DephasingParams(1.0, 5.0)
        assert f.values[0] == pytest.approx(p.mu / 10.0, abs=1e-12)
        assert np.allclose(
            f.values, [f_function(p, nu) / 10.0 for nu in res.nu], atol=1e-12
        )

    def test_ensemble_columns_and_determinism(self):
        cfg = ScanConfig(state="random-pure", steps=3, nu_max=0.1,
                         ensemble_size=3, seed=5)
        res1 = run_scan(cfg)
        names = [s.name for s in res1.series]
        assert names == ["random-pure_000", "random-pure_001",
                         "random-pure_002", "mean", "std"]
        member_curves = [s.values for s in res1.series if s.role == "member"]
        mean, std = ensemble_mean(member_curves)
        assert np.array_equal(res1.by_name("mean").values, mean)
        assert np.array_equal(res1.by_name("std").values, std)
        res2 = run_scan(cfg)
        for s1, s2 in zip(res1.series, res2.series):
            assert np.array_equal(s1.values, s2.values)

    def test_all_values_respect_monotone_bound(self):
        cfg = ScanConfig(state="wgs", steps=3, nu_max=0.1,
                         ensemble_size=2, seed=9)
        res = run_scan(cfg)
        for s in res.series:
            if s.role != "std":
                assert np.all(s.values >= 0.0)
                assert np.all(s.values <= 0.5 + 1e-6)


class TestEmitCsv:
    def test_format_and_first_row(self, tmp_path):
        res = run_scan(ScanConfig(state="ghz3", steps=3, nu_max=0.1))
        out = tmp_path / "scan.csv"
        emit_csv(res, out)
        lines = out.read_text().splitlines()
        assert lines[0] == "nu,ghz3"
        assert lines[1] == "0.000000000,0.500000000"
        assert len(lines) == 4
        raw = out.read_bytes()
        assert raw.endswith(b"\n")
        assert b" " not in raw  # no stray whitespace anywhere

    def test_column_count(self, tmp_path):
        res = run_scan(ScanConfig(state="random-pure", steps=2, nu_max=0.05,
                                  ensemble_size=2, seed=3, with_f=True))
        out = tmp_path / "scan.csv"
        emit_csv(res, out)
        header = out.read_text().splitlines()[0].split(",")
        assert len(header) == 1 + len(res.series)


class TestEmitSvg:
    def test_well_formed_with_one_line_per_series(self, tmp_path):
        res = run_scan(ScanConfig(state="random-pure", steps=3, nu_max=0.1,
                                  ensemble_size=2, seed=4, with_f=True))
        out = tmp_path / "scan.svg"
        emit_svg(res, out)
        # parses as XML and draws members + named/mean/f lines (std is
        # CSV-only)
        expected = sum(1 for s in res.series if s.role != "std")
        assert svg_data_line_count(out) == expected

    def test_byte_deterministic(self, tmp_path):
        res = run_scan(ScanConfig(state="ghz3", steps=4, nu_max=0.2))
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        emit_svg(res, a)
        emit_svg(res, b)
        assert a.read_bytes() == b.read_bytes()


class TestECurve:
    def test_ghz_curve_matches_analytic_form(self, std_params):
        from gmedyn import gamma_factor

        grid = np.linspace(0.0, 0.06, 4)
        curve = e_curve(ghz(3), std_params, grid)
        for nu, e in zip(grid, curve):
            assert e == pytest.approx(abs(gamma_factor(std_params, nu)) ** 3 / 2,
                                      abs=1e-6)

    def test_f_curve_scaling(self, std_params):
        grid = np.linspace(0.0, 0.5, 7)
        vals = emit_f_curve(std_params, grid)
        assert vals[0] == pytest.approx(std_params.mu / 10.0, abs=1e-15)
        assert np.all(vals >= 0.0)
