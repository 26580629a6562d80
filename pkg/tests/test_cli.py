"""Command-line surface: artifacts, caching, determinism, config parsing,
and exit codes."""

import json
import os

import pytest

from nleig.cli import main


def run(args, cwd):
    old = os.getcwd()
    os.chdir(cwd)
    try:
        return main(args)
    finally:
        os.chdir(old)


class TestSpectrumCommand:
    def test_row_count_and_artifacts(self, tmp_path):
        rc = run(["spectrum", "--model", "bessel:0", "--n", "1..5",
                  "--tol", "1e-8"], tmp_path)
        assert rc == 0
        lines = (tmp_path / "spectrum_bessel_0.csv").read_text().splitlines()
        assert lines[0] == "n,E,residual,method,maxima"
        assert len(lines) == 6
        payload = json.loads((tmp_path / "spectrum_bessel_0.json").read_text())
        assert [p["n"] for p in payload] == [1, 2, 3, 4, 5]

    def test_cache_hit_is_byte_identical(self, tmp_path):
        args = ["spectrum", "--model", "cos", "--n", "1..3", "--tol", "1e-8"]
        assert run(args, tmp_path) == 0
        first = (tmp_path / "spectrum_cos.csv").read_bytes()
        cache = (tmp_path / ".nleig-cache.jsonl").read_text()
        assert len(cache.strip().splitlines()) == 3
        assert run(args, tmp_path) == 0
        assert (tmp_path / "spectrum_cos.csv").read_bytes() == first

    def test_env_cache_override(self, tmp_path, monkeypatch):
        monkeypatch.setenv("NLEIG_CACHE", str(tmp_path / "custom.jsonl"))
        assert run(["spectrum", "--model", "cos", "--n", "1..2",
                    "--tol", "1e-8"], tmp_path) == 0
        assert (tmp_path / "custom.jsonl").exists()

    def test_corrupt_cache_line_skipped(self, tmp_path):
        args = ["spectrum", "--model", "cos", "--n", "1..2", "--tol", "1e-8"]
        assert run(args, tmp_path) == 0
        path = tmp_path / ".nleig-cache.jsonl"
        path.write_text("not json at all\n" + path.read_text())
        with pytest.warns(RuntimeWarning):
            assert run(args, tmp_path) == 0

    def test_bad_model_is_config_error(self, tmp_path):
        assert run(["spectrum", "--model", "nope", "--n", "1"], tmp_path) == 2


class TestSeparatrixCommand:
    def test_scaled_csv_with_svg(self, tmp_path):
        rc = run(["separatrix", "--model", "bessel:0", "--n", "2",
                  "--coords", "scaled", "--svg"], tmp_path)
        assert rc == 0
        csv = tmp_path / "separatrix_bessel_0_n2_scaled.csv"
        svg = tmp_path / "separatrix_bessel_0_n2_scaled.svg"
        assert csv.exists() and svg.exists()
        head = csv.read_text().splitlines()[0]
        assert "model=bessel:0" in head and "coords=scaled" in head
        assert "<svg" in svg.read_text()

    def test_rgamma_scaled_settles_to_reciprocal(self, tmp_path):
        rc = run(["separatrix", "--model", "rgamma", "--n", "3",
                  "--coords", "scaled"], tmp_path)
        assert rc == 0
        from nleig.svgplot import read_curve_csv
        _, cols, ts, zs = read_curve_csv(
            tmp_path / "separatrix_rgamma_n3_scaled.csv")
        assert cols == ["t", "z"]
        # forbidden region hugs 1/t
        pairs = [(t, z) for t, z in zip(ts, zs) if t > 1.5]
        assert pairs
        for t, z in pairs[:: max(1, len(pairs) // 7)]:
            assert abs(z - 1.0 / t) < 0.02


class TestLimitCurveCommand:
    def test_turning_point_row_present(self, tmp_path):
        rc = run(["limit-curve", "--alpha", "-0.5", "--points", "40"],
                 tmp_path)
        assert rc == 0
        body = (tmp_path / "limit_alpha-0.5.csv").read_text()
        rows = [r for r in body.splitlines() if r and not r.startswith("#")
                and not r.startswith("t,")]
        one = [r for r in rows if float(r.split(",")[0]) == 1.0]
        assert len(one) == 1
        assert float(one[0].split(",")[1]) == pytest.approx(1.0, abs=1e-12)

    def test_alpha_required_in_range(self, tmp_path):
        assert run(["limit-curve", "--alpha", "-1.5"], tmp_path) == 2


class TestWalkCommand:
    def test_table_ends_at_minus_21_over_1024(self, tmp_path):
        rc = run(["walk-coeffs", "--p-max", "5"], tmp_path)
        assert rc == 0
        rows = (tmp_path / "walk_coeffs_p5.csv").read_text().splitlines()
        assert rows[0] == "p,numerator,denominator"
        assert len(rows) == 7
        assert rows[-1] == "5,-21,1024"


class TestPlotCommand:
    def test_deterministic_svg(self, tmp_path):
        run(["limit-curve", "--alpha", "0", "--points", "30"], tmp_path)
        csv = str(tmp_path / "limit_alpha0.csv")
        assert run(["plot", csv, "--out", str(tmp_path / "a.svg")],
                   tmp_path) == 0
        assert run(["plot", csv, "--out", str(tmp_path / "b.svg")],
                   tmp_path) == 0
        assert (tmp_path / "a.svg").read_bytes() == \
            (tmp_path / "b.svg").read_bytes()

    def test_missing_csv_is_config_error(self, tmp_path):
        assert run(["plot", "missing.csv"], tmp_path) == 2


class TestVerifyCommand:
    def test_walk_suite_passes(self, tmp_path, capsys):
        assert run(["verify", "walk"], tmp_path) == 0
        out = capsys.readouterr().out
        assert "PASS" in out
        assert (tmp_path / "verify_walk.json").exists()

    def test_limits_suite_passes(self, tmp_path):
        assert run(["verify", "limits"], tmp_path) == 0

    def test_unknown_suite(self, tmp_path):
        assert run(["verify", "nonsense"], tmp_path) == 2


class TestConfigFile:
    def test_flags_override_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("model = cos\nn = 1..2\ntol = 1e-8\n")
        rc = run(["spectrum", "--config", str(cfg), "--n", "1..3"], tmp_path)
        assert rc == 0
        rows = (tmp_path / "spectrum_cos.csv").read_text().splitlines()
        assert len(rows) == 4  # flag range won over the file's

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("model = cos\nwibble = 3\n")
        assert run(["spectrum", "--config", str(cfg), "--n", "1"],
                   tmp_path) == 2

    def test_comments_and_blanks_ok(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# a comment\n\nmodel = cos # trailing\nn = 1..1\n"
                       "tol = 1e-8\n")
        assert run(["spectrum", "--config", str(cfg)], tmp_path) == 0


class TestSelftest:
    def test_specfun_selftest(self, tmp_path, capsys):
        assert run(["specfun-selftest"], tmp_path) == 0
        out = capsys.readouterr().out
        assert "PASS" in out and "FAIL" not in out
