"""End-to-end command-line checks, run in process."""

import json

import pytest

from statres.cli import main, parse_grid, parse_psf
from statres.exceptions import ParameterError

pytestmark = pytest.mark.filterwarnings(
    "ignore::statres.exceptions.MassTruncationWarning")


@pytest.fixture(autouse=True)
def clean_seed_env(monkeypatch):
    monkeypatch.delenv("STATRES_SEED", raising=False)


def parse_csv(text):
    """Split CLI CSV output into (meta dict, header, row dicts)."""
    meta, header, rows = {}, None, []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition(" = ")
            meta[key] = value
            continue
        cells = line.split(",")
        if header is None:
            header = cells
        else:
            rows.append(dict(zip(header, cells)))
    return meta, header, rows


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_grid_forms():
    assert parse_grid("1,2,3") == [1.0, 2.0, 3.0]
    assert parse_grid("0.1:0.3:0.1") == pytest.approx([0.1, 0.2, 0.3])
    for bad in ("1:2", "a,b", "0.3:0.1:0.1", "1:2:-1"):
        with pytest.raises(ParameterError):
            parse_grid(bad)


def test_parse_psf_forms():
    assert parse_psf("gaussian:0.1").sigma == 0.1
    assert parse_psf("airy:0.4").fwhm == 0.4
    for bad in ("gaussian", "box:0.1", "gaussian:wide"):
        with pytest.raises(ParameterError):
            parse_psf(bad)


def test_resolve_default_asymptotic(capsys):
    code, out, err = run(capsys, ["resolve"])
    assert code == 0 and err == ""
    meta, header, rows = parse_csv(out)
    assert meta["command"] == "resolve"
    assert header[0] == "model"
    assert rows[0]["model"] == "poisson"
    assert rows[0]["method"] == "asymptotic"
    assert rows[0]["substitution"] == ""
    assert float(rows[0]["d"]) == pytest.approx(0.15293, rel=1e-4)


def test_resolve_hg_ignores_background(capsys):
    _, out_clean, _ = run(capsys, ["resolve", "--model", "hg",
                                   "--method", "exact"])
    _, out_noisy, _ = run(capsys, ["resolve", "--model", "hg",
                                   "--method", "exact", "--gamma", "5"])
    d_clean = parse_csv(out_clean)[2][0]["d"]
    d_noisy = parse_csv(out_noisy)[2][0]["d"]
    assert d_clean == d_noisy


def test_resolve_poisson_exact_substitutes_vsg(capsys):
    code, out, _ = run(capsys, ["resolve", "--model", "poisson",
                                "--method", "exact"])
    assert code == 0
    meta, _, rows = parse_csv(out)
    assert rows[0]["substitution"] == "vsg-solver"
    assert meta["substitution"] == "vsg-solver"
    assert rows[0]["model"] == "poisson"


def test_resolve_bad_alpha_exits_2(capsys):
    code, out, err = run(capsys, ["resolve", "--alpha", "0.7"])
    assert code == 2
    assert out == ""
    assert "alpha must lie in (0, 1/2)" in err


def test_resolve_flat_kernel_exits_3(capsys):
    code, _, err = run(capsys, ["resolve", "--model", "vsg",
                                "--psf", "gaussian:10", "--method", "mc",
                                "--reps", "200"])
    assert code == 3
    assert "error:" in err


def test_resolve_mc_is_deterministic(capsys):
    argv = ["resolve", "--model", "poisson", "--method", "mc",
            "--reps", "500"]
    _, first, _ = run(capsys, argv)
    _, second, _ = run(capsys, argv)
    assert first == second
    rows = parse_csv(first)[2]
    assert rows[0]["method"] == "monte_carlo"
    assert int(rows[0]["reps"]) == 500


def test_resolve_json_round_trip(capsys):
    _, csv_out, _ = run(capsys, ["resolve"])
    _, json_out, _ = run(capsys, ["resolve", "--format", "json"])
    payload = json.loads(json_out)
    assert payload["meta"]["command"] == "resolve"
    assert payload["meta"]["version"]
    d_csv = float(parse_csv(csv_out)[2][0]["d"])
    assert payload["records"][0]["d"] == d_csv


def test_resolve_output_file(capsys, tmp_path):
    target = tmp_path / "out.csv"
    code, out, _ = run(capsys, ["resolve", "--output", str(target)])
    assert code == 0
    assert out == ""
    meta, _, rows = parse_csv(target.read_text())
    assert meta["command"] == "resolve"
    assert float(rows[0]["d"]) > 0.0


def test_config_file_precedence(capsys, tmp_path):
    config = tmp_path / "statres.conf"
    config.write_text("# sweep defaults\nt = 30\nalpha = 0.05\n")
    _, out, _ = run(capsys, ["resolve", "--config", str(config)])
    meta, _, _ = parse_csv(out)
    assert meta["t"] == "30.0"
    assert meta["alpha"] == "0.05"
    _, out, _ = run(capsys, ["resolve", "--config", str(config),
                             "--t", "20"])
    meta, _, _ = parse_csv(out)
    assert meta["t"] == "20.0"
    assert meta["alpha"] == "0.05"


def test_config_file_errors(capsys, tmp_path):
    missing = tmp_path / "none.conf"
    code, _, err = run(capsys, ["resolve", "--config", str(missing)])
    assert code == 2 and "cannot read config" in err
    bad = tmp_path / "bad.conf"
    bad.write_text("t 30\n")
    code, _, err = run(capsys, ["resolve", "--config", str(bad)])
    assert code == 2 and "expected key = value" in err


def test_seed_environment_fallback(capsys, monkeypatch):
    monkeypatch.setenv("STATRES_SEED", "7")
    _, out, _ = run(capsys, ["resolve"])
    assert parse_csv(out)[0]["seed"] == "7"
    _, out, _ = run(capsys, ["resolve", "--seed", "3"])
    assert parse_csv(out)[0]["seed"] == "3"


def test_power_vsg_at_the_exact_critical_separation(capsys):
    # the exact solver's critical separation must give power 0.9 back
    _, out, _ = run(capsys, ["resolve", "--model", "vsg",
                             "--method", "exact"])
    d = parse_csv(out)[2][0]["d"]
    code, out, _ = run(capsys, ["power", "--model", "vsg", "--d", d])
    assert code == 0
    meta, header, rows = parse_csv(out)
    assert header == ["model", "method", "threshold", "level", "power",
                      "mc_se", "reps", "seed"]
    assert rows[0]["method"] == "exact"
    assert float(rows[0]["power"]) == pytest.approx(0.9, abs=1e-9)


def test_power_requires_d(capsys):
    code, _, err = run(capsys, ["power", "--model", "vsg"])
    assert code == 2 and "requires --d" in err


def test_power_poisson_defaults_to_clt(capsys):
    code, out, _ = run(capsys, ["power", "--d", "0.15"])
    assert code == 0
    rows = parse_csv(out)[2]
    assert rows[0]["model"] == "poisson"
    assert rows[0]["method"] == "clt"
    assert 0.1 < float(rows[0]["power"]) <= 1.0


def test_power_clt_rejects_gaussian_models(capsys):
    code, _, err = run(capsys, ["power", "--model", "hg", "--d", "0.15",
                                "--method", "clt"])
    assert code == 2 and "poisson model only" in err


def test_power_mc_with_offset(capsys):
    code, out, _ = run(capsys, ["power", "--model", "hg", "--d", "0.15",
                                "--method", "mc", "--reps", "2000",
                                "--offset-lambda", "0.02"])
    assert code == 0
    rows = parse_csv(out)[2]
    assert int(rows[0]["reps"]) == 2000
    assert 0.0 < float(rows[0]["mc_se"]) < 0.02


def test_tables_text_is_stable_and_matches_references(capsys):
    _, first, _ = run(capsys, ["tables"])
    _, second, _ = run(capsys, ["tables"])
    assert first == second
    assert "3.08" in first and "2.29" in first
    assert "2.18" in first and "1.62" in first
    assert "6.81" in first and "1.33" in first
    code, out, _ = run(capsys, ["tables", "--which", "2"])
    assert code == 0
    assert "0.00614" in out and "3.56e-05" in out


def test_tables_csv_columns_follow_the_selection(capsys):
    _, out, _ = run(capsys, ["tables", "--which", "1", "--format", "csv"])
    meta, header, rows = parse_csv(out)
    assert header == ["table", "alpha", "hg", "poisson_vsg"]
    assert float(rows[0]["hg"]) == pytest.approx(3.08, abs=5e-3)
    _, out, _ = run(capsys, ["tables", "--which", "2", "--format", "csv"])
    _, header, rows = parse_csv(out)
    assert header == ["table", "t", "abbe", "rayleigh"]
    assert float(rows[0]["abbe"]) == pytest.approx(0.0681, rel=5e-3)


def test_simulate_formula_sweep(capsys):
    code, out, _ = run(capsys, ["simulate", "--method", "formula",
                                "--grid", "0.1,0.15,0.2,0.3",
                                "--models", "poisson,hg"])
    assert code == 0
    meta, header, rows = parse_csv(out)
    assert header[0] == "model"
    assert len(rows) == 8
    assert float(meta["fit_poisson_slope"]) == pytest.approx(1.0,
                                                             abs=1e-12)
    assert float(meta["fit_hg_slope"]) == pytest.approx(1.25, abs=1e-12)
    assert float(meta["fit_hg_residual_rms"]) < 1e-12


def test_simulate_mc_sweep_small(capsys):
    argv = ["simulate", "--grid", "0.18,0.2,0.22", "--models", "vsg",
            "--reps", "300", "--seed", "1"]
    code, first, _ = run(capsys, argv)
    assert code == 0
    _, second, _ = run(capsys, argv)
    assert first == second
    meta, _, rows = parse_csv(first)
    assert len(rows) == 3
    assert {r["model"] for r in rows} == {"vsg"}
    assert float(meta["fit_vsg_slope"]) > 0.0


def test_scan_lambda_symmetric(capsys):
    code, out, _ = run(capsys, ["scan", "--kind", "lambda", "--model",
                                "vsg", "--d", "0.15",
                                "--grid=-0.04:0.04:0.02"])
    assert code == 0
    meta, _, rows = parse_csv(out)
    assert abs(float(meta["lambda_star"])) < 1e-12
    powers = {round(float(r["offset_lambda"]), 6): float(r["power"])
              for r in rows}
    assert powers[0.02] == pytest.approx(powers[-0.02], rel=1e-9)
    assert all(r["feasible"] == "true" for r in rows)


def test_scan_weight_ratio(capsys):
    code, out, _ = run(capsys, ["scan", "--kind", "weight",
                                "--grid", "0.2,0.5,0.8"])
    assert code == 0
    rows = parse_csv(out)[2]
    d = {float(r["weight_q"]): float(r["d"]) for r in rows}
    assert d[0.2] / d[0.5] == pytest.approx(1.25, rel=1e-9)
    assert d[0.8] == pytest.approx(d[0.2], rel=1e-12)


def test_check_clt_passes(capsys):
    code, out, _ = run(capsys, ["check", "--clt", "--t", "100",
                                "--n", "1000", "--reps", "10000"])
    assert code == 0
    _, _, rows = parse_csv(out)
    assert {r["side"] for r in rows} == {"null", "alternative"}
    for row in rows:
        assert row["passed"] == "true"
        assert float(row["ks_statistic"]) <= 0.03


def test_check_hg_normality_passes(capsys):
    code, out, _ = run(capsys, ["check", "--hg-normality",
                                "--reps", "5000"])
    assert code == 0
    assert all(r["passed"] == "true" for r in parse_csv(out)[2])


def test_check_riemann_gaps_shrink(capsys):
    code, out, _ = run(capsys, ["check", "--riemann",
                                "--psf", "gaussian:0.1"])
    assert code == 0
    meta, _, rows = parse_csv(out)
    assert float(meta["limit"]) == pytest.approx(19996.123063198816,
                                                 rel=1e-12)
    gaps = [float(r["gap"]) for r in rows]
    assert gaps[0] > gaps[1] > gaps[2]
    assert all(r["passed"] == "true" for r in rows)


def test_check_requires_a_mode(capsys):
    code, _, err = run(capsys, ["check"])
    assert code == 2 and "requires one of" in err


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["--version"])
    assert excinfo.value.code == 0
    assert capsys.readouterr().out.startswith("statres ")
