import numpy as np
import pytest
from click.testing import CliRunner

from shellspectra.errors import InvalidParameterError
from shellspectra.harness import (EXPERIMENTS, default_config, fit_rate, load_config, read_table,
                                  run, write_table)
from shellspectra.harness.cli import main
from shellspectra.harness.tables import column


def _toml(tmp_path, text, name="cfg.toml"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_defaults_exist_for_every_experiment():
    for name in EXPERIMENTS:
        cfg = default_config(name)
        assert cfg.experiment == name and not cfg.slow
        assert default_config(name, slow=True).slow


def test_load_config_overrides(tmp_path):
    path = _toml(tmp_path, 'experiment = "validate-1d"\neps_values = [0.1, 0.05]\np = 4\n')
    cfg = load_config(path, "validate-1d")
    assert cfg.p == 4 and cfg.eps_values == (0.1, 0.05)
    assert cfg.eps == default_config("validate-1d").eps


def test_load_config_rejects_unknown_keys(tmp_path):
    path = _toml(tmp_path, 'experiment = "calibrate"\nbogus = 1\n')
    with pytest.raises(InvalidParameterError, match="bogus"):
        load_config(path)


def test_load_config_rejects_mismatched_experiment(tmp_path):
    path = _toml(tmp_path, 'experiment = "calibrate"\n')
    with pytest.raises(InvalidParameterError):
        load_config(path, "crossing")


def test_shipped_configs_load():
    import pathlib
    root = pathlib.Path(__file__).resolve().parents[1] / "configs"
    for name in EXPERIMENTS:
        cfg = load_config(root / f"{name}.toml", name)
        assert cfg.experiment == name


def test_bad_eps_rejected():
    with pytest.raises(InvalidParameterError):
        default_config("calibrate").with_(eps=2.0)


def test_fit_rate_recovers_exponent_and_base():
    x = np.array([2.0, 4, 8, 16, 32])
    assert fit_rate(x, 3 * x ** -1.9).exponent == pytest.approx(-1.9)
    p = np.arange(3, 9)
    assert fit_rate(p, 5 * 2.0 ** -p, kind="loglinear").base == pytest.approx(2.0)
    assert fit_rate(p, 5 * 2.0 ** -p, kind="loglinear", tail=4).abscissae == tuple(p[-4:])


def test_fit_rate_needs_four_points():
    with pytest.raises(InvalidParameterError):
        fit_rate([1, 2, 3], [1, 2, 3])
    with pytest.raises(InvalidParameterError):
        fit_rate([1, 2, 3, 4], [1, 0, 3, 4])


def test_csv_roundtrip_is_exact(tmp_path):
    rng = np.random.default_rng(3)
    x = np.arange(1, 8, dtype=float)
    y = np.exp(rng.normal(size=7)) * x ** -2
    write_table(tmp_path / "t.csv", ["x", "y", "tag"], [[a, b, "r"] for a, b in zip(x, y)])
    text = (tmp_path / "t.csv").read_text().splitlines()
    assert text[0] == "x,y,tag" and "e+00" in text[1]
    tab = read_table(tmp_path / "t.csv")
    assert np.array_equal(column(tab, "y"), y)
    assert fit_rate(column(tab, "x"), column(tab, "y")) == fit_rate(x, y)


TINY_CALIBRATE = """experiment = "calibrate"
t_values = [0.1, 0.01]
p_values = [2, 3, 4, 5]
p_overkill = 6
p = 4
k_max = 8
eps = 0.2
"""


def test_cli_calibrate_smoke(tmp_path):
    cfg = _toml(tmp_path, TINY_CALIBRATE)
    out = tmp_path / "out"
    res = CliRunner().invoke(main, ["calibrate", "--config", str(cfg), "--out", str(out)])
    assert res.exit_code == 0, res.output
    assert "locking" in res.output
    header, rows = read_table(out / "calibration.csv")
    assert header[:3] == ["t", "k", "p"] and len(rows) == 10
    assert (out / "summary.csv").exists() and (out / "index_set.txt").exists()


def test_cli_reports_errors(tmp_path):
    cfg = _toml(tmp_path, 'experiment = "calibrate"\neps = 5.0\n')
    res = CliRunner().invoke(main, ["calibrate", "--config", str(cfg)])
    assert res.exit_code == 1 and "error" in res.output


def test_calibration_is_deterministic(tmp_path):
    cfg = load_config(_toml(tmp_path, TINY_CALIBRATE))
    a, b = run(cfg), run(cfg)
    assert a.tables["calibration"] == b.tables["calibration"]
    assert a.summary == b.summary


def _tiny_general(solver, eps=0.1):
    return default_config("general-2d").with_(p=2, nx=2, ny=4, eps=eps, grid_x=5, grid_y=6, S=1,
                                              solver=solver)


@pytest.mark.parametrize("solver", ["galerkin", "collocation"])
def test_general2d_variance_fields_nonnegative(solver):
    res = run(_tiny_general(solver))
    for key, value in res.summary.items():
        if key.startswith("min_variance"):
            assert value >= -1e-12, key
    header, rows = res.tables["fields_naghdi"]
    assert max(r[header.index("var_w")] for r in rows) > 0
    assert res.summary["model_difference"] > 0


@pytest.mark.parametrize("solver", ["galerkin", "collocation"])
def test_general2d_zero_variance(solver):
    # eta_1 = 1/4 < eps leaves only the zero index: a deterministic problem
    res = run(_tiny_general(solver, eps=0.3))
    header, rows = res.tables["fields_naghdi"]
    var_cols = [i for i, h in enumerate(header) if h.startswith("var_")]
    assert all(abs(r[i]) <= 1e-14 for r in rows for i in var_cols)
    assert res.summary["model_difference"] > 0
    assert len(rows) == 30 and header[2] == "mean_u"
