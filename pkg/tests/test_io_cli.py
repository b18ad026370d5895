import json

import numpy as np
import pytest

from copmmd import cli
from copmmd.errors import ConfigError, DataError, NumericalInconsistencyError
from copmmd.io import (HOUSING_SHA256, ResultDocument, RunConfig, housing_path,
                       housing_regression_eval, load_csv, load_housing, train_test_split, write_csv)


def _write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_load_small_csv(tmp_path):
    X = load_csv(_write(tmp_path, "a,b\n1,2\n3,4.5\n-1e3,0\n"))
    assert (X.m, X.d, X.column_names) == (3, 2, ["a", "b"])
    assert X.values[2, 0] == -1000.0


def test_load_without_header_and_selectors(tmp_path):
    p = _write(tmp_path, "1,2,3\n4,5,6\n\n7,8,9\n")
    X = load_csv(p, has_header=False, columns=[2, 0])
    assert X.column_names == ["x3", "x1"]
    np.testing.assert_array_equal(X.values, [[3, 1], [6, 4], [9, 7]])
    Y = load_csv(_write(tmp_path, "a,b,c\n1,2,3\n4,5,6\n", "e.csv"), columns="c,a")
    assert Y.column_names == ["c", "a"]


def test_bad_cell_names_row_and_column(tmp_path):
    p = _write(tmp_path, "a,b\n1,2\n3,4\n5,6\nabc,7\n")
    with pytest.raises(DataError, match=r"row 5, column 'a'"):
        load_csv(p)


@pytest.mark.parametrize("text", ["a,b\n1,2\n3,nan\n", "a,b\n1,2\ninf,3\n", "a,b\n1,2\n",
                                  "a,b\n1,2\n3\n"])
def test_rejected_inputs(tmp_path, text):
    with pytest.raises(DataError):
        load_csv(_write(tmp_path, text))


def test_unknown_column_and_missing_file(tmp_path):
    with pytest.raises(DataError):
        load_csv(_write(tmp_path, "a,b\n1,2\n3,4\n"), columns=["z"])
    with pytest.raises(DataError):
        load_csv(tmp_path / "missing.csv")


def test_csv_round_trip_bitwise(tmp_path):
    g = np.random.default_rng(0)
    X = np.concatenate([g.normal(size=(50, 3)) * 10.0 ** g.integers(-300, 300, size=(50, 3)),
                        [[5e-324, -0.0, 1.7976931348623157e308]]])
    write_csv(X, tmp_path / "r.csv")
    assert load_csv(tmp_path / "r.csv").values.tobytes() == X.tobytes()


def test_housing_vendored():
    import hashlib

    assert hashlib.sha256(housing_path().read_bytes()).hexdigest() == HOUSING_SHA256
    X = load_housing()
    assert (X.m, X.d) == (506, 14)
    assert X.column_names[12] == "LSTAT" and X.column_names[13] == "MEDV"


def test_regression_exact_line():
    x = np.linspace(-3, 5, 40)
    X = np.column_stack([x, 2 * x + 1])
    tr, te = train_test_split(40, 25, 1)
    assert housing_regression_eval(X, 1, 0, tr, te) <= 1e-18 + 1e-28


def test_regression_independent_feature():
    g = np.random.default_rng(2)
    X = g.normal(size=(4000, 2))
    tr, te = train_test_split(4000, 2000, 3)
    err = housing_regression_eval(X, 1, 0, tr, te)
    assert err == pytest.approx(np.mean((X[te, 1] - X[te, 1].mean()) ** 2), rel=0.01)


def test_regression_constant_feature():
    X = np.column_stack([np.ones(10), np.arange(10.0)])
    with pytest.raises(DataError):
        housing_regression_eval(X, 1, 0, np.arange(5), np.arange(5, 10))


def test_split():
    tr, te = train_test_split(506, 300, 9)
    assert tr.size == 300 and te.size == 206
    assert np.union1d(tr, te).tolist() == list(range(506))
    assert train_test_split(506, 300, 9)[0].tobytes() == tr.tobytes()
    with pytest.raises(ConfigError):
        train_test_split(10, 10, 0)


def test_config_round_trip(tmp_path):
    cfg = RunConfig(sigma=0.123456789012345678, seed=2 ** 63 + 5, columns=["a", "b"], jitter=0.25)
    cfg.save(tmp_path / "c.json")
    assert RunConfig.load(tmp_path / "c.json") == cfg
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"nope": 1})
    with pytest.raises(ConfigError):
        RunConfig(alpha=1.5).validate()


def test_result_document_round_trip():
    vals = [0.1, 1 / 3, 2.0 ** -1074, 1e308]
    doc = ResultDocument("estimate", RunConfig().to_dict(), {"v": vals, "a": np.arange(3)}, 0.5)
    back = ResultDocument.loads(doc.dumps())
    assert back.payload["v"] == vals
    with pytest.raises(DataError):
        ResultDocument("x", {}, {"v": float("nan")}).dumps()


@pytest.fixture
def small_csv(tmp_path):
    g = np.random.default_rng(1)
    x = g.normal(size=60)
    X = np.column_stack([x, x ** 3 + 0.1 * g.normal(size=60), g.normal(size=60)])
    write_csv(X, tmp_path / "s.csv")
    return tmp_path / "s.csv"


@pytest.mark.parametrize("cmd,extra", [
    ("estimate", []),
    ("test", ["--permutations", "19"]),
    ("select", ["--target", "x1", "--h", "2"]),
    ("embed", ["--dims", "2"]),
])
def test_cli_commands_are_deterministic(tmp_path, small_csv, cmd, extra):
    payloads = []
    for run in range(2):
        out = tmp_path / f"{cmd}{run}.json"
        code = cli.main([cmd, "--input", str(small_csv), "--seed", "4", "--output", str(out)] + extra)
        assert code == 0
        payloads.append(json.dumps(json.loads(out.read_text())["payload"], sort_keys=True))
    assert payloads[0] == payloads[1]


def test_cli_select_names(tmp_path, small_csv):
    out = tmp_path / "o.json"
    assert cli.main(["select", "--input", str(small_csv), "--target", "0", "--h", "1",
                     "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["payload"]["selected_names"] == ["x2"]
    assert doc["schema_version"] == 1


def test_cli_estimate_single_column_warns(tmp_path, small_csv, caplog):
    out = tmp_path / "o.json"
    assert cli.main(["estimate", "--input", str(small_csv), "--columns", "x3",
                     "--estimator", "u_squared", "--output", str(out)]) == 0
    est = json.loads(out.read_text())["payload"]["estimate"]
    assert est["warnings"] and abs(est["value"]) < 0.1


def test_cli_exit_codes(tmp_path, small_csv, monkeypatch, capsys):
    assert cli.main(["estimate", "--input", str(small_csv), "--sigma", "-1"]) == 2
    assert cli.main(["bench", "--scenario", "nope"]) == 2
    assert "synthetic61" in capsys.readouterr().err
    bad = _write(tmp_path, "a,b\n1,x\n2,3\n", "bad.csv")
    assert cli.main(["estimate", "--input", str(bad)]) == 3

    def boom(cfg):
        raise NumericalInconsistencyError("negative radicand")

    monkeypatch.setitem(cli.HANDLERS, "estimate", boom)
    assert cli.main(["estimate", "--input", str(small_csv)]) == 4


def test_cli_config_file(tmp_path, small_csv):
    cfg = RunConfig(input=str(small_csv), estimator="semi_analytic_u_squared", sigma=0.5)
    cfg.save(tmp_path / "c.json")
    out = tmp_path / "o.json"
    assert cli.main(["estimate", "--config", str(tmp_path / "c.json"), "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["config"]["sigma"] == 0.5
    assert doc["payload"]["estimate"]["estimator"] == "semi_analytic_u_squared"


def test_cli_bench_synthetic61_with_plot_series(tmp_path):
    out = tmp_path / "b.json"
    assert cli.main(["bench", "--scenario", "synthetic61", "--seed", "7", "--plot-dir",
                     str(tmp_path / "plots"), "--output", str(out)]) == 0
    bars = json.loads(out.read_text())["payload"]["runs"][0]["bars"]
    assert set(bars) == {"raw_mmd_Y_X1", "raw_mmd_Y_X2", "copula_Y_X1", "copula_Y_X2"}
    assert bars["copula_Y_X1"] > bars["copula_Y_X2"]
    assert (tmp_path / "plots" / "synthetic61_bars.csv").read_text().startswith("seed,")


def test_cli_bench_housing_plot_series(tmp_path):
    out = tmp_path / "h.json"
    assert cli.main(["bench", "--scenario", "housing", "--plot-dir", str(tmp_path / "p"),
                     "--output", str(out)]) == 0
    run = json.loads(out.read_text())["payload"]["runs"][0]
    assert len(run["regression_mse"]) == 13
    assert len(run["embedding_copula"]["coordinates"]) == 14
    for name in ("housing_regression_mse.csv", "housing_embedding_copula.csv",
                 "housing_embedding_raw.csv"):
        assert (tmp_path / "p" / name).exists()
