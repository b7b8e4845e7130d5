import json
from fractions import Fraction

import pytest
from hypothesis import given

from curvlie.catalog import g2_metric
from curvlie.cli import InputError, RunConfig, format_scalar, main, parse_scalar
from curvlie.exact import QSqrt3, SqrtExt

from strategies import qsqrt3, rationals


def run_cli(capsysbinary, *argv):
    code = main(list(argv))
    out = capsysbinary.readouterr().out
    return code, out


def metric_file(tmp_path, g, lam=None, name="g.json"):
    data = {"metric": [[json.loads(json.dumps(_to_json(x))) for x in row] for row in g]}
    if lam is not None:
        data["lambda"] = lam
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def _to_json(x):
    if isinstance(x, QSqrt3):
        return {"a": str(x.a), "b": str(x.b)}
    return str(Fraction(x))


def test_solve_e1_2e1(capsysbinary):
    code, out = run_cli(capsysbinary, "solve", "(E1,rE1)", "--r", "2", "--det-sign", "+1")
    assert code == 0
    rep = json.loads(out)
    assert rep["schema"] == "curvlie.report/1"
    (item,) = rep["items"]
    assert item["status"] == "solved" and item["residuals"] == []
    (sol,) = item["solutions"]
    assert sol["lambda"] == "-2"
    assert sol["metric"][0][0] == "-1" and sol["metric"][1][1] == "1"


def test_solve_is_byte_identical(capsysbinary):
    a = run_cli(capsysbinary, "solve", "(E3,2E3)")[1]
    b = run_cli(capsysbinary, "solve", "(E3,2E3)")[1]
    assert a == b
    assert b"timing" not in a


def test_solve_text_format(capsysbinary):
    code, out = run_cli(capsysbinary, "solve", "(E1,2E1)", "--format", "text", "--timings")
    assert code == 0
    text = out.decode()
    assert "solution lambda=-2" in text and "timing:" in text


def test_solve_budget_gives_exit_1(capsysbinary):
    code, out = run_cli(capsysbinary, "solve", "(N,N)", "--budget-pairs", "3")
    assert code == 1
    assert json.loads(out)["items"][0]["status"] == "partial"


def test_missing_r_is_input_error(capsysbinary):
    assert run_cli(capsysbinary, "solve", "(E1,rE1)")[0] == 2


@pytest.mark.parametrize("argv", [
    ["solve", "(E9,E1)"],
    ["solve", "(E1,2E1)", "--det-sign", "0"],
    ["solve", "(E1,2E1)", "--jobs", "0"],
    ["nonsense"],
    ["verify"],
    ["groebner", "x +* y"],
])
def test_bad_input_exits_2(capsysbinary, argv):
    assert run_cli(capsysbinary, *argv)[0] == 2


def test_invariant_space(capsysbinary):
    code, out = run_cli(capsysbinary, "invariant-space", "(N,N)", "(E1,0)")
    assert code == 0
    dims = [i["dimension"] for i in json.loads(out)["items"]]
    assert dims == [7, 11]


def test_verify_catalog(capsysbinary):
    code, out = run_cli(capsysbinary, "verify", "--catalog")
    assert code == 0
    assert all(i["verified"] for i in json.loads(out)["items"])


def test_verify_metric_file(capsysbinary, tmp_path):
    path = metric_file(tmp_path, g2_metric(), lam="-10/9*sqrt3")
    code, out = run_cli(capsysbinary, "verify", "--metric", path)
    assert code == 0
    (item,) = json.loads(out)["items"]
    assert item["verified"] and item["index"] == 2 and item["det"] == "1"


def test_verify_wrong_lambda_exits_1(capsysbinary, tmp_path):
    path = metric_file(tmp_path, g2_metric())
    assert run_cli(capsysbinary, "verify", "--metric", path, "--lambda", "-2")[0] == 1


def test_verify_rejects_asymmetric(capsysbinary, tmp_path):
    g = [[Fraction(int(i == j)) for j in range(6)] for i in range(6)]
    g[0][1] = Fraction(1)
    assert run_cli(capsysbinary, "verify", "--metric", metric_file(tmp_path, g), "--lambda", "1")[0] == 2


def test_curvature_nabla(capsysbinary, tmp_path):
    path = metric_file(tmp_path, g2_metric())
    code, out = run_cli(capsysbinary, "curvature", "--metric", path, "--nabla")
    assert code == 0
    (item,) = json.loads(out)["items"]
    assert item["nabla_riemann_zero"] is False


def test_catalog_subcommand(capsysbinary, tmp_path):
    dest = tmp_path / "cat.json"
    code, out = run_cli(capsysbinary, "catalog", "--output", str(dest))
    assert code == 0 and out == b""
    items = json.loads(dest.read_text())["items"]
    assert any(i["name"] == "g2" for i in items)


def test_groebner_subcommand(capsysbinary):
    code, out = run_cli(capsysbinary, "groebner", "x^2 - 1", "x - y", "--vars", "x,y", "--certificate")
    assert code == 0
    item = json.loads(out)["items"][0]
    assert item["basis"] == ["x - y", "y^2 - 1"]


def test_version(capsysbinary):
    assert run_cli(capsysbinary, "--version")[0] == 0


@pytest.mark.parametrize("text,value", [
    ("3/4", Fraction(3, 4)),
    (5, Fraction(5)),
    ({"a": "1", "b": "-1/3"}, QSqrt3(1, Fraction(-1, 3))),
    ("1/2 - 2/3*sqrt3", QSqrt3(Fraction(1, 2), Fraction(-2, 3))),
    ({"a": "0", "b": "1", "sqrt": "2"}, SqrtExt(0, 1, 2)),
])
def test_parse_scalar(text, value):
    assert parse_scalar(text) == value


@pytest.mark.parametrize("bad", [0.5, True, None, "x", [1]])
def test_parse_scalar_rejects(bad):
    with pytest.raises(InputError):
        parse_scalar(bad)


@given(rationals)
def test_rational_text_roundtrip(x):
    assert parse_scalar(format_scalar(x)) == x


@given(qsqrt3)
def test_qsqrt3_text_roundtrip(x):
    assert parse_scalar(format_scalar(x)) == x


def test_run_config_validation():
    with pytest.raises(InputError):
        RunConfig("solve", det_sign=2)
    with pytest.raises(InputError):
        RunConfig("solve", max_pairs=0)
