import json
from importlib import resources

import jsonschema
import numpy as np
import pytest
from referencing import Registry, Resource
from referencing.jsonschema import DRAFT202012

from symcorr.cli import main
from symcorr.dgp import DgpSpec, simulate
from symcorr.io import read_series


def schema(name):
    return json.loads(resources.files("symcorr").joinpath("schemas", name).read_text())


def validator(name):
    base = resources.files("symcorr").joinpath("schemas")
    store = {p.name: json.loads(p.read_text()) for p in base.iterdir() if p.name.endswith(".json")}
    registry = Registry().with_resources(
        (key, Resource.from_contents(doc, default_specification=DRAFT202012)) for key, doc in store.items())
    return jsonschema.Draft202012Validator(store[name], registry=registry)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write_lines(path, values):
    path.write_text("".join(f"{float(v)!r}\n" for v in values))
    return path


def test_sci_monotone(tmp_path, capsys):
    f = write_lines(tmp_path / "ramp.txt", [float(i) for i in range(1, 11)])
    code, out, _ = run(capsys, "sci", f)
    rep = json.loads(out)
    assert code == 0
    assert rep["sci"] == 1.0 and rep["pe2"] == 0.0 and rep["n_windows"] == 8
    validator("sci_report.schema.json").validate(rep)


def test_sci_iid_warns_near_degenerate(tmp_path, capsys):
    rng = np.random.default_rng(8)
    f = write_lines(tmp_path / "iid.txt", rng.normal(size=100_000))
    code, out, err = run(capsys, "sci", f)
    rep = json.loads(out)
    assert code == 0
    assert abs(rep["sci"] - 1 / 6) < 0.005 and rep["sigma2_hat"] < 0.01
    assert rep["near_degenerate"] and "warning" in err
    lo, hi = rep["ci95"]
    half = 1.959963984540054 * 2 * np.sqrt(rep["sigma2_hat"]) / np.sqrt(rep["n_windows"])
    assert hi - lo == pytest.approx(2 * half)
    validator("sci_report.schema.json").validate(rep)


def test_malformed_line_is_reported(tmp_path, capsys):
    lines = [f"{i}.5" for i in range(16)] + ["oops"] + ["1.0"] * 5
    f = tmp_path / "bad.txt"
    f.write_text("\n".join(lines) + "\n")
    code, _, err = run(capsys, "sci", f)
    assert code == 2 and ":17:" in err


def test_missing_file_is_input_error(tmp_path, capsys):
    code, _, err = run(capsys, "sci", tmp_path / "nope.txt")
    assert code == 2


def test_too_short_is_precondition_error(tmp_path, capsys):
    f = write_lines(tmp_path / "short.txt", [1.0, 2.0, 3.0])
    code, _, err = run(capsys, "sci", f)
    assert code == 3


def test_comments_and_csv(tmp_path):
    f = tmp_path / "c.txt"
    f.write_text("# header\n1.0\n\n2.0  # trailing\n3\n")
    assert read_series(f).values.tolist() == [1.0, 2.0, 3.0]
    c = tmp_path / "d.csv"
    c.write_text("t,val\n0,1.5\n1,2.5\n2,-1\n")
    assert read_series(c, "val").values.tolist() == [1.5, 2.5, -1.0]
    assert read_series(c, "1").values.tolist() == [1.5, 2.5, -1.0]
    assert read_series(c, 0).values.tolist() == [0.0, 1.0, 2.0]


def test_csv_column_via_cli(tmp_path, capsys):
    c = tmp_path / "d.csv"
    c.write_text("a,b\n" + "".join(f"{i},{-i}\n" for i in range(12)))
    code, out, _ = run(capsys, "sci", c, "--column", "b")
    assert code == 0 and json.loads(out)["sci"] == 1.0


def test_test_identical_files(tmp_path, capsys):
    f = write_lines(tmp_path / "x.txt", simulate(DgpSpec("ma1", 0.5, 500, 3)))
    code, out, _ = run(capsys, "test", f, f, "--method", "sci")
    rep = json.loads(out)
    assert code == 0 and rep["statistic"] == 0.0 and rep["p_value"] == 1.0
    assert rep["reject_at_0.05"] is False
    validator("test_report.schema.json").validate(rep)


@pytest.mark.parametrize("method", ["ks", "jp"])
def test_test_other_methods(tmp_path, capsys, method):
    x = write_lines(tmp_path / "x.txt", simulate(DgpSpec("ar1", 0.8, 512, 3)))
    y = write_lines(tmp_path / "y.txt", 3 * simulate(DgpSpec("ma1", 0.5, 512, 4)))
    code, out, _ = run(capsys, "test", x, y, "--method", method, "--reps", 199)
    rep = json.loads(out)
    assert code == 0 and rep["method"] == method and rep["reject_at_0.05"] is True
    validator("test_report.schema.json").validate(rep)


def test_test_unequal_lengths(tmp_path, capsys):
    x = write_lines(tmp_path / "x.txt", np.arange(50.0))
    y = write_lines(tmp_path / "y.txt", np.arange(60.0))
    code, _, err = run(capsys, "test", x, y)
    assert code == 3 and "equal length" in err


def test_degenerate_statistic_serializes(tmp_path, capsys):
    x = write_lines(tmp_path / "x.txt", np.arange(21.0))
    y = write_lines(tmp_path / "y.txt", np.tile([0.0, 1.0], 11)[:21])
    code, out, _ = run(capsys, "test", x, y, "--d", 2)
    rep = json.loads(out)
    assert rep["statistic"] == "inf" and rep["p_value"] == 0.0
    validator("test_report.schema.json").validate(rep)


def test_simulate_roundtrip(tmp_path, capsys):
    out_file = tmp_path / "ma.txt"
    manifest = tmp_path / "m.json"
    code, out, _ = run(capsys, "simulate", "--model", "ma1", "--n", 2000, "--seed", 42,
                       "-o", out_file, "--manifest", manifest)
    assert code == 0
    values = read_series(out_file).values
    assert values.size == 2000
    assert np.array_equal(values, simulate(DgpSpec("ma1", 0.5, 2000, 42)))
    validator("seed_manifest.schema.json").validate(json.loads(out))
    validator("seed_manifest.schema.json").validate(json.loads(manifest.read_text()))
    # identical bytes on a second run
    run(capsys, "simulate", "--model", "ma1", "--n", 2000, "--seed", 42, "-o", tmp_path / "again.txt")
    assert (tmp_path / "again.txt").read_bytes() == out_file.read_bytes()


def test_simulate_invalid_theta(tmp_path, capsys):
    code, _, err = run(capsys, "simulate", "--model", "ar1", "--theta", 1.5, "-o", tmp_path / "x.txt")
    assert code == 3


def test_mc_smoke(tmp_path, capsys):
    code, out, _ = run(capsys, "mc", "--reps", 10, "--sizes", 300, "--out", tmp_path)
    assert code == 0
    assert "DGP1" in out and "n=300" in out
    res = json.loads((tmp_path / "size_sci.json").read_text())
    validator("mc_results.schema.json").validate(res)
    tsv = (tmp_path / "size_sci.tsv").read_text().rstrip().split("\n")
    assert len(tsv) == 2 and tsv[0].startswith("\tDGP1\tDGP1_se")
    validator("seed_manifest.schema.json").validate(json.loads((tmp_path / "seed_manifest.json").read_text()))


def test_mc_plan_file_ks(tmp_path, capsys):
    plan = tmp_path / "plan.json"
    plan.write_text(json.dumps({"kind": "size", "test": "ks", "sizes": [200], "models": [1, 2, 3, 4], "reps": 5}))
    code, out, _ = run(capsys, "mc", "--plan", plan, "--out", tmp_path / "o")
    assert code == 0 and (tmp_path / "o" / "size_ks.tsv").exists()
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"bogus": 1}))
    code, _, _ = run(capsys, "mc", "--plan", bad, "--out", tmp_path / "o")
    assert code == 3


def test_mc_power_layout(tmp_path, capsys):
    code, out, _ = run(capsys, "mc", "--kind", "power", "--reps", 3, "--sizes", 200,
                       "--models", "ma1", "ar1", "--out", tmp_path)
    assert code == 0 and "--" in out
