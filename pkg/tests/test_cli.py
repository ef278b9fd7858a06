import csv
import io
import json
import math

import pytest

from pasipcs import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    body = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def meta(text):
    return json.loads(text.splitlines()[0][2:])


def test_spectrum(capsys):
    code, out, _ = run(capsys, "spectrum", "--set", "n_max=5")
    assert code == 0
    table = rows(out)
    assert [float(r["E_closed"]) for r in table] == [0, 5, 12, 21, 32, 45]
    assert meta(out)["ok"] is True


def test_empty_grid_gives_header_only(capsys):
    code, out, _ = run(capsys, "curves", "--set", "x=1:2:0")
    assert code == 0
    assert rows(out) == []
    assert out.splitlines()[1].startswith("x")


@pytest.mark.parametrize("argv", [
    ["spectrum", "--set", "choice=vector"],
    ["spectrum", "--set", "n_max=ten"],
    ["spectrum", "--set", "bogus=1"],
    ["spectrum", "--set", "choice=gamma", "--set", "kappa=2"],
])
def test_config_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "config error" in err


def test_config_file_diagnostic(tmp_path, capsys):
    path = tmp_path / "run.cfg"
    path.write_text("l = 3\nthis line is wrong\n")
    code, _, err = run(capsys, "spectrum", "--config", str(path))
    assert code == 2
    assert f"{path}:2:" in err


def test_config_round_trip():
    cfg = cli.RunConfig(l=3.0, m=[0, 4], z=[0.5 + 0.25j], beta=[1.0, 2.0])
    again = cli.RunConfig.parse(cfg.to_text())
    assert again == cfg


def test_grid_syntax():
    assert cli._floats("0:1:3") == [0.0, 0.5, 1.0]
    assert cli._floats("1, 2.5") == [1.0, 2.5]


def test_state_probabilities_sum_to_one(capsys):
    code, out, _ = run(capsys, "state", "--m", "2", "--set", "z=1+0.5j")
    assert code == 0
    probs = [float(r["prob"]) for r in rows(out)]
    # the table is cut at n_max, so the sum is at most 1
    assert 0.99 < sum(probs) <= 1 + 1e-12
    assert probs[0] == probs[1] == 0


def test_thermal_cold_limit(capsys, tmp_path):
    out_path = tmp_path / "t.json"
    code, _, _ = run(capsys, "thermal", "--m", "1,2", "--beta", "50", "--format", "json",
                     "--out", str(out_path))
    assert code == 0
    data = json.loads(out_path.read_text())
    col = data["columns"].index("mandel_q")
    assert len(data["rows"]) == 2
    for row in data["rows"]:
        assert math.isclose(float(row[col]), -1.0, abs_tol=1e-8)


def test_moments_gamma(capsys):
    code, out, _ = run(capsys, "moments", "--choice", "gamma", "--m", "0", "--set", "n_max=3")
    assert code == 0
    assert all(float(r["rel_err"]) < 1e-6 for r in rows(out))
