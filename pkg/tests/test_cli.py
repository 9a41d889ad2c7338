import json
from fractions import Fraction
from pathlib import Path

import pytest

from valdist.cli import main
from valdist.reporting import (
    Check,
    ConfigError,
    Report,
    RGrid,
    config_from_dict,
    parse_curve,
    parse_generator,
    parse_targets,
    report_csv,
)
from valdist.scalars import QQi

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def test_parse_curve_float_and_exact():
    f = parse_curve({"n": 1, "components": [[1, [0, 2]], [[0, 1], 1]]})
    assert f.components[0].coeffs == (1, 2j)
    g = parse_curve({"n": 1, "exact": True, "components": [[[1, 2]], [[0, 1], [[1, 3], [1, 1]]]]})
    assert g.components[0].coeffs == (Fraction(1, 2),)
    assert g.components[1].coeffs[1] == QQi(Fraction(1, 3), 1)
    # common factor is removed on input
    h = parse_curve({"components": [[0, 1], [0, 0, 1]]})
    assert h.degree == 1


@pytest.mark.parametrize("spec", [
    {"n": 2, "components": [[1], [0, 1]]},
    {"components": [["a"], [1]]},
    {"n": 1},
])
def test_parse_curve_errors(spec):
    with pytest.raises(ConfigError):
        parse_curve(spec)


def test_targets_and_generators():
    t = parse_targets({"hyperplanes": [[1, 0, [0, 1]]], "points": [[1, 1, 1]],
                       "subschemes": [{"generators": [[[1, [1, 1, 0]], [-1, [0, 0, 2]]]]}]}, 2)
    assert t["hyperplanes"][0][2] == 1j
    assert t["subschemes"][0].degrees == [2]
    with pytest.raises(ConfigError):
        parse_generator([[1, [1, 0, 0]], [1, [1, 1, 0]]], 2)
    with pytest.raises(ConfigError):
        parse_targets({"hyperplanes": [[1, 0]]}, 2)


def test_config_validation():
    with pytest.raises(ConfigError):
        config_from_dict({"bogus": 1})
    with pytest.raises(ConfigError):
        config_from_dict({"r_grid": {"min": 5, "max": 2}})
    with pytest.raises(ConfigError):
        config_from_dict({}).require_seed()
    assert len(RGrid(1, 10, 5, log=False).values()) == 5


def test_csv_layout():
    rep = Report("demo", {"r": [1.0, 2.0], "T": [0.1, 1 / 3]}, [Check("c", True, "ok")], {"seed": 1})
    lines = report_csv(rep).splitlines()
    assert lines[0] == "# columns: r,T"
    assert lines[1].startswith("# version: valdist ")
    assert lines[2] == '# config: {"seed":1}'
    assert lines[3] == "# check: c PASS ok"
    assert lines[4] == "r,T"
    assert lines[6] == "2,0.33333333333333331"


def test_cli_exit_codes(tmp_path, capsys):
    out = tmp_path / "fmt.csv"
    assert main(["fmt", "--config", str(CONFIGS / "fmt_conic.json"), "--out", str(out), "--json"]) == 0
    assert out.read_text().startswith("# columns: r,m,N,T,residual,quad_error")
    doc = json.loads(out.with_suffix(".json").read_text())
    assert doc["passed"] and len(doc["columns"]["r"]) == 40
    assert main(["crofton", "--samples", "10"]) == 2  # no seed
    assert main(["cartan", "--config", str(tmp_path / "missing.json")]) == 2
    assert main(["nonsense"]) == 2
    assert main(["fmt", "--r-min", "5", "--r-max", "1", "--config", str(CONFIGS / "fmt_conic.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"curve": {"components": [[1], [0, 1], [0, 0, 1]]},
                               "targets": {"hyperplanes": [[0, 0, 1]]}, "options": {"flat_tol": -1}}))
    assert main(["fmt", "--config", str(bad), "--r-count", "5"]) == 1
    capsys.readouterr()


def test_cli_threads_do_not_change_bytes(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["crofton", "--seed", "7", "--samples", "20000"]
    assert main(args + ["--threads", "1", "--out", str(a)]) == 0
    assert main(args + ["--threads", "8", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_cli_stdout_csv(capsys):
    assert main(["oxk1", "--config", str(CONFIGS / "points_line.json"), "--r-count", "4"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "# columns: r,N_ddc_log_h0"
