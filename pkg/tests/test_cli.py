import csv
import io
import json
import math
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from tsgag.cli import fmt, main


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_seminorm_linear(capsys, scenario_dir):
    code, out, _ = run(capsys, "seminorm", "--scenario", str(scenario_dir / "linear_unit.json"))
    assert code == 0
    (row,) = rows(out)
    assert abs(float(row["value"]) - 1.0) < 1e-6
    assert row["scenario_id"] == "linear_unit" and row["diverged"] == "false"
    assert "err_est" in row


def test_seminorm_divergent_exit_2(capsys, scenario_dir):
    code, out, _ = run(capsys, "seminorm", "--scenario",
                       str(scenario_dir / "indicator_divergent.json"))
    assert code == 2
    (row,) = rows(out)
    assert row["diverged"] == "true" and row["value"] == "inf"


def test_error_exit_1(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"id": "x"')
    code, _, err = run(capsys, "seminorm", "--scenario", str(bad))
    assert code == 1 and "ParseError" in err
    code, _, _ = run(capsys, "seminorm", "--scenario", str(tmp_path / "missing.json"))
    assert code == 1
    with pytest.raises(SystemExit) as ei:
        main(["nonsense", "--scenario", str(bad)])
    assert ei.value.code == 1
    with pytest.raises(SystemExit) as ei:
        main(["seminorm"])
    assert ei.value.code == 1


def test_domain_error_exit_1(capsys, tmp_path):
    doc = {"id": "d", "timescale": {"intervals": [[0, 1]]},
           "functions": {"u": [{"kind": "linear"}]}, "params": {"alpha": 1.5}}
    p = tmp_path / "d.json"
    p.write_text(json.dumps(doc))
    code, _, err = run(capsys, "seminorm", "--scenario", str(p))
    assert code == 1 and "alpha" in err


def test_violation_exit_2(capsys, tmp_path):
    doc = {"id": "v", "timescale": {"intervals": [[0, 1]]},
           "functions": {"u": [{"kind": "linear"}]},
           "params": {"alpha": 0.5, "p": 2, "C_P": 0.1}}
    p = tmp_path / "v.json"
    p.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "poincare", "--scenario", str(p))
    assert code == 2 and rows(out)[0]["holds"] == "false"


def test_hardy_sweep_svg(capsys, scenario_dir, tmp_path):
    code, out, _ = run(capsys, "hardy", "--scenario", str(scenario_dir / "linear_unit.json"),
                       "--out-dir", str(tmp_path), "--svg")
    assert code == 0
    r = rows(out)
    assert len(r) == 4
    ratios = [float(x["ratio"]) for x in r]
    assert ratios == sorted(ratios)
    assert math.isclose(ratios[2], 7 / 30, rel_tol=1e-6)
    svg = tmp_path / "linear_unit_hardy.svg"
    root = ET.parse(svg).getroot()
    assert root.attrib["version"] == "1.1"
    assert (tmp_path / "linear_unit_hardy.csv").read_text() == out


def test_solve_matrices(capsys, scenario_dir, tmp_path):
    from scipy.io import mmread
    code, out, _ = run(capsys, "solve", "--scenario", str(scenario_dir / "two_atoms.json"),
                       "--out-dir", str(tmp_path), "--matrices")
    assert code == 0
    (row,) = rows(out)
    assert row["function"] == "f"
    K = mmread(str(tmp_path / "two_atoms_solve_K.mtx"))
    assert K.shape == (2, 2) and abs(K[0, 0] - 0.5) < 1e-12


def test_mesh_and_rel_tol_overrides(capsys, scenario_dir):
    code, out, _ = run(capsys, "poincare", "--scenario", str(scenario_dir / "linear_unit.json"),
                       "--mesh", "4,8", "--rel-tol", "1e-7")
    assert code == 0
    extra = rows(out)[0]["extra"]
    assert "C_P[4]" in extra and "C_P[8]" in extra
    code, _, _ = run(capsys, "poincare", "--scenario", str(scenario_dir / "linear_unit.json"),
                     "--rel-tol", "-1")
    assert code == 1


@pytest.mark.parametrize("cmd", ["measure", "norm", "cross-bounds", "coercivity", "ckn",
                                 "discrete-poincare", "compare-rl"])
def test_other_commands(capsys, scenario_dir, cmd):
    name = {"cross-bounds": "three_component.json", "discrete-poincare": "two_atoms.json",
            "coercivity": "three_component.json"}.get(cmd, "linear_unit.json")
    code, out, _ = run(capsys, cmd, "--scenario", str(scenario_dir / name))
    assert code == 0
    r = rows(out)
    assert r and all(x["scenario_id"] for x in r)


def test_report(capsys, scenario_dir, tmp_path):
    code = main(["report", "--scenario", str(scenario_dir), "--out-dir", str(tmp_path)])
    assert code == 2  # the divergent scenario is flagged
    index = rows((tmp_path / "index.csv").read_text())
    cmds = {r["command"] for r in index}
    for cmd in cmds:
        assert (tmp_path / f"{cmd}.csv").exists()
    assert any(r["status"] == "flagged" for r in index)
    assert not any(r["status"] == "error" for r in index)


def test_report_needs_directory(capsys, scenario_dir):
    code, _, _ = run(capsys, "report", "--scenario", str(scenario_dir / "linear_unit.json"))
    assert code == 1


def test_fmt():
    assert fmt(0.1) == "0.10000000000000001"
    assert float(fmt(1 / 3)) == 1 / 3
    assert fmt(True) == "true" and fmt(math.inf) == "inf" and fmt(None) == ""


def test_console_script(scenario_dir):
    proc = subprocess.run([sys.executable, "-m", "tsgag.cli", "measure", "--scenario",
                           str(scenario_dir / "linear_unit.json")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("scenario_id,")
