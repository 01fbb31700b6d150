"""Command-line surface: wiring, formats, exit codes."""

import json
import subprocess
import sys

import pytest

from melontau.cli import main
from melontau.reports import CheckReport, emit


MELON_JSON = json.dumps({
    "D": 3, "white": 2, "black": 2,
    "edges": [{"w": 0, "b": 1, "c": 1}, {"w": 1, "b": 0, "c": 1},
              {"w": 0, "b": 0, "c": 2}, {"w": 1, "b": 1, "c": 2},
              {"w": 0, "b": 0, "c": 3}, {"w": 1, "b": 1, "c": 3}]})


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_verify_json_reports(capsys):
    code, out, err = run_cli(capsys, "verify", "commutator", "--D", "2",
                             "--pmax", "3")
    assert code == 0
    lines = [json.loads(x) for x in out.strip().splitlines()]
    assert len(lines) == 1
    rep = lines[0]
    assert rep["passed"] is True
    assert rep["params"] == {"D": 2, "max_q": 3}
    assert "0 failed" in err


def test_verify_text_format(capsys):
    code, out, _ = run_cli(capsys, "verify", "bch", "--format", "text")
    assert code == 0
    assert out.startswith("PASS bch-closed-form")


def test_verify_decomposition_default(capsys):
    code, out, _ = run_cli(capsys, "verify", "decomposition")
    assert code == 0
    assert json.loads(out.strip())["params"] == {"D": 3, "K": 1}


def test_verify_hirota_small(capsys):
    code, out, _ = run_cli(capsys, "verify", "hirota", "--deg", "1",
                           "--pmax", "2")
    assert code == 0
    reps = [json.loads(x) for x in out.strip().splitlines()]
    assert [r["params"]["nsize"] for r in reps] == [1, 2]
    assert all(r["passed"] for r in reps)


def test_shallow_zwindow_is_config_error(capsys):
    code, _, err = run_cli(capsys, "verify", "hirota", "--deg", "1",
                           "--pmax", "2", "--zwindow", "3")
    assert code == 2
    assert "window" in err


def test_threads_flag_accepted(capsys):
    code, _, _ = run_cli(capsys, "verify", "bch", "--threads", "4")
    assert code == 0


def test_compute_tutte(capsys):
    code, out, _ = run_cli(capsys, "compute", "tutte", "--order", "4")
    assert code == 0
    data = json.loads(out)
    assert data["counts"] == ["1", "2", "9", "54", "378"]
    assert data["signed"][1] == "-2"


def test_compute_free_energy(capsys):
    code, out, _ = run_cli(capsys, "compute", "free-energy", "--order", "1")
    assert code == 0
    data = json.loads(out)
    assert data["coefficients"]["1"] == {"0": "-1/4", "2": "-1/2"}


def test_graph_degree_from_file(tmp_path, capsys):
    f = tmp_path / "melon.json"
    f.write_text(MELON_JSON)
    code, out, _ = run_cli(capsys, "graph", "degree", "--file", str(f))
    assert code == 0
    data = json.loads(out)
    assert data["degree"] == 0
    assert data["jacket_genera"] == {"1-2-3": 0}


def test_graph_jackets(tmp_path, capsys):
    f = tmp_path / "melon.json"
    f.write_text(MELON_JSON)
    code, out, _ = run_cli(capsys, "graph", "jackets", "--file", str(f))
    assert code == 0
    assert json.loads(out)["jackets"] == [[1, 2, 3]]


def test_graph_needs_file(capsys):
    code, _, err = run_cli(capsys, "graph", "degree")
    assert code == 2
    assert "--file" in err


def test_moment_matrix(capsys):
    code, out, _ = run_cli(capsys, "moment", "matrix", "4")
    assert code == 0
    assert json.loads(out)["moment"] == {"-1": "1", "1": "2"}


def test_moment_matrix_rejects_negative(capsys):
    code, _, err = run_cli(capsys, "moment", "matrix", "--", "-2")
    assert code == 2
    assert "powers" in err


def test_moment_tensor_from_file(tmp_path, capsys):
    f = tmp_path / "melon.json"
    f.write_text(MELON_JSON)
    code, out, _ = run_cli(capsys, "moment", "tensor", "--file", str(f))
    assert code == 0
    assert json.loads(out)["moment"] == {"0": "1", "1": "1"}


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nosuch"])
    assert exc.value.code == 2


def test_emit_maps_failures_to_exit_1(capsys):
    good = CheckReport("a", True)
    bad = CheckReport("b", False, {"D": 3}, "broke")
    assert emit([good], "json") == 0
    assert emit([good, bad], "text") == 1
    out = capsys.readouterr().out
    assert "FAIL b [D=3] -- broke" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "melontau", "moment", "matrix", "2", "2",
         "--format", "text"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "2*N^0 + 1*N^2" in proc.stdout
