from __future__ import annotations

import json
import subprocess
import sys

import numpy as np
import pytest

from linkframe import PolygonalCurve, paper_example
from linkframe.cli import RunReport, config_to_argv, main
from linkframe.io import (InputError, curve_from_dict, format_csv, format_obj, framed_from_dict,
                          load_json, pair_from_dict, read_csv_polylines)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    reports = [json.loads(line) for line in out.splitlines() if line.strip().startswith("{")]
    return code, reports, out


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj, indent=2))
    return p


# ------------------------------------------------------------------ io

def test_curve_schema_variants():
    c = curve_from_dict({"type": "circle", "center": [0, 0, 1], "radius": 2, "normal": [0, 0, 1], "phase": 0})
    np.testing.assert_allclose(c.start_point(), [2, 0, 1])
    p = curve_from_dict({"type": "polygon", "vertices": [[0, 0, 0], [1, 0, 0], [0, 1, 0]]})
    assert isinstance(p, PolygonalCurve)
    e = curve_from_dict({"type": "paper_example", "id": "framing_one", "epsilon": 0.05, "which": "second"})
    np.testing.assert_allclose(e.position([0.0])[0], [0, 1.05, 0])
    w = curve_from_dict({"type": "piecewise", "pieces": [
        {"kind": "line", "from": [0, 0, 0], "to": [1, 0, 0], "t": [0, 1]},
        {"kind": "line", "from": [1, 0, 0], "to": [0, 1, 0], "t": [1, 2]},
        {"kind": "line", "from": [0, 1, 0], "to": [0, 0, 0], "t": [2, 3]}]})
    assert w.is_piecewise_linear


@pytest.mark.parametrize("bad", [{"type": "blob"}, {"type": "polygon"}, {"type": "circle", "center": [1, 2]},
                                 {"type": "polygon", "vertices": "abc"}, {"type": "piecewise", "pieces": []}])
def test_curve_schema_errors(bad):
    with pytest.raises(InputError):
        curve_from_dict(bad)


def test_pair_and_framed_schema():
    pair = pair_from_dict({"type": "paper_example", "id": "framing_neg_two"})
    assert pair.first.is_piecewise_linear
    with pytest.raises(InputError):
        pair_from_dict({"first": {"type": "circle"}})
    f = framed_from_dict({"base": {"type": "circle"}, "framing": {"kind": "twists", "n": -2, "profile": "window",
                                                                  "center": 3.0, "width": 1.0}, "offset": 0.1})
    assert f.offset == 0.1
    with pytest.raises(InputError):
        framed_from_dict({"base": {"type": "circle"}, "framing": {"kind": "braid"}})


def test_load_json_reports_position(tmp_path):
    p = write(tmp_path, "bad.json", '{\n  "first": {"type": "circle"},\n  "second": oops\n}')
    with pytest.raises(InputError) as info:
        load_json(p)
    assert (info.value.line, info.value.column) == (3, 13)
    assert "line 3, column 13" in str(info.value)


def test_csv_and_obj_round_trip():
    sq = PolygonalCurve([[1, 0, 0], [0, 1, 0], [-1, 0, 0], [0, -1, 0]])
    tri = PolygonalCurve([[0, 0, 0.1], [1, 0, 0], [0, 1, 1 / 3]])
    blocks = read_csv_polylines(format_csv([sq, tri]))
    np.testing.assert_array_equal(blocks[0][:-1], sq.vertices)
    np.testing.assert_array_equal(blocks[1][-1], tri.vertices[0])
    obj = format_obj([sq, tri]).splitlines()
    assert sum(line.startswith("v ") for line in obj) == 7
    assert [line for line in obj if line.startswith("l ")] == ["l 1 2 3 4 1", "l 5 6 7 5"]


# ------------------------------------------------------------------ cli: link

def test_link_all_methods_on_polygon_pair(capsys):
    code, reps, _ = run(capsys, "link", "--example", "framing_neg_two", "--method", "all")
    assert code == 0
    assert [r["method"] for r in reps] == ["quadrature", "exact_polygonal", "crossing_oracle"]
    # All three agree; the verbatim polygons give +2 (see README, "Acceptance suite").
    assert {r["rounded"] for r in reps} == {2}
    assert all(r["confident"] for r in reps)


def test_link_framing_zero(capsys):
    code, reps, _ = run(capsys, "link", "--example", "framing_zero", "--method", "quadrature")
    assert code == 0 and reps[0]["rounded"] == 0


def test_link_small_epsilon(capsys):
    code, reps, _ = run(capsys, "link", "--example", "framing_one", "--epsilon", "0.05", "--method", "quadrature")
    assert code == 0 and reps[0]["rounded"] == 1


def test_link_from_file(tmp_path, capsys):
    p = write(tmp_path, "pair.json", {"first": {"type": "circle"},
                                      "second": {"type": "circle", "center": [1, 0, 0], "normal": [0, 1, 0]},
                                      "label": "hopf"})
    code, reps, _ = run(capsys, "link", str(p), "--method", "exact", "--samples", "128")
    assert code == 0 and abs(reps[0]["rounded"]) == 1 and reps[0]["input_label"] == "hopf"


def test_parse_error_exit_2(tmp_path, caplog):
    p = write(tmp_path, "bad.json", '{"first": {"type": "circle"},\n "second": [1, 2,, 3]}')
    assert main(["link", str(p)]) == 2
    assert "line 2, column 18" in caplog.text


def test_missing_file_exit_2(tmp_path):
    assert main(["link", str(tmp_path / "nope.json")]) == 2


def test_schema_error_exit_2(tmp_path):
    p = write(tmp_path, "pair.json", {"first": {"type": "circle"}, "second": {"type": "spiral"}})
    assert main(["link", str(p)]) == 2


def test_singularity_exit_3(tmp_path, capsys, caplog):
    p = write(tmp_path, "pair.json", {"first": {"type": "circle"}, "second": {"type": "circle", "radius": 1}})
    assert main(["link", str(p), "--method", "quadrature"]) == 3
    assert "quadrature" in caplog.text
    assert capsys.readouterr().out == ""


def test_non_convergence_exit_3(capsys):
    code, reps, _ = run(capsys, "link", "--example", "framing_one", "--epsilon", "0.05", "--method", "quadrature",
                        "--panels", "1", "--nodes", "2", "--target-error", "1e-14", "--max-refinements", "1")
    assert code == 3
    assert reps and reps[0]["method"] == "quadrature"


# ------------------------------------------------------------------ cli: framing / wilson

@pytest.mark.parametrize("framing,expected", [({"kind": "blackboard"}, 0),
                                              ({"kind": "twists", "n": 1, "profile": "uniform"}, 1),
                                              ({"kind": "twists", "n": -2, "profile": "window",
                                                "center": 3.0, "width": 1.5}, -2)])
def test_framing_command(tmp_path, capsys, framing, expected):
    p = write(tmp_path, "ribbon.json", {"base": {"type": "circle"}, "framing": framing, "offset": 0.1})
    code, reps, _ = run(capsys, "framing", str(p))
    assert code == 0 and reps[0]["rounded"] == expected


@pytest.mark.parametrize("argv,expected", [(["--lk", "1", "--k", "2"], (-1.0, 0.0)),
                                           (["--lk", "0", "--k", "5"], (1.0, 0.0)),
                                           (["--example", "framing_one", "--k", "1"], (1.0, 0.0))])
def test_wilson_command(capsys, argv, expected):
    code, reps, _ = run(capsys, "wilson", *argv)
    assert code == 0
    w = reps[0]["wilson"]
    assert (w["re"], w["im"]) == expected


def test_wilson_level_zero_exit_2():
    assert main(["wilson", "--lk", "1", "--k", "0"]) == 2


# ------------------------------------------------------------------ cli: export

def test_export_csv_circle(tmp_path, capsys):
    curve = write(tmp_path, "c.json", {"type": "paper_example", "id": "framing_zero", "which": "first"})
    out = tmp_path / "c.csv"
    code, reps, _ = run(capsys, "export", str(curve), "--samples", "4", "--format", "csv", "--out", str(out))
    assert code == 0 and reps[0]["vertices"] == [4]
    rows = out.read_text().strip().splitlines()
    assert len(rows) == 5
    assert rows[0] == rows[-1]
    np.testing.assert_allclose([float(x) for x in rows[0].split(",")], [1, 0, 0])


def test_export_small_epsilon_pair_to_stdout(capsys):
    code, _, out = run(capsys, "export", "--example", "framing_one", "--epsilon", "0.05", "--samples", "64")
    blocks = read_csv_polylines(out)
    assert code == 0 and len(blocks) == 2
    big, small = blocks
    assert np.max(np.abs(big[:, 0])) <= 1.0 + 1e-12          # the long ellipse spans x in [-1, 1]
    np.testing.assert_allclose(np.hypot(small[:, 1] - 1, small[:, 2]), 0.05, rtol=1e-12)


def test_export_polygon_pair_obj(tmp_path, capsys):
    out = tmp_path / "neg.obj"
    code, _, _ = run(capsys, "export", "--example", "framing_neg_two", "--format", "obj", "--out", str(out))
    lines = out.read_text().splitlines()
    assert code == 0
    assert [line for line in lines if line.startswith("l ")] == ["l 1 2 3 4 1", "l 5 6 7 8 5"]


def test_export_unwritable_exit_4(tmp_path):
    target = tmp_path / "missing_dir" / "x.csv"
    assert main(["export", "--example", "framing_zero", "--out", str(target)]) == 4


# ------------------------------------------------------------------ reports

def test_report_round_trip(capsys):
    _, reps, out = run(capsys, "link", "--example", "framing_one", "--method", "exact")
    line = out.strip().splitlines()[0]
    rep = RunReport.from_json(line)
    assert rep.to_json() == json.dumps(json.loads(line), sort_keys=True)
    assert RunReport.from_json(rep.to_json()) == rep


def test_replay_reproduces_reports(tmp_path, capsys):
    _, first, out = run(capsys, "link", "--example", "framing_one", "--epsilon", "0.3", "--method", "all")
    report_file = write(tmp_path, "run.jsonl", out)
    code, second, _ = run(capsys, "replay", str(report_file))
    assert code == 0
    strip = [{k: v for k, v in r.items() if k != "wall_time_ms"} for r in first]
    assert strip == [{k: v for k, v in r.items() if k != "wall_time_ms"} for r in second]


def test_config_to_argv_round_trip():
    argv = config_to_argv({"command": "link", "example": "framing_one", "epsilon": 0.1 + 0.2, "samples": 7})
    assert argv == ["link", "--example", "framing_one", "--epsilon", "0.30000000000000004", "--samples", "7"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "linkframe", "wilson", "--lk", "1", "--k", "4"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    rep = json.loads(proc.stdout)
    assert (rep["wilson"]["re"], rep["wilson"]["im"]) == (0.0, 1.0)
    assert proc.stderr == ""
