import csv
import io
import json

import jsonschema
import pytest

from vizing_local import cli
from vizing_local.experiments import (
    CSV_COLUMNS,
    REPORT_SCHEMA,
    ExperimentSpec,
    VerificationFailure,
    instance_for_size,
    rows_to_csv,
    run_experiment,
    write_csv,
)
from vizing_local.graph_core import generate
from vizing_local.graphio import GraphParseError, format_graph, parse_graph_file, parse_graph_text, write_graph

# --- graph files ---------------------------------------------------------------


def test_parse_single_edge():
    G = parse_graph_text("p edge 2 1\ne 1 2\n")
    assert G.vertex_count == 2 and G.edges == ((0, 1),)


def test_parse_comments_and_blank_lines():
    G = parse_graph_text("c hello\n\np edge 3 2\nc mid\ne 1 2\ne 3 2\n")
    assert G.edges == ((0, 1), (1, 2))


@pytest.mark.parametrize(
    "text,line,fragment",
    [
        ("p edge 2 1\ne 1 1\n", 2, "self-loop"),
        ("p edge 2 2\ne 1 2\ne 2 1\n", 3, "duplicate"),
        ("p edge 2 1\ne 1 3\n", 2, "outside"),
        ("p edge x 1\n", 1, "non-integer"),
        ("p node 2 1\n", 1, "malformed header"),
        ("e 1 2\n", 1, "before"),
        ("p edge 2 1\nq 1 2\n", 2, "unknown line"),
        ("p edge 2 1\np edge 2 1\n", 2, "second header"),
        ("p edge 2 1\ne 1\n", 2, "malformed edge"),
    ],
)
def test_parse_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(GraphParseError) as info:
        parse_graph_text(text, source="g.txt")
    assert info.value.line == line
    assert f"g.txt:{line}:" in str(info.value) and fragment in str(info.value)


def test_parse_errors_without_line():
    with pytest.raises(GraphParseError, match="missing"):
        parse_graph_text("c only comments\n")
    with pytest.raises(GraphParseError, match="declares 2 edges"):
        parse_graph_text("p edge 3 2\ne 1 2\n")


def test_round_trip(tmp_path):
    G = generate("grid", 4, 4)
    path = tmp_path / "g.txt"
    write_graph(G, path)
    H = parse_graph_file(path)
    assert (H.vertex_count, H.edges) == (G.vertex_count, G.edges)
    buf = io.StringIO()
    write_graph(G, buf)
    assert buf.getvalue() == format_graph(G)


# --- experiments ---------------------------------------------------------------


def test_cycle_sweep():
    rows = run_experiment(ExperimentSpec("cycle", (100, 1000), "main", R=2))
    assert len(rows) == 2
    assert all(r["verified"] is True and r["palette_used"] <= 3 for r in rows)
    assert [r["n"] for r in rows] == [100, 1000]


def test_grid_baseline_sweep():
    (row,) = run_experiment(ExperimentSpec("grid", (10_000,), "baseline"))
    assert row["n"] == 10_000 and row["palette_used"] <= 7 and row["verified"] is True


def test_gps_sweep():
    (row,) = run_experiment(ExperimentSpec("torus", (100,), "gps"))
    assert row["palette_used"] <= row["delta"] + 1


def test_empty_sweep_writes_header_only(tmp_path):
    rows = run_experiment(ExperimentSpec("cycle", ()))
    assert rows == []
    write_csv(rows, tmp_path / "out.csv")
    assert (tmp_path / "out.csv").read_text() == ",".join(CSV_COLUMNS) + "\n"


def test_csv_round_trip():
    rows = run_experiment(ExperimentSpec("path", (50, 60), R=2))
    parsed = list(csv.DictReader(io.StringIO(rows_to_csv(rows))))
    assert [int(r["n"]) for r in parsed] == [50, 60]
    assert all(r["verified"] == "True" for r in parsed)


def test_workers_do_not_change_rows(monkeypatch):
    spec = ExperimentSpec("cycle", (30, 40, 50), R=2)
    serial = run_experiment(spec, workers=1)
    monkeypatch.setenv("VIZING_LOCAL_WORKERS", "2")
    assert run_experiment(spec) == serial


@pytest.mark.parametrize(
    "kw",
    [dict(family="nope"), dict(family="cycle", sizes=(10, 5)), dict(family="cycle", sizes=(0, 5)), dict(family="cycle", algorithm="x")],
)
def test_spec_validation(kw):
    with pytest.raises(ValueError):
        ExperimentSpec(**kw)


def test_verification_failure_aborts(monkeypatch):
    from vizing_local import experiments

    monkeypatch.setattr(experiments, "verify_edge_coloring", lambda *a, **k: [("conflict", 0, 0, 1, 0)])
    with pytest.raises(VerificationFailure) as info:
        run_experiment(ExperimentSpec("cycle", (10,), R=2))
    assert info.value.violations


def test_instance_for_size():
    assert instance_for_size("grid", 1000).vertex_count == 32 * 32
    assert instance_for_size("path", 7).vertex_count == 7
    assert instance_for_size("binary_tree", 15).vertex_count == 15


# --- CLI ---------------------------------------------------------------------


def test_cli_generate_color_verify(tmp_path, capsys):
    g, r = tmp_path / "g.txt", tmp_path / "r.json"
    assert cli.main(["generate", "torus", "5", "5", "-o", str(g)]) == 0
    assert cli.main(["color", "--graph", str(g), "--id-scheme", "permuted", "--seed", "2", "-o", str(r)]) == 0
    report = json.loads(r.read_text())
    jsonschema.validate(report, REPORT_SCHEMA)
    assert report["palette"] == 5
    assert cli.main(["verify", "--graph", str(g), "-c", str(r)]) == 0
    assert "ok" in capsys.readouterr().out


def test_cli_verify_detects_conflict(tmp_path):
    g, c = tmp_path / "g.txt", tmp_path / "c.json"
    g.write_text("p edge 3 2\ne 1 2\ne 2 3\n")
    c.write_text(json.dumps({"0": 1, "1": 1}))
    assert cli.main(["verify", "--graph", str(g), "-c", str(c)]) == 4
    assert cli.main(["verify", "--graph", str(g), "-c", str(c), "--kind", "vertex"]) == 4


def test_cli_vertex_and_baseline(tmp_path):
    out = tmp_path / "v.json"
    assert cli.main(["color", "--family", "cycle", "--dims", "9", "--algorithm", "gps", "-o", str(out)]) == 0
    assert cli.main(["verify", "--family", "cycle", "--dims", "9", "-c", str(out), "--kind", "vertex"]) == 0
    assert cli.main(["color", "--family", "grid", "--dims", "6", "--algorithm", "baseline", "-o", str(out)]) == 0
    assert cli.main(["verify", "--family", "grid", "--dims", "6", "-c", str(out)]) == 0


def test_cli_escalation_cap_exit(tmp_path):
    out = tmp_path / "r.json"
    code = cli.main(["color", "--family", "grid", "--dims", "20", "--id-scheme", "permuted", "--seed", "1",
                     "-R", "1", "--max-escalations", "0", "-o", str(out)])
    assert code == 3
    assert json.loads(out.read_text())["status"] == "escalation_cap"


def test_cli_auto_R(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert cli.main(["color", "--family", "cycle", "--dims", "8", "--auto-R", "-o", str(out)]) == 0
    assert json.loads(out.read_text())["radii"] == [8]
    assert "warning" in capsys.readouterr().err


def test_cli_growth_and_bench(tmp_path, capsys):
    assert cli.main(["growth", "--family", "grid", "--dims", "9", "--r-max", "2"]) == 0
    assert capsys.readouterr().out == "R,max_ball_size\n0,1\n1,5\n2,13\n"
    out = tmp_path / "b.csv"
    assert cli.main(["bench", "--family", "cycle", "--sizes", "20", "40", "-R", "2", "-o", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert [r["n"] for r in rows] == ["20", "40"]


@pytest.mark.parametrize(
    "argv",
    [
        ["color"],
        ["color", "--graph", "/nonexistent/file"],
        ["generate", "cycle", "2"],
        ["bench", "--family", "cycle", "--sizes", "5", "3"],
        ["frobnicate"],
    ],
)
def test_cli_input_errors(argv):
    assert cli.main(argv) == 2


def test_cli_bad_coloring_files(tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("p edge 2 1\ne 1 2\n")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["verify", "--graph", str(g), "-c", str(bad)]) == 2
    bad.write_text("[1, 2]")
    assert cli.main(["verify", "--graph", str(g), "-c", str(bad)]) == 2
    assert cli.main(["verify", "--graph", str(g), "-c", str(tmp_path / "missing.json")]) == 2
