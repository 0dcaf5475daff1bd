import json

import pytest

from lightforest.cli import main


def test_route_plain_output(capsys):
    rc = main(["route", "--topology", "nsf", "--source", "2",
               "--members", ",".join(str(v) for v in range(1, 13)),
               "--mc", "2", "--algo", "dp"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "diameter: 5" in out
    assert "average delay: 27/11" in out
    assert "total cost: 11" in out
    assert "link stress: 1" in out


def test_route_json_output(capsys):
    rc = main(["route", "--topology", "nsf", "--source", "2",
               "--members", ",".join(str(v) for v in range(1, 13)),
               "--mc", "2", "--algo", "mo", "--json"])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert data["average_delay"] == [38, 11]
    assert data["total_cost"] == 11


def test_route_writes_dot(tmp_path, capsys):
    out = tmp_path / "forest.dot"
    rc = main(["route", "--topology", "cost239", "--source", "1",
               "--members", "2,3,4", "--mc", "none", "--algo", "dp",
               "--dot", str(out)])
    assert rc == 0
    assert out.read_text().startswith("digraph lightforest")


def test_route_mc_all_none(capsys):
    for mc in ("all", "none"):
        assert main(["route", "--topology", "cost239", "--source", "1",
                     "--members", "2,5", "--mc", mc, "--algo", "dp"]) == 0


def test_usage_error_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["route", "--topology", "nsf", "--source", "2"])
    assert exc.value.code == 1


def test_no_destinations_exit_1(capsys):
    rc = main(["route", "--topology", "nsf", "--source", "2",
               "--members", "2", "--mc", "all", "--algo", "dp"])
    assert rc == 1


def test_parse_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.topo"
    bad.write_text("nodes 2\nedge 1 3\n")
    rc = main(["route", "--topology", str(bad), "--source", "1",
               "--members", "2", "--mc", "all", "--algo", "dp"])
    assert rc == 2
    assert "line 2" in capsys.readouterr().err


def test_unreachable_exit_3(tmp_path, capsys):
    topo = tmp_path / "split.topo"
    topo.write_text("nodes 4\nedge 1 2\nedge 3 4\n")
    rc = main(["route", "--topology", str(topo), "--source", "1",
               "--members", "4", "--mc", "all", "--algo", "dp"])
    assert rc == 3


def test_disconnected_experiment_exit_3(tmp_path, capsys):
    topo = tmp_path / "split.topo"
    topo.write_text("nodes 4\nedge 1 2\nedge 3 4\n")
    rc = main(["experiment", "--topology", str(topo), "--group-sizes", "2",
               "--mc-counts", "0", "--seed", "1",
               "--out", str(tmp_path / "x.csv")])
    assert rc == 3


def test_experiment_and_summarize_pipeline(tmp_path, capsys):
    rows_csv = tmp_path / "rows.csv"
    rc = main(["experiment", "--topology", "cost239", "--group-sizes", "4,6",
               "--mc-counts", "2", "--sessions-per-source", "2",
               "--seed", "5", "--out", str(rows_csv)])
    assert rc == 0
    assert rows_csv.exists()
    summary_csv = tmp_path / "summary.csv"
    rc = main(["summarize", "--in", str(rows_csv), "--out", str(summary_csv)])
    assert rc == 0
    lines = summary_csv.read_text().splitlines()
    assert len(lines) == 3  # header + two (group_size, mc_count) points


def test_missing_input_file_exit_1(tmp_path, capsys):
    rc = main(["summarize", "--in", str(tmp_path / "nope.csv"),
               "--out", str(tmp_path / "out.csv")])
    assert rc == 1
