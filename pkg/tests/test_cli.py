"""End-to-end checks of the command line entry point."""

from __future__ import annotations

import json

import pytest

from looptrees.cli import main


def run(tmp_path, *argv):
    return main([*argv, "--out-dir", str(tmp_path)])


def test_sample_tree_csv(tmp_path):
    assert run(tmp_path, "sample", "tree", "--n", "40", "--seed", "7",
               "--format", "csv") == 0
    text = (tmp_path / "tree.csv").read_text()
    lines = text.splitlines()
    assert lines[0].startswith("#")
    assert "seed=7" in lines[1] or "seed" in lines[1]
    body = [l for l in lines if not l.startswith("#")]
    assert body[0] == "vertex,children"
    assert len(body) == 41


def test_sample_tree_json_header(tmp_path):
    assert run(tmp_path, "sample", "tree", "--n", "12", "--seed", "3") == 0
    doc = json.loads((tmp_path / "tree.json").read_text())
    head = doc["header"]
    assert head["artifact"] == "looptrees"
    assert head["seed"] == 3
    assert head["config"]["n"] == 12
    assert len(doc["children_counts"]) == 12


def test_sample_path_csv(tmp_path):
    assert run(tmp_path, "sample", "path", "--n", "50", "--seed", "1",
               "--format", "csv") == 0
    lines = (tmp_path / "path.csv").read_text().splitlines()
    body = [l for l in lines if not l.startswith("#")]
    assert body[0] == "time,value,jump"
    assert len(body) == 52  # header plus n+1 rows


def test_sample_looptree_edgelist_and_origin(tmp_path):
    assert run(tmp_path, "sample", "looptree", "--n", "30", "--seed", "2",
               "--format", "edgelist") == 0
    edges = (tmp_path / "looptree_edges.txt").read_text().splitlines()
    assert edges[0].startswith("#")
    body = [l for l in edges if not l.startswith("#")]
    assert body
    for line in body:
        u, v = map(int, line.split())
        assert 0 <= u <= v
    origin = (tmp_path / "looptree_origin.csv").read_text().splitlines()
    body = [l for l in origin if not l.startswith("#")]
    assert body[0] == "graph_vertex,tree_vertex,corner"


def test_sample_looptree_svg(tmp_path):
    assert run(tmp_path, "sample", "looptree", "--n", "25", "--seed", "2",
               "--format", "svg") == 0
    assert "<svg" in (tmp_path / "looptree.svg").read_text()


def test_sample_dissection_writes_json_and_svg(tmp_path):
    assert run(tmp_path, "sample", "dissection", "--n", "12", "--seed", "5") == 0
    doc = json.loads((tmp_path / "dissection.json").read_text())
    assert doc["n_sides"] == 13
    assert "<svg" in (tmp_path / "dissection.svg").read_text()


def test_sample_dissection_rejects_tiny(tmp_path, capsys):
    assert run(tmp_path, "sample", "dissection", "--n", "1") == 1
    assert "leaves" in capsys.readouterr().err


def test_layout_round_trip(tmp_path):
    assert run(tmp_path, "sample", "looptree", "--n", "20", "--seed", "9") == 0
    assert main(["layout", str(tmp_path / "looptree.json"),
                 "--out-dir", str(tmp_path)]) == 0
    assert "<svg" in (tmp_path / "looptree_layout.svg").read_text()

    assert run(tmp_path, "sample", "dissection", "--n", "8", "--seed", "9") == 0
    assert main(["layout", str(tmp_path / "dissection.json"),
                 "--out-dir", str(tmp_path)]) == 0
    assert "<svg" in (tmp_path / "dissection_layout.svg").read_text()


def test_layout_rejects_unknown_document(tmp_path, capsys):
    bad = tmp_path / "junk.json"
    bad.write_text(json.dumps({"something": 1}))
    assert main(["layout", str(bad), "--out-dir", str(tmp_path)]) == 1
    assert capsys.readouterr().err


def test_determinism_same_seed_same_bytes(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    for d in (a, b):
        assert main(["sample", "path", "--n", "200", "--seed", "31",
                     "--alpha", "1.3", "--out-dir", str(d),
                     "--format", "csv"]) == 0
    assert (a / "path.csv").read_bytes() == (b / "path.csv").read_bytes()


def test_experiment_laplace_small(tmp_path, capsys):
    rc = run(tmp_path, "experiment", "laplace-check", "--n", "20000",
             "--seed", "11")
    out = capsys.readouterr().out
    assert "laplace-check" in out
    report = json.loads((tmp_path / "laplace_check_report.json").read_text())
    assert rc == (0 if report["pass"] else 1)
    assert report["pass"]  # frozen seed, small n, z-scores are scale-free
    csv = (tmp_path / "laplace_check_data.csv").read_text()
    assert csv.splitlines()[0].startswith("#")


def test_experiment_exit_code_reflects_failure(tmp_path):
    # max-jump at a deliberately undersized run with a hair-thin tolerance:
    # the report must say fail and the process must exit nonzero
    rc = run(tmp_path, "experiment", "max-jump", "--n", "500",
             "--replicates", "8", "--seed", "1", "--tolerance", "0.0001")
    report = json.loads((tmp_path / "max_jump_report.json").read_text())
    assert not report["pass"]
    assert rc == 1


def test_experiment_gh_sandwich_small(tmp_path):
    rc = run(tmp_path, "experiment", "gh-sandwich", "--replicates", "6",
             "--n", "30", "--seed", "3")
    report = json.loads((tmp_path / "gh_sandwich_report.json").read_text())
    assert rc == 0 and report["pass"]
