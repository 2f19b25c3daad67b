import json

import pytest

from cimpoly import cache
from cimpoly.cli import main
from cimpoly.enumeration import enumerate_mecs


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, body in {
        "collider": "nodes: 3\n1 -> 2\n3 -> 2\n",
        "chain": "nodes: 3\n1 -> 2\n2 -> 3\n",
        "empty": "nodes: 3\n",
        "full": "nodes: 3\n1 -> 2\n1 -> 3\n2 -> 3\n",
        "path": "nodes: 3\n1 -- 2\n2 -- 3\n",
        "cyclic": "nodes: 3\n1 -> 2\n2 -> 3\n3 -> 1\n",
    }.items():
        p = tmp_path / f"{name}.txt"
        p.write_text(body)
        paths[name] = str(p)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


def test_imset(capsys, files):
    code, out = run(capsys, "imset", "--dag", files["collider"])
    assert code == 0
    assert out["ones"] == [[1, 2], [2, 3], [1, 2, 3]]


def test_enumerate_and_csv(capsys, files, tmp_path):
    csv = tmp_path / "m.csv"
    code, out = run(capsys, "enumerate", "--nodes", "3", "--csv", str(csv))
    assert code == 0 and out["mec_count"] == 11 and out["dag_count"] == 25
    assert len(csv.read_text().splitlines()) == 12
    code, out = run(capsys, "enumerate", "--skeleton", files["path"])
    assert out["mec_count"] == 2


def test_edge_check(capsys, files):
    code, out = run(capsys, "edge-check", "--from", files["chain"], "--to", files["collider"])
    assert code == 0 and out["edge"] and out["certificate"]["margin"] == "1/1"
    code, out = run(capsys, "edge-check", "--from", files["empty"], "--to", files["full"])
    assert code == 0 and not out["edge"]
    assert out["witness"]["combination"]


def test_diameter(capsys, files):
    code, out = run(capsys, "diameter", "--nodes", "3")
    assert code == 0 and out["diameter"] == 2 and out["vertices"] == 11
    assert len(out["witness"]) == 2


def test_walk_strategies(capsys, files):
    for strategy in ("reversal", "tree"):
        code, out = run(capsys, "walk", "--from", files["chain"], "--to", files["collider"], "--strategy", strategy)
        assert code == 0 and all(out["validation"])
    code, out = run(capsys, "walk", "--from", files["empty"], "--to", files["full"], "--strategy", "parentset")
    assert code == 0 and out["polytope_length"] == 2 and all(out["validation"])


def test_greedy(capsys, files, tmp_path):
    w = tmp_path / "w.json"
    w.write_text(json.dumps(["-1", "-9", "-1", "2"]))
    code, out = run(capsys, "greedy", "--start", files["chain"], "--weights", str(w))
    assert code == 0 and out["imsets"][-1] == [[1, 2], [2, 3], [1, 2, 3]]
    code, out = run(capsys, "greedy", "--start", files["chain"], "--weights", str(w), "--oracle")
    assert code == 0 and out["values"][-1] == "0/1"


def test_tree_check_and_conjecture(capsys, files):
    code, out = run(capsys, "tree-check", "--from", files["chain"], "--to", files["collider"])
    assert code == 0 and out["essential_flip"]["verdict"] and out["subtree_condition"]["verdict"]
    code, out = run(capsys, "conjecture", "--nodes", "3")
    assert code == 0 and out["counterexamples"] == []


def test_exit_codes(capsys, files):
    assert main(["imset", "--dag", files["cyclic"]]) == 2
    assert main(["tree-check", "--from", files["chain"], "--to", files["chain"]]) == 2
    assert main(["enumerate", "--nodes", "6"]) == 3
    assert main(["diameter", "--nodes", "5"]) == 3
    assert main(["imset", "--dag", "/nonexistent/file"]) == 2
    with pytest.raises(SystemExit):
        main(["bogus"])


def test_output_identical_across_runs_and_jobs(capsys, tmp_path):
    outs = []
    for jobs in ("1", "2", "1"):
        target = tmp_path / f"d{len(outs)}.json"
        assert main(["diameter", "--nodes", "3", "--jobs", jobs, "--out", str(target)]) == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_cache_round_trip(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(cache.ENV_VAR, str(tmp_path / "c"))
    code, first = run(capsys, "diameter", "--nodes", "3")
    files = sorted(p.name for p in (tmp_path / "c").iterdir())
    assert len(files) == 2
    code, second = run(capsys, "diameter", "--nodes", "3")
    assert first == second
    vs = cache.load_vertex_set(3, directory=tmp_path / "c")
    assert vs == enumerate_mecs(3)
    assert cache.key_for("vertices", 3, None) != cache.key_for("vertices", 3, None, unsafe=True)


def test_cache_hit_skips_work(tmp_path, monkeypatch):
    cache.load_vertex_set(3, directory=tmp_path)

    def boom(*a, **k):
        raise AssertionError("recomputed")

    monkeypatch.setattr(cache, "enumerate_mecs", boom)
    assert len(cache.load_vertex_set(3, directory=tmp_path)) == 11


def test_reproduce_subset(capsys):
    code, out = run(capsys, "reproduce", "--criteria", "2,3")
    assert code == 0 and out["passed"] == 2
