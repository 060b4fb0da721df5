import csv
import json
import time


import setprune as sp
from setprune.cli import main


def _write_graph(tmp_path, kind="path", n=30, params=None, seed=0, name="g.txt"):
    path = tmp_path / name
    sp.write_edge_list(sp.generate(kind, n, params or {}, seed=seed), path)
    return path


def test_gen_writes_edges_and_metadata(tmp_path):
    out = tmp_path / "star.txt"
    rc = main(["gen", "--kind", "star", "--n", "7", "--out", str(out)])
    assert rc == 0
    assert out.exists()
    meta = json.loads((tmp_path / "star.txt.meta.json").read_text())
    assert meta["n"] == 7 and meta["m"] == 6


def test_prune_defaults_on_path_graph(tmp_path):
    graph = _write_graph(tmp_path)
    ids_file = tmp_path / "pruned.ids"
    report_file = tmp_path / "report.json"
    rc = main(["prune", "--graph", str(graph), "--objective", "coverage",
               "--pruner", "quickprune", "--kappa-min", "2", "--kappa-max", "8",
               "--out-ids", str(ids_file), "--out-report", str(report_file)])
    assert rc == 0
    report = json.loads(report_file.read_text())
    assert report["params"]["delta"] == 0.1
    assert report["params"]["epsilon"] == 0.1
    assert report["params"]["eta"] == 0.5
    assert report["n"] == 30
    assert report["pruned_size"] == len(sp.read_id_file(ids_file))
    assert set(report["per_budget_sizes"]) == {"8.0", "4.0", "2.0", "1.0"}


def test_prune_rejects_inverted_budget_range(tmp_path):
    graph = _write_graph(tmp_path)
    rc = main(["prune", "--graph", str(graph), "--pruner", "quickprune",
               "--kappa-min", "9", "--kappa-max", "3",
               "--out-ids", str(tmp_path / "i"), "--out-report", str(tmp_path / "r")])
    assert rc == 2


def test_prune_missing_graph_file_is_io_error(tmp_path):
    rc = main(["prune", "--graph", str(tmp_path / "absent.txt"),
               "--pruner", "quickprune", "--kappa-max", "5",
               "--out-ids", str(tmp_path / "i"), "--out-report", str(tmp_path / "r")])
    assert rc == 3


def test_prune_reports_are_deterministic_modulo_elapsed(tmp_path):
    graph = _write_graph(tmp_path, kind="erdos_renyi", n=60, params={"p": 0.1},
                         seed=4)
    reports = []
    ids_texts = []
    for tag in ("a", "b"):
        ids_file = tmp_path / f"{tag}.ids"
        report_file = tmp_path / f"{tag}.json"
        rc = main(["prune", "--graph", str(graph), "--objective", "influence",
                   "--pruner", "quickprune", "--kappa-max", "6",
                   "--seed", "13",
                   "--out-ids", str(ids_file), "--out-report", str(report_file)])
        assert rc == 0
        report = json.loads(report_file.read_text())
        report.pop("elapsed_seconds")
        report.pop("ids_file")  # the two runs intentionally write different paths
        reports.append(report)
        ids_texts.append(ids_file.read_bytes())
    assert reports[0] == reports[1]
    assert ids_texts[0] == ids_texts[1]


def test_prune_with_baselines(tmp_path):
    graph = _write_graph(tmp_path, kind="erdos_renyi", n=40, params={"p": 0.15},
                         seed=1)
    for pruner, extra in (("topk", ["--target-size", "10"]),
                          ("random", ["--target-size", "10"]),
                          ("ss", ["--r", "2", "--c", "4"])):
        ids_file = tmp_path / f"{pruner}.ids"
        rc = main(["prune", "--graph", str(graph), "--pruner", pruner,
                   "--out-ids", str(ids_file),
                   "--out-report", str(tmp_path / f"{pruner}.json")] + extra)
        assert rc == 0
        ids = sp.read_id_file(ids_file)
        assert ids <= set(range(40))
        if pruner != "ss":
            assert len(ids) == 10


def test_config_file_with_flag_override(tmp_path):
    graph = _write_graph(tmp_path)
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "graph": str(graph), "pruner": "quickprune-single", "kappa": 4,
        "delta": 0.2, "seed": 5,
    }))
    report_file = tmp_path / "r.json"
    rc = main(["prune", "--config", str(cfg), "--delta", "0.3",
               "--out-ids", str(tmp_path / "i.ids"),
               "--out-report", str(report_file)])
    assert rc == 0
    report = json.loads(report_file.read_text())
    assert report["params"]["delta"] == 0.3  # flag beats config
    assert report["params"]["seed"] == 5


def test_bad_config_json_is_config_error(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("{not json")
    rc = main(["prune", "--config", str(cfg), "--out-ids", "x", "--out-report", "y"])
    assert rc == 2


def test_solve_writes_solution(tmp_path):
    graph = _write_graph(tmp_path, kind="star", n=9)
    out = tmp_path / "sol.json"
    rc = main(["solve", "--graph", str(graph), "--objective", "coverage",
               "--budget", "1", "--out", str(out)])
    assert rc == 0
    sol = json.loads(out.read_text())
    assert sol["ids"] == [0] and sol["value"] == 9


def test_eval_identity_pruning_row(tmp_path):
    graph = _write_graph(tmp_path, n=20)
    ids_file = tmp_path / "all.ids"
    sp.write_id_file(range(20), ids_file)
    out = tmp_path / "eval.csv"
    rc = main(["eval", "--graph", str(graph), "--ids", str(ids_file),
               "--budget", "3", "--out", str(out)])
    assert rc == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert len(rows) == 1
    assert float(rows[0]["p_g"]) == 0.0
    assert float(rows[0]["p_r"]) == 1.0


def test_eval_missing_ids_file_is_io_error(tmp_path):
    graph = _write_graph(tmp_path)
    rc = main(["eval", "--graph", str(graph), "--ids", str(tmp_path / "gone.ids"),
               "--budget", "3", "--out", str(tmp_path / "o.csv")])
    assert rc == 3


def test_sweep_emits_one_row_per_budget(tmp_path):
    graph = _write_graph(tmp_path, kind="erdos_renyi", n=50, params={"p": 0.1},
                         seed=2)
    ids_file = tmp_path / "p.ids"
    sp.write_id_file(range(0, 50, 2), ids_file)
    out = tmp_path / "sweep.csv"
    budgets = [str(b) for b in range(10, 101, 10)]
    rc = main(["sweep", "--graph", str(graph), "--ids", str(ids_file),
               "--budgets", *budgets, "--out", str(out),
               "--out-jsonl", str(tmp_path / "sweep.jsonl")])
    assert rc == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert len(rows) == 10
    assert [float(r["budget"]) for r in rows] == [float(b) for b in budgets]
    assert len((tmp_path / "sweep.jsonl").read_text().splitlines()) == 10


def test_bounds_prints_closed_forms(capsys):
    rc = main(["bounds", "--n", "1000", "--kappa", "100", "--delta", "1",
               "--epsilon", "0", "--gamma", "1", "--c-min", "1"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "alpha_multi" in out and f"{1 / 24:.6f}" in out
    assert f"{1 / 8:.6f}" in out


def test_bounds_vanishing_retention_at_epsilon_equals_gamma(capsys):
    rc = main(["bounds", "--n", "100", "--kappa", "10", "--delta", "0.5",
               "--epsilon", "0.8", "--gamma", "0.8"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "0.000000" in out


def test_bounds_size_value(capsys):
    rc = main(["bounds", "--n", "1000", "--kappa", "100", "--delta", "0.1",
               "--epsilon", "0.1", "--c-min", "1"])
    assert rc == 0
    expect = 2 * (1 + 100 / 0.1) * __import__("math").log(10000) + 3
    assert f"{expect:.2f}" in capsys.readouterr().out


def test_bounds_bad_params_exit_code():
    rc = main(["bounds", "--n", "1000", "--kappa", "100", "--delta", "1",
               "--epsilon", "2", "--gamma", "1"])
    assert rc == 2


def test_coverage_eval_on_midsize_graph_is_fast(tmp_path):
    # the CLI pipeline on a few-thousand-node instance stays well inside
    # interactive time
    graph = _write_graph(tmp_path, kind="barabasi_albert", n=2000,
                         params={"m_attach": 8}, seed=3, name="ba.txt")
    ids_file = tmp_path / "p.ids"
    report_file = tmp_path / "r.json"
    start = time.monotonic()
    assert main(["prune", "--graph", str(graph), "--pruner", "quickprune",
                 "--kappa-min", "10", "--kappa-max", "100",
                 "--out-ids", str(ids_file), "--out-report", str(report_file)]) == 0
    assert main(["eval", "--graph", str(graph), "--ids", str(ids_file),
                 "--budget", "100", "--out", str(tmp_path / "e.csv")]) == 0
    assert time.monotonic() - start < 60
