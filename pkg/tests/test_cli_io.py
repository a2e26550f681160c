import json

import numpy as np
import pytest

from zel.cli import main
from zel.graph import Graph
from zel.instance import Instance, build_instance
from zel.io import (
    load_instance,
    load_solution,
    read_edge_list,
    save_instance,
    save_solution,
    solution_from_doc,
    solution_to_doc,
    write_edge_list,
)
from zel.metricspace import SemiMetric
from zel.solution import CanonicalSolution, Partition, Solution, canonical_cost


class TestEdgeList:
    def test_round_trip(self, tmp_path):
        g = Graph(4, [(0, 1, 1.5, 2.0), (1, 2), (2, 3, 1.0, 1.0), (0, 3)])
        path = str(tmp_path / "g.txt")
        write_edge_list(g, path)
        again = read_edge_list(path)
        assert again == g

    def test_comments_and_defaults(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("# a graph\n3 2\n0 1\n1 2 2.0\n")
        g = read_edge_list(str(path))
        assert g.m == 2
        assert g.edges[1][2] == 2.0 and g.edges[0][3] == 1.0

    def test_header_mismatch(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("3 5\n0 1\n")
        with pytest.raises(ValueError):
            read_edge_list(str(path))


class TestInstanceIO:
    def test_generated_round_trip(self, tmp_path):
        inst = build_instance(64, seed=3, girth_coefficient=0.5)
        path = str(tmp_path / "inst.txt")
        save_instance(inst, path)
        again = load_instance(path)
        assert again == inst
        assert again.raw_graph == inst.raw_graph

    def test_custom_round_trip(self, tmp_path):
        g = Graph(3, [(0, 1), (1, 2)])
        inst = Instance.from_graph(g, [0, 2])
        path = str(tmp_path / "c.txt")
        save_instance(inst, path)
        again = load_instance(path)
        assert again.graph == inst.graph
        assert again.raw_graph == inst.graph


class TestSolutionIO:
    def test_canonical_round_trip(self, tmp_path):
        inst = build_instance(32, seed=0)
        cs = CanonicalSolution(
            partition=Partition(list(range(inst.n))), centers=tuple(range(inst.n))
        )
        path = str(tmp_path / "sol.json")
        save_solution(cs, path)
        again = load_solution(path, inst)
        assert isinstance(again, CanonicalSolution)
        assert again.centers == cs.centers
        assert canonical_cost(again, inst) == canonical_cost(cs, inst)

    def test_explicit_delta_round_trip(self, tmp_path):
        g = Graph(3, [(0, 1), (1, 2)])
        inst = Instance.from_graph(g, [0, 2])
        sol = Solution(
            partition=Partition([0, 2, 1]),
            delta=SemiMetric([[0, 2, 1], [2, 0, 1], [1, 1, 0]]),
        )
        path = str(tmp_path / "sol2.json")
        save_solution(sol, path)
        again = load_solution(path, inst)
        assert isinstance(again, Solution)
        assert np.array_equal(again.delta.matrix, sol.delta.matrix)


class TestCli:
    def test_gen_diagnose_solve_project(self, tmp_path, capsys):
        inst_path = str(tmp_path / "i.txt")
        assert main(["gen", "--n", "32", "--seed", "1", "--out", inst_path]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["n"] == 32 and out["girth_threshold_ok"]

        assert main(["diagnose", "--instance", inst_path]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["removed_vs_n03"]

        sol_path = str(tmp_path / "s.json")
        rc = main(
            [
                "solve", "--instance", inst_path, "--method", "local",
                "--restarts", "1", "--iterations", "200", "--out", sol_path,
            ]
        )
        assert rc == 0
        solved = json.loads(capsys.readouterr().out)
        assert solved["cost"] > 0

        rc = main(["solve", "--instance", inst_path, "--eval", sol_path])
        assert rc == 0
        scored = json.loads(capsys.readouterr().out)
        assert scored["cost"] == pytest.approx(solved["cost"])

        proj_path = str(tmp_path / "p.jsonl")
        assert main(["project", "--instance", inst_path, "--out", proj_path]) == 0
        rows = [json.loads(line) for line in open(proj_path)]
        assert len(rows) == 32
        assert all(r["member"] for r in rows)

    def test_metric_diagnose(self, tmp_path, capsys):
        good = tmp_path / "m.json"
        good.write_text(json.dumps([[0, 1], [1, 0]]))
        assert main(["diagnose", "--metric", str(good)]) == 0
        bad = tmp_path / "b.json"
        bad.write_text(json.dumps([[0, 1, 3], [1, 0, 1], [3, 1, 0]]))
        assert main(["diagnose", "--metric", str(bad)]) == 1
        out = capsys.readouterr().out.strip().splitlines()
        assert json.loads(out[-1])["violation"] == [0, 2, 1]

    def test_embed_girth_cli(self, tmp_path, capsys):
        inst_path = str(tmp_path / "i.txt")
        main(["gen", "--n", "64", "--seed", "0", "--girth-coeff", "0.5", "--out", inst_path])
        capsys.readouterr()
        out_path = str(tmp_path / "e.jsonl")
        rc = main(
            [
                "embed", "--instance", inst_path, "--mode", "girth",
                "--samples", "3", "--seed", "7", "--out", out_path,
            ]
        )
        assert rc == 0
        rows = [json.loads(line) for line in open(out_path)]
        assert len(rows) == 3
        for row in rows:
            assert row["violated_claims"] == []
            assert row["r"] > 0

    def test_embed_tree_cli(self, tmp_path, capsys):
        # hand-build a tree instance
        g = Graph(4, [(0, 3), (1, 3), (2, 3)])
        inst = Instance.from_graph(g, [0, 1, 2])
        inst_path = str(tmp_path / "t.txt")
        save_instance(inst, inst_path)
        rc = main(["embed", "--instance", inst_path, "--mode", "tree", "--seed", "1"])
        assert rc == 0
        row = json.loads(capsys.readouterr().out)
        for pair in row["pair_ratios"]:
            if pair["ratio"] is not None:
                assert pair["ratio"] <= 1 + 1e-9

    def test_gap_cli(self, tmp_path, capsys, monkeypatch):
        monkeypatch.delenv("ZEL_OUT_DIR", raising=False)
        cfg = tmp_path / "cfg.txt"
        cfg.write_text(
            "n_values = 32\nseeds = 0\nmethod = local\n"
            "max_iterations = 100\nrestarts = 1\n"
            f"out_dir = {tmp_path / 'out'}\n"
        )
        assert main(["gap", str(cfg)]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["records"] == 1 and doc["failed"] == 0
