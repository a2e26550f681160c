"""Serialization: the edge-list interchange format, instance sidecars, and
solution JSON.

Edge-list format: first non-comment line is "n m", then m lines
"u v length capacity". Lines starting with '#' are comments. The instance
sidecar is a JSON file next to the edge list carrying terminals, the terminal
metric, the seed, the removal log, and optional generator parameters that let
the loader rebuild the raw pre-removal graph.
"""

from __future__ import annotations

import json
import os
from typing import Optional

import numpy as np

from .graph import Graph
from .instance import Instance, sample_union_graph
from .metricspace import SemiMetric
from .solution import CanonicalSolution, Partition, Solution


def write_edge_list(g: Graph, path: str):
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for u, v, length, cap in g.edges:
            fh.write(f"{u} {v} {length!r} {cap!r}\n")


def read_edge_list(path: str) -> Graph:
    header: Optional[tuple] = None
    edges = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if header is None:
                if len(parts) != 2:
                    raise ValueError(f"bad header line {line!r}")
                header = (int(parts[0]), int(parts[1]))
                continue
            if len(parts) < 2:
                raise ValueError(f"bad edge line {line!r}")
            u, v = int(parts[0]), int(parts[1])
            length = float(parts[2]) if len(parts) > 2 else 1.0
            cap = float(parts[3]) if len(parts) > 3 else 1.0
            edges.append((u, v, length, cap))
    if header is None:
        raise ValueError("empty edge list file")
    n, m = header
    if len(edges) != m:
        raise ValueError(f"header promised {m} edges, file has {len(edges)}")
    return Graph(n, edges)


def sidecar_path(path: str) -> str:
    return path + ".json"


def save_instance(inst: Instance, path: str, diagnostics: Optional[dict] = None):
    """Write the graph as an edge list plus a JSON sidecar."""
    write_edge_list(inst.graph, path)
    doc = {
        "n": inst.n,
        "seed": inst.seed,
        "terminals": list(inst.terminals),
        "terminal_rule": inst.terminal_rule,
        "D": inst.terminal_metric.matrix.tolist(),
        "removal_log": list(inst.removal_log),
        "girth_threshold": inst.girth_threshold,
        "generated": inst.raw_graph is not inst.graph or bool(inst.removal_log),
    }
    if diagnostics is not None:
        doc["diagnostics"] = diagnostics
    with open(sidecar_path(path), "w") as fh:
        json.dump(doc, fh)


def load_instance(path: str) -> Instance:
    """Rebuild an instance from an edge list and its sidecar.

    Generated instances rebuild the raw graph by replaying the seeded sampler;
    hand-written instances treat the graph as its own raw graph.
    """
    graph = read_edge_list(path)
    with open(sidecar_path(path)) as fh:
        doc = json.load(fh)
    if doc.get("generated"):
        raw = sample_union_graph(doc["n"], doc["seed"])
    else:
        raw = graph
    inst = Instance(
        graph=graph,
        raw_graph=raw,
        terminals=tuple(doc["terminals"]),
        terminal_metric=SemiMetric(np.array(doc["D"])),
        seed=doc["seed"],
        removal_log=tuple(doc["removal_log"]),
        girth_threshold=doc.get("girth_threshold", 0.0),
        terminal_rule=doc.get("terminal_rule", "prefix"),
    )
    return inst


def solution_to_doc(sol) -> dict:
    """JSON document for a Solution or CanonicalSolution."""
    if isinstance(sol, CanonicalSolution):
        return {
            "assignment": [int(a) for a in sol.partition.assignment],
            "delta": "canonical",
            "centers": list(sol.centers),
        }
    return {
        "assignment": [int(a) for a in sol.partition.assignment],
        "delta": sol.delta.matrix.tolist(),
        "centers": None,
    }


def solution_from_doc(doc: dict, inst: Optional[Instance] = None):
    """Rebuild a solution; canonical documents need the instance for delta."""
    partition = Partition(doc["assignment"])
    if doc["delta"] == "canonical":
        cs = CanonicalSolution(partition=partition, centers=tuple(doc["centers"]))
        return cs
    return Solution(partition=partition, delta=SemiMetric(np.array(doc["delta"])))


def save_solution(sol, path: str):
    with open(path, "w") as fh:
        json.dump(solution_to_doc(sol), fh)


def load_solution(path: str, inst: Optional[Instance] = None):
    with open(path) as fh:
        return solution_from_doc(json.load(fh), inst)
