"""Experiment pipeline: instance sweeps, the gap ratio against the graph-metric
baseline, diagnostic aggregation, and report emission.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .instance import (
    DEFAULT_GIRTH_COEFFICIENT,
    TERMINAL_RULE_PREFIX,
    build_instance,
    instance_diagnostics,
    terminal_count,
)
from .io import solution_to_doc
from .solution import case_diagnostics, unfriendly_edge_count, zero_extension_solution
from .solvers import (
    SolveBudget,
    brute_canonical,
    brute_zero_ext,
    local_search_canonical,
    lp_feasible_value,
)

OUT_DIR_ENV = "ZEL_OUT_DIR"

METHOD_LOCAL = "local"
METHOD_BRUTE_CANONICAL = "brute-canonical"
METHOD_BRUTE_ZERO_EXT = "brute-0ext"


def size_function(k: int, epsilon: float, size_constant: float = 1.0) -> int:
    """Cluster budget: ceil(C * k * (log2 k)^(1 - epsilon)), never below k."""
    if k < 2:
        raise ValueError("size function needs k >= 2")
    value = math.ceil(size_constant * k * math.log2(k) ** (1.0 - epsilon))
    return max(value, k)


@dataclass
class ExperimentConfig:
    """Sweep parameters; defaults follow the construction's standard values."""

    n_values: list = field(default_factory=lambda: [256, 1024, 4096])
    seeds: list = field(default_factory=lambda: [0, 1, 2, 3, 4])
    girth_coefficient: float = DEFAULT_GIRTH_COEFFICIENT
    epsilon: float = 0.5
    size_constant: float = 1.0
    method: str = METHOD_LOCAL
    budget: SolveBudget = field(default_factory=SolveBudget)
    terminal_rule: str = TERMINAL_RULE_PREFIX
    radii: tuple = (1.0, 2.0, 3.0)
    out_dir: Optional[str] = None

    def __post_init__(self):
        if not (0 < self.epsilon < 1):
            raise ValueError("epsilon must lie strictly between 0 and 1")
        if not self.n_values or not self.seeds:
            raise ValueError("n_values and seeds must be nonempty")
        if self.method not in (METHOD_LOCAL, METHOD_BRUTE_CANONICAL, METHOD_BRUTE_ZERO_EXT):
            raise ValueError(f"unknown method {self.method!r}")

    def resolved_out_dir(self) -> Optional[str]:
        return os.environ.get(OUT_DIR_ENV) or self.out_dir

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        """Parse a plain key=value config file; '#' starts a comment."""
        raw: dict = {}
        with open(path) as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"bad config line {line!r}")
                key, value = (s.strip() for s in line.split("=", 1))
                raw[key] = value
        kwargs: dict = {}
        budget_kwargs: dict = {}
        for key, value in raw.items():
            if key == "n_values":
                kwargs["n_values"] = [int(x) for x in value.split(",") if x.strip()]
            elif key == "seeds":
                kwargs["seeds"] = [int(x) for x in value.split(",") if x.strip()]
            elif key in ("girth_coefficient", "epsilon", "size_constant"):
                kwargs[key] = float(value)
            elif key == "method":
                kwargs["method"] = value
            elif key == "terminal_rule":
                kwargs["terminal_rule"] = value
            elif key == "radii":
                kwargs["radii"] = tuple(float(x) for x in value.split(",") if x.strip())
            elif key == "out_dir":
                kwargs["out_dir"] = value
            elif key in ("max_assignments", "max_iterations", "restarts", "seed"):
                budget_kwargs[key] = int(value)
            else:
                raise ValueError(f"unknown config key {key!r}")
        if budget_kwargs:
            kwargs["budget"] = SolveBudget(**budget_kwargs)
        return cls(**kwargs)


@dataclass
class GapRecord:
    """One (n, seed) outcome with the diagnostics that accompany it."""

    n: int
    k: int
    seed: int
    f_k: int
    lp_value: float = 0.0
    best_cost: float = 0.0
    ratio: float = 0.0
    failed: bool = False
    error: str = ""
    diagnostics: dict = field(default_factory=dict)
    solution_doc: Optional[dict] = None

    def to_row(self) -> dict:
        d = self.diagnostics
        return {
            "n": self.n,
            "k": self.k,
            "seed": self.seed,
            "f_k": self.f_k,
            "lp_value": self.lp_value,
            "best_cost": self.best_cost,
            "ratio": self.ratio,
            "failed": int(self.failed),
            "error": self.error,
            "girth": d.get("girth"),
            "diameter": d.get("diameter"),
            "removed_count": d.get("removed_count"),
            "conductance_lower": d.get("conductance_lower"),
            "conductance_upper": d.get("conductance_upper"),
            "case": d.get("case"),
            "flow_value": d.get("flow_value"),
            "unfriendly_r1": d.get("unfriendly_r1"),
            "unfriendly_r2": d.get("unfriendly_r2"),
            "unfriendly_r3": d.get("unfriendly_r3"),
        }


CSV_COLUMNS = [
    "n", "k", "seed", "f_k", "lp_value", "best_cost", "ratio", "failed", "error",
    "girth", "diameter", "removed_count", "conductance_lower", "conductance_upper",
    "case", "flow_value", "unfriendly_r1", "unfriendly_r2", "unfriendly_r3",
]


def _solve(inst, f_k: int, cfg: ExperimentConfig):
    if cfg.method == METHOD_LOCAL:
        res = local_search_canonical(inst, f_k, cfg.budget)
        return res.solution, res.cost
    if cfg.method == METHOD_BRUTE_CANONICAL:
        res = brute_canonical(inst, f_k, cfg.budget)
        return res.solution, res.cost
    res = brute_zero_ext(inst, cfg.budget)
    sol = zero_extension_solution(inst, res.assignment)
    return sol, res.cost


def run_gap_record(n: int, seed: int, cfg: ExperimentConfig) -> GapRecord:
    """Build one instance, solve it, and attach every diagnostic."""
    k = terminal_count(n)
    f_k = min(size_function(k, cfg.epsilon, cfg.size_constant), n)
    record = GapRecord(n=n, k=k, seed=seed, f_k=f_k)
    try:
        inst = build_instance(n, seed, cfg.girth_coefficient, cfg.terminal_rule)
        lp = lp_feasible_value(inst)
        solution, best_cost = _solve(inst, f_k, cfg)
        diag = instance_diagnostics(inst).to_dict()
        case = case_diagnostics(solution, inst)
        diag.update(
            {
                "case": case.case,
                "flow_value": case.flow_value,
                "packing_bound": case.packing_bound,
            }
        )
        for radius in cfg.radii:
            diag[f"unfriendly_r{int(radius)}"] = unfriendly_edge_count(
                solution, inst, radius
            )
        record.lp_value = lp
        record.best_cost = best_cost
        record.ratio = best_cost / lp if lp > 0 else 0.0
        record.diagnostics = diag
        record.solution_doc = solution_to_doc(solution)
    except Exception as exc:  # noqa: BLE001 - failed records stay in the sweep
        record.failed = True
        record.error = f"{type(exc).__name__}: {exc}"
    return record


def run_gap_experiment(cfg: ExperimentConfig) -> list:
    """Sweep every (n, seed), writing records incrementally when an output
    directory is configured so partial runs stay usable."""
    out_dir = cfg.resolved_out_dir()
    jsonl = None
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        jsonl = open(os.path.join(out_dir, "records.jsonl"), "w")
    records = []
    try:
        for n in cfg.n_values:
            for seed in cfg.seeds:
                record = run_gap_record(n, seed, cfg)
                records.append(record)
                if out_dir and record.solution_doc is not None:
                    sol_path = os.path.join(out_dir, f"solution_n{n}_s{seed}.json")
                    with open(sol_path, "w") as fh:
                        json.dump(record.solution_doc, fh)
                if jsonl:
                    doc = record.to_row()
                    doc["packing_bound"] = record.diagnostics.get("packing_bound")
                    jsonl.write(json.dumps(doc) + "\n")
                    jsonl.flush()
    finally:
        if jsonl:
            jsonl.close()
    return records


def summarize(records) -> dict:
    """Per-n mean and median ratios over the successful records."""
    by_n: dict = {}
    for r in records:
        if not r.failed:
            by_n.setdefault(r.n, []).append(r.ratio)
    summary = {}
    for n in sorted(by_n):
        ratios = np.array(by_n[n])
        summary[str(n)] = {
            "count": int(len(ratios)),
            "mean_ratio": float(ratios.mean()),
            "median_ratio": float(np.median(ratios)),
        }
    return summary


def trend_slope(records) -> float:
    """Least-squares slope of mean ratio against log2 log2 n."""
    summary = summarize(records)
    xs, ys = [], []
    for n_str, stats in summary.items():
        xs.append(math.log2(math.log2(int(n_str))))
        ys.append(stats["mean_ratio"])
    if len(xs) < 2:
        return 0.0
    x = np.array(xs)
    y = np.array(ys)
    x = x - x.mean()
    return float((x * (y - y.mean())).sum() / (x * x).sum())


def emit_report(records, out_dir: str) -> dict:
    """CSV of all records, a JSON summary of the successful ones, and a
    two-column data file of mean ratio by n. Returns the paths."""
    if not records:
        raise ValueError("no records to report")
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "records.csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for r in records:
            writer.writerow(r.to_row())
    summary = summarize(records)
    summary_doc = {
        "per_n": summary,
        "trend_slope_vs_loglog_n": trend_slope(records),
        "failed_records": sum(1 for r in records if r.failed),
    }
    json_path = os.path.join(out_dir, "summary.json")
    with open(json_path, "w") as fh:
        json.dump(summary_doc, fh, indent=2)
    dat_path = os.path.join(out_dir, "trend.dat")
    with open(dat_path, "w") as fh:
        for n_str in sorted(summary, key=int):
            fh.write(f"{n_str} {summary[n_str]['mean_ratio']}\n")
    return {"csv": csv_path, "summary": json_path, "trend": dat_path}
