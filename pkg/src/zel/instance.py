"""Construction of the hard instances: permutation-union expanders with short
cycles removed, a designated terminal set, and the terminal shortest-path
metric. Everything is deterministic under the seed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DisconnectedGraph, InvalidN, NoRemovableEdge
from .graph import (
    BfsTree,
    Graph,
    bfs_tree,
    conductance_estimate,
    diameter,
    girth,
    min_cycle,
)
from .metricspace import SemiMetric

DEFAULT_GIRTH_COEFFICIENT = 0.01

TERMINAL_RULE_PREFIX = "prefix"
TERMINAL_RULE_RANDOM = "random-subset"


def terminal_count(n: int) -> int:
    """Number of terminals for an n-vertex instance: ceil(n loglog n / log n),
    logs base 2."""
    if n < 16:
        raise InvalidN(f"n = {n} < 16")
    return math.ceil(n * math.log2(math.log2(n)) / math.log2(n))


def _union_edges(n: int, rng: random.Random) -> list:
    edges = []
    for _ in range(3):
        perm = list(range(n))
        rng.shuffle(perm)
        for v in range(n):
            edges.append((v, perm[v], 1.0, 1.0))
    return edges


def sample_union_graph(n: int, seed: int) -> Graph:
    """Union of the edge sets of three uniformly random permutations of [0, n).

    Each permutation sigma contributes the multiset {(v, sigma(v))}; self-loops
    (fixed points) are dropped by the Graph constructor and counted. Sampling
    is Fisher-Yates via random.Random(seed).shuffle, three draws in sequence,
    so the multigraph is reproducible from the seed alone.
    """
    if n < 4:
        raise ValueError("need n >= 4")
    return Graph(n, _union_edges(n, random.Random(seed)))


def remove_short_cycles(g: Graph, threshold: float, tree: BfsTree):
    """Delete non-tree edges until no cycle of weight at most threshold remains.

    At each step the shortest violating cycle is located by the deterministic
    scan of min_cycle (roots in ascending id order) and the non-tree edge of
    largest id on that cycle is removed. Edge ids in the result refer to g via
    the returned removal log: surviving edges keep their relative order, and
    removed ids are ids of g.

    Returns (new graph, list of removed edge ids of g).
    """
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    tree_ids = tree.edge_ids()
    alive = list(range(g.m))
    removed: list = []
    while True:
        work = Graph(g.n, [g.edges[i] for i in alive])
        found = min_cycle(work, cap=threshold)
        if found is None:
            return work, removed
        _, cyc_local = found
        cyc_raw = [alive[e] for e in cyc_local]
        non_tree = [e for e in cyc_raw if e not in tree_ids]
        if not non_tree:
            raise NoRemovableEdge(f"cycle {sorted(cyc_raw)} lies entirely in the tree")
        victim = max(non_tree)
        removed.append(victim)
        alive.remove(victim)


@dataclass(eq=False)
class Instance:
    """A problem instance: graph G, raw graph G' it was pruned from, ordered
    terminals, and the terminal shortest-path metric of G."""

    graph: Graph
    raw_graph: Graph
    terminals: tuple
    terminal_metric: SemiMetric
    seed: int
    removal_log: tuple
    girth_threshold: float = 0.0
    terminal_rule: str = TERMINAL_RULE_PREFIX
    _terminal_rows: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def k(self) -> int:
        return len(self.terminals)

    def terminal_index(self, vertex: int) -> Optional[int]:
        try:
            return self.terminals.index(vertex)
        except ValueError:
            return None

    def terminal_rows(self) -> np.ndarray:
        """k x n matrix of distances from each terminal to every vertex of G."""
        if self._terminal_rows is None:
            rows = self.graph.dist_rows(list(self.terminals), cache=True)
            if np.isinf(rows).any():
                raise DisconnectedGraph("instance graph is disconnected")
            rows.flags.writeable = False
            self._terminal_rows = rows
        return self._terminal_rows

    def __eq__(self, other):
        return (
            isinstance(other, Instance)
            and self.graph == other.graph
            and self.raw_graph == other.raw_graph
            and self.terminals == other.terminals
            and self.terminal_metric == other.terminal_metric
            and self.removal_log == other.removal_log
            and self.seed == other.seed
        )

    @classmethod
    def from_graph(cls, graph: Graph, terminals, raw_graph: Optional[Graph] = None, seed: int = 0):
        """Wrap an arbitrary connected graph as an instance (for tests and IO)."""
        terminals = tuple(int(t) for t in terminals)
        if len(set(terminals)) != len(terminals):
            raise ValueError("terminals must be distinct")
        rows = graph.dist_rows(list(terminals), cache=True)
        if np.isinf(rows).any():
            raise DisconnectedGraph("graph is disconnected")
        metric = SemiMetric(rows[:, list(terminals)])
        inst = cls(
            graph=graph,
            raw_graph=raw_graph if raw_graph is not None else graph,
            terminals=terminals,
            terminal_metric=metric,
            seed=seed,
            removal_log=(),
        )
        return inst


def build_instance(
    n: int,
    seed: int,
    girth_coefficient: float = DEFAULT_GIRTH_COEFFICIENT,
    terminal_rule: str = TERMINAL_RULE_PREFIX,
) -> Instance:
    """Full instance construction.

    Samples the permutation-union graph, computes its BFS tree from vertex 0,
    removes cycles of weight at most girth_coefficient * log2(n), picks k
    terminals by the given rule, and fills the terminal metric with k
    single-source computations. Fails with DisconnectedGraph if the sampled
    graph is disconnected; callers retry with the next seed.
    """
    if n < 16:
        raise InvalidN(f"n = {n} < 16")
    if girth_coefficient <= 0:
        raise ValueError("girth coefficient must be positive")
    k = terminal_count(n)
    rng = random.Random(seed)
    raw = Graph(n, _union_edges(n, rng))

    tree = bfs_tree(raw, 0)  # raises DisconnectedGraph on a bad sample
    threshold = girth_coefficient * math.log2(n)
    graph, removed = remove_short_cycles(raw, threshold, tree)

    if terminal_rule == TERMINAL_RULE_PREFIX:
        terminals = tuple(range(k))
    elif terminal_rule == TERMINAL_RULE_RANDOM:
        terminals = tuple(sorted(rng.sample(range(n), k)))
    else:
        raise ValueError(f"unknown terminal rule {terminal_rule!r}")

    rows = graph.dist_rows(list(terminals), cache=True)
    if np.isinf(rows).any():
        raise DisconnectedGraph("graph disconnected after removal")
    metric = SemiMetric(rows[:, list(terminals)])
    inst = Instance(
        graph=graph,
        raw_graph=raw,
        terminals=terminals,
        terminal_metric=metric,
        seed=seed,
        removal_log=tuple(removed),
        girth_threshold=threshold,
        terminal_rule=terminal_rule,
    )
    inst._terminal_rows = rows
    rows.flags.writeable = False
    return inst


@dataclass(frozen=True)
class InstanceDiagnostics:
    """Structural health report of a generated instance."""

    girth: float
    girth_threshold: float
    girth_threshold_ok: bool
    removed_count: int
    removed_budget: float  # n ** 0.3
    removed_vs_n03: bool
    diameter: float
    diameter_over_log: float
    conductance_lower: float
    conductance_upper: float

    def to_dict(self) -> dict:
        return {
            "girth": self.girth if math.isfinite(self.girth) else None,
            "girth_threshold": self.girth_threshold,
            "girth_threshold_ok": self.girth_threshold_ok,
            "removed_count": self.removed_count,
            "removed_budget": self.removed_budget,
            "removed_vs_n03": self.removed_vs_n03,
            "diameter": self.diameter,
            "diameter_over_log": self.diameter_over_log,
            "conductance_lower": self.conductance_lower,
            "conductance_upper": self.conductance_upper,
        }


def instance_diagnostics(inst: Instance, exact_threshold: int = 20) -> InstanceDiagnostics:
    """Girth vs threshold, removal count vs n^0.3, diameter over log2 n, and
    the conductance interval of the raw graph."""
    n = inst.n
    g = girth(inst.graph)
    diam = diameter(inst.graph)
    lo, hi = conductance_estimate(inst.raw_graph, exact_threshold=exact_threshold)
    budget = n ** 0.3
    return InstanceDiagnostics(
        girth=g,
        girth_threshold=inst.girth_threshold,
        girth_threshold_ok=g > inst.girth_threshold,
        removed_count=len(inst.removal_log),
        removed_budget=budget,
        removed_vs_n03=len(inst.removal_log) <= budget,
        diameter=diam,
        diameter_over_log=diam / math.log2(n) if n > 1 else 0.0,
        conductance_lower=lo,
        conductance_upper=hi,
    )
