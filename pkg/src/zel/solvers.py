"""Solvers: the fractional graph-metric baseline, exhaustive oracles for tiny
instances, and a first-improvement local search over canonical solutions.
"""

from __future__ import annotations

import heapq
import itertools
import math
import random
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import BudgetExceeded, DisconnectedGraph, EPS
from .graph import Graph
from .instance import Instance
from .solution import CanonicalSolution, Partition


@dataclass(frozen=True)
class SolveBudget:
    """Caps for the exhaustive and local searches."""

    max_assignments: int = 10_000_000
    max_iterations: int = 100_000
    restarts: int = 8
    seed: int = 0

    def __post_init__(self):
        if self.max_assignments <= 0 or self.max_iterations <= 0 or self.restarts <= 0:
            raise ValueError("budget limits must be positive")


def lp_feasible_value(inst: Instance) -> float:
    """Cost of the graph metric itself: sum of capacity times endpoint distance.

    On unit instances this equals the edge count. It upper-bounds the optimum
    of the relaxation and is the denominator of the gap ratio.
    """
    g = inst.graph
    if not g.is_connected():
        raise DisconnectedGraph("baseline undefined on a disconnected graph")
    if g.m == 0:
        return 0.0
    unit = g.uniform_length
    caps = g.capacities()
    if unit is not None:
        # adjacent distinct vertices are exactly one edge length apart
        return float(unit * caps.sum())
    by_source: dict = {}
    for eid, (u, v, _, _) in enumerate(g.edges):
        by_source.setdefault(u, []).append((eid, v))
    total = 0.0
    for u, pairs in by_source.items():
        row = g.dist_row(u)
        for eid, v in pairs:
            total += caps[eid] * row[v]
    return float(total)


@dataclass(frozen=True)
class ZeroExtResult:
    assignment: tuple  # terminal index per vertex
    cost: float


def brute_zero_ext(inst: Instance, budget: Optional[SolveBudget] = None) -> ZeroExtResult:
    """Globally optimal 0-extension by exhaustive enumeration.

    Terminals are pinned to themselves; all maps of the remaining vertices
    onto terminals are scanned in lexicographic order and the first minimum
    is kept.
    """
    budget = budget or SolveBudget()
    k = inst.k
    term_index = {t: i for i, t in enumerate(inst.terminals)}
    free = [v for v in range(inst.n) if v not in term_index]
    required = k ** len(free)
    if required > budget.max_assignments:
        raise BudgetExceeded(required, budget.max_assignments)
    D = inst.terminal_metric.matrix
    edges = [(u, v, c) for u, v, _, c in inst.graph.edges]
    f = [0] * inst.n
    for t, i in term_index.items():
        f[t] = i
    best_cost = math.inf
    best = None
    for combo in itertools.product(range(k), repeat=len(free)):
        for v, ti in zip(free, combo):
            f[v] = ti
        c = 0.0
        for u, v, cap in edges:
            c += cap * D[f[u], f[v]]
        if c < best_cost - EPS:
            best_cost = c
            best = tuple(f)
    return ZeroExtResult(assignment=best, cost=float(best_cost))


@dataclass(frozen=True)
class CanonicalResult:
    solution: CanonicalSolution
    cost: float
    enumerated: int


def brute_canonical(
    inst: Instance, f_k: int, budget: Optional[SolveBudget] = None
) -> CanonicalResult:
    """Minimum-cost canonical solution with at most f_k clusters, by scanning
    every center set containing the terminals and every assignment.

    Assignments that leave a cluster empty are skipped; any such optimum is
    matched by the same assignment under the reduced center set, which is also
    scanned. With f_k equal to the terminal count this is exactly the
    0-extension search.
    """
    budget = budget or SolveBudget()
    k = inst.k
    if f_k < k:
        raise ValueError(f"f_k = {f_k} below the terminal count {k}")
    term_set = set(inst.terminals)
    free = [v for v in range(inst.n) if v not in term_set]
    extra_max = min(f_k - k, len(free))
    required = 0
    for s in range(extra_max + 1):
        required += math.comb(len(free), s) * (k + s) ** len(free)
    if required > budget.max_assignments:
        raise BudgetExceeded(required, budget.max_assignments)

    best_cost = math.inf
    best = None
    enumerated = 0
    caps = [(u, v, c) for u, v, _, c in inst.graph.edges]
    for s in range(extra_max + 1):
        for extra in itertools.combinations(free, s):
            centers = tuple(inst.terminals) + extra
            L = len(centers)
            rows = inst.graph.dist_rows(list(centers), cache=True)
            delta = rows[:, list(centers)]
            assign = [0] * inst.n
            for i, t in enumerate(inst.terminals):
                assign[t] = i
            for combo in itertools.product(range(L), repeat=len(free)):
                enumerated += 1
                for v, cl in zip(free, combo):
                    assign[v] = cl
                present = set(assign)
                if len(present) != L:
                    continue
                c = 0.0
                for u, v, cap in caps:
                    c += cap * delta[assign[u], assign[v]]
                if c < best_cost - EPS:
                    best_cost = c
                    best = (list(assign), centers)
    assignment, centers = best
    sol = CanonicalSolution(partition=Partition(assignment), centers=centers)
    return CanonicalResult(solution=sol, cost=float(best_cost), enumerated=enumerated)


# -- local search -------------------------------------------------------------


@dataclass(frozen=True)
class LocalSearchResult:
    solution: CanonicalSolution
    cost: float
    initial_cost: float
    moves_applied: int
    restarts_run: int


class _SearchState:
    """Mutable search state: centers, assignment, center-distance matrix, cost."""

    def __init__(self, inst: Instance, centers: Sequence[int]):
        self.inst = inst
        self.centers = list(centers)
        self.L = len(centers)
        self.terminal_set = set(inst.terminals)
        self.is_terminal_cluster = [c in self.terminal_set for c in self.centers]
        rows = inst.graph.dist_rows(self.centers, cache=False)
        self.delta = np.ascontiguousarray(rows[:, self.centers])
        self.assign = self._nearest_center_assignment()
        g = inst.graph
        self.edge_u = np.fromiter((e[0] for e in g.edges), dtype=np.int64, count=g.m)
        self.edge_v = np.fromiter((e[1] for e in g.edges), dtype=np.int64, count=g.m)
        self.edge_c = g.capacities()
        self.cost = self._full_cost()

    def _nearest_center_assignment(self) -> np.ndarray:
        """Multi-source Dijkstra; ties go to the smaller center vertex id.

        Keys (distance, cluster index) are monotone along relaxations, so the
        first pop of a vertex carries its nearest center with the smallest
        index among equally-near ones. Centers are in ascending vertex order,
        so smaller index means smaller center id.
        """
        inst = self.inst
        owner = [-1] * inst.n
        heap = [(0.0, idx, c) for idx, c in enumerate(self.centers)]
        heapq.heapify(heap)
        while heap:
            d, idx, v = heapq.heappop(heap)
            if owner[v] != -1:
                continue
            owner[v] = idx
            for eid, w in inst.graph.adj[v]:
                if owner[w] == -1:
                    heapq.heappush(heap, (d + inst.graph.edges[eid][2], idx, w))
        return np.array(owner, dtype=np.int64)

    def _full_cost(self) -> float:
        return float(
            (self.edge_c * self.delta[self.assign[self.edge_u], self.assign[self.edge_v]]).sum()
        )

    # vertex reassignment -----------------------------------------------

    def reassign_deltas(self, v: int) -> Optional[np.ndarray]:
        """Cost change for moving v into every cluster; None for isolated v."""
        inst = self.inst
        nbrs = inst.graph.adj[v]
        if not nbrs:
            return None
        cols = self.assign[[w for _, w in nbrs]]
        caps = np.array([inst.graph.edges[e][3] for e, _ in nbrs])
        incident = self.delta[:, cols] @ caps  # cost of v's edges per target
        return incident - incident[self.assign[v]]

    def apply_reassign(self, v: int, target: int, gain: float):
        self.assign[v] = target
        self.cost += gain

    # center swap ---------------------------------------------------------

    def cluster_incidence(self, j: int) -> tuple:
        """(cluster ids, capacities) of edges leaving cluster j."""
        fu = self.assign[self.edge_u]
        fv = self.assign[self.edge_v]
        mask_u = (fu == j) & (fv != j)
        mask_v = (fv == j) & (fu != j)
        others = np.concatenate([fv[mask_u], fu[mask_v]])
        caps = np.concatenate([self.edge_c[mask_u], self.edge_c[mask_v]])
        return others, caps

    def apply_swap(self, j: int, w: int, row_w: np.ndarray, gain: float):
        self.centers[j] = w
        col = row_w[self.centers]
        self.delta[j, :] = col
        self.delta[:, j] = col
        self.delta[j, j] = 0.0
        self.cost += gain

    def to_solution(self) -> CanonicalSolution:
        """Drop empty clusters and reindex densely."""
        present = sorted(set(int(a) for a in self.assign))
        remap = {old: new for new, old in enumerate(present)}
        assignment = [remap[int(a)] for a in self.assign]
        centers = tuple(self.centers[old] for old in present)
        return CanonicalSolution(partition=Partition(assignment), centers=centers)


def _eccentricity_order(inst: Instance) -> list:
    """Non-terminal vertices sorted by falling BFS eccentricity, then id."""
    g = inst.graph
    ecc = np.zeros(g.n)
    chunk = 512
    for lo in range(0, g.n, chunk):
        rows = g._raw_rows(range(lo, min(lo + chunk, g.n)))
        ecc[lo : lo + rows.shape[0]] = rows.max(axis=1)
    term_set = set(inst.terminals)
    order = [v for v in range(g.n) if v not in term_set]
    order.sort(key=lambda v: (-ecc[v], v))
    return order


def local_search_canonical(
    inst: Instance, f_k: int, budget: Optional[SolveBudget] = None
) -> LocalSearchResult:
    """First-improvement local search over canonical solutions.

    The first restart starts from the terminals plus the highest-eccentricity
    non-terminals as centers, vertices assigned to the nearest center (ties to
    the smaller center id). Later restarts use random extra centers. Moves are
    single-vertex reassignments and swaps of a non-terminal center with a
    non-center vertex, scanned in an order shuffled by the per-restart RNG;
    cost is monotone non-increasing and the best restart wins.
    """
    budget = budget or SolveBudget()
    k = inst.k
    if f_k < k:
        raise ValueError(f"f_k = {f_k} below terminal count {k}")
    f_k = min(f_k, inst.n)
    term_set = set(inst.terminals)
    ecc_order = _eccentricity_order(inst) if f_k > k else []
    non_terminals = [v for v in range(inst.n) if v not in term_set]

    best: Optional[LocalSearchResult] = None
    for restart in range(budget.restarts):
        rng = random.Random(budget.seed * 1_000_003 + restart)
        if restart == 0:
            extra = ecc_order[: f_k - k]
        else:
            extra = rng.sample(non_terminals, f_k - k) if f_k > k else []
        centers = sorted(set(inst.terminals) | set(extra))
        state = _SearchState(inst, centers)
        initial = state.cost
        moves = _improve(state, rng, budget.max_iterations)
        result = LocalSearchResult(
            solution=state.to_solution(),
            cost=state.cost,
            initial_cost=initial,
            moves_applied=moves,
            restarts_run=restart + 1,
        )
        if best is None or result.cost < best.cost - EPS:
            best = result
    return LocalSearchResult(
        solution=best.solution,
        cost=best.cost,
        initial_cost=best.initial_cost,
        moves_applied=best.moves_applied,
        restarts_run=budget.restarts,
    )


def _improve(state: _SearchState, rng: random.Random, max_moves: int) -> int:
    """Alternate reassignment and swap sweeps until stable or out of moves."""
    moves = 0
    while moves < max_moves:
        moves, any_reassign = _reassign_pass(state, rng, max_moves, moves)
        moves, any_swap = _swap_pass(state, rng, max_moves, moves)
        if not (any_reassign or any_swap):
            break
    return moves


def _reassign_pass(state, rng, max_moves: int, moves: int) -> tuple:
    vertex_order = list(range(state.inst.n))
    rng.shuffle(vertex_order)
    target_order = np.array(rng.sample(range(state.L), state.L))
    improved = False
    for v in vertex_order:
        if moves >= max_moves:
            break
        if v in state.terminal_set:
            continue  # a terminal is pinned to the cluster centered at it
        deltas = state.reassign_deltas(v)
        if deltas is None:
            continue
        improving = deltas[target_order] < -EPS
        if improving.any():
            target = int(target_order[int(np.argmax(improving))])
            state.apply_reassign(v, target, float(deltas[target]))
            moves += 1
            improved = True
    return moves, improved


def _swap_pass(state, rng, max_moves: int, moves: int) -> tuple:
    """First-improvement sweep over (non-terminal center, non-center) swaps.

    For each cluster the gains of every candidate center are evaluated in one
    matrix-vector product against the candidate-to-center distance table, and
    the first improving candidate in the shuffled order is taken.
    """
    inst = state.inst
    center_set = set(state.centers)
    non_centers = [v for v in range(inst.n) if v not in center_set]
    cluster_order = [j for j in range(state.L) if not state.is_terminal_cluster[j]]
    rng.shuffle(cluster_order)
    rng.shuffle(non_centers)
    improved = False
    if not non_centers:
        return moves, improved
    cand = np.array(non_centers, dtype=np.int64)
    table = inst.graph.dist_rows(list(cand), cache=False)[:, state.centers]
    for j in cluster_order:
        if moves >= max_moves:
            break
        others, caps = state.cluster_incidence(j)
        if len(others) == 0:
            continue
        now = float(caps @ state.delta[j, others])
        gains = table[:, others] @ caps - now
        hits = np.flatnonzero(gains < -EPS)
        if len(hits):
            pos = int(hits[0])
            w = int(cand[pos])
            old_center = state.centers[j]
            row_w = inst.graph.dist_row(w)
            state.apply_swap(j, w, row_w, float(gains[pos]))
            table[:, j] = row_w[cand]
            cand[pos] = old_center  # the old center becomes a candidate
            table[pos] = inst.graph.dist_row(old_center)[state.centers]
            moves += 1
            improved = True
    return moves, improved
