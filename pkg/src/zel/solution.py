"""Solutions: vertex partitions with a cluster semi-metric, canonical solutions
with vertex centers, cost evaluation, and the friendship and large-cluster
diagnostics used in the lower-bound analysis.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import EPS, InvalidSolution
from .graph import Graph, max_flow
from .instance import Instance
from .metricspace import SemiMetric, check_terminal_preservation, validate_semimetric


class Partition:
    """Partition of the vertex set into clusters labelled 0..cluster_count-1.

    Cluster ids are dense and every cluster is nonempty. Whether terminals
    land in distinct clusters depends on the owning instance and is checked
    by Solution/CanonicalSolution validation, not here: the unfriendly-edge
    diagnostics intentionally run on clusterings that ignore terminals.
    """

    def __init__(self, assignment: Sequence[int]):
        a = np.asarray(assignment, dtype=np.int64)
        if a.ndim != 1 or len(a) == 0:
            raise InvalidSolution("assignment must be a nonempty vector")
        count = int(a.max()) + 1
        present = np.zeros(count, dtype=bool)
        present[a] = True
        if a.min() < 0 or not present.all():
            raise InvalidSolution("cluster ids must be dense and every cluster nonempty")
        a.flags.writeable = False
        self.assignment = a
        self.cluster_count = count

    def clusters(self) -> list:
        out = [[] for _ in range(self.cluster_count)]
        for v, c in enumerate(self.assignment):
            out[int(c)].append(v)
        return out

    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.cluster_count)

    def __eq__(self, other):
        return isinstance(other, Partition) and np.array_equal(
            self.assignment, other.assignment
        )

    def __repr__(self):
        return f"Partition(n={len(self.assignment)}, clusters={self.cluster_count})"


@dataclass
class Solution:
    """A partition plus a semi-metric over its clusters."""

    partition: Partition
    delta: SemiMetric

    def terminal_clusters(self, inst: Instance) -> list:
        return [int(self.partition.assignment[t]) for t in inst.terminals]

    def validate(self, inst: Instance, check_triangle: bool = True):
        """Raise InvalidSolution on any violated invariant."""
        if len(self.partition.assignment) != inst.n:
            raise InvalidSolution("assignment length differs from vertex count")
        if self.delta.size != self.partition.cluster_count:
            raise InvalidSolution("delta size differs from cluster count")
        tc = self.terminal_clusters(inst)
        if len(set(tc)) != len(tc):
            raise InvalidSolution("two terminals share a cluster")
        if check_triangle and validate_semimetric(self.delta) is not None:
            raise InvalidSolution("delta violates the triangle inequality")
        if not check_terminal_preservation(self.delta, tc, inst):
            raise InvalidSolution("terminal distances are not preserved")


@dataclass
class CanonicalSolution:
    """A partition whose clusters carry distinct vertex centers; the induced
    metric is the graph distance between centers. A center does not have to
    lie inside its cluster."""

    partition: Partition
    centers: tuple

    def __post_init__(self):
        centers = tuple(int(c) for c in self.centers)
        if len(centers) != self.partition.cluster_count:
            raise InvalidSolution("one center per cluster required")
        if len(set(centers)) != len(centers):
            raise InvalidSolution("centers must be distinct vertices")
        self.centers = centers

    def validate(self, inst: Instance):
        if len(self.partition.assignment) != inst.n:
            raise InvalidSolution("assignment length differs from vertex count")
        if any(not 0 <= c < inst.n for c in self.centers):
            raise InvalidSolution("center outside vertex range")
        for t in inst.terminals:
            if self.centers[int(self.partition.assignment[t])] != t:
                raise InvalidSolution(f"cluster of terminal {t} is not centered at it")

    def to_solution(self, inst: Instance) -> Solution:
        return Solution(partition=self.partition, delta=canonical_delta(self, inst))


def canonical_delta(cs: CanonicalSolution, inst: Instance) -> SemiMetric:
    """Pairwise graph distances between cluster centers."""
    rows = inst.graph.dist_rows(list(cs.centers), cache=True)
    if np.isinf(rows).any():
        raise InvalidSolution("center distances undefined: graph disconnected")
    return SemiMetric(rows[:, list(cs.centers)])


def cost(sol: Solution, inst: Instance, validate: bool = True) -> float:
    """Total solution cost: sum over edges of capacity times cluster distance.

    Parallel edges contribute individually. Validation covers the structural
    invariants and terminal preservation; the cubic triangle check is left to
    explicit Solution.validate calls.
    """
    if validate:
        sol.validate(inst, check_triangle=False)
    g = inst.graph
    if g.m == 0:
        return 0.0
    a = sol.partition.assignment
    u = np.fromiter((e[0] for e in g.edges), dtype=np.int64, count=g.m)
    v = np.fromiter((e[1] for e in g.edges), dtype=np.int64, count=g.m)
    caps = g.capacities()
    return float((caps * sol.delta.matrix[a[u], a[v]]).sum())


def canonical_cost(cs: CanonicalSolution, inst: Instance, validate: bool = True) -> float:
    if validate:
        cs.validate(inst)
    return cost(cs.to_solution(inst), inst, validate=False)


# -- friendship diagnostics -------------------------------------------------


def friendship(cs: CanonicalSolution, inst: Instance, radius: float) -> np.ndarray:
    """Boolean cluster relation: centers within the radius in the raw graph.

    The diagonal is False so reflexive pairs never count.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    centers = list(cs.centers)
    rows = inst.raw_graph.dist_rows(centers, cache=True)
    rel = rows[:, centers] <= radius + EPS
    np.fill_diagonal(rel, False)
    return rel


def unfriendly_edge_count(cs: CanonicalSolution, inst: Instance, radius: float) -> int:
    """Number of raw-graph edges whose endpoint clusters are not friends.

    Intra-cluster edges never count, whatever the radius.
    """
    rel = friendship(cs, inst, radius)
    g = inst.raw_graph
    if g.m == 0:
        return 0
    a = cs.partition.assignment
    u = np.fromiter((e[0] for e in g.edges), dtype=np.int64, count=g.m)
    v = np.fromiter((e[1] for e in g.edges), dtype=np.int64, count=g.m)
    fu, fv = a[u], a[v]
    return int(((fu != fv) & ~rel[fu, fv]).sum())


# -- large-cluster case analysis ---------------------------------------------


@dataclass(frozen=True)
class CaseReport:
    """Large-cluster mass split and, in case 2, the terminal-to-large-cluster
    path packing extracted from a max flow on the augmented raw graph."""

    large_threshold: float
    large_cluster_ids: tuple
    large_centers: tuple  # centers of the large clusters, no further contract
    large_mass: int
    case: int  # 1 if large mass <= mass_fraction * n else 2
    flow_value: Optional[float] = None
    paths_total: int = 0
    paths_in_graph: int = 0
    packing_bound: float = 0.0
    cost_value: Optional[float] = None
    bound_le_cost: Optional[bool] = None

    def to_dict(self) -> dict:
        return {
            "large_threshold": self.large_threshold,
            "large_mass": self.large_mass,
            "case": self.case,
            "flow_value": self.flow_value,
            "paths_total": self.paths_total,
            "paths_in_graph": self.paths_in_graph,
            "packing_bound": self.packing_bound,
            "cost_value": self.cost_value,
            "bound_le_cost": self.bound_le_cost,
        }


def case_diagnostics(
    cs: CanonicalSolution,
    inst: Instance,
    size_exponent: float = 0.1,
    mass_fraction: float = 0.1,
    compute_cost: bool = True,
) -> CaseReport:
    """Classify the solution by total large-cluster size and, in the heavy
    case, lower-bound its cost by an edge-disjoint path packing.

    A cluster is large when its size is at least n ** size_exponent. In case 2
    an auxiliary source is attached to every terminal and an auxiliary sink to
    every vertex of a large cluster, all with unit capacities, on top of the
    raw graph; the max flow is decomposed into paths, paths that use a removed
    edge are dropped, and each surviving path contributes the graph distance
    from its terminal to the center of the cluster at its far end.
    """
    n = inst.n
    threshold = n ** size_exponent
    sizes = cs.partition.sizes()
    large_ids = tuple(int(i) for i in np.flatnonzero(sizes >= threshold))
    large_centers = tuple(cs.centers[i] for i in large_ids)
    mass = int(sizes[list(large_ids)].sum()) if large_ids else 0
    if mass <= mass_fraction * n:
        return CaseReport(
            large_threshold=threshold,
            large_cluster_ids=large_ids,
            large_centers=large_centers,
            large_mass=mass,
            case=1,
        )

    raw = inst.raw_graph
    assignment = cs.partition.assignment
    large_set = set(large_ids)
    v_prime = [v for v in range(n) if int(assignment[v]) in large_set]
    s, t = n, n + 1
    aug_edges = list(raw.edges)
    aux_start = len(aug_edges)
    for term in inst.terminals:
        aug_edges.append((s, term, 1.0, 1.0))
    for v in v_prime:
        aug_edges.append((v, t, 1.0, 1.0))
    aug = Graph(n + 2, aug_edges)
    res = max_flow(aug, s, t)

    removed = set(inst.removal_log)
    bound = 0.0
    surviving = 0
    for p in res.paths:
        interior_edges = [e for e in p.edges if e < aux_start]
        if any(e in removed for e in interior_edges):
            continue
        surviving += 1
        terminal = p.vertices[1]
        far_vertex = p.vertices[-2]
        far_center = cs.centers[int(assignment[far_vertex])]
        bound += float(inst.graph.dist_row(terminal)[far_center])

    total_cost = canonical_cost(cs, inst, validate=False) if compute_cost else None
    return CaseReport(
        large_threshold=threshold,
        large_cluster_ids=large_ids,
        large_centers=large_centers,
        large_mass=mass,
        case=2,
        flow_value=res.value,
        paths_total=len(res.paths),
        paths_in_graph=surviving,
        packing_bound=bound,
        cost_value=total_cost,
        bound_le_cost=None if total_cost is None else bound <= total_cost + EPS,
    )


def singleton_solution(inst: Instance) -> CanonicalSolution:
    """Every vertex its own cluster, centered at itself."""
    return CanonicalSolution(
        partition=Partition(list(range(inst.n))), centers=tuple(range(inst.n))
    )


def random_canonical_solution(
    inst: Instance, seed: int, extra_clusters: Optional[int] = None
) -> Solution:
    """Valid solution with a canonically induced metric and random clustering.

    Terminal clusters come first and are centered at their terminals; extra
    clusters take random non-terminal centers. Every center sits in its own
    cluster so no cluster is empty; remaining vertices scatter uniformly.
    """
    rng = random.Random(seed)
    non_terminals = [v for v in range(inst.n) if v not in set(inst.terminals)]
    if extra_clusters is None:
        extra_clusters = rng.randint(0, max(len(non_terminals) // 3, 0))
    extra_clusters = min(extra_clusters, len(non_terminals))
    extra = sorted(rng.sample(non_terminals, extra_clusters))
    centers = tuple(inst.terminals) + tuple(extra)
    L = len(centers)
    assignment = [0] * inst.n
    owner = {c: idx for idx, c in enumerate(centers)}
    for v in range(inst.n):
        assignment[v] = owner.get(v, rng.randrange(L))
    cs = CanonicalSolution(partition=Partition(assignment), centers=centers)
    return cs.to_solution(inst)


def perturbed_solution(inst: Instance, seed: int, max_bump: float = 2.0) -> Solution:
    """Valid solution whose metric strictly dominates a canonical one.

    Random nonnegative bumps are added to the rows and columns of the
    non-terminal clusters of a random canonical solution, and the result is
    re-closed by min-plus so the triangle inequality holds again. Closure is
    monotone, so entries never drop below the canonical metric; terminal
    pairs are untouched and stay exact.
    """
    rng = random.Random(seed ^ 0x5EED)
    base = random_canonical_solution(inst, seed)
    tc = set(base.terminal_clusters(inst))
    m = base.delta.matrix.copy()
    L = base.partition.cluster_count
    for f in range(L):
        if f in tc:
            continue
        bump = rng.choice([0.0, 0.5, 1.0, 1.5, 2.0]) * (max_bump / 2.0)
        m[f, :] += bump
        m[:, f] += bump
    np.fill_diagonal(m, 0.0)
    m = np.minimum(m, m.T)
    for l in range(L):
        m = np.minimum(m, m[:, l : l + 1] + m[l : l + 1, :])
    sol = Solution(partition=base.partition, delta=SemiMetric(m))
    sol.validate(inst)
    return sol


def zero_extension_solution(inst: Instance, terminal_of_vertex: Sequence[int]) -> CanonicalSolution:
    """Canonical solution induced by a 0-extension map (terminal index per vertex)."""
    assignment = [int(terminal_of_vertex[v]) for v in range(inst.n)]
    return CanonicalSolution(partition=Partition(assignment), centers=inst.terminals)
