"""The continuization of a graph (edges as line segments), the tree and
high-girth embeddings of solutions into it, rounding back to canonical
solutions, and a resampling driver for the embedding's expectation guarantee.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np

from .errors import (
    EPS,
    EmbeddingContractViolated,
    GTreeViolated,
    InvalidOffset,
    InvalidSolution,
    NonUniqueShortestPath,
    NotATree,
)
from .graph import Graph, girth, shortest_path_unique
from .instance import Instance
from .metricspace import SemiMetric
from .solution import CanonicalSolution, Partition, Solution


@dataclass(frozen=True)
class ConPoint:
    """A point of the continuization: an edge id plus the distance from the
    edge's smaller-id endpoint."""

    edge: int
    offset: float

    @staticmethod
    def vertex_point(g: Graph, v: int) -> "ConPoint":
        """Canonical form of a graph vertex: its smallest incident edge, with
        the offset that lands on the vertex."""
        if not g.adj[v]:
            raise ValueError(f"vertex {v} has no incident edge")
        eid = g.adj[v][0][0]
        u, w, length, _ = g.edges[eid]
        lo = min(u, w)
        return ConPoint(edge=eid, offset=0.0 if v == lo else length)

    def locate(self, g: Graph) -> tuple:
        """(lo endpoint, hi endpoint, distance to lo, distance to hi)."""
        u, w, length, _ = g.edges[self.edge]
        if self.offset < -EPS or self.offset > length + EPS:
            raise InvalidOffset(f"offset {self.offset} outside [0, {length}]")
        lo, hi = min(u, w), max(u, w)
        a = min(max(self.offset, 0.0), length)
        return lo, hi, a, length - a

    def as_vertex(self, g: Graph) -> Optional[int]:
        lo, hi, a, b = self.locate(g)
        if a <= EPS:
            return lo
        if b <= EPS:
            return hi
        return None


def con_distance(inst: Instance, p: ConPoint, q: ConPoint) -> float:
    """Geodesic distance in the continuization.

    Same-edge points may take the direct route along their segment; every pair
    may route through the four endpoint combinations. Vertex points therefore
    recover the graph metric exactly.
    """
    g = inst.graph
    lo1, hi1, a1, b1 = p.locate(g)
    lo2, hi2, a2, b2 = q.locate(g)
    cands = []
    if p.edge == q.edge:
        cands.append(abs(a1 - a2))
    row_lo = g.dist_row(lo1)
    row_hi = g.dist_row(hi1)
    cands.extend(
        [
            a1 + a2 + row_lo[lo2],
            a1 + b2 + row_lo[hi2],
            b1 + a2 + row_hi[lo2],
            b1 + b2 + row_hi[hi2],
        ]
    )
    return float(min(cands))


def point_on_path(g: Graph, start: int, edge_ids: Sequence[int], distance: float) -> ConPoint:
    """The point at the given distance from ``start`` along a path."""
    if distance < -EPS:
        raise ValueError(f"negative distance {distance}")
    cur = start
    remaining = max(distance, 0.0)
    for eid in edge_ids:
        u, v, length, _ = g.edges[eid]
        nxt = v if cur == u else u
        if remaining <= EPS:
            return ConPoint.vertex_point(g, cur)
        if remaining < length - EPS:
            lo = min(u, v)
            alpha = remaining if cur == lo else length - remaining
            return ConPoint(edge=eid, offset=alpha)
        remaining -= length
        cur = nxt
    if remaining <= EPS:
        return ConPoint.vertex_point(g, cur)
    raise ValueError(f"distance {distance} overshoots the path by {remaining}")


# -- placement primitives -----------------------------------------------------


def nu(delta: SemiMetric, cluster: int, terminal_clusters: Sequence[int], tree_mode: bool):
    """Placement slack of a cluster against all terminal pairs.

    tree_mode subtracts the full terminal distance; the high-girth variant
    subtracts half of it. The minimum ranges over unordered pairs including
    equal ones; ties resolve to the smallest index pair.
    Returns (value, (i, j)) with terminal indices i <= j.
    """
    tc = list(terminal_clusters)
    a = delta.matrix[cluster, tc]
    term = delta.matrix[np.ix_(tc, tc)]
    scale = 1.0 if tree_mode else 0.5
    m = (a[:, None] + a[None, :] - scale * term) / 2.0
    iu = np.triu_indices(len(tc))
    vals = m[iu]
    best = float(vals.min())
    hit = np.flatnonzero(vals <= best + EPS)[0]
    i, j = int(iu[0][hit]), int(iu[1][hit])
    return float(m[i, j]), (i, j)


def _terminal_cluster_ids(sol: Solution, inst: Instance) -> list:
    return [int(sol.partition.assignment[t]) for t in inst.terminals]


def _place_on_terminal_path(inst, i, j, x1, unique_required):
    """Point at distance x1 from terminal i along the i-j shortest path."""
    g = inst.graph
    t1, t2 = inst.terminals[i], inst.terminals[j]
    path, unique = shortest_path_unique(g, t1, t2)
    if unique_required and not unique:
        raise NonUniqueShortestPath(f"terminals {t1} and {t2}")
    pathlen = sum(g.edges[e][2] for e in path)
    if x1 < -EPS or x1 > pathlen + EPS:
        raise InvalidSolution(
            f"placement offset {x1} outside the {t1}-{t2} path of length {pathlen}"
        )
    return point_on_path(g, t1, path, min(max(x1, 0.0), pathlen))


def embed_tree(sol: Solution, inst: Instance, verify: bool = True) -> Dict[int, ConPoint]:
    """Non-expansive embedding of a solution into the continuization of a tree.

    Terminal clusters land on their terminals. Every other cluster is placed
    on the path between its slack-minimizing terminal pair. With verify on,
    the contract that no pair expands is checked and raises
    EmbeddingContractViolated when the input metric was not a solution metric.
    """
    g = inst.graph
    if not g.is_connected() or g.m != g.n - 1:
        raise NotATree(f"graph has n={g.n}, m={g.m}")
    tc = _terminal_cluster_ids(sol, inst)
    phi: Dict[int, ConPoint] = {}
    for idx, t in enumerate(inst.terminals):
        phi[tc[idx]] = ConPoint.vertex_point(g, t)
    for F in range(sol.partition.cluster_count):
        if F in phi:
            continue
        val, (i, j) = nu(sol.delta, F, tc, tree_mode=True)
        x1 = float(sol.delta.matrix[F, tc[i]]) - val
        phi[F] = _place_on_terminal_path(inst, i, j, x1, unique_required=False)
    if verify:
        _verify_tree_contract(sol, inst, phi)
    return phi


def _verify_tree_contract(sol, inst, phi):
    L = sol.partition.cluster_count
    for f1 in range(L):
        for f2 in range(f1 + 1, L):
            d = con_distance(inst, phi[f1], phi[f2])
            if d > sol.delta.matrix[f1, f2] + 1e-7:
                raise EmbeddingContractViolated(
                    f"pair ({f1},{f2}): embedded {d} > delta {sol.delta.matrix[f1, f2]}"
                )


@dataclass(frozen=True)
class EmbeddingParams:
    """Radius, fallback terminal index, and the seed that produced the radius."""

    r: float
    t_star: int = 0
    seed: int = 0

    @classmethod
    def sample(cls, inst: Instance, seed: int, t_star: int = 0) -> "EmbeddingParams":
        g = girth(inst.graph)
        if not math.isfinite(g):
            raise NotATree("girth is infinite; use the tree embedding")
        rng = random.Random(seed)
        return cls(r=rng.uniform(g / 60.0, g / 30.0), t_star=t_star, seed=seed)


def embed_girth(
    sol: Solution,
    inst: Instance,
    params: EmbeddingParams,
    verify_claims: bool = True,
    girth_value: Optional[float] = None,
) -> Dict[int, ConPoint]:
    """Random embedding for high-girth graphs.

    Clusters whose nearest terminal distance exceeds the radius collapse onto
    the fallback terminal; the rest are placed on the unique shortest path of
    their slack-minimizing terminal pair at twice the tree offsets. Placement
    certifies the near-cluster certificate (sum of the two terminal distances
    at most four times the nearest one) and path uniqueness.
    """
    g_val = girth(inst.graph) if girth_value is None else girth_value
    if not math.isfinite(g_val):
        raise NotATree("girth is infinite; use the tree embedding")
    if not (g_val / 60.0 - EPS <= params.r <= g_val / 30.0 + EPS):
        raise ValueError(f"radius {params.r} outside [{g_val / 60}, {g_val / 30}]")
    tc = _terminal_cluster_ids(sol, inst)
    t_star_point = ConPoint.vertex_point(inst.graph, inst.terminals[params.t_star])
    phi: Dict[int, ConPoint] = {}
    for idx, t in enumerate(inst.terminals):
        phi[tc[idx]] = ConPoint.vertex_point(inst.graph, t)
    nu_vals: Dict[int, float] = {tc[i]: 0.0 for i in range(inst.k)}
    for F in range(sol.partition.cluster_count):
        if F in phi:
            continue
        a_f = float(sol.delta.matrix[F, tc].min())
        if a_f > params.r:
            phi[F] = t_star_point
            continue
        phi[F] = _place_near_cluster(sol, inst, F, tc, a_f, nu_vals)
    if verify_claims:
        violations = girth_claim_violations(sol, inst, phi, params, nu_vals)
        if violations:
            raise EmbeddingContractViolated("; ".join(violations[:3]))
    return phi


def _place_near_cluster(sol, inst, F, tc, a_f, nu_vals):
    val, (i, j) = nu(sol.delta, F, tc, tree_mode=False)
    nu_vals[F] = val
    d1 = float(sol.delta.matrix[F, tc[i]])
    d2 = float(sol.delta.matrix[F, tc[j]])
    if d1 + d2 > 4.0 * a_f + EPS:
        raise GTreeViolated(
            f"cluster {F}: terminal pair distances {d1}+{d2} exceed 4*{a_f}"
        )
    return _place_on_terminal_path(inst, i, j, 2.0 * (d1 - val), unique_required=True)


def girth_claim_violations(sol, inst, phi, params, nu_vals=None) -> list:
    """Check the placement and proximity guarantees on an embedded solution.

    Returns human-readable descriptions; empty on a valid solution metric.
    """
    tc = _terminal_cluster_ids(sol, inst)
    delta = sol.delta.matrix
    L = sol.partition.cluster_count
    r = params.r
    if nu_vals is None:
        nu_vals = {}
    out = []
    a_vals = delta[:, tc].min(axis=1)
    near = [F for F in range(L) if a_vals[F] <= r]
    term_points = {
        i: ConPoint.vertex_point(inst.graph, t) for i, t in enumerate(inst.terminals)
    }
    for F in near:
        nv = nu_vals.get(F)
        if nv is None:
            nv = nu(sol.delta, F, tc, tree_mode=False)[0]
            nu_vals[F] = nv
        for i in range(inst.k):
            dft = float(delta[F, tc[i]])
            if dft <= 6.0 * r + EPS:
                got = con_distance(inst, phi[F], term_points[i])
                if got > 2.0 * (dft - nv) + 1e-7:
                    out.append(
                        f"terminal projection: cluster {F}, terminal {i}: "
                        f"{got} > 2*({dft} - {nv})"
                    )
    near_set = set(near)
    for f1 in range(L):
        for f2 in range(f1 + 1, L):
            if (
                f1 in near_set
                and f2 in near_set
                and delta[f1, f2] <= r + EPS
            ):
                got = con_distance(inst, phi[f1], phi[f2])
                if got > 2.0 * delta[f1, f2] + 1e-7:
                    out.append(
                        f"close pair ({f1},{f2}): {got} > 2*{delta[f1, f2]}"
                    )
    return out


# -- rounding -----------------------------------------------------------------


@dataclass(frozen=True)
class RoundingResult:
    """Canonical solution after merging clusters that rounded to one center."""

    solution: CanonicalSolution
    center_of_cluster: tuple  # original cluster id -> center vertex
    collisions: dict  # center vertex -> original cluster ids (only len > 1)
    terminal_clashes: tuple  # (original cluster id, terminal vertex)


def round_to_canonical(phi: Dict[int, ConPoint], sol: Solution, inst: Instance) -> RoundingResult:
    """Round embedded clusters to the nearer endpoints of their segments.

    Exact midpoints round to the smaller vertex id. Clusters sharing a center
    merge into one cluster keeping that center; a non-terminal cluster that
    lands on a terminal's center is merged into the terminal's cluster and
    reported as a clash.
    """
    g = inst.graph
    L = sol.partition.cluster_count
    centers = []
    for F in range(L):
        p = phi[F]
        lo, hi, a, b = p.locate(g)
        centers.append(lo if a <= b + EPS else hi)
    tc = _terminal_cluster_ids(sol, inst)
    terminal_center = {centers[tc[i]]: tc[i] for i in range(inst.k)}
    if len(terminal_center) != inst.k:
        raise InvalidSolution("two terminal clusters rounded to one center")

    groups: dict = {}
    for F, c in enumerate(centers):
        groups.setdefault(c, []).append(F)
    collisions = {c: tuple(fs) for c, fs in groups.items() if len(fs) > 1}
    clashes = []
    terminal_clusters = set(tc)
    for i, t in enumerate(inst.terminals):
        c = centers[tc[i]]
        if c == t:
            for F in groups.get(c, []):
                if F not in terminal_clusters:
                    clashes.append((F, t))

    new_centers = sorted(groups)
    new_id = {c: idx for idx, c in enumerate(new_centers)}
    assignment = [new_id[centers[int(old)]] for old in sol.partition.assignment]
    merged = CanonicalSolution(
        partition=Partition(assignment), centers=tuple(new_centers)
    )
    merged.validate(inst)
    return RoundingResult(
        solution=merged,
        center_of_cluster=tuple(centers),
        collisions=collisions,
        terminal_clashes=tuple(clashes),
    )


def rounding_bound_holds(
    phi: Dict[int, ConPoint], result: RoundingResult, sol: Solution, inst: Instance
) -> bool:
    """Per-pair rounding guarantee on unit instances: center distances never
    exceed the embedded distances by more than two."""
    L = sol.partition.cluster_count
    centers = result.center_of_cluster
    for f1 in range(L):
        row = inst.graph.dist_row(centers[f1])
        for f2 in range(f1 + 1, L):
            if row[centers[f2]] > con_distance(inst, phi[f1], phi[f2]) + 2.0 + EPS:
                return False
    return True


# -- resampling statistics ----------------------------------------------------


@dataclass(frozen=True)
class GirthSampleStats:
    """Aggregates of the embedding over many radius draws.

    Every per-sample quantity depends on the radius only through the near/far
    split, so the distances are precomputed once and the per-sample values are
    recovered exactly from threshold counts over the sampled radii.
    """

    samples: int
    girth: float
    diam: float
    ratio_bound: float  # 62 * diam / girth
    pair_mean: np.ndarray  # mean embedded distance per cluster pair
    pair_stderr: np.ndarray
    delta: np.ndarray
    mean_within_bound: bool
    gproj_fires: int
    gclose_fires: int

    def worst_ratio(self) -> float:
        mask = self.delta > EPS
        if not mask.any():
            return 0.0
        return float((self.pair_mean[mask] / self.delta[mask]).max())


def monte_carlo_girth_embedding(
    sol: Solution,
    inst: Instance,
    samples: int,
    seed: int,
    t_star: int = 0,
) -> GirthSampleStats:
    """Resample the embedding radius and aggregate distances and certificate checks.

    Placements are radius-independent, so they are computed once for every
    cluster that can ever be near (nearest-terminal distance at most
    girth/30); a sampled radius then only toggles each cluster between its
    placement and the fallback terminal. The reported means and standard
    errors are exactly those of the explicit per-sample loop.
    """
    from .graph import diameter as graph_diameter

    g_val = girth(inst.graph)
    if not math.isfinite(g_val):
        raise NotATree("girth is infinite; use the tree embedding")
    diam = graph_diameter(inst.graph)
    tc = _terminal_cluster_ids(sol, inst)
    delta = sol.delta.matrix
    L = sol.partition.cluster_count
    r_max_possible = g_val / 30.0

    a_vals = delta[:, tc].min(axis=1).astype(float)
    for i in range(inst.k):
        a_vals[tc[i]] = 0.0
    # the nearest-terminal distance is 1-Lipschitz under delta; a violation
    # means delta is not a semi-metric and the sampling logic would be wrong
    if (np.abs(a_vals[:, None] - a_vals[None, :]) > delta + EPS).any():
        raise InvalidSolution("nearest-terminal distances jump faster than delta")

    # radius-independent placements for every potentially-near cluster
    placement: Dict[int, ConPoint] = {}
    nu_vals: Dict[int, float] = {}
    for idx, t in enumerate(inst.terminals):
        placement[tc[idx]] = ConPoint.vertex_point(inst.graph, t)
        nu_vals[tc[idx]] = 0.0
    for F in range(L):
        if F in placement or a_vals[F] > r_max_possible + EPS:
            continue
        placement[F] = _place_near_cluster(sol, inst, F, tc, float(a_vals[F]), nu_vals)

    t_star_point = ConPoint.vertex_point(inst.graph, inst.terminals[t_star])
    placed = sorted(placement)
    pidx = {F: i for i, F in enumerate(placed)}
    points = [placement[F] for F in placed] + [t_star_point]
    P = len(points)
    M = np.zeros((P, P))
    for i in range(P):
        for j in range(i + 1, P):
            M[i, j] = M[j, i] = con_distance(inst, points[i], points[j])
    star = P - 1
    v_star = np.full(L, 0.0)
    for F in placed:
        v_star[F] = M[pidx[F], star]

    rng = np.random.default_rng(seed)
    r = np.sort(rng.uniform(g_val / 60.0, g_val / 30.0, size=samples))

    def count_below(threshold: float) -> int:
        return int(np.searchsorted(r, threshold, side="left"))

    pair_mean = np.zeros((L, L))
    pair_var = np.zeros((L, L))
    for f1 in range(L):
        for f2 in range(f1 + 1, L):
            lo_f, hi_f = (f1, f2) if a_vals[f1] <= a_vals[f2] else (f2, f1)
            c_zero = count_below(a_vals[lo_f])
            c_mixed = count_below(a_vals[hi_f]) - c_zero
            c_both = samples - c_zero - c_mixed
            d_mixed = v_star[lo_f] if c_mixed else 0.0
            if c_both:
                d_both = M[pidx[f1], pidx[f2]]
            else:
                d_both = 0.0
            mean = (c_mixed * d_mixed + c_both * d_both) / samples
            second = (c_mixed * d_mixed**2 + c_both * d_both**2) / samples
            pair_mean[f1, f2] = pair_mean[f2, f1] = mean
            pair_var[f1, f2] = pair_var[f2, f1] = max(second - mean**2, 0.0)

    denom = max(samples - 1, 1)
    pair_stderr = np.sqrt(pair_var * samples / denom / samples)

    gproj = 0
    gclose = 0
    for F in placed:
        nv = nu_vals[F]
        for i in range(inst.k):
            dft = float(delta[F, tc[i]])
            bound = 2.0 * (dft - nv)
            got = M[pidx[F], pidx[tc[i]]] if tc[i] in pidx else con_distance(
                inst, placement[F], ConPoint.vertex_point(inst.graph, inst.terminals[i])
            )
            if got > bound + 1e-7:
                # fires in every sample whose radius activates both gates
                gate = max(float(a_vals[F]), dft / 6.0)
                gproj += samples - count_below(gate)
    for f1 in placed:
        for f2 in placed:
            if f2 <= f1:
                continue
            if M[pidx[f1], pidx[f2]] > 2.0 * delta[f1, f2] + 1e-7:
                gate = max(float(a_vals[f1]), float(a_vals[f2]), float(delta[f1, f2]))
                gclose += samples - count_below(gate)

    bound = 62.0 * diam / g_val
    ok = True
    mask = delta > EPS
    for f1 in range(L):
        for f2 in range(f1 + 1, L):
            if not mask[f1, f2]:
                continue
            mean_ratio = pair_mean[f1, f2] / delta[f1, f2]
            slack = 3.0 * pair_stderr[f1, f2] / delta[f1, f2]
            if mean_ratio > bound + slack + EPS:
                ok = False
    return GirthSampleStats(
        samples=samples,
        girth=g_val,
        diam=diam,
        ratio_bound=bound,
        pair_mean=pair_mean,
        pair_stderr=pair_stderr,
        delta=delta.copy(),
        mean_within_bound=ok,
        gproj_fires=gproj,
        gclose_fires=gclose,
    )
