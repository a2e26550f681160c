"""Weighted undirected multigraph and the graph primitives everything else uses.

Vertices are integers in ``[0, n)``. Every edge carries a nonnegative length
(shortest-path metric) and a nonnegative capacity (flows). Parallel edges are
kept and each edge has a stable integer id equal to its position in the edge
list; self-loops are dropped at construction and counted. Graphs are immutable
after construction, so all operations here are pure and safe to call
concurrently on shared instances.
"""

from __future__ import annotations

import heapq
import math
import sys
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .errors import EPS, DisconnectedGraph

INF = math.inf

_ROW_CHUNK = 512  # sources per scipy call when batching distance queries
_UNSET = object()


class Graph:
    """Immutable undirected multigraph with per-edge length and capacity."""

    def __init__(self, n: int, edges: Iterable[Sequence]):
        self.n = int(n)
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        es = []
        dropped = 0
        for e in edges:
            u, v = int(e[0]), int(e[1])
            length = float(e[2]) if len(e) > 2 else 1.0
            cap = float(e[3]) if len(e) > 3 else 1.0
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) outside vertex range [0,{self.n})")
            if length < 0 or cap < 0:
                raise ValueError(f"edge ({u},{v}) has negative length or capacity")
            if u == v:
                dropped += 1
                continue
            es.append((u, v, length, cap))
        self.edges: tuple = tuple(es)
        self.m = len(es)
        self.self_loops_dropped = dropped
        adj: list = [[] for _ in range(self.n)]
        for eid, (u, v, _, _) in enumerate(self.edges):
            adj[u].append((eid, v))
            adj[v].append((eid, u))
        # incident lists are in ascending edge-id order by construction
        self.adj: tuple = tuple(tuple(a) for a in adj)
        self._csr = None
        self._dist_cache: dict = {}
        self._hops = None
        self._uniform = _UNSET

    # -- basic accessors -------------------------------------------------

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.adj], dtype=np.int64)

    @property
    def uniform_length(self) -> Optional[float]:
        """The common edge length if all lengths are equal, else None."""
        if self._uniform is _UNSET:
            if self.m == 0:
                self._uniform = 1.0
            else:
                first = self.edges[0][2]
                self._uniform = first if all(e[2] == first for e in self.edges) else None
        return self._uniform

    def lengths(self) -> np.ndarray:
        return np.array([e[2] for e in self.edges], dtype=float)

    def capacities(self) -> np.ndarray:
        return np.array([e[3] for e in self.edges], dtype=float)

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.edges == other.edges
            and self.self_loops_dropped == other.self_loops_dropped
        )

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    # -- distance machinery ----------------------------------------------

    def _sparse(self):
        """Symmetric CSR adjacency with the minimum length per vertex pair.

        Parallel edges collapse to their shortest representative, which is
        exact for every distance query.
        """
        if self._csr is None:
            if self.m == 0:
                self._csr = sp.csr_matrix((self.n, self.n))
            else:
                u = np.fromiter((e[0] for e in self.edges), dtype=np.int64, count=self.m)
                v = np.fromiter((e[1] for e in self.edges), dtype=np.int64, count=self.m)
                w = self.lengths()
                row = np.concatenate([u, v])
                col = np.concatenate([v, u])
                dat = np.concatenate([w, w])
                key = row * self.n + col
                order = np.lexsort((dat, key))
                key, row, col, dat = key[order], row[order], col[order], dat[order]
                first = np.ones(len(key), dtype=bool)
                first[1:] = key[1:] != key[:-1]
                self._csr = sp.csr_matrix(
                    (dat[first], (row[first], col[first])), shape=(self.n, self.n)
                )
        return self._csr

    # all-pairs hop counts are worth materializing up to this vertex count
    _HOP_MATRIX_MAX_N = 8192

    def _hop_matrix(self) -> np.ndarray:
        """All-pairs BFS hop counts as int16; -1 marks unreachable pairs.

        Computed by bitset BFS: every source advances one level per pass, the
        frontiers of all sources live in one (n x n/8) bit array, and a pass
        is a single gather plus an or-reduce over adjacency segments.
        """
        if self._hops is None:
            n = self.n
            words = (n + 7) // 8
            idx = np.arange(n)
            bits = np.uint8(1) << np.arange(8, dtype=np.uint8)
            # row n is a permanent zero row addressed by padding entries
            frontier = np.zeros((n + 1, words), dtype=np.uint8)
            frontier[idx, idx >> 3] = bits[idx & 7]
            visited = frontier[:n].copy()
            dist = np.full((n, n), -1, dtype=np.int16)
            dist[idx, idx] = 0
            degs = np.array([len(a) for a in self.adj]) if n else np.zeros(0, int)
            dmax = int(degs.max()) if n else 0
            pad = np.full((n, dmax), n, dtype=np.int64)
            for v, lst in enumerate(self.adj):
                for slot, (_, w) in enumerate(lst):
                    pad[v, slot] = w
            level = 0
            while True:
                level += 1
                nxt = np.zeros((n, words), dtype=np.uint8)
                for slot in range(dmax):
                    nxt |= frontier[pad[:, slot]]
                nxt &= ~visited
                if not nxt.any():
                    break
                visited |= nxt
                newly = np.unpackbits(nxt, axis=1, bitorder="little", count=n)
                dist[newly.view(bool)] = level
                frontier = np.zeros((n + 1, words), dtype=np.uint8)
                frontier[:n] = nxt
            self._hops = dist
        return self._hops

    def _raw_rows(self, sources: Sequence[int]) -> np.ndarray:
        """Distance rows for the given sources; inf marks unreachable."""
        out = np.empty((len(sources), self.n), dtype=float)
        if self.n == 0:
            return out
        unit = self.uniform_length
        if unit is not None and 64 < self.n <= self._HOP_MATRIX_MAX_N:
            hops = self._hop_matrix()[list(sources)].astype(float)
            hops[hops < 0] = INF
            return hops * unit
        csr = self._sparse()
        for lo in range(0, len(sources), _ROW_CHUNK):
            idx = list(sources[lo : lo + _ROW_CHUNK])
            if unit is not None:
                d = csgraph.dijkstra(csr, directed=True, indices=idx, unweighted=True)
                d = d * unit
            else:
                d = csgraph.dijkstra(csr, directed=True, indices=idx)
            out[lo : lo + len(idx)] = d
        return out

    def dist_row(self, source: int) -> np.ndarray:
        """Cached single-source distance row (inf where unreachable)."""
        row = self._dist_cache.get(source)
        if row is None:
            row = self._raw_rows([source])[0]
            row.flags.writeable = False
            self._dist_cache[source] = row
        return row

    def dist_rows(self, sources: Sequence[int], cache: bool = False) -> np.ndarray:
        """Distance rows for many sources, optionally populating the cache."""
        sources = list(sources)
        missing = [s for s in sources if s not in self._dist_cache]
        fresh: dict = {}
        if missing:
            rows = self._raw_rows(missing)
            fresh = {s: rows[i] for i, s in enumerate(missing)}
            if cache:
                for s, r in fresh.items():
                    r.flags.writeable = False
                    self._dist_cache[s] = r
            if len(missing) == len(sources):
                return rows
        out = np.empty((len(sources), self.n), dtype=float)
        for i, s in enumerate(sources):
            row = self._dist_cache.get(s)
            out[i] = row if row is not None else fresh[s]
        return out

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        return not np.isinf(self.dist_row(0)).any()


@dataclass(frozen=True)
class BfsTree:
    """Breadth-first tree: parent edge id per non-root vertex, depth per vertex."""

    root: int
    parent_edge: tuple
    depth: tuple

    def edge_ids(self) -> frozenset:
        return frozenset(e for e in self.parent_edge if e is not None)


def shortest_distances(g: Graph, source: int) -> np.ndarray:
    """Exact single-source shortest-path distances under edge lengths.

    Raises DisconnectedGraph when some vertex is unreachable. BFS (hop counts
    scaled by the common length) is used when all lengths are equal.
    """
    row = g.dist_row(source)
    if np.isinf(row).any():
        raise DisconnectedGraph(f"vertex unreachable from {source}")
    return row


def diameter(g: Graph) -> float:
    """Maximum over all vertex pairs of shortest-path distance."""
    if g.n <= 1:
        return 0.0
    best = 0.0
    for lo in range(0, g.n, _ROW_CHUNK):
        rows = g._raw_rows(range(lo, min(lo + _ROW_CHUNK, g.n)))
        if np.isinf(rows).any():
            raise DisconnectedGraph("diameter of a disconnected graph")
        best = max(best, float(rows.max()))
    return best


def bfs_tree(g: Graph, root: int) -> BfsTree:
    """Deterministic BFS tree.

    Ties among equal-depth parents are broken by smallest parent vertex id,
    then smallest edge id, by scanning each level in ascending vertex order
    and each incident list in ascending edge-id order.
    """
    parent_edge: list = [None] * g.n
    depth = [-1] * g.n
    depth[root] = 0
    level = [root]
    seen = 1
    while level:
        nxt = []
        for u in sorted(level):
            du = depth[u]
            for eid, w in g.adj[u]:
                if depth[w] == -1:
                    depth[w] = du + 1
                    parent_edge[w] = eid
                    nxt.append(w)
                    seen += 1
        level = nxt
    if seen != g.n:
        raise DisconnectedGraph("bfs tree requires a connected graph")
    return BfsTree(root=root, parent_edge=tuple(parent_edge), depth=tuple(depth))


# -- girth and shortest cycles -------------------------------------------


def _cycle_through_nontree_edge(g, parent_edge, depth, eid, u, w):
    """Simple cycle formed by tree paths from u and w to their meeting vertex."""
    edges_u, edges_w = [], []
    a, b = u, w
    while depth[a] > depth[b]:
        pe = parent_edge[a]
        edges_u.append(pe)
        a = _other_end(g, pe, a)
    while depth[b] > depth[a]:
        pe = parent_edge[b]
        edges_w.append(pe)
        b = _other_end(g, pe, b)
    while a != b:
        pe, pf = parent_edge[a], parent_edge[b]
        edges_u.append(pe)
        edges_w.append(pf)
        a = _other_end(g, pe, a)
        b = _other_end(g, pf, b)
    return edges_u + [eid] + edges_w[::-1]


def _other_end(g: Graph, eid: int, v: int) -> int:
    u, w = g.edges[eid][0], g.edges[eid][1]
    return w if v == u else u


def _min_cycle_unit(g: Graph, cap_hops: Optional[float]):
    """Shortest cycle of an equal-length graph via BFS from every vertex.

    Returns (hop count, edge id list) for the best cycle found, or None.
    Scanning roots in ascending id order with ascending edge ids makes the
    returned cycle deterministic. ``cap_hops`` prunes the search to cycles of
    at most that many hops.
    """
    has_parallel = False
    pair_seen = set()
    for u, v, _, _ in g.edges:
        key = (u, v) if u < v else (v, u)
        if key in pair_seen:
            has_parallel = True
            break
        pair_seen.add(key)
    floor_hops = 2 if has_parallel else 3

    best = INF if cap_hops is None else math.floor(cap_hops + EPS) + 1
    best_cycle = None
    depth = [-1] * g.n
    parent_edge = [None] * g.n
    for root in range(g.n):
        if best <= floor_hops:
            break
        touched = [root]
        depth[root] = 0
        parent_edge[root] = None
        q = deque([root])
        while q:
            u = q.popleft()
            du = depth[u]
            if 2 * du >= best:
                break
            for eid, w in g.adj[u]:
                if depth[w] == -1:
                    depth[w] = du + 1
                    parent_edge[w] = eid
                    touched.append(w)
                    q.append(w)
                elif eid != parent_edge[u] and eid != parent_edge[w]:
                    detected = du + depth[w] + 1
                    if detected < best:
                        cyc = _cycle_through_nontree_edge(g, parent_edge, depth, eid, u, w)
                        if len(cyc) < best:
                            best = len(cyc)
                            best_cycle = cyc
        for v in touched:
            depth[v] = -1
            parent_edge[v] = None
    if best_cycle is None:
        return None
    return float(best) * g.edges[0][2] if g.m else None, best_cycle


def _dijkstra_avoid_edge(g: Graph, source: int, avoid: int):
    """Dijkstra skipping one edge id; returns (dist array, parent edge array).

    Ties are broken toward the lexicographically smallest edge-id path by
    relaxing strictly better distances and, at equal distance, keeping the
    path that compares smaller edge-sequence-wise via (dist, path) ordering
    on the heap.
    """
    dist = [INF] * g.n
    parent = [None] * g.n
    dist[source] = 0.0
    heap = [(0.0, (), source)]
    settled = [False] * g.n
    while heap:
        d, path, u = heapq.heappop(heap)
        if settled[u]:
            continue
        settled[u] = True
        parent[u] = path[-1] if path else None
        for eid, w in g.adj[u]:
            if eid == avoid or settled[w]:
                continue
            nd = d + g.edges[eid][2]
            if nd < dist[w] - EPS:
                dist[w] = nd
                heapq.heappush(heap, (nd, path + (eid,), w))
            elif abs(nd - dist[w]) <= EPS:
                heapq.heappush(heap, (nd, path + (eid,), w))
    return dist, parent


def _min_cycle_weighted(g: Graph, cap: Optional[float]):
    """Shortest cycle by shortest-cycle-through-edge, exact for any lengths."""
    best = INF if cap is None else cap + EPS
    best_cycle = None
    for eid, (u, v, length, _) in enumerate(g.edges):
        if length >= best:
            continue
        dist = [INF] * g.n
        dist[u] = 0.0
        heap = [(0.0, u)]
        prev = [None] * g.n
        while heap:
            d, a = heapq.heappop(heap)
            if d > dist[a] + EPS:
                continue
            for e2, b in g.adj[a]:
                if e2 == eid:
                    continue
                nd = d + g.edges[e2][2]
                better = nd < dist[b] - EPS
                tie = abs(nd - dist[b]) <= EPS and prev[b] is not None and e2 < prev[b]
                if better or tie:
                    dist[b] = min(dist[b], nd)
                    prev[b] = e2
                    heapq.heappush(heap, (nd, b))
        total = dist[v] + length
        if total < best - EPS:
            cyc = [eid]
            a = v
            while a != u:
                cyc.append(prev[a])
                a = _other_end(g, prev[a], a)
            best = total
            best_cycle = cyc
    if best_cycle is None:
        return None
    return best, best_cycle


def min_cycle(g: Graph, cap: Optional[float] = None):
    """Minimum-weight cycle and its edge ids, or None if no cycle within cap.

    A pair of parallel edges counts as a cycle. Equal-length graphs use the
    all-roots BFS scan; otherwise a per-edge Dijkstra scan is used.
    """
    if g.m < 2:
        return None
    unit = g.uniform_length
    if unit is not None:
        if unit == 0:
            return 0.0, []  # degenerate: any cycle has weight 0
        cap_hops = None if cap is None else cap / unit
        res = _min_cycle_unit(g, cap_hops)
        if res is None:
            return None
        weight, cyc = res
        if cap is not None and weight > cap + EPS:
            return None
        return weight, cyc
    res = _min_cycle_weighted(g, cap)
    return res


def girth(g: Graph) -> float:
    """Minimum total length of any cycle; inf when the graph is a forest."""
    res = min_cycle(g, cap=None)
    if res is None:
        return INF
    return res[0]


# -- conductance -----------------------------------------------------------


def _conductance_exact(g: Graph) -> float:
    deg = g.degrees()
    total = int(deg.sum())
    masks = np.arange(1, (1 << g.n) - 1, dtype=np.int64)
    cut = np.zeros(masks.shape, dtype=np.int64)
    for u, v, _, _ in g.edges:
        cut += ((masks >> u) & 1) != ((masks >> v) & 1)
    vol = np.zeros(masks.shape, dtype=np.int64)
    for v in range(g.n):
        vol += int(deg[v]) * ((masks >> v) & 1)
    denom = np.minimum(vol, total - vol)
    phi = cut / denom
    return float(phi.min())


def _lambda2_normalized(g: Graph) -> tuple:
    """Second-smallest eigenvalue of the normalized Laplacian plus eigenvector."""
    deg = g.degrees().astype(float)
    u = np.fromiter((e[0] for e in g.edges), dtype=np.int64, count=g.m)
    v = np.fromiter((e[1] for e in g.edges), dtype=np.int64, count=g.m)
    ones = np.ones(g.m)
    a = sp.coo_matrix(
        (np.concatenate([ones, ones]), (np.concatenate([u, v]), np.concatenate([v, u]))),
        shape=(g.n, g.n),
    ).tocsr()
    dm12 = sp.diags(1.0 / np.sqrt(deg))
    lnorm = sp.identity(g.n) - dm12 @ a @ dm12
    if g.n <= 256:
        vals, vecs = np.linalg.eigh(lnorm.toarray())
        return float(vals[1]), vecs[:, 1]
    from scipy.sparse.linalg import eigsh

    v0 = np.random.default_rng(0).standard_normal(g.n)
    vals, vecs = eigsh(lnorm, k=2, which="SA", v0=v0, maxiter=20000)
    order = np.argsort(vals)
    return float(vals[order[1]]), vecs[:, order[1]]


def conductance_estimate(g: Graph, exact_threshold: int = 20) -> tuple:
    """Interval (lower, upper) containing the conductance.

    For n at most exact_threshold the exact value is computed by subset
    enumeration and lower == upper. Otherwise the lower bound comes from the
    Cheeger inequality on the second normalized-Laplacian eigenvalue and the
    upper bound from the best sweep cut of the corresponding eigenvector.
    Cut sizes and volumes count parallel edges with multiplicity.
    """
    if g.n < 2:
        raise ValueError("conductance needs at least two vertices")
    if not g.is_connected():
        raise DisconnectedGraph("conductance of a disconnected graph")
    if g.n <= exact_threshold:
        if g.n > 26:
            raise ValueError("exact conductance enumeration beyond n=26 is infeasible")
        phi = _conductance_exact(g)
        return phi, phi
    lam2, vec = _lambda2_normalized(g)
    deg = g.degrees().astype(float)
    order = np.argsort(vec / np.sqrt(deg), kind="stable")
    total = deg.sum()
    in_s = np.zeros(g.n, dtype=bool)
    cut = 0.0
    vol = 0.0
    best = INF
    for i in range(g.n - 1):
        v = int(order[i])
        inside = sum(1 for _, w in g.adj[v] if in_s[w])
        cut += len(g.adj[v]) - 2 * inside
        vol += deg[v]
        in_s[v] = True
        denom = min(vol, total - vol)
        if denom > 0:
            best = min(best, cut / denom)
    lower = max(0.0, lam2 / 2.0)
    upper = float(best)
    return min(lower, upper), upper


# -- max flow ---------------------------------------------------------------


@dataclass(frozen=True)
class FlowPath:
    """One path of a unit-capacity flow decomposition."""

    vertices: tuple
    edges: tuple


@dataclass(frozen=True)
class FlowResult:
    value: float
    paths: tuple


def max_flow(g: Graph, source: int, sink: int) -> FlowResult:
    """Exact max flow via Dinic (shortest augmenting paths in the residual).

    When all capacities equal 1 the result also carries an edge-disjoint
    path decomposition with exactly floor(value) paths. Value is 0 when the
    sink is unreachable.
    """
    if source == sink:
        raise ValueError("source equals sink")
    # arcs 2e, 2e+1 are the two residual directions of edge e
    cap = np.empty(2 * g.m, dtype=float)
    for eid, (_, _, _, c) in enumerate(g.edges):
        cap[2 * eid] = c
        cap[2 * eid + 1] = c
    arc_to = np.empty(2 * g.m, dtype=np.int64)
    out: list = [[] for _ in range(g.n)]
    for eid, (u, v, _, _) in enumerate(g.edges):
        arc_to[2 * eid] = v
        arc_to[2 * eid + 1] = u
        out[u].append(2 * eid)
        out[v].append(2 * eid + 1)

    level = [0] * g.n
    it = [0] * g.n
    value = 0.0

    def bfs() -> bool:
        for i in range(g.n):
            level[i] = -1
        level[source] = 0
        q = deque([source])
        while q:
            u = q.popleft()
            for a in out[u]:
                w = int(arc_to[a])
                if cap[a] > EPS and level[w] == -1:
                    level[w] = level[u] + 1
                    q.append(w)
        return level[sink] != -1

    def dfs(u: int, pushed: float) -> float:
        if u == sink:
            return pushed
        while it[u] < len(out[u]):
            a = out[u][it[u]]
            w = int(arc_to[a])
            if cap[a] > EPS and level[w] == level[u] + 1:
                got = dfs(w, min(pushed, cap[a]))
                if got > EPS:
                    cap[a] -= got
                    cap[a ^ 1] += got
                    return got
            it[u] += 1
        return 0.0

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, g.n + 100))
    try:
        while bfs():
            for i in range(g.n):
                it[i] = 0
            while True:
                pushed = dfs(source, INF)
                if pushed <= EPS:
                    break
                value += pushed
    finally:
        sys.setrecursionlimit(old_limit)

    paths: list = []
    if g.m and all(e[3] == 1.0 for e in g.edges) and value >= 1 - EPS:
        value = float(round(value))
        paths = _decompose_unit_flow(g, cap, source, sink, int(value))
    return FlowResult(value=value, paths=tuple(paths))


def _decompose_unit_flow(g, cap, source, sink, count):
    """Split a unit-capacity flow into edge-disjoint paths by loop-erased walks."""
    used: list = [[] for _ in range(g.n)]  # vertex -> [(edge id, head)]
    for eid in range(g.m):
        f = (cap[2 * eid + 1] - cap[2 * eid]) / 2.0
        u, v = g.edges[eid][0], g.edges[eid][1]
        if f > 0.5:
            used[u].append((eid, v))
        elif f < -0.5:
            used[v].append((eid, u))
    for lst in used:
        lst.sort(reverse=True)  # pop() then yields smallest edge id first
    paths = []
    for _ in range(count):
        verts = [source]
        eids: list = []
        pos = {source: 0}
        while verts[-1] != sink:
            cur = verts[-1]
            eid, nxt = used[cur].pop()
            if nxt in pos:
                # erase the loop; its arcs stay consumed, cancelling a cycle
                j = pos[nxt]
                for v in verts[j + 1 :]:
                    del pos[v]
                verts = verts[: j + 1]
                eids = eids[:j]
            else:
                verts.append(nxt)
                eids.append(eid)
                pos[nxt] = len(verts) - 1
        paths.append(FlowPath(vertices=tuple(verts), edges=tuple(eids)))
    return paths


# -- shortest path with uniqueness flag -------------------------------------


def shortest_path_unique(g: Graph, u: int, v: int) -> tuple:
    """One shortest path (edge ids) plus an exact uniqueness flag.

    The returned path is the lexicographically smallest edge-id sequence among
    shortest paths. Uniqueness is decided by counting shortest paths on the
    shortest-path DAG with comparisons at tolerance EPS.
    """
    du = g.dist_row(u)
    dv = g.dist_row(v)
    if math.isinf(du[v]):
        raise DisconnectedGraph(f"no path between {u} and {v}")
    total = du[v]
    if u == v:
        return [], True

    ways = {u: 1}
    order = sorted(
        (x for x in range(g.n) if du[x] + dv[x] <= total + EPS and not math.isinf(du[x])),
        key=lambda x: du[x],
    )
    for a in order:
        wa = ways.get(a, 0)
        if wa == 0:
            continue
        for eid, b in g.adj[a]:
            length = g.edges[eid][2]
            if (
                abs(du[a] + length - du[b]) <= EPS
                and du[a] + length + dv[b] <= total + EPS
            ):
                ways[b] = min(2, ways.get(b, 0) + wa)
    unique = ways.get(v, 0) == 1

    path = []
    cur = u
    remaining = total
    while cur != v:
        best_eid, best_next = None, None
        for eid, b in g.adj[cur]:
            length = g.edges[eid][2]
            if abs(length + dv[b] - remaining) <= EPS and (
                best_eid is None or eid < best_eid
            ):
                best_eid, best_next = eid, b
        path.append(best_eid)
        remaining -= g.edges[best_eid][2]
        cur = best_next
    return path, unique


def path_vertices(g: Graph, start: int, edge_ids: Sequence[int]) -> list:
    """Vertex sequence of a path given its start vertex and edge ids."""
    verts = [start]
    for eid in edge_ids:
        verts.append(_other_end(g, eid, verts[-1]))
    return verts
