"""Independent brute-force oracles used to check the fast implementations.

Everything here is deliberately naive: exhaustive enumeration, hand BFS,
bitmask subset scans. Oracles never share code with the package paths they
verify.
"""

import itertools
import math
import random

import numpy as np


def brute_girth(n, edges):
    """Minimum cycle weight by enumerating vertex sequences (n <= 8).

    edges: list of (u, v, length). Parallel pairs count as 2-cycles.
    """
    best = math.inf
    by_pair = {}
    for u, v, w in edges:
        key = (min(u, v), max(u, v))
        by_pair.setdefault(key, []).append(w)
    for lens in by_pair.values():
        if len(lens) >= 2:
            two = sorted(lens)[:2]
            best = min(best, two[0] + two[1])
    min_len = {k: min(v) for k, v in by_pair.items()}
    for size in range(3, n + 1):
        for combo in itertools.combinations(range(n), size):
            first = combo[0]
            rest = combo[1:]
            for perm in itertools.permutations(rest):
                seq = (first,) + perm
                total = 0.0
                ok = True
                for i in range(size):
                    a, b = seq[i], seq[(i + 1) % size]
                    key = (min(a, b), max(a, b))
                    if key not in min_len:
                        ok = False
                        break
                    total += min_len[key]
                if ok:
                    best = min(best, total)
    return best


def brute_min_cut(n, edges, s, t):
    """Minimum s-t cut capacity by subset enumeration (n <= 12)."""
    best = math.inf
    others = [v for v in range(n) if v not in (s, t)]
    for bits in range(1 << len(others)):
        side = {s}
        for i, v in enumerate(others):
            if (bits >> i) & 1:
                side.add(v)
        cut = sum(c for u, v, c in edges if (u in side) != (v in side))
        best = min(best, cut)
    return best


def brute_conductance(n, edges):
    """Exact conductance by scanning every nonempty proper subset."""
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    total = sum(deg)
    best = math.inf
    for bits in range(1, (1 << n) - 1):
        cut = sum(1 for u, v in edges if ((bits >> u) & 1) != ((bits >> v) & 1))
        vol = sum(deg[v] for v in range(n) if (bits >> v) & 1)
        best = min(best, cut / min(vol, total - vol))
    return best


def bfs_hop_distances(n, pairs, source):
    """Plain hand-rolled BFS hop distances; pairs is a list of (u, v)."""
    adj = [[] for _ in range(n)]
    for u, v in pairs:
        adj[u].append(v)
        adj[v].append(u)
    dist = [math.inf] * n
    dist[source] = 0
    frontier = [source]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if math.isinf(dist[w]):
                    dist[w] = d
                    nxt.append(w)
        frontier = nxt
    return dist


def random_connected_graph(rng, n, extra_edges=None, max_len=1, parallel_ok=False):
    """Random connected multigraph: a random tree plus extra random edges.

    Returns a list of (u, v, length, capacity) with capacity 1. Lengths are
    uniform integers in [1, max_len].
    """
    edges = []
    for v in range(1, n):
        u = rng.randrange(v)
        edges.append((u, v, float(rng.randint(1, max_len)), 1.0))
    if extra_edges is None:
        extra_edges = rng.randrange(n)
    tries = 0
    while extra_edges > 0 and tries < 100 * (extra_edges + 1):
        tries += 1
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        if not parallel_ok and any(
            (min(u, v), max(u, v)) == (min(a, b), max(a, b)) for a, b, _, _ in edges
        ):
            continue
        edges.append((u, v, float(rng.randint(1, max_len)), 1.0))
        extra_edges -= 1
    return edges


def floyd_warshall(n, edges):
    """All-pairs shortest paths, tiny graphs only."""
    d = np.full((n, n), math.inf)
    np.fill_diagonal(d, 0.0)
    for u, v, w in edges:
        d[u, v] = min(d[u, v], w)
        d[v, u] = min(d[v, u], w)
    for l in range(n):
        d = np.minimum(d, d[:, l : l + 1] + d[l : l + 1, :])
    return d
