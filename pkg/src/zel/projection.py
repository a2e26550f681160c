"""Projection of graph points into the tight span, and the tightness-graph
analysis that recognises extreme points.

The projection lowers all coordinates of a terminal-distance vector at unit
rate, freezing each coordinate the moment one of its polytope constraints
becomes tight. Freezing is simultaneous for every index achieving the round
minimum, so the output is fully determined by the input.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .errors import EPS, InfeasibleDistances, NotAMember
from .metricspace import (
    Membership,
    SemiMetric,
    TightSpanPoint,
    tight_span_membership,
)


def _check_projectable(d: np.ndarray, D: SemiMetric):
    diff = np.abs(d[:, None] - d[None, :])
    tot = d[:, None] + d[None, :]
    m = D.matrix
    bad = np.argwhere((m > tot + EPS) | (m < diff - EPS))
    if len(bad):
        i, j = (int(x) for x in bad[0])
        raise InfeasibleDistances(i, j)


def project_point_with_rounds(d, D: SemiMetric):
    """Project a distance vector and return (point, per-round minima).

    The round minima are exposed because they are provably non-decreasing,
    which the tests assert.
    """
    d = np.asarray(d, dtype=float)
    if d.shape != (D.size,):
        raise InfeasibleDistances(f"vector length {d.shape} against metric size {D.size}")
    _check_projectable(d, D)
    k = D.size
    m = D.matrix
    x = np.zeros(k)
    active = np.ones(k, dtype=bool)
    rounds = []
    while active.any():
        s = np.flatnonzero(active)
        o = np.flatnonzero(~active)
        # slack toward active partners is shared between both coordinates
        cand = (d[s, None] + d[None, s] - m[np.ix_(s, s)]) / 2.0
        per_index = cand.min(axis=1)
        if len(o):
            cand_o = d[s, None] + x[None, o] - m[np.ix_(s, o)]
            per_index = np.minimum(per_index, cand_o.min(axis=1))
        delta = float(per_index.min())
        rounds.append(delta)
        fixed = s[per_index <= delta + EPS]
        x[fixed] = np.maximum(d[fixed] - delta, 0.0)
        active[fixed] = False
    return TightSpanPoint(x), rounds


def project_point(d, D: SemiMetric) -> TightSpanPoint:
    """Project a vector of terminal distances to a member of the tight span."""
    point, _ = project_point_with_rounds(d, D)
    return point


def project_vertex(inst, v: int) -> TightSpanPoint:
    """Project a graph vertex via its distances to every terminal.

    The result is certified as a tight-span member.
    """
    d = inst.terminal_rows()[:, v]
    point = project_point(d, inst.terminal_metric)
    res = tight_span_membership(point, inst.terminal_metric)
    if not res.is_member:
        raise AssertionError(f"projection of vertex {v} failed membership: {res}")
    return point


def projection_certificate(x: TightSpanPoint, d, D: SemiMetric) -> bool:
    """Check the projection guarantee: every index has a tight partner whose
    total decrease is no larger than its own."""
    d = np.asarray(d, dtype=float)
    xs = x.coords
    drop = d - xs
    for i in range(D.size):
        ok = False
        for j in range(D.size):
            if abs(xs[i] + xs[j] - D.matrix[i, j]) <= EPS and drop[i] >= drop[j] - EPS:
                ok = True
                break
        if not ok:
            return False
    return True


@dataclass(frozen=True)
class TightnessGraph:
    """Graph on coordinate indices: an edge where x_i + x_j is tight against
    D(i,j), and a loop at every zero coordinate."""

    k: int
    edges: frozenset  # pairs (i, j) with i < j
    loops: frozenset  # indices with x_i = 0

    def neighbors(self, i: int) -> list:
        out = [b if a == i else a for a, b in self.edges if i in (a, b)]
        return sorted(out)


def tightness_graph(x, D: SemiMetric) -> TightnessGraph:
    """Tightness structure of a member point; loops mark zero coordinates."""
    res = tight_span_membership(x, D)
    if not res.is_member:
        raise NotAMember(str(res))
    xs = x.coords if isinstance(x, TightSpanPoint) else np.asarray(x, dtype=float)
    slack = xs[:, None] + xs[None, :] - D.matrix
    pairs = frozenset(
        (int(i), int(j)) for i, j in np.argwhere(np.abs(slack) <= EPS) if i < j
    )
    loops = frozenset(int(i) for i in np.flatnonzero(np.abs(xs) <= EPS))
    return TightnessGraph(k=D.size, edges=pairs, loops=loops)


def is_extreme_point(x, D: SemiMetric) -> bool:
    """A member is extreme iff its tightness graph is connected and has an odd
    closed walk; loops count as odd cycles."""
    tg = tightness_graph(x, D)
    if tg.k == 0:
        return False
    color = [-1] * tg.k
    color[0] = 0
    stack = [0]
    odd = False
    seen = 1
    adj = [[] for _ in range(tg.k)]
    for i, j in tg.edges:
        adj[i].append(j)
        adj[j].append(i)
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if color[w] == -1:
                color[w] = color[u] ^ 1
                seen += 1
                stack.append(w)
            elif color[w] == color[u]:
                odd = True
    if seen != tg.k:
        return False
    if tg.loops:
        odd = True
    return odd
