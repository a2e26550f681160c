"""Semi-metrics, terminal-preservation and feasibility checks, tight-span membership.

A semi-metric here is a symmetric nonnegative matrix with zero diagonal
satisfying the triangle inequality within EPS; zero distance between distinct
indices is allowed. The tight span of a terminal metric D is the set of
minimal points of the polytope {x >= 0 : x_i + x_j >= D(i,j)} under the
l-infinity metric.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .errors import (
    EPS,
    AsymmetryWitness,
    DimensionMismatch,
    NegativeEntry,
    NonSquare,
    NonzeroDiagonal,
    TerminalsMerged,
)


class SemiMetric:
    """Immutable semi-metric over ``size`` points.

    The constructor enforces the cheap structural axioms (square, symmetric,
    nonnegative, zero diagonal). The cubic triangle-inequality check is the
    job of validate_semimetric and is run where inputs are untrusted.
    """

    def __init__(self, matrix):
        m = np.array(matrix, dtype=float)
        _structural_checks(m)
        m.flags.writeable = False
        self.matrix = m
        self.size = m.shape[0]

    def __getitem__(self, idx):
        return self.matrix[idx]

    def __eq__(self, other):
        return isinstance(other, SemiMetric) and np.array_equal(self.matrix, other.matrix)

    def __repr__(self):
        return f"SemiMetric(size={self.size})"


def _structural_checks(m: np.ndarray):
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquare(f"shape {m.shape} is not square")
    if not np.isfinite(m).all():
        raise ValueError("semi-metric entries must be finite")
    bad = np.argwhere(np.abs(m - m.T) > EPS)
    if len(bad):
        i, j = (int(x) for x in bad[0])
        raise AsymmetryWitness(i, j)
    bad = np.argwhere(m < -EPS)
    if len(bad):
        i, j = (int(x) for x in bad[0])
        raise NegativeEntry(i, j)
    diag = np.abs(np.diagonal(m))
    if (diag > EPS).any():
        raise NonzeroDiagonal(int(np.argmax(diag > EPS)))


def validate_semimetric(matrix) -> Optional[tuple]:
    """Full semi-metric validation.

    Structural violations raise (NonSquare, AsymmetryWitness, NegativeEntry,
    NonzeroDiagonal). A triangle-inequality violation returns the
    lexicographically first triple (i, j, l) with d(i,j) > d(i,l) + d(l,j).
    Returns None when every axiom holds within EPS.
    """
    m = matrix.matrix if isinstance(matrix, SemiMetric) else np.array(matrix, dtype=float)
    _structural_checks(m)
    n = m.shape[0]
    violated = False
    for l in range(n):
        if (m > m[:, l : l + 1] + m[l : l + 1, :] + EPS).any():
            violated = True
            break
    if not violated:
        return None
    for i in range(n):
        for j in range(n):
            dij = m[i, j]
            row = m[i, :] + m[:, j]
            bad = np.flatnonzero(dij > row + EPS)
            if len(bad):
                return (i, j, int(bad[0]))
    return None


def check_terminal_preservation(delta: SemiMetric, terminal_clusters: Sequence[int], inst) -> bool:
    """True iff delta restricted to the terminal clusters equals the terminal metric.

    terminal_clusters[i] is the cluster holding terminal i. Raises
    TerminalsMerged when two terminals share a cluster.
    """
    tc = list(terminal_clusters)
    if len(set(tc)) != len(tc):
        raise TerminalsMerged("two terminals share a cluster")
    want = inst.terminal_metric.matrix
    if len(tc) != want.shape[0]:
        raise DimensionMismatch(
            f"{len(tc)} terminal clusters against a {want.shape[0]}-terminal metric"
        )
    got = delta.matrix[np.ix_(tc, tc)]
    return bool(np.abs(got - want).max(initial=0.0) <= EPS)


def check_agk_feasibility(
    delta: SemiMetric, terminal_clusters: Sequence[int], inst, demand
) -> bool:
    """Average-distance feasibility: the demand-weighted terminal distance sum
    under delta must not fall below the same sum under the graph metric.

    The comparison tolerance scales with the total demand.
    """
    dem = np.asarray(demand, dtype=float)
    k = inst.terminal_metric.size
    if dem.shape != (k, k):
        raise DimensionMismatch(f"demand shape {dem.shape}, expected {(k, k)}")
    if (dem < 0).any():
        raise ValueError("demand must be nonnegative")
    if np.abs(dem - dem.T).max(initial=0.0) > EPS:
        raise ValueError("demand must be symmetric")
    tc = list(terminal_clusters)
    lhs = float((dem * delta.matrix[np.ix_(tc, tc)]).sum())
    rhs = float((dem * inst.terminal_metric.matrix).sum())
    return lhs >= rhs - EPS * max(dem.sum(), 1.0)


@dataclass(frozen=True)
class TightSpanPoint:
    """A point of the tight span, stored as its k coordinates."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=float)
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]


class Membership(Enum):
    MEMBER = "member"
    IN_POLYTOPE_NOT_MINIMAL = "in_polytope_not_minimal"
    OUTSIDE_POLYTOPE = "outside_polytope"


@dataclass(frozen=True)
class MembershipResult:
    status: Membership
    witness: Optional[tuple] = None  # violated pair for OUTSIDE_POLYTOPE
    loose_index: Optional[int] = None  # non-tight index for NOT_MINIMAL

    @property
    def is_member(self) -> bool:
        return self.status is Membership.MEMBER


def tight_span_membership(x, D: SemiMetric) -> MembershipResult:
    """Classify a k-vector against the tight span of D.

    The polytope and tightness checks include the pair i = j, so x_i >= 0 is
    part of the polytope and a zero coordinate is tight with itself.
    """
    xs = x.coords if isinstance(x, TightSpanPoint) else np.asarray(x, dtype=float)
    if xs.shape != (D.size,):
        raise DimensionMismatch(f"vector of length {xs.shape}, metric of size {D.size}")
    slack = xs[:, None] + xs[None, :] - D.matrix
    bad = np.argwhere(slack < -EPS)
    if len(bad):
        i, j = min((int(a), int(b)) for a, b in bad)
        return MembershipResult(Membership.OUTSIDE_POLYTOPE, witness=(i, j))
    tight = slack <= EPS
    loose = np.flatnonzero(~tight.any(axis=1))
    if len(loose):
        return MembershipResult(
            Membership.IN_POLYTOPE_NOT_MINIMAL, loose_index=int(loose[0])
        )
    return MembershipResult(Membership.MEMBER)


def terminal_vector(inst, i: int) -> TightSpanPoint:
    """The canonical tight-span point of terminal i: its distance row.

    The result is certified to be a member before it is returned.
    """
    D = inst.terminal_metric
    if not 0 <= i < D.size:
        raise IndexError(f"terminal index {i} out of range")
    x = TightSpanPoint(D.matrix[i].copy())
    res = tight_span_membership(x, D)
    if not res.is_member:
        raise AssertionError(f"terminal vector {i} failed membership: {res}")
    return x
