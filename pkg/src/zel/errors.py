"""Shared numeric tolerance and the package exception hierarchy."""

# Absolute tolerance for all real comparisons. Instance lengths are integers,
# so intermediate quantities are half-integers and this never misclassifies
# at the scales the package targets.
EPS = 1e-9


class ZelError(Exception):
    """Base class for package errors."""


class DisconnectedGraph(ZelError):
    """An operation that requires connectivity met an unreachable vertex."""


class InvalidN(ZelError):
    """Vertex count outside the valid range of the instance family."""


class NoRemovableEdge(ZelError):
    """A short cycle consisted entirely of tree edges (corrupted input)."""


class NonSquare(ZelError):
    """Matrix is not square."""


class AsymmetryWitness(ZelError):
    """Matrix entry (i, j) differs from (j, i); args carry the indices."""


class NegativeEntry(ZelError):
    """Matrix entry below zero; args carry the indices."""


class NonzeroDiagonal(ZelError):
    """Diagonal entry of a would-be semi-metric is nonzero."""


class DimensionMismatch(ZelError):
    """Operands have incompatible sizes."""


class TerminalsMerged(ZelError):
    """Two terminals were mapped to the same cluster."""


class NotAMember(ZelError):
    """Point is not a member of the tight span."""


class InfeasibleDistances(ZelError):
    """Distance vector violates the two-sided triangle bounds; args carry the pair."""


class InvalidOffset(ZelError):
    """Continuization point offset outside [0, edge length]."""


class NotATree(ZelError):
    """Operation requires the graph to be a tree."""


class NonUniqueShortestPath(ZelError):
    """A unique shortest path was required but ties exist."""


class GTreeViolated(ZelError):
    """Near-cluster placement certificate failed; args carry the cluster id."""


class EmbeddingContractViolated(ZelError):
    """A proven embedding inequality failed on the produced mapping."""


class InvalidSolution(ZelError):
    """Solution violates a structural invariant; message names it."""


class BudgetExceeded(ZelError):
    """Exhaustive search would exceed the configured budget."""

    def __init__(self, required: int, allowed: int):
        super().__init__(f"search requires {required} evaluations, budget allows {allowed}")
        self.required = required
        self.allowed = allowed
