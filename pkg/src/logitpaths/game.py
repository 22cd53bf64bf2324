"""Payoff matrices, coordination checks, unlikelihood, and best-response regions.

Conventions: entry A[i][j] is the payoff to an i-player matched against a
j-player, so the payoff vector at state x is the matrix-vector product A x.
Action indices are 0-based.  The default target set is the closure of the
complement of action 0's best-response region (every state where some other
action is at least as good).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError
from .geometry import BarycentricGrid, SimplexPoint


@dataclass(frozen=True)
class PayoffMatrix:
    entries: tuple[tuple[float, ...], ...]

    def __init__(self, entries: Sequence[Sequence[float]]):
        rows = tuple(tuple(float(v) for v in row) for row in entries)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise ConfigError("payoff matrix must be square and nonempty")
        object.__setattr__(self, "entries", rows)

    @property
    def n(self) -> int:
        return len(self.entries)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=float)


def validate_coordination(A: PayoffMatrix) -> tuple[int, int] | None:
    """Return None if A is a coordination game, else the first violating (i, j).

    Coordination means every column's diagonal entry strictly dominates the
    column: A[i][i] > A[j][i] for all j != i, checked with zero tolerance.
    The witness (i, j) names the column i and offending row j.
    """
    for i in range(A.n):
        for j in range(A.n):
            if j != i and not A.entries[i][i] > A.entries[j][i]:
                return (i, j)
    return None


def require_coordination(A: PayoffMatrix) -> None:
    witness = validate_coordination(A)
    if witness is not None:
        i, j = witness
        raise ConfigError(
            f"not a coordination game: column {i} has A[{j}][{i}]={A.entries[j][i]} "
            f">= A[{i}][{i}]={A.entries[i][i]}"
        )


def payoff_vector(A: PayoffMatrix, x: SimplexPoint | Sequence[float]) -> np.ndarray:
    """Per-action payoffs A x at state x."""
    coords = x.as_array() if isinstance(x, SimplexPoint) else np.asarray(x, dtype=float)
    return A.as_array() @ coords


def unlikelihood(pi: Sequence[float]) -> np.ndarray:
    """Exponential decay rates of suboptimal choices: max(pi) - pi, componentwise."""
    pi = np.asarray(pi, dtype=float)
    return pi.max() - pi


@dataclass(frozen=True)
class RegionLabel:
    """The set of actions that are (tol-approximately) best responses at a state."""

    indices: tuple[int, ...]

    def __contains__(self, action: int) -> bool:
        return action in self.indices


def best_response_region(A: PayoffMatrix, x: SimplexPoint, tol: float = 0.0) -> RegionLabel:
    pi = payoff_vector(A, x)
    best = pi.max()
    return RegionLabel(tuple(int(i) for i in range(A.n) if pi[i] >= best - tol))


def in_target(A: PayoffMatrix, x: SimplexPoint | Sequence[float], tol: float = 0.0) -> bool:
    """Whether x lies in the closed target set: some action j >= 1 does at least
    as well as action 0 (ties included, so region boundaries belong)."""
    pi = payoff_vector(A, x)
    return bool((pi[1:] >= pi[0] - tol).any())


TargetPredicate = Callable[[np.ndarray], bool]


def target_nodes(
    grid: BarycentricGrid,
    A: PayoffMatrix,
    tol: float = 0.0,
    predicate: TargetPredicate | None = None,
) -> list[int]:
    """Indices of grid nodes inside the target set.

    `predicate` replaces the default membership test for other selection
    problems; it receives the node coordinates as an array.
    """
    if predicate is None:
        Aarr = A.as_array()

        def predicate(coords: np.ndarray) -> bool:
            pi = Aarr @ coords
            return bool((pi[1:] >= pi[0] - tol).any())

    return [node.index for node in grid.nodes if predicate(node.as_array())]
