"""Simplex geometry: points, tangent vectors, and barycentric lattice grids.

States live on the probability simplex over n actions.  Grids are stored
with exact integer numerators (coordinates are k/M) so membership and
adjacency never suffer floating-point drift; real coordinates are derived
on demand.  The restricted simplex keeps every coordinate >= r, which for
lattice-compatible r is exactly the set of lattice points of the shrunken
simplex spanned by the vertices returned by :func:`restricted_vertices`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations
from typing import Iterator, Sequence

import numpy as np

from .errors import ConfigError

SUM_TOL = 1e-12


def _as_floats(values: Sequence[float]) -> tuple[float, ...]:
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class SimplexPoint:
    """A population state: nonnegative shares summing to one."""

    coords: tuple[float, ...]

    def __init__(self, coords: Sequence[float]):
        coords = _as_floats(coords)
        if any(c < 0.0 for c in coords):
            raise ConfigError(f"simplex point has a negative coordinate: {coords}")
        if abs(sum(coords) - 1.0) > SUM_TOL:
            raise ConfigError(f"simplex point does not sum to 1: {coords}")
        object.__setattr__(self, "coords", coords)

    @property
    def n(self) -> int:
        return len(self.coords)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)

    def is_interior(self, tol: float = 0.0) -> bool:
        return all(c > tol for c in self.coords)


@dataclass(frozen=True)
class TangentVector:
    """A direction in the sum-zero tangent space of the simplex."""

    comps: tuple[float, ...]

    def __init__(self, comps: Sequence[float]):
        comps = _as_floats(comps)
        if abs(sum(comps)) > SUM_TOL:
            raise ConfigError(f"tangent vector does not sum to 0: {comps}")
        object.__setattr__(self, "comps", comps)

    @property
    def n(self) -> int:
        return len(self.comps)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.comps, dtype=float)

    def __neg__(self) -> "TangentVector":
        return TangentVector(tuple(-c for c in self.comps))


def project_to_tangent(w: Sequence[float]) -> TangentVector:
    """Project an arbitrary vector onto the sum-zero subspace (subtract the mean)."""
    w = np.asarray(w, dtype=float)
    v = w - w.mean()
    # renormalize the tail so the invariant holds exactly despite rounding
    v[-1] = -v[:-1].sum()
    return TangentVector(tuple(v))


def tangent_cone_contains(x: SimplexPoint, v: TangentVector, tol: float = 1e-12) -> bool:
    """Whether v is a feasible direction at x: v_i >= -tol wherever x_i <= tol."""
    return all(vi >= -tol for xi, vi in zip(x.coords, v.comps) if xi <= tol)


def restricted_vertices(n: int, r: float) -> list[SimplexPoint]:
    """Vertices of the restricted simplex: each pure state pulled inward by r per
    off coordinate, i.e. (1-(n-1)r) on the main action and r elsewhere."""
    if not 0.0 < r < 1.0 / (2 * (n - 1)):
        raise ConfigError(f"restriction r={r} outside (0, 1/(2(n-1))) for n={n}")
    out = []
    for i in range(n):
        coords = [r] * n
        coords[i] = 1.0 - (n - 1) * r
        out.append(SimplexPoint(coords))
    return out


@dataclass(frozen=True)
class GridNode:
    """A lattice point, identified by its integer numerators over M."""

    index: int
    numerators: tuple[int, ...]
    denominator: int

    @property
    def point(self) -> SimplexPoint:
        return SimplexPoint(tuple(k / self.denominator for k in self.numerators))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.numerators, dtype=float) / self.denominator


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of `parts` nonnegative integers summing to `total`, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


class BarycentricGrid:
    """Lattice discretization of the (restricted) simplex with pairwise-swap moves.

    Nodes are the integer vectors k >= floor componentwise with sum(k) = M;
    the move set is all n(n-1) single swaps (e_j - e_i)/M.  Immutable after
    construction and safe for concurrent reads.
    """

    def __init__(self, n: int, M: int, r: float = 0.0):
        if n < 2:
            raise ConfigError(f"need at least 2 actions, got n={n}")
        if M < 2:
            raise ConfigError(f"lattice denominator must be >= 2, got M={M}")
        if r < 0.0:
            raise ConfigError(f"restriction r={r} must be nonnegative")
        floor = r * M
        if abs(floor - round(floor)) > 1e-9:
            raise ConfigError(f"r={r} is not an integer multiple of 1/M (M={M})")
        floor = int(round(floor))
        if r > 0.0 and not r < 1.0 / (2 * (n - 1)):
            raise ConfigError(f"restriction r={r} must satisfy r < 1/(2(n-1))")
        if floor * n >= M:
            raise ConfigError(f"restriction r={r} leaves no lattice points at M={M}")

        self.n = n
        self.M = M
        self.r_floor = floor / M
        self.floor_numerator = floor

        nodes: list[GridNode] = []
        index_of: dict[tuple[int, ...], int] = {}
        for rest in _compositions(M - n * floor, n):
            k = tuple(ki + floor for ki in rest)
            idx = len(nodes)
            nodes.append(GridNode(idx, k, M))
            index_of[k] = idx
        self.nodes = tuple(nodes)
        self._index_of = index_of

        # moves[m] = (i, j): one agent switches from action i to action j
        self.moves = tuple((i, j) for i, j in permutations(range(n), 2))
        self._displacements = tuple(
            TangentVector(tuple((1.0 if l == j else -1.0 if l == i else 0.0) / M for l in range(n)))
            for i, j in self.moves
        )

    def __len__(self) -> int:
        return len(self.nodes)

    def node_count(self) -> int:
        return len(self.nodes)

    def contains(self, numerators: Sequence[int]) -> bool:
        return tuple(int(k) for k in numerators) in self._index_of

    def node_from_numerators(self, numerators: Sequence[int]) -> GridNode:
        key = tuple(int(k) for k in numerators)
        try:
            return self.nodes[self._index_of[key]]
        except KeyError:
            raise ConfigError(f"{key} is not a lattice point of this grid") from None

    def displacement(self, move_index: int) -> TangentVector:
        return self._displacements[move_index]

    def move_target(self, node: GridNode, move_index: int) -> GridNode | None:
        """Apply one swap move; None when the result leaves the grid."""
        i, j = self.moves[move_index]
        if node.numerators[i] - 1 < self.floor_numerator:
            return None
        k = list(node.numerators)
        k[i] -= 1
        k[j] += 1
        idx = self._index_of.get(tuple(k))
        return None if idx is None else self.nodes[idx]

    def neighbors(self, node: GridNode) -> list[tuple[GridNode, TangentVector]]:
        """All in-grid results of applying each move, with exact displacements."""
        out = []
        for m in range(len(self.moves)):
            target = self.move_target(node, m)
            if target is not None:
                out.append((target, self._displacements[m]))
        return out

    def arcs(self) -> Iterator[tuple[int, int, int]]:
        """All directed in-grid arcs as (from_index, to_index, move_index)."""
        for node in self.nodes:
            for m in range(len(self.moves)):
                target = self.move_target(node, m)
                if target is not None:
                    yield node.index, target.index, m

    def points_array(self) -> np.ndarray:
        """Node coordinates as an (N, n) float array."""
        ks = np.asarray([node.numerators for node in self.nodes], dtype=float)
        return ks / self.M

    def nearest_node(self, point: Sequence[float]) -> GridNode:
        """Grid node closest in l1 to an arbitrary simplex point."""
        pts = self.points_array()
        target = np.asarray(point, dtype=float)
        idx = int(np.argmin(np.abs(pts - target).sum(axis=1)))
        return self.nodes[idx]


def build_grid(n: int, M: int, r: float = 0.0) -> BarycentricGrid:
    """Build the barycentric lattice over the simplex (r=0) or its restriction."""
    return BarycentricGrid(n, M, r)


def full_grid_node_count(n: int, M: int) -> int:
    """Closed-form node count of the unrestricted grid: C(M+n-1, n-1)."""
    return math.comb(M + n - 1, n - 1)
