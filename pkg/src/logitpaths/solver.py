"""Value functions as multi-source shortest paths on the simplex lattice.

Since the running costs are speed-invariant, optimal paths are determined by
direction alone and both the target and the source problem reduce to
shortest-path distances: the weight of the arc a -> b is the support cost of
the displacement b - a, evaluated at the segment midpoint (second-order
local quadrature; the cost field is state dependent).

Target fields run Dijkstra from every target node over reversed arcs;
source fields run forward from the seed set.  Heap ties break on node index
so identical inputs give identical outputs.  Unreachable nodes keep
+infinity.  eta-costs are undefined on the boundary, so eta solves require a
grid pulled off the boundary unless `allow_boundary_edges` is set, in which
case arcs whose midpoint touches the boundary get +infinity weight (used by
the corner-cost study and the exploratory full-simplex runs).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, NumericalFailure
from .game import PayoffMatrix, target_nodes
from .geometry import BarycentricGrid, GridNode
from .hamiltonian import DEFAULT_CONFIG, RaySolverConfig, support_cost_eta_batch


class EdgeCostEvaluator:
    """Support-function arc weights sigma(midpoint, displacement), memoized.

    Limit costs come from the closed-form box support (the semilinear running
    cost); eta costs from the dual one-dimensional minimization, computed
    vectorized over all arcs on first use and cached per (node, move) pair.
    """

    def __init__(
        self,
        grid: BarycentricGrid,
        A: PayoffMatrix,
        cost_kind: str = "limit",
        eta: float | None = None,
        cfg: RaySolverConfig = DEFAULT_CONFIG,
        allow_boundary_edges: bool = False,
    ):
        if cost_kind not in ("limit", "eta"):
            raise ConfigError(f"cost_kind must be 'limit' or 'eta', got {cost_kind!r}")
        if cost_kind == "eta":
            if eta is None or eta <= 0:
                raise ConfigError("eta cost requires a positive eta")
            if grid.floor_numerator == 0 and not allow_boundary_edges:
                raise ConfigError(
                    "eta cost on a grid touching the boundary requires allow_boundary_edges"
                )
        self.grid = grid
        self.A = A
        self.cost_kind = cost_kind
        self.eta = eta
        self.cfg = cfg
        self.allow_boundary_edges = allow_boundary_edges
        self._costs: dict[tuple[int, int], float] = {}
        self._filled = False

    def _fill(self) -> None:
        grid = self.grid
        arcs = [(a, b, m) for a, b, m in grid.arcs()]
        pts = grid.points_array()
        mids = np.asarray([(pts[a] + pts[b]) * 0.5 for a, b, _ in arcs])
        disps = np.asarray([grid.displacement(m).as_array() for _, _, m in arcs])

        if self.cost_kind == "limit":
            # sigma = sum_j unlikelihood_j * [delta_j]_+ ; in-grid moves are
            # always inside the tangent cone at the midpoint
            pi = mids @ self.A.as_array().T
            ups = pi.max(axis=-1, keepdims=True) - pi
            weights = (ups * np.maximum(disps, 0.0)).sum(axis=-1)
        else:
            weights = np.full(len(arcs), math.inf)
            interior = (mids > 0.0).all(axis=-1)
            if not interior.all() and not self.allow_boundary_edges:
                raise ConfigError("eta cost hit a boundary midpoint; restrict the grid")
            if interior.any():
                weights[interior] = support_cost_eta_batch(
                    self.A, self.eta, mids[interior], disps[interior], self.cfg
                )
        bad = weights < -1e-12
        if bad.any():
            raise NumericalFailure(f"negative edge weight: {weights[bad].min():.3e}")
        self._costs = {(a, m): float(w) for (a, b, m), w in zip(arcs, weights)}
        self._filled = True

    def arc_cost(self, from_index: int, move_index: int) -> float:
        """Weight of the arc leaving `from_index` along move `move_index`."""
        if not self._filled:
            self._fill()
        return self._costs[(from_index, move_index)]

    def all_arcs(self) -> list[tuple[int, int, int, float]]:
        """(from, to, move, weight) for every in-grid arc."""
        if not self._filled:
            self._fill()
        return [
            (a, b, m, self._costs[(a, m)])
            for a, b, m in self.grid.arcs()
        ]


@dataclass
class ValueField:
    """Node-indexed value function with its provenance.

    kind is "target" (cost to reach the seed set) or "source" (cost to come
    from it); values are >= 0, exactly 0 on seeds, +infinity when unreachable.
    """

    grid: BarycentricGrid
    values: np.ndarray
    kind: str
    cost_kind: str
    eta: float | None
    seeds: tuple[int, ...]
    evaluator: EdgeCostEvaluator = field(repr=False)
    params: dict = field(default_factory=dict)

    def value_at(self, node: GridNode) -> float:
        return float(self.values[node.index])

    def is_seed(self, node: GridNode) -> bool:
        return node.index in set(self.seeds)

    def finite(self) -> np.ndarray:
        return np.isfinite(self.values)


@dataclass(frozen=True)
class OptimalPath:
    """A node sequence into the seed set together with its segment costs."""

    nodes: tuple[GridNode, ...]
    segment_costs: tuple[float, ...]
    total_cost: float


def _dijkstra(
    n_nodes: int,
    seeds: Sequence[int],
    relax_neighbors: Callable[[int], list[tuple[int, float]]],
) -> np.ndarray:
    """Label-setting shortest distances from a seed set; ties break on index."""
    dist = np.full(n_nodes, math.inf)
    done = np.zeros(n_nodes, dtype=bool)
    heap: list[tuple[float, int]] = []
    for s in seeds:
        dist[s] = 0.0
        heapq.heappush(heap, (0.0, s))
    while heap:
        d, u = heapq.heappop(heap)
        if done[u] or d > dist[u]:
            continue
        done[u] = True
        for v, w in relax_neighbors(u):
            if math.isinf(w) or done[v]:
                continue
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def _solve(
    grid: BarycentricGrid,
    A: PayoffMatrix,
    seeds: list[int],
    orientation: str,
    cost_kind: str,
    eta: float | None,
    cfg: RaySolverConfig,
    allow_boundary_edges: bool,
    evaluator: EdgeCostEvaluator | None,
    params: dict,
) -> ValueField:
    if not seeds:
        raise ConfigError("seed set contains no grid nodes")
    if evaluator is None:
        evaluator = EdgeCostEvaluator(grid, A, cost_kind, eta, cfg, allow_boundary_edges)

    # adjacency: for each node u, the arcs u->v with weights; the target
    # orientation walks reversed arcs (relax predecessors a of settled b)
    out_arcs: list[list[tuple[int, float]]] = [[] for _ in range(len(grid))]
    in_arcs: list[list[tuple[int, float]]] = [[] for _ in range(len(grid))]
    for a, b, m, w in evaluator.all_arcs():
        out_arcs[a].append((b, w))
        in_arcs[b].append((a, w))

    if orientation == "target":
        dist = _dijkstra(len(grid), seeds, lambda u: in_arcs[u])
    else:
        dist = _dijkstra(len(grid), seeds, lambda u: out_arcs[u])
    return ValueField(
        grid=grid,
        values=dist,
        kind=orientation,
        cost_kind=cost_kind,
        eta=eta,
        seeds=tuple(sorted(seeds)),
        evaluator=evaluator,
        params=dict(params),
    )


def solve_target(
    grid: BarycentricGrid,
    A: PayoffMatrix,
    cost_kind: str = "limit",
    eta: float | None = None,
    cfg: RaySolverConfig = DEFAULT_CONFIG,
    target_tol: float = 0.0,
    target_predicate=None,
    allow_boundary_edges: bool = False,
    evaluator: EdgeCostEvaluator | None = None,
) -> ValueField:
    """Minimal cost from each node into the target set (multi-source Dijkstra
    from all target nodes over reversed arcs)."""
    seeds = target_nodes(grid, A, target_tol, target_predicate)
    return _solve(
        grid, A, seeds, "target", cost_kind, eta, cfg, allow_boundary_edges, evaluator,
        {"target_tol": target_tol},
    )


def solve_source(
    grid: BarycentricGrid,
    A: PayoffMatrix,
    source_nodes: Sequence[GridNode | int],
    cost_kind: str = "limit",
    eta: float | None = None,
    cfg: RaySolverConfig = DEFAULT_CONFIG,
    allow_boundary_edges: bool = False,
    evaluator: EdgeCostEvaluator | None = None,
) -> ValueField:
    """Minimal cost of reaching each node from the given source set."""
    seeds = [s.index if isinstance(s, GridNode) else int(s) for s in source_nodes]
    return _solve(
        grid, A, seeds, "source", cost_kind, eta, cfg, allow_boundary_edges, evaluator,
        {"sources": tuple(sorted(seeds))},
    )


def reconstruct_path(field: ValueField, start: GridNode) -> OptimalPath:
    """Greedy descent along Bellman-consistent arcs from `start` to the seeds.

    At each node the attaining neighbor (value difference equals the arc
    weight within tolerance) with the smallest value, then smallest index,
    is chosen; zero-cost plateaus are guarded by a visited set.
    """
    grid = field.grid
    ev = field.evaluator
    values = field.values
    if not math.isfinite(values[start.index]):
        raise ConfigError(f"no finite value at start node {start.numerators}")
    seed_set = set(field.seeds)
    nodes = [start]
    seg_costs: list[float] = []
    visited = {start.index}
    current = start
    for _ in range(len(grid) + 1):
        if current.index in seed_set:
            total = float(sum(seg_costs))
            target = values[start.index]
            if abs(total - target) > 1e-6 * (1.0 + abs(target)):
                raise NumericalFailure(
                    f"path cost {total} disagrees with value {target} at start"
                )
            return OptimalPath(tuple(nodes), tuple(seg_costs), total)
        best: tuple[float, int, GridNode, float] | None = None
        va = values[current.index]
        for m in range(len(grid.moves)):
            if field.kind == "target":
                nxt = grid.move_target(current, m)
                if nxt is None:
                    continue
                w = ev.arc_cost(current.index, m)
            else:
                nxt = grid.move_target(current, m)
                if nxt is None:
                    continue
                # walking a source field backward: current was reached FROM nxt
                w = ev.arc_cost(nxt.index, _reverse_move(grid, m))
            vb = values[nxt.index]
            if not math.isfinite(vb) or nxt.index in visited:
                continue
            if abs(va - (vb + w)) <= 1e-9 * (1.0 + abs(va)):
                cand = (vb, nxt.index, nxt, w)
                if best is None or cand[:2] < best[:2]:
                    best = cand
        if best is None:
            raise NumericalFailure(
                f"no attaining neighbor at node {current.numerators}; "
                "Bellman consistency is broken"
            )
        _, _, nxt, w = best
        nodes.append(nxt)
        seg_costs.append(w)
        visited.add(nxt.index)
        current = nxt
    raise NumericalFailure("path reconstruction exceeded the node budget")


def _reverse_move(grid: BarycentricGrid, move_index: int) -> int:
    i, j = grid.moves[move_index]
    return grid.moves.index((j, i))


def lipschitz_estimate(field: ValueField) -> float:
    """Max over grid arcs of |value difference| / l1 length of the step."""
    values = field.values
    grid = field.grid
    step = 2.0 / grid.M  # every swap move has l1 length 2/M
    best = 0.0
    for a, b, _m in grid.arcs():
        va, vb = values[a], values[b]
        if math.isfinite(va) and math.isfinite(vb):
            best = max(best, abs(va - vb) / step)
    return best


def bellman_ford_values(field: ValueField) -> np.ndarray:
    """Independent fixpoint iteration over the same arcs; cross-check for Dijkstra."""
    grid = field.grid
    arcs = field.evaluator.all_arcs()
    dist = np.full(len(grid), math.inf)
    dist[list(field.seeds)] = 0.0
    reverse = field.kind == "target"
    for _ in range(len(grid)):
        changed = False
        for a, b, _m, w in arcs:
            if math.isinf(w):
                continue
            u, v = (b, a) if reverse else (a, b)
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                changed = True
        if not changed:
            break
    else:
        raise NumericalFailure("Bellman-Ford failed to settle; negative cycle?")
    return dist


def bellman_consistency_violation(field: ValueField) -> float:
    """Worst violation of value(a) <= value(b) + w(a->b) over finite arcs."""
    values = field.values
    worst = 0.0
    for a, b, m, w in field.evaluator.all_arcs():
        if field.kind == "target":
            u, v = a, b
        else:
            u, v = b, a
        if math.isfinite(values[v]) and math.isfinite(w) and math.isfinite(values[u]):
            worst = max(worst, values[u] - (values[v] + w))
    return worst
