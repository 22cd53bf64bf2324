"""Agent-based simulation of the finite-population logit dynamics.

One uniformly chosen agent revises per step, drawing its new action from the
logit choice probabilities at the current state (computed with the reviser
included).  Each step consumes exactly two uniform draws from the trial's
generator: one to pick the revising agent, one to pick the new action.
`run_hitting` buffers draws in blocks, which numpy guarantees to be
value-equal to sequential draws, so trajectories are bit-reproducible and
identical to a naive step-by-step loop with the same seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError
from .game import PayoffMatrix, in_target


@dataclass(frozen=True)
class PopulationState:
    """Agent counts per action; the simplex state is counts / N."""

    counts: tuple[int, ...]

    def __init__(self, counts: Sequence[int]):
        counts = tuple(int(c) for c in counts)
        if any(c < 0 for c in counts):
            raise ConfigError(f"negative agent count: {counts}")
        if sum(counts) < 1:
            raise ConfigError("population must contain at least one agent")
        object.__setattr__(self, "counts", counts)

    @property
    def N(self) -> int:
        return sum(self.counts)

    def shares(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=float) / self.N


@dataclass(frozen=True)
class SimConfig:
    N: int
    eta: float
    seed: int | tuple[int, ...]
    max_steps: int
    start: PopulationState

    def __post_init__(self):
        if self.N < 2:
            raise ConfigError(f"population size must be >= 2, got {self.N}")
        if self.eta <= 0:
            raise ConfigError(f"eta must be positive, got {self.eta}")
        if self.max_steps < 1:
            raise ConfigError("max_steps must be >= 1")
        if self.start.N != self.N:
            raise ConfigError(f"start state has {self.start.N} agents, expected {self.N}")


def logit_choice(pi: Sequence[float], eta: float) -> np.ndarray:
    """Choice probabilities exp(pi/eta) normalized, computed stably."""
    if eta <= 0:
        raise ConfigError(f"eta must be positive, got {eta}")
    z = np.asarray(pi, dtype=float) / eta
    z = z - z.max()
    e = np.exp(z)
    return e / e.sum()


def step(state: PopulationState, A: PayoffMatrix, eta: float, rng: np.random.Generator) -> PopulationState:
    """One revision: a uniform agent redraws its action from the logit rule."""
    counts = list(state.counts)
    N = state.N
    slot = int(rng.random() * N)  # agent position in action-sorted order
    i = 0
    acc = counts[0]
    while slot >= acc:
        i += 1
        acc += counts[i]
    sigma = logit_choice(A.as_array() @ (np.asarray(counts, dtype=float) / N), eta)
    u = rng.random()
    j = int(np.searchsorted(np.cumsum(sigma), u, side="right"))
    j = min(j, len(counts) - 1)
    counts[i] -= 1
    counts[j] += 1
    return PopulationState(tuple(counts))


@dataclass(frozen=True)
class HitResult:
    steps: int
    censored: bool


def run_hitting(cfg: SimConfig, A: PayoffMatrix) -> HitResult:
    """Steps until the state enters the target set, or censoring at max_steps.

    Loops the per-step protocol with draws buffered in blocks and the
    per-state choice distribution cached (the state space is tiny compared
    with the number of steps).
    """
    counts = list(cfg.start.counts)
    N = cfg.N
    n = len(counts)
    Aarr = A.as_array()
    if in_target(A, [c / N for c in counts]):
        raise ConfigError("start state already lies in the target set")

    dist_cache: dict[tuple[int, ...], tuple[float, ...]] = {}

    def cum_sigma(key: tuple[int, ...]) -> tuple[float, ...]:
        got = dist_cache.get(key)
        if got is None:
            sigma = logit_choice(Aarr @ (np.asarray(key, dtype=float) / N), cfg.eta)
            got = tuple(np.cumsum(sigma))
            dist_cache[key] = got
        return got

    # target membership depends only on the counts; cache it as well
    target_cache: dict[tuple[int, ...], bool] = {}

    def hits(key: tuple[int, ...]) -> bool:
        got = target_cache.get(key)
        if got is None:
            got = in_target(A, [c / N for c in key])
            target_cache[key] = got
        return got

    rng = np.random.default_rng(cfg.seed)
    block = max(2048, 2 * n)
    buf = rng.random(block)
    pos = 0
    steps = 0
    key = tuple(counts)
    while steps < cfg.max_steps:
        if pos + 2 > block:
            buf = rng.random(block)
            pos = 0
        slot = int(buf[pos] * N)
        u = buf[pos + 1]
        pos += 2
        steps += 1

        i = 0
        acc = counts[0]
        while slot >= acc:
            i += 1
            acc += counts[i]
        cs = cum_sigma(key)
        j = 0
        while cs[j] <= u and j < n - 1:
            j += 1
        if i != j:
            counts[i] -= 1
            counts[j] += 1
            key = tuple(counts)
            if hits(key):
                return HitResult(steps, False)
    return HitResult(cfg.max_steps, True)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    N: int
    eta: float
    hit_steps: int
    censored: bool


@dataclass(frozen=True)
class ExitStats:
    N: int
    trials: int
    hits: int
    mean_hit: float | None
    median: float | None
    p90: float | None


def _order_stat(sorted_vals: list[float], q: float) -> float | None:
    """Order statistic with censored runs treated as +infinity."""
    k = len(sorted_vals)
    if k == 0:
        return None
    pos = q * (k - 1)
    lo, hi = int(math.floor(pos)), int(math.ceil(pos))
    a, b = sorted_vals[lo], sorted_vals[hi]
    if math.isinf(a) or math.isinf(b):
        return None
    return a + (b - a) * (pos - lo)


def estimate_exit_stats(
    A: PayoffMatrix,
    N_list: Sequence[int],
    eta: float,
    trials: int,
    seed: int,
    max_steps: int = 10_000_000,
    start_action: int = 0,
) -> tuple[list[TrialRecord], list[ExitStats]]:
    """Hitting-step statistics per population size.

    Trial t uses the generator seeded by (seed, t), the same stream for every
    N (common random numbers across the size sweep).  All-censored cells are
    reported with None statistics, never silently dropped.
    """
    if trials < 1:
        raise ConfigError("need at least one trial")
    records: list[TrialRecord] = []
    stats: list[ExitStats] = []
    for N in N_list:
        counts = [0] * A.n
        counts[start_action] = N
        start = PopulationState(tuple(counts))
        vals: list[float] = []
        hits = 0
        for t in range(trials):
            cfg = SimConfig(N=N, eta=eta, seed=(seed, t), max_steps=max_steps, start=start)
            res = run_hitting(cfg, A)
            records.append(TrialRecord(t, N, eta, res.steps, res.censored))
            vals.append(math.inf if res.censored else float(res.steps))
            hits += 0 if res.censored else 1
        vals.sort()
        finite = [v for v in vals if math.isfinite(v)]
        stats.append(
            ExitStats(
                N=N,
                trials=trials,
                hits=hits,
                mean_hit=(sum(finite) / len(finite)) if finite else None,
                median=_order_stat(vals, 0.5),
                p90=_order_stat(vals, 0.9),
            )
        )
    return records, stats
