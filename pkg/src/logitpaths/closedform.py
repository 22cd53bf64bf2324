"""Exact two-action formulas used as oracles for the grid solvers.

With payoff-difference row (alpha, -beta), the mixed equilibrium sits at
x1 = beta/(alpha+beta).  The limit value function integrates the payoff
difference from the equilibrium; the finite-noise value function picks up
an entropy correction and plateaus past a threshold share delta_eta, the
largest root of (alpha+beta)*d + eta*log((1-d)/d) = beta in (x*, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError, NumericalFailure


@dataclass(frozen=True)
class TwoActionGame:
    """Coordination game summarized by its payoff-difference row (alpha, -beta)."""

    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise ConfigError(f"need alpha, beta > 0, got ({self.alpha}, {self.beta})")


def mixed_equilibrium(g: TwoActionGame) -> float:
    return g.beta / (g.alpha + g.beta)


def v_limit_1d(g: TwoActionGame, x1: float) -> float:
    """Limit value at share x1: integral of (alpha+beta)s - beta from the equilibrium.

    Zero on the target side (x1 below the equilibrium), evaluated via the
    antiderivative (alpha+beta)s^2/2 - beta*s elsewhere.
    """
    if not 0.0 <= x1 <= 1.0:
        raise ConfigError(f"x1={x1} outside [0, 1]")
    xstar = mixed_equilibrium(g)
    if x1 <= xstar:
        return 0.0

    def F(s: float) -> float:
        return 0.5 * (g.alpha + g.beta) * s * s - g.beta * s

    return F(x1) - F(xstar)


def _delta_residual(g: TwoActionGame, eta: float, d: float) -> float:
    return (g.alpha + g.beta) * d + eta * math.log((1.0 - d) / d) - g.beta


def delta_eta(g: TwoActionGame, eta: float) -> float:
    """Plateau threshold: largest root of the defining equation in (x*, 1).

    The equation can have several roots (the equilibrium itself is one when
    alpha == beta); only the largest is consistent with the eta -> 0 limit
    delta -> 1, so bisection runs on the decreasing branch past the peak of
    the residual.  Reports failure when no sign change exists (large eta).
    """
    if eta <= 0:
        raise ConfigError(f"eta must be positive, got {eta}")
    disc = 1.0 - 4.0 * eta / (g.alpha + g.beta)
    if disc <= 0.0:
        raise NumericalFailure(f"no plateau threshold: eta={eta} too large for {g}")
    peak = 0.5 * (1.0 + math.sqrt(disc))  # larger root of d(1-d) = eta/(alpha+beta)
    lo = max(peak, mixed_equilibrium(g) + 1e-12)
    hi = 1.0 - 1e-15
    if _delta_residual(g, eta, lo) <= 0.0 or _delta_residual(g, eta, hi) >= 0.0:
        raise NumericalFailure(f"no sign change for delta_eta bracket at eta={eta}, {g}")
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if _delta_residual(g, eta, mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _entropy(s: float) -> float:
    """-s log s - (1-s) log(1-s) with the 0 log 0 = 0 convention."""
    out = 0.0
    if s > 0.0:
        out -= s * math.log(s)
    if s < 1.0:
        out -= (1.0 - s) * math.log(1.0 - s)
    return out


def v_eta_1d(g: TwoActionGame, eta: float, x1: float) -> float:
    """Finite-noise value at share x1: limit value plus the entropy correction,
    constant past the plateau threshold."""
    if not 0.0 <= x1 <= 1.0:
        raise ConfigError(f"x1={x1} outside [0, 1]")
    xstar = mixed_equilibrium(g)
    if x1 <= xstar:
        return 0.0
    d = delta_eta(g, eta)
    s = min(x1, d)
    return v_limit_1d(g, s) + eta * (_entropy(s) - _entropy(xstar))


def interval_n_eta_1d(g: TwoActionGame, eta: float, x1: float) -> tuple[float, float]:
    """Sublevel interval [0, c] at x1, with c = payoff difference plus the
    eta log-share correction; valid between the equilibrium and the plateau."""
    if eta <= 0:
        raise ConfigError(f"eta must be positive, got {eta}")
    if not 0.0 < x1 < 1.0:
        raise ConfigError(f"x1={x1} must be strictly interior")
    xstar = mixed_equilibrium(g)
    if not xstar <= x1 <= delta_eta(g, eta):
        raise ConfigError(f"x1={x1} outside [{xstar}, delta_eta]")
    c = (g.alpha + g.beta) * x1 - g.beta + eta * (math.log(1.0 - x1) - math.log(x1))
    return (0.0, c)
