"""The two Hamiltonian families and their support-function edge costs.

`h_limit` is the small-noise Hamiltonian, a piecewise-linear max over ordered
action pairs with the unlikelihood of payoffs as the cost field.  `h_eta` is
the finite-noise Hamiltonian.  Its defining double sum factorizes exactly:

    sum_{i,j} x_i exp((u_j-u_i)/eta) w_j
        = (sum_i x_i exp(-u_i/eta)) * (sum_j w_j exp(u_j/eta)),

with w = softmax(Ax/eta), so it is evaluated as eta times a sum of two
stabilized log-sum-exps.  Both Hamiltonians depend on u only through
differences u_j - u_i, hence are invariant under adding a constant to u.

Per-direction infinitesimal costs are support functions of the zero sublevel
sets {u : H(x,u) <= 0}.  For the limit Hamiltonian the sublevel set is an
explicit box and the support cost equals the semilinear running cost.  For
the eta-Hamiltonian the cost is computed by the dual one-dimensional
minimization sigma(x,D) = inf_{T>0} T * L_eta(x, D/T), with the inner
Legendre transform solved by a damped Newton ascent; a direction-sampling
ray method is kept as an independent oracle for n <= 3.

The eta-Lagrangian is finite only for velocities in the total-variation ball
(sum of positive parts <= 1) and only at strictly interior states; boundary
states are rejected rather than approximated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, NumericalFailure
from .game import PayoffMatrix, payoff_vector, unlikelihood
from .geometry import SimplexPoint, TangentVector, tangent_cone_contains


@dataclass(frozen=True)
class RaySolverConfig:
    """Tolerances for the eta-cost evaluators; all solver knobs live here."""

    t_max: float = 1e6
    bisect_tol: float = 1e-10
    dir_samples: int = 720
    newton_max_iter: int = 200
    newton_tol: float = 1e-10

    def __post_init__(self):
        if min(self.t_max, self.bisect_tol, self.newton_tol) <= 0 or self.dir_samples <= 0 or self.newton_max_iter <= 0:
            raise ConfigError("all RaySolverConfig fields must be positive")


DEFAULT_CONFIG = RaySolverConfig()


def _coords(x) -> np.ndarray:
    if isinstance(x, SimplexPoint):
        return x.as_array()
    return np.asarray(x, dtype=float)


def _comps(u) -> np.ndarray:
    if isinstance(u, TangentVector):
        return u.as_array()
    return np.asarray(u, dtype=float)


def _logsumexp(z: np.ndarray, axis: int = -1) -> np.ndarray:
    zmax = np.max(z, axis=axis, keepdims=True)
    zmax = np.where(np.isfinite(zmax), zmax, 0.0)
    with np.errstate(divide="ignore"):
        return np.squeeze(zmax, axis) + np.log(np.sum(np.exp(z - zmax), axis=axis))


def _softmax(z: np.ndarray) -> np.ndarray:
    zmax = np.max(z, axis=-1, keepdims=True)
    e = np.exp(z - zmax)
    return e / e.sum(axis=-1, keepdims=True)


def log_payoff_weights(A: PayoffMatrix, X: np.ndarray, eta: float) -> np.ndarray:
    """log softmax(Ax/eta) rowwise for states X of shape (..., n)."""
    z = X @ A.as_array().T / eta
    zmax = np.max(z, axis=-1, keepdims=True)
    return z - zmax - np.log(np.sum(np.exp(z - zmax), axis=-1, keepdims=True))


def h_limit(A: PayoffMatrix, x, u) -> float:
    """Small-noise Hamiltonian: max over action pairs of u_j - Y_j(Ax) - u_i, floored at 0."""
    ups = unlikelihood(payoff_vector(A, _coords(x)))
    uu = _comps(u)
    return max(0.0, float((uu - ups).max() - uu.min()))


def h_limit_batch(A: PayoffMatrix, X: np.ndarray, U: np.ndarray) -> np.ndarray:
    """Vectorized h_limit over (..., n) state and costate arrays."""
    pi = X @ A.as_array().T
    ups = pi.max(axis=-1, keepdims=True) - pi
    vals = (U - ups).max(axis=-1) - U.min(axis=-1)
    return np.maximum(vals, 0.0)


def h_eta(A: PayoffMatrix, eta: float, x, u) -> float:
    """Finite-noise Hamiltonian via the factorized stabilized log-sum-exp form."""
    if eta <= 0:
        raise ConfigError(f"eta must be positive, got {eta}")
    xs = _coords(x)
    uu = _comps(u) / eta
    logw = log_payoff_weights(A, xs, eta)
    with np.errstate(divide="ignore"):
        logx = np.log(xs)
    return eta * float(_logsumexp(logw + uu) + _logsumexp(logx - uu))


def h_eta_batch(A: PayoffMatrix, eta: float, X: np.ndarray, U: np.ndarray) -> np.ndarray:
    if eta <= 0:
        raise ConfigError(f"eta must be positive, got {eta}")
    Us = U / eta
    logw = log_payoff_weights(A, X, eta)
    with np.errstate(divide="ignore"):
        logx = np.log(X)
    return eta * (_logsumexp(logw + Us) + _logsumexp(logx - Us))


def running_cost_limit(A: PayoffMatrix, x, v, tol: float = 1e-12) -> float:
    """Semilinear running cost: unlikelihood-weighted positive parts of v,
    +infinity outside the tangent cone at x."""
    xs = _coords(x)
    vv = _comps(v)
    if not tangent_cone_contains(SimplexPoint(tuple(xs)), TangentVector(tuple(vv)), tol):
        return math.inf
    ups = unlikelihood(payoff_vector(A, xs))
    return float(ups @ np.maximum(vv, 0.0))


@dataclass(frozen=True)
class SupportBox:
    """Zero level set of h_limit at x, a product box in costate differences.

    Coordinates are q_j = u_j - u_base with base the best response at x;
    the interval for each j is [0, highs[j]] and highs[base] = 0.
    """

    base: int
    highs: tuple[float, ...]

    def vertices(self) -> np.ndarray:
        """All box corners as full costate vectors (u_base = 0 gauge)."""
        n = len(self.highs)
        others = [j for j in range(n) if j != self.base]
        corners = []
        for mask in range(2 ** len(others)):
            u = np.zeros(n)
            for b, j in enumerate(others):
                if (mask >> b) & 1:
                    u[j] = self.highs[j]
            corners.append(u)
        return np.asarray(corners)


def zero_box(A: PayoffMatrix, x) -> SupportBox:
    """The box {u : h_limit(x,u) = 0} relative to the best response at x."""
    pi = payoff_vector(A, _coords(x))
    base = int(np.argmax(pi))
    highs = pi[base] - pi
    highs[base] = 0.0
    return SupportBox(base, tuple(float(h) for h in highs))


def support_cost_limit(A: PayoffMatrix, x, delta, tol: float = 1e-12) -> float:
    """Support function of the limit zero set; coincides with the running cost."""
    return running_cost_limit(A, x, delta, tol)


# ---------------------------------------------------------------------------
# eta-cost machinery: batched concave maximization and the dual 1-D search
# ---------------------------------------------------------------------------


def _newton_max(
    V: np.ndarray,
    T: np.ndarray,
    logw: np.ndarray,
    logx: np.ndarray,
    a0: np.ndarray,
    cfg: RaySolverConfig,
    max_iter: int | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Maximize g(a) = a.V - T*(lse(logw+a) + lse(logx-a)) per batch row.

    Gauge a[:, 0] = 0.  Returns (g*, a*, sup-norm of the reduced gradient).
    Damped Newton; the Hessian is T times a sum of two softmax covariance
    matrices, positive definite in the reduced coordinates.  All expensive
    work is gathered onto the still-active rows.  The stopping tolerance has
    a T-proportional floor: the gradient is a difference of probability
    vectors scaled by T, so below ~1e-14*T it is cancellation noise.
    """
    B, n = logw.shape
    a = a0.copy()
    a[:, 0] = 0.0
    if max_iter is None:
        max_iter = cfg.newton_max_iter

    def gval(rows: np.ndarray, aa: np.ndarray) -> np.ndarray:
        return (aa * V[rows]).sum(-1) - T[rows] * (
            _logsumexp(logw[rows] + aa) + _logsumexp(logx[rows] - aa)
        )

    def grad_red(rows: np.ndarray, aa: np.ndarray) -> np.ndarray:
        s = _softmax(logw[rows] + aa)
        t = _softmax(logx[rows] - aa)
        return (V[rows] - T[rows][:, None] * (s - t))[:, 1:]

    all_rows = np.arange(B)
    g = gval(all_rows, a)
    tol = np.maximum(cfg.newton_tol * (1.0 + np.abs(V).max(axis=-1)), 1e-14 * T)
    gnorm = np.abs(grad_red(all_rows, a)).max(axis=-1)
    idx = np.flatnonzero(gnorm > tol)
    eye = np.eye(n - 1)

    for _ in range(max_iter):
        if idx.size == 0:
            break
        ai = a[idx]
        s = _softmax(logw[idx] + ai)
        t = _softmax(logx[idx] - ai)
        gr = (V[idx] - T[idx][:, None] * (s - t))[:, 1:]
        cov = (
            np.einsum("bi,ij->bij", s, np.eye(n)) - np.einsum("bi,bj->bij", s, s)
            + np.einsum("bi,ij->bij", t, np.eye(n)) - np.einsum("bi,bj->bij", t, t)
        )
        H = T[idx][:, None, None] * cov[:, 1:, 1:]
        diag_max = np.einsum("bii->bi", H).max(axis=-1)
        H = H + (1e-13 * diag_max + 1e-30)[:, None, None] * eye
        step = np.zeros((idx.size, n))
        step[:, 1:] = np.linalg.solve(H, gr[..., None])[..., 0]
        slope = (gr * step[:, 1:]).sum(-1)

        # the objective carries ~1e-16*T rounding noise through the T*lse
        # terms; once the expected Newton gain sinks below it, the value is
        # converged even though the cosmetic gradient may sit above tol
        noise = 1e-14 * (1.0 + T[idx])
        live = slope > noise
        if not live.any():
            break
        idx = idx[live]
        ai, gr, step, slope, noise = ai[live], gr[live], step[live], slope[live], noise[live]

        alpha = np.ones(idx.size)
        accepted = np.zeros(idx.size, dtype=bool)
        for _ in range(30):
            open_ = np.flatnonzero(~accepted)
            if open_.size == 0:
                break
            trial = ai[open_] + alpha[open_, None] * step[open_]
            g_try = gval(idx[open_], trial)
            ok = g_try >= g[idx[open_]] + 1e-4 * alpha[open_] * slope[open_] - noise[open_]
            hit = open_[ok]
            if hit.size:
                ai[hit] = ai[hit] + alpha[hit, None] * step[hit]
                g[idx[hit]] = g_try[ok]
                accepted[hit] = True
            alpha[open_[~ok]] /= 2.0
        a[idx] = ai

        moved = np.flatnonzero(accepted)
        if moved.size == 0:
            break  # every remaining row stalled at numerical precision
        gn_moved = np.abs(grad_red(idx[moved], ai[moved])).max(axis=-1)
        gnorm[idx[moved]] = gn_moved
        keep = moved[gn_moved > tol[idx[moved]]]
        idx = idx[keep]
    return g, a, gnorm


def lagrangian_eta_batch(
    A: PayoffMatrix,
    eta: float,
    X: np.ndarray,
    V: np.ndarray,
    cfg: RaySolverConfig = DEFAULT_CONFIG,
) -> np.ndarray:
    """Legendre transform of h_eta in the velocity, batched over rows.

    Rows with velocities outside the total-variation ball get +infinity.
    States must be strictly interior.
    """
    if eta <= 0:
        raise ConfigError(f"eta must be positive, got {eta}")
    X = np.asarray(X, dtype=float)
    V = np.asarray(V, dtype=float)
    if (X <= 0).any():
        raise ConfigError("eta-Lagrangian is undefined at boundary states (some x_i <= 0)")
    feasible = np.maximum(V, 0.0).sum(-1) <= 1.0 + 1e-12
    out = np.full(X.shape[0], np.inf)
    if feasible.any():
        logw = log_payoff_weights(A, X[feasible], eta)
        logx = np.log(X[feasible])
        T = np.ones(feasible.sum())
        a0 = np.zeros_like(logw)
        g, _, gnorm = _newton_max(V[feasible], T, logw, logx, a0, cfg)
        bad = gnorm > 1e3 * np.maximum(
            cfg.newton_tol * (1.0 + np.abs(V[feasible]).max(axis=-1)), 1e-14 * T
        )
        if bad.any():
            raise NumericalFailure(
                f"conjugate solver: {int(bad.sum())} rows above gradient tolerance "
                f"after {cfg.newton_max_iter} iterations (worst {float(gnorm[bad].max()):.3e})"
            )
        out[feasible] = eta * g
    return out


def lagrangian_eta(A: PayoffMatrix, eta: float, x, v, cfg: RaySolverConfig = DEFAULT_CONFIG) -> float:
    """Running cost of the finite-noise process in direction v at interior x."""
    xs = _coords(x)
    vv = _comps(v)
    return float(lagrangian_eta_batch(A, eta, xs[None, :], vv[None, :], cfg)[0])


def support_cost_eta_batch(
    A: PayoffMatrix,
    eta: float,
    X: np.ndarray,
    D: np.ndarray,
    cfg: RaySolverConfig = DEFAULT_CONFIG,
) -> np.ndarray:
    """sigma_eta(x, D) rowwise: support of the eta zero-sublevel set.

    Computed as inf_T T*L_eta(x, D/T) by golden section over log T on the
    part of [1e-6, t_max] where the Lagrangian is finite (T >= sum of the
    positive parts of D), sharing one warm-started Newton state per row.
    """
    if eta <= 0:
        raise ConfigError(f"eta must be positive, got {eta}")
    X = np.asarray(X, dtype=float)
    D = np.asarray(D, dtype=float)
    if (X <= 0).any():
        raise ConfigError("eta support cost is undefined at boundary states (some x_i <= 0)")
    B = X.shape[0]
    scale = np.maximum(D, 0.0).sum(-1)
    out = np.zeros(B)
    live = scale > 0.0
    if not live.any():
        return out

    Xl = X[live]
    Dl = D[live] / scale[live][:, None]  # normalized: T ranges over [1, t_max/scale]
    logw = log_payoff_weights(A, Xl, eta)
    logx = np.log(Xl)
    lo = np.log1p(1e-9) * np.ones(live.sum())
    hi = np.log(cfg.t_max / np.minimum(scale[live], 1.0))
    a = np.zeros_like(logw)

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    width = float((hi - lo).max())
    iters = max(2, math.ceil(math.log(max(width, 1e-3) / 1e-8) / math.log(1.0 / invphi)))

    def fval(lam: np.ndarray) -> np.ndarray:
        nonlocal a
        g, a, _ = _newton_max(Dl, np.exp(lam), logw, logx, a, cfg, max_iter=40)
        return g

    lam1 = hi - invphi * (hi - lo)
    lam2 = lo + invphi * (hi - lo)
    f1 = fval(lam1)
    f2 = fval(lam2)
    best = np.minimum(f1, f2)
    for _ in range(iters):
        shrink_right = f1 < f2  # minimum lies left of lam2
        hi = np.where(shrink_right, lam2, hi)
        lo = np.where(shrink_right, lo, lam1)
        new_lam1 = np.where(shrink_right, hi - invphi * (hi - lo), lam2)
        new_lam2 = np.where(shrink_right, lam1, lo + invphi * (hi - lo))
        lam_eval = np.where(shrink_right, new_lam1, new_lam2)
        f_eval = fval(lam_eval)
        f1, f2 = np.where(shrink_right, f_eval, f2), np.where(shrink_right, f1, f_eval)
        lam1, lam2 = new_lam1, new_lam2
        best = np.minimum(best, f_eval)

    out[live] = eta * scale[live] * np.maximum(best, 0.0)
    return out


def support_cost_eta(A: PayoffMatrix, eta: float, x, delta, cfg: RaySolverConfig = DEFAULT_CONFIG) -> float:
    """Per-direction infinitesimal cost of the finite-noise process at interior x."""
    xs = _coords(x)
    dd = _comps(delta)
    return float(support_cost_eta_batch(A, eta, xs[None, :], dd[None, :], cfg)[0])


def sublevel_ray_length(A: PayoffMatrix, eta: float, x, d, cfg: RaySolverConfig = DEFAULT_CONFIG) -> float:
    """sup{t >= 0 : h_eta(x, t*d) <= 0} for a unit direction d.

    Since h_eta(x, 0) = 0 and the map is convex along the ray, a positive
    directional derivative at 0 forces 0; otherwise the crossing is bracketed
    by doubling and then bisected.  No sign change up to t_max means +infinity.
    """
    if eta <= 0:
        raise ConfigError(f"eta must be positive, got {eta}")
    xs = _coords(x)
    dd = _comps(d)
    norm = float(np.linalg.norm(dd))
    if abs(norm - 1.0) > 1e-9:
        raise ConfigError(f"ray direction must be l2-unit, got |d|={norm}")
    logw = log_payoff_weights(A, xs, eta)
    w = np.exp(logw)
    deriv = float((w - xs) @ dd)
    if deriv > 0.0:
        return 0.0

    def h(t: float) -> float:
        return h_eta(A, eta, xs, t * dd)

    if h(1.0) <= 0.0:
        lo, hi = 1.0, 2.0
        while h(hi) <= 0.0:
            lo, hi = hi, 2.0 * hi
            if hi > cfg.t_max:
                return math.inf
    else:
        lo, hi = 0.5, 1.0
        while h(lo) > 0.0:
            lo, hi = 0.5 * lo, lo
            if lo < 1e-30:
                return 0.0
    while hi - lo > cfg.bisect_tol * hi:
        mid = 0.5 * (lo + hi)
        if h(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _tangent_basis(n: int) -> np.ndarray:
    """Orthonormal basis of the sum-zero subspace, rows are basis vectors."""
    basis = []
    for k in range(1, n):
        v = np.zeros(n)
        v[:k] = 1.0
        v[k] = -float(k)
        basis.append(v / np.linalg.norm(v))
    return np.asarray(basis)


def support_cost_eta_by_rays(
    A: PayoffMatrix, eta: float, x, delta, cfg: RaySolverConfig = DEFAULT_CONFIG
) -> float:
    """Direction-sampling oracle for sigma_eta, practical for n <= 3 only.

    Samples unit rays in the tangent plane, measures each sublevel crossing,
    and takes the best inscribed value max_d rho(d) * <d, delta>.  This
    under-approximates the support function by the sampling resolution.
    """
    xs = _coords(x)
    dd = _comps(delta)
    n = xs.shape[0]
    if n > 3:
        raise ConfigError("ray-sampling support cost is limited to n <= 3")
    basis = _tangent_basis(n)
    if n == 2:
        dirs = [basis[0], -basis[0]]
    else:
        thetas = np.linspace(0.0, 2.0 * math.pi, cfg.dir_samples, endpoint=False)
        dirs = [math.cos(t) * basis[0] + math.sin(t) * basis[1] for t in thetas]
    best = 0.0
    for dvec in dirs:
        corr = float(dvec @ dd)
        if corr <= 0.0:
            continue
        rho = sublevel_ray_length(A, eta, xs, dvec, cfg)
        if math.isinf(rho):
            return math.inf
        best = max(best, rho * corr)
    return best
