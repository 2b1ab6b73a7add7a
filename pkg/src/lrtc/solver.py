"""ADMM solver for tensor completion under truncated nuclear norm minimization.

The consensus formulation carries one auxiliary tensor per mode plus a shared
tensor ``m`` that pins the observed entries. Each iteration runs, in order:

1. per-mode updates ``x_k = fold_k(truncated_svt(unfold_k(m - t_k / rho)))``,
   each reading only the previous ``m`` and its own dual ``t_k`` (so the three
   may run in any order, or concurrently);
2. the consensus update ``m = mean_k(x_k) + mean_k(t_k) / rho`` followed by an
   exact overwrite of the observed entries with the input values;
3. dual ascent ``t_k += rho * (x_k - m)``;
4. the penalty schedule ``rho = min(rho_mult * rho, rho_max)``.

Convergence is declared when the relative change of consecutive recovered
tensors, ``||m_new - m_old||_F / ||observed part of y||_F``, drops below
``epsilon``. The nuclear-norm solver (HaLRTC) is the ``theta = 0``
configuration of the same iteration.

A solve call owns its state exclusively; independent calls are thread-safe.
Given identical inputs and config the solver is deterministic (no randomness
anywhere in the iteration).
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError, DegenerateProblemError, DimensionError, InvalidInputError
from .shrinkage import _check_alphas, truncated_svt, truncation_for_mode
from .tensor_ops import MODES, fold, frobenius_norm, project_observed, unfold


@dataclass(frozen=True)
class SolverConfig:
    """Hyperparameters of the ADMM iteration.

    ``theta`` is the universal truncation rate in [0, 1); ``theta = 0`` turns
    the solver into plain nuclear-norm completion. The remaining defaults are
    the standard settings: equal mode weights, penalty growing 5% per
    iteration from 1e-5 up to 1e5, tolerance 1e-4, at most 200 iterations.
    """

    theta: float
    alphas: tuple = (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)
    rho0: float = 1e-5
    rho_max: float = 1e5
    rho_mult: float = 1.05
    epsilon: float = 1e-4
    max_iter: int = 200

    def __post_init__(self):
        if not 0.0 <= self.theta < 1.0:
            raise ConfigError(f"theta must lie in [0, 1), got {self.theta}")
        object.__setattr__(self, "alphas", _check_alphas(self.alphas))
        if not self.rho0 > 0:
            raise ConfigError(f"rho0 must be positive, got {self.rho0}")
        if self.rho_max < self.rho0:
            raise ConfigError(f"rho_max {self.rho_max} must be >= rho0 {self.rho0}")
        if self.rho_mult < 1.0:
            raise ConfigError(f"rho_mult must be >= 1, got {self.rho_mult}")
        if not self.epsilon > 0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon}")
        if not (isinstance(self.max_iter, int) and self.max_iter >= 1):
            raise ConfigError(f"max_iter must be a positive integer, got {self.max_iter}")


@dataclass
class SolverState:
    """Mutable per-solve state; not shareable while a solve is running."""

    m: np.ndarray
    x: list
    t: list
    rho: float
    iteration: int = 0


@dataclass(frozen=True)
class SolverResult:
    """Recovered tensor plus the convergence trace.

    ``trace[l]`` is the relative-change ratio after iteration ``l + 1`` and
    ``rho_trace[l]`` the penalty value at the end of that iteration (after the
    scheduled increase). ``converged`` implies the last trace entry is below
    the configured tolerance. Observed entries of ``recovered`` equal the
    input exactly.
    """

    recovered: np.ndarray
    iterations: int
    trace: list = field(default_factory=list)
    rho_trace: list = field(default_factory=list)
    converged: bool = False


def _check_problem(y, mask):
    y = np.asarray(y, dtype=float)
    mask = np.asarray(mask)
    if y.ndim != 3:
        raise DimensionError(f"expected a third-order tensor, got ndim={y.ndim}")
    if mask.shape != y.shape:
        raise DimensionError(
            f"mask shape {mask.shape} does not match tensor shape {y.shape}"
        )
    return y, mask.astype(bool, copy=False)


def initialize(y, mask, config):
    """Start state: m is the observed projection, x copies it, duals are zero."""
    y, mask = _check_problem(y, mask)
    if not mask.any():
        raise DegenerateProblemError("no observed entries; nothing to complete")
    if not np.isfinite(y[mask]).all():
        raise InvalidInputError("observed entries contain non-finite values")
    m = project_observed(y, mask)
    return SolverState(
        m=m,
        x=[m.copy() for _ in MODES],
        t=[np.zeros_like(m) for _ in MODES],
        rho=config.rho0,
    )


def update_x(state, mode, config):
    """Shrinkage step for one mode, reading only the previous m and own dual."""
    trunc = truncation_for_mode(state.m.shape, mode, config.theta, clamp=True)
    tau = config.alphas[mode] / state.rho
    z = unfold(state.m - state.t[mode] / state.rho, mode)
    return fold(truncated_svt(z, trunc, tau), mode, state.m.shape)


def update_m(state, y, mask, config):
    """Consensus average of the x and dual tensors, observed entries pinned to y."""
    candidate = sum(state.x) / 3.0 + sum(state.t) / (3.0 * state.rho)
    return np.where(mask, y, candidate)


def update_t(state, config):
    """Dual ascent against the fresh consensus tensor."""
    return [t + state.rho * (x - state.m) for x, t in zip(state.x, state.t)]


def convergence_ratio(m_new, m_old, y, mask):
    """Relative change of recovered tensors against the observed-data norm."""
    y, mask = _check_problem(y, mask)
    denom = float(np.linalg.norm(y[mask]))
    if denom == 0.0:
        raise DegenerateProblemError("observed entries have zero norm")
    return frobenius_norm(np.asarray(m_new, float) - np.asarray(m_old, float)) / denom


def solve(y, mask, config):
    """Complete a partially observed tensor.

    Parameters
    ----------
    y : ndarray, shape (n1, n2, n3)
        Input data; only entries where ``mask`` is True are read.
    mask : boolean ndarray, same shape
        True marks an observed entry.
    config : SolverConfig

    Returns
    -------
    SolverResult. Non-convergence within ``max_iter`` is reported via
    ``converged=False``, never raised.
    """
    y, mask = _check_problem(y, mask)
    state = initialize(y, mask, config)
    obs_norm = float(np.linalg.norm(y[mask]))
    if obs_norm == 0.0:
        raise DegenerateProblemError("observed entries have zero norm")

    trace = []
    rho_trace = []
    converged = False
    for it in range(1, config.max_iter + 1):
        m_old = state.m
        state.x = [update_x(state, mode, config) for mode in MODES]
        state.m = update_m(state, y, mask, config)
        state.t = update_t(state, config)
        state.rho = min(config.rho_mult * state.rho, config.rho_max)
        state.iteration = it

        ratio = frobenius_norm(state.m - m_old) / obs_norm
        trace.append(ratio)
        rho_trace.append(state.rho)
        if ratio < config.epsilon:
            converged = True
            break

    return SolverResult(
        recovered=state.m,
        iterations=state.iteration,
        trace=trace,
        rho_trace=rho_trace,
        converged=converged,
    )


def solve_halrtc(y, mask, config=None):
    """Nuclear-norm completion: the same iteration with theta forced to 0."""
    if config is None:
        config = SolverConfig(theta=0.0)
    else:
        config = replace(config, theta=0.0)
    return solve(y, mask, config)
