"""Generative diffusion optimiser for antenna trajectories.

Candidate trajectories live in a normalised space: displacements from the
antenna start points in units of the travel budget, ``x = (w - w_0) / D``.  Each
outer iteration keeps the best candidates seen so far, fits an
epsilon-predicting denoiser to them (weighted by objective) and draws the
next population by ancestral reverse sampling, conditioned on the user layout.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..nn import AdamState, DenseNet, adam_step, net_backward, net_forward, net_init
from ..rng import OPTIMIZER, RngStream
from .problem import (BestTracker, OptimizerReport, TrajectoryProblem, evaluate_batch,
                      project_feasible, uniform_waypoints)

# counter blocks; block 0 seeds the uniform first population
_TRAIN_BLOCK = 1 << 20
_SAMPLE_BLOCK = 2 << 20
_MIN_SPREAD = 1e-3


@dataclass(frozen=True)
class DiffusionConfig:
    denoise_steps: int = 20
    alpha_bar_end: float = 0.02
    schedule: tuple[float, ...] | None = None
    outer_iterations: int = 30
    samples_per_iteration: int = 64
    elite_fraction: float = 0.125
    train_epochs: int = 100
    batch_repeat: int = 8
    hidden: tuple[int, ...] = (64, 64)
    lr: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if self.denoise_steps < 1:
            raise ValueError("denoise_steps must be >= 1")
        if not 0 < self.elite_fraction <= 1:
            raise ValueError("elite_fraction must lie in (0, 1]")
        if self.outer_iterations < 1 or self.samples_per_iteration < 1:
            raise ValueError("outer_iterations and samples_per_iteration must be >= 1")
        ab = self.alpha_bars()
        if len(ab) != self.denoise_steps + 1:
            raise ValueError("schedule needs denoise_steps + 1 entries")
        if ab[0] != 1.0 or np.any(np.diff(ab) >= 0) or np.any(ab <= 0):
            raise ValueError("schedule must start at 1 and decrease strictly within (0, 1]")

    def alpha_bars(self) -> np.ndarray:
        """Cumulative signal retention for t = 0..T_d."""
        if self.schedule is not None:
            return np.asarray(self.schedule, dtype=float)
        return np.linspace(1.0, self.alpha_bar_end, self.denoise_steps + 1)


def forward_noise(x0: np.ndarray, t, eps: np.ndarray, cfg: DiffusionConfig) -> np.ndarray:
    """``x_t = sqrt(ab_t) x_0 + sqrt(1 - ab_t) eps``."""
    ab = cfg.alpha_bars()[np.asarray(t)]
    ab = np.reshape(ab, np.shape(ab) + (1,) * (np.ndim(x0) - np.ndim(ab)))
    return np.sqrt(ab) * x0 + np.sqrt(1.0 - ab) * eps


def _net_input(x_t, ab_t, cond):
    n = x_t.shape[0]
    cols = [x_t, np.reshape(ab_t, (n, 1))]
    if cond is not None and np.size(cond):
        cols.append(np.broadcast_to(np.reshape(cond, (1, -1)), (n, np.size(cond))))
    return np.concatenate(cols, axis=1)


def denoiser_init(dim: int, cond_dim: int, cfg: DiffusionConfig) -> DenseNet:
    return net_init((dim + 1 + cond_dim,) + tuple(cfg.hidden) + (dim,), "silu", cfg.seed)


def diffusion_train(samples, weights, cfg: DiffusionConfig, condition=None,
                    net: DenseNet | None = None, opt: AdamState | None = None,
                    epochs: int | None = None, block: int = 0):
    """Fit an epsilon-predicting denoiser by weighted mean-squared error.

    Returns ``(net, losses)`` with one loss per epoch.  Passing ``net``/``opt``
    continues training from a previous state.
    """
    x0 = np.atleast_2d(np.asarray(samples, dtype=float))
    if x0.shape[0] == 0:
        raise ValueError("no training samples")
    w = np.asarray(weights, dtype=float).ravel()
    if w.shape[0] != x0.shape[0] or np.any(w < 0) or not w.sum() > 0:
        raise ValueError("weights must be non-negative, one per sample, not all zero")
    cond = None if condition is None else np.asarray(condition, dtype=float).ravel()
    cond_dim = 0 if cond is None else cond.size
    dim = x0.shape[1]
    if net is None:
        net = denoiser_init(dim, cond_dim, cfg)
    if opt is None:
        opt = AdamState(lr=cfg.lr)
    epochs = cfg.train_epochs if epochs is None else epochs
    gen = RngStream(cfg.seed, OPTIMIZER).generator(_TRAIN_BLOCK + block)
    ab = cfg.alpha_bars()
    xb = np.repeat(x0, cfg.batch_repeat, axis=0)
    wb = np.repeat(w / w.sum(), cfg.batch_repeat) / cfg.batch_repeat
    losses = []
    for _ in range(epochs):
        t = gen.integers(1, cfg.denoise_steps + 1, size=xb.shape[0])
        eps = gen.standard_normal(xb.shape)
        x_t = forward_noise(xb, t, eps, cfg)
        inp = _net_input(x_t, ab[t], cond)
        err = net_forward(net, inp) - eps
        losses.append(float(np.sum(wb * np.mean(err**2, axis=1))))
        upstream = 2.0 * wb[:, None] * err / dim
        adam_step(opt, net.params, net_backward(net, inp, upstream))
    return net, losses


def diffusion_sample(net: DenseNet, cfg: DiffusionConfig, n: int, seed: int = 0,
                     condition=None, noise_scale: float = 1.0, block: int = 0) -> np.ndarray:
    """Ancestral reverse sampling from ``x_T ~ N(0, I)`` down to ``x_0``.

    ``noise_scale`` multiplies the noise injected between steps (0 gives the
    deterministic posterior-mean path).
    """
    dim = net.layer_sizes[-1]
    if n <= 0:
        return np.empty((0, dim))
    gen = RngStream(seed, OPTIMIZER).generator(_SAMPLE_BLOCK + block)
    ab = cfg.alpha_bars()
    x = gen.standard_normal((n, dim))
    cond = None if condition is None else np.asarray(condition, dtype=float).ravel()
    for t in range(cfg.denoise_steps, 0, -1):
        alpha = ab[t] / ab[t - 1]
        beta = 1.0 - alpha
        eps_hat = net_forward(net, _net_input(x, np.full(n, ab[t]), cond))
        x = (x - beta / np.sqrt(1.0 - ab[t]) * eps_hat) / np.sqrt(alpha)
        if t > 1:
            var = beta * (1.0 - ab[t - 1]) / (1.0 - ab[t])
            x = x + noise_scale * np.sqrt(var) * gen.standard_normal((n, dim))
    return x


def _budget_scale(problem: TrajectoryProblem) -> float:
    return problem.budget if problem.budget > 0 else 1.0


def to_normalized(wps: np.ndarray, problem: TrajectoryProblem) -> np.ndarray:
    start = problem.scene.antenna_init[:, None, :]
    return ((wps - start) / _budget_scale(problem)).reshape(wps.shape[0], -1)


def from_normalized(x: np.ndarray, problem: TrajectoryProblem) -> np.ndarray:
    start = problem.scene.antenna_init[:, None, :]
    return start + _budget_scale(problem) * x.reshape((x.shape[0],) + problem.shape)


def _elite_weights(values: np.ndarray) -> np.ndarray:
    lo, hi = values.min(), values.max()
    if hi <= lo:
        return np.ones_like(values)
    # worst elite keeps a small positive weight
    return 0.1 + (values - lo) / (hi - lo)


def diffusion_optimize(problem: TrajectoryProblem, cfg: DiffusionConfig = DiffusionConfig()) -> OptimizerReport:
    n = cfg.samples_per_iteration
    n_elite = max(1, int(round(n * cfg.elite_fraction)))
    gen = RngStream(cfg.seed, OPTIMIZER).generator(0)
    cond = problem.condition()
    tracker = BestTracker()
    net = denoiser_init(problem.dim, cond.size, cfg)
    opt = AdamState(lr=cfg.lr)
    elite_wps = np.empty((0,) + problem.shape)
    elite_vals = np.empty(0)
    losses = []
    for it in range(cfg.outer_iterations):
        if it == 0:
            wps = uniform_waypoints(gen, problem, n)
        else:
            z = diffusion_sample(net, cfg, n, seed=cfg.seed, condition=cond, block=it)
            wps = project_feasible(from_normalized(centre + spread * z, problem), problem)
        values = evaluate_batch(problem, wps)
        tracker.offer(wps, values)
        tracker.mark()
        # elites are drawn from the previous elites plus the new population
        pool_wps = np.concatenate([elite_wps, wps])
        pool_vals = np.concatenate([elite_vals, values])
        keep = np.argsort(-pool_vals, kind="stable")[:n_elite]
        elite_wps, elite_vals = pool_wps[keep], pool_vals[keep]
        if it == cfg.outer_iterations - 1:
            break
        x = to_normalized(elite_wps, problem)
        # standardise the elite cloud so the denoiser always sees unit-scale data
        centre = x.mean(axis=0)
        spread = max(float(x.std()), _MIN_SPREAD)
        net, loss = diffusion_train((x - centre) / spread, _elite_weights(elite_vals), cfg,
                                    condition=cond, net=net, opt=opt, block=it)
        losses.append(loss[-1])
    return tracker.report("diffusion", loss=losses)
