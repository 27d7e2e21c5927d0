"""Reference optimisers: exhaustive grid oracle, random search, CEM and a policy-gradient baseline."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..nn import AdamState, adam_step, net_backward, net_forward, net_init
from ..rng import OPTIMIZER, RngStream
from .problem import (BestTracker, OptimizerReport, TrajectoryProblem, evaluate_batch,
                      project_feasible, straight_paths, uniform_waypoints)

_ORACLE_CHUNK = 4096


def grid_points(L: float, resolution: int) -> np.ndarray:
    axis = np.linspace(0.0, L, resolution)
    xx, yy = np.meshgrid(axis, axis, indexing="ij")
    return np.stack([xx.ravel(), yy.ravel()], axis=-1)


def brute_force_oracle(problem: TrajectoryProblem, grid_resolution: int = 11) -> OptimizerReport:
    """Exhaust grid end points reachable in a straight line (at most two antennas).

    The reported waypoints follow the straight segment to the chosen end point,
    which is the shortest path and so optimal for either objective.
    """
    if grid_resolution < 2:
        raise ValueError("grid_resolution must be >= 2")
    M = problem.num_antennas
    if M > 2:
        raise ValueError("brute_force_oracle supports at most 2 antennas")
    init = problem.scene.antenna_init
    grid = grid_points(problem.scene.region_size, grid_resolution)
    reach = [grid[np.linalg.norm(grid - init[m], axis=1) <= problem.budget + 1e-9] for m in range(M)]
    # an antenna that cannot reach any grid cell stays where it is
    reach = [r if len(r) else init[m:m + 1] for m, r in enumerate(reach)]
    tracker = BestTracker()
    combos = itertools.product(*[range(len(r)) for r in reach])
    while True:
        chunk = list(itertools.islice(combos, _ORACLE_CHUNK))
        if not chunk:
            break
        idx = np.array(chunk)
        final = np.stack([reach[m][idx[:, m]] for m in range(M)], axis=1)
        wps = straight_paths(init, final, problem.steps)
        # straight segments within budget; projection only absorbs rounding
        wps = project_feasible(wps, problem)
        values = evaluate_batch(problem, wps)
        for j in range(len(values)):
            tracker.offer(wps[j:j + 1], values[j:j + 1])
            tracker.mark()
    return tracker.report("oracle", grid_resolution=grid_resolution)


def random_search(problem: TrajectoryProblem, n: int, seed: int = 0) -> OptimizerReport:
    if n < 1:
        raise ValueError("n must be >= 1")
    gen = RngStream(seed, OPTIMIZER).generator(0)
    wps = uniform_waypoints(gen, problem, n)
    values = evaluate_batch(problem, wps)
    tracker = BestTracker()
    for i in range(n):
        tracker.offer(wps[i:i + 1], values[i:i + 1])
        tracker.mark()
    return tracker.report("random")


def cem_optimize(problem: TrajectoryProblem, iterations: int = 40, population: int = 64,
                 elite_fraction: float = 0.125, seed: int = 0,
                 smoothing: float = 0.7) -> OptimizerReport:
    """Gaussian cross-entropy search over the flattened waypoint vector.

    The search starts centred on the stay-put trajectory with standard
    deviation of half the region side.  Mean and covariance are refit to the
    projected elites every iteration and blended with the previous values by
    ``smoothing``.  A full covariance is kept because reaching far end points
    needs coordinated waypoints; independent per-coordinate noise produces
    zig-zags that the budget projection shrinks back toward the start.
    """
    n_elite = int(population * elite_fraction)
    if n_elite < 1:
        raise ValueError("population * elite_fraction must be >= 1")
    gen = RngStream(seed, OPTIMIZER).generator(0)
    shape = problem.shape
    L = problem.scene.region_size
    dim = problem.dim
    mean = np.repeat(problem.scene.antenna_init[:, None, :], problem.steps, axis=1).ravel()
    cov = np.eye(dim) * (0.5 * L) ** 2
    tracker = BestTracker()
    std_trace = []
    for _ in range(iterations):
        evals, evecs = np.linalg.eigh(cov)
        root = evecs * np.sqrt(np.clip(evals, 0.0, None))
        raw = mean + gen.standard_normal((population, dim)) @ root.T
        wps = project_feasible(raw.reshape((population,) + shape), problem)
        values = evaluate_batch(problem, wps)
        tracker.offer(wps, values)
        tracker.mark()
        elite = wps[np.argsort(-values, kind="stable")[:n_elite]].reshape(n_elite, -1)
        centred = elite - elite.mean(axis=0)
        mean = smoothing * elite.mean(axis=0) + (1.0 - smoothing) * mean
        cov = smoothing * (centred.T @ centred / n_elite) + (1.0 - smoothing) * cov
        cov = 0.5 * (cov + cov.T)
        std_trace.append(float(np.sqrt(np.clip(np.diag(cov), 0.0, None)).mean()))
    return tracker.report("cem", std=std_trace)


@dataclass(frozen=True)
class PGConfig:
    batch: int = 16
    hidden: tuple[int, ...] = (32,)
    lr: float = 0.01
    sigma_start: float = 0.25
    sigma_end: float = 0.02


def pg_optimize(problem: TrajectoryProblem, episodes: int = 200, cfg: PGConfig = PGConfig(),
                seed: int = 0) -> OptimizerReport:
    """Likelihood-ratio policy gradient with a Gaussian policy over waypoints.

    A rectifier network maps the normalised user layout to the policy mean in
    units of the region side; exploration noise decays linearly.
    """
    if episodes < 1:
        raise ValueError("episodes must be >= 1")
    stream = RngStream(seed, OPTIMIZER)
    gen = stream.generator(0)
    cond = problem.condition()[None, :]
    net = net_init((cond.shape[1],) + tuple(cfg.hidden) + (problem.dim,), "relu", seed)
    # start the policy mean at the stay-put trajectory
    stay = np.repeat(problem.scene.antenna_init[:, None, :], problem.steps, axis=1).ravel() / problem.scale
    net.biases[-1][:] = stay
    opt = AdamState(lr=cfg.lr)
    inputs = np.repeat(cond, cfg.batch, axis=0)
    tracker = BestTracker()
    for ep in range(episodes):
        frac = ep / max(episodes - 1, 1)
        sigma = cfg.sigma_start + frac * (cfg.sigma_end - cfg.sigma_start)
        mu = net_forward(net, inputs)
        actions = mu + sigma * gen.standard_normal(mu.shape)
        wps = project_feasible((actions * problem.scale).reshape((cfg.batch,) + problem.shape), problem)
        values = evaluate_batch(problem, wps)
        tracker.offer(wps, values)
        tracker.mark()
        spread = values.std()
        if spread > 0:
            adv = (values - values.mean()) / spread
            # descend on -E[adv * log pi(a)]
            upstream = -adv[:, None] * (actions - mu) / sigma**2 / cfg.batch
            adam_step(opt, net.params, net_backward(net, inputs, upstream))
    return tracker.report("pg")
