"""Trajectory problem definition, feasibility projection and objective evaluation.

Waypoints are arrays of shape ``(M, T, 2)``: row ``m`` is the polyline of
antenna ``m``, which starts implicitly at ``scene.antenna_init[m]``.  Batched
helpers accept any number of leading axes.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ..core import ChannelParams, PowerModel, Scene, channel_batch, sinr_mrc
from ..rng import FADING, RngStream

SUM_SE = "sum_se"
TOTAL_EE = "total_ee"
OBJECTIVES = (SUM_SE, TOTAL_EE)

_BUDGET_RTOL = 1e-12
FEASIBILITY_ATOL = 1e-9


@dataclass
class TrajectoryProblem:
    scene: Scene
    channel: ChannelParams = field(default_factory=ChannelParams)
    power: PowerModel = field(default_factory=PowerModel)
    objective: str = SUM_SE
    steps: int = 4
    budget: float = 20.0
    fading_seed: int = 0

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if not self.budget >= 0:
            raise ValueError("budget must be >= 0")

    @property
    def num_antennas(self) -> int:
        return self.scene.num_antennas

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.scene.num_antennas, self.steps, 2)

    @property
    def dim(self) -> int:
        return int(np.prod(self.shape))

    @property
    def fading_rng(self) -> RngStream:
        return RngStream(self.fading_seed, FADING)

    @property
    def scale(self) -> float:
        return self.scene.region_size if self.scene.region_size > 0 else 1.0

    def condition(self) -> np.ndarray:
        """User layout normalised by the region size, flattened."""
        return (self.scene.users / self.scale).ravel()


@dataclass
class OptimizerReport:
    best_objective: float
    best_waypoints: np.ndarray
    curve: list[float]
    evaluations: int
    wall_time: float = 0.0
    method: str = ""
    history: dict = field(default_factory=dict)


class BestTracker:
    """Running maximum over evaluated candidates; the first maximum seen wins."""

    def __init__(self):
        self.value = -np.inf
        self.waypoints = None
        self.evaluations = 0
        self.curve: list[float] = []
        self._t0 = time.perf_counter()

    def offer(self, wps: np.ndarray, values: np.ndarray) -> None:
        values = np.asarray(values, dtype=float)
        self.evaluations += values.size
        if values.size:
            i = int(np.argmax(values))
            if values[i] > self.value:
                self.value = float(values[i])
                self.waypoints = np.array(wps[i], copy=True)

    def mark(self) -> None:
        self.curve.append(self.value)

    def report(self, method: str, **history) -> OptimizerReport:
        return OptimizerReport(self.value, self.waypoints, list(self.curve), self.evaluations,
                               time.perf_counter() - self._t0, method, history)


def path_lengths(wps: np.ndarray, init: np.ndarray) -> np.ndarray:
    """Polyline lengths, shape ``wps.shape[:-2]`` (one per antenna)."""
    wps = np.asarray(wps, dtype=float)
    init = np.asarray(init, dtype=float)
    start = np.broadcast_to(init[..., None, :], wps.shape[:-2] + (1, 2))
    pts = np.concatenate([start, wps], axis=-2)
    seg = np.diff(pts, axis=-2)
    return np.sqrt((seg**2).sum(axis=-1)).sum(axis=-1)


def path_length(wp: np.ndarray, antenna: int, init) -> float:
    wp = np.asarray(wp, dtype=float)
    if not 0 <= antenna < wp.shape[0]:
        raise IndexError(f"antenna index {antenna} out of range")
    return float(path_lengths(wp[antenna], np.asarray(init, dtype=float)))


def project_feasible(wp: np.ndarray, problem: TrajectoryProblem) -> np.ndarray:
    """Clamp into the region, then shrink each over-budget polyline about its start.

    Shrinking is a uniform scaling of the displacements from the start point,
    so the path keeps its shape and, the region being convex, stays inside it.
    """
    L = problem.scene.region_size
    D = problem.budget
    init = problem.scene.antenna_init
    wp = np.clip(np.asarray(wp, dtype=float), 0.0, L)
    lengths = path_lengths(wp, init)
    over = lengths > D + _BUDGET_RTOL * max(D, 1.0)
    if not over.any():
        return wp
    factor = np.where(over, D / np.where(over, lengths, 1.0), 1.0)[..., None, None]
    start = init[..., :, None, :]
    return np.clip(start + factor * (wp - start), 0.0, L)


def is_feasible(wp: np.ndarray, problem: TrajectoryProblem, atol: float = FEASIBILITY_ATOL) -> np.ndarray:
    wp = np.asarray(wp, dtype=float)
    inside = problem.scene.contains(wp).all(axis=(-2, -1))
    lengths = path_lengths(wp, problem.scene.antenna_init)
    return inside & (lengths <= problem.budget + atol).all(axis=-1)


def evaluate_batch(problem: TrajectoryProblem, wps: np.ndarray) -> np.ndarray:
    """Objective for a batch ``(n, M, T, 2)`` of feasible waypoint arrays (unchecked)."""
    wps = np.asarray(wps, dtype=float)
    scene, ch = problem.scene, problem.channel
    final = wps[..., -1, :]
    H = channel_batch(final, scene.users, scene.antenna_height, ch, problem.fading_rng)
    sinr = sinr_mrc(H, ch.tx_power, ch.noise_power)
    se = np.log2(1.0 + sinr).sum(axis=-1)
    if problem.objective == SUM_SE:
        return se
    pm = problem.power
    moved = path_lengths(wps, scene.antenna_init).sum(axis=-1)
    power = (scene.num_users * ch.tx_power / pm.amp_efficiency + pm.fixed_circuit
             + scene.num_antennas * pm.per_antenna_circuit + pm.move_cost * moved)
    return pm.bandwidth * se / power


def evaluate(problem: TrajectoryProblem, wp: np.ndarray) -> float:
    wp = np.asarray(wp, dtype=float)
    if wp.shape != problem.shape:
        raise ValueError(f"waypoints must have shape {problem.shape}, got {wp.shape}")
    if not is_feasible(wp, problem):
        raise ValueError("waypoints are infeasible; project them first")
    return float(evaluate_batch(problem, wp[None])[0])


def straight_paths(init: np.ndarray, final: np.ndarray, steps: int) -> np.ndarray:
    """Evenly spaced waypoints on the segment from ``init`` to ``final``; shape ``(..., M, T, 2)``."""
    frac = np.arange(1, steps + 1) / steps
    return init[..., :, None, :] + frac[:, None] * (final - init)[..., :, None, :]


def uniform_waypoints(gen: np.random.Generator, problem: TrajectoryProblem, n: int) -> np.ndarray:
    """Random feasible waypoint batches whose path lengths spread over ``[0, D]``.

    Coordinates are drawn uniformly on ``[0, L]`` and projected; each
    antenna's displacements are then scaled by an independent ``U(0, 1)``
    factor.  Projection alone would put almost every path exactly at the
    budget, leaving short paths (which matter for energy efficiency) unexplored.
    """
    shape = (n,) + problem.shape
    raw = project_feasible(gen.uniform(0.0, problem.scene.region_size, size=shape), problem)
    frac = gen.uniform(0.0, 1.0, size=(n, problem.num_antennas, 1, 1))
    start = problem.scene.antenna_init[None, :, None, :]
    return project_feasible(start + frac * (raw - start), problem)
