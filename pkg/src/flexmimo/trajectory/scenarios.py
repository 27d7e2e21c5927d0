"""Canned problem instances used by the tests, scripts and CLI defaults."""
from __future__ import annotations

import numpy as np

from ..core import ChannelParams, PowerModel, Scene
from .problem import SUM_SE, TrajectoryProblem


def tiny_instance(seed: int, objective: str = SUM_SE, steps: int = 3) -> TrajectoryProblem:
    """One antenna at the centre of a 20 m square, two random users, pathloss only."""
    gen = np.random.default_rng(seed)
    users = gen.uniform(0.0, 20.0, size=(2, 2))
    scene = Scene(20.0, users, [[10.0, 10.0]])
    return TrajectoryProblem(scene, ChannelParams(small_scale=False), PowerModel(), objective,
                             steps=steps, budget=8.0, fading_seed=seed)


def clustered_instance(seed: int, objective: str = SUM_SE, move_cost: float = 1e5,
                       steps: int = 3) -> TrajectoryProblem:
    """Four users on a 4-8 m ring around the middle of a 40 m square; four antennas start near the middle.

    The default ``move_cost`` is large on purpose: with ``p = 1e5`` per user the
    transmit term is ``1e6`` W, so one metre of travel costs a tenth of it.
    """
    gen = np.random.default_rng(seed)
    centre = np.array([20.0, 20.0])
    ang = gen.uniform(0.0, 2.0 * np.pi, 4)
    rad = gen.uniform(4.0, 8.0, 4)
    users = centre + np.c_[rad * np.cos(ang), rad * np.sin(ang)]
    antennas = centre + 1.5 * np.array([[-1.0, -1.0], [1.0, -1.0], [-1.0, 1.0], [1.0, 1.0]])
    return TrajectoryProblem(Scene(40.0, users, antennas), ChannelParams(), PowerModel(move_cost=move_cost),
                             objective, steps=steps, budget=10.0, fading_seed=seed)


def final_centroid_distance(problem: TrajectoryProblem, waypoints: np.ndarray) -> float:
    """Mean distance from each antenna's final position to the user centroid."""
    centroid = problem.scene.users.mean(axis=0)
    return float(np.linalg.norm(waypoints[:, -1, :] - centroid, axis=1).mean())
