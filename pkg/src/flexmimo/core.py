"""Channel model, MRC uplink SINR and the movement-aware power model."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .rng import RngStream


class Vec2(NamedTuple):
    x: float
    y: float

    def distance(self, other: "Vec2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


def _points(seq) -> np.ndarray:
    arr = np.asarray(seq, dtype=float)
    if arr.ndim == 1 and arr.size == 2:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected a sequence of 2-D points, got shape {arr.shape}")
    return arr


@dataclass
class Scene:
    """Square region ``[0, L]^2`` with user positions and antenna start positions."""

    region_size: float
    users: np.ndarray
    antenna_init: np.ndarray
    antenna_height: float = 2.0

    def __post_init__(self):
        self.users = _points(self.users)
        self.antenna_init = _points(self.antenna_init)
        if not (math.isfinite(self.region_size) and self.region_size >= 0):
            raise ValueError("region_size must be finite and >= 0")
        if len(self.users) < 1 or len(self.antenna_init) < 1:
            raise ValueError("scene needs at least one user and one antenna")
        if self.antenna_height < 0:
            raise ValueError("antenna_height must be >= 0")
        for name, pts in (("users", self.users), ("antenna_init", self.antenna_init)):
            if not self.contains(pts).all():
                raise ValueError(f"{name} must lie inside [0, {self.region_size}]^2")

    @property
    def num_users(self) -> int:
        return len(self.users)

    @property
    def num_antennas(self) -> int:
        return len(self.antenna_init)

    def contains(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        inside = (pts >= 0.0) & (pts <= self.region_size)
        return np.isfinite(pts).all(axis=-1) & inside.all(axis=-1)


@dataclass(frozen=True)
class ChannelParams:
    beta0: float = 1.0
    alpha: float = 3.0
    noise_power: float = 1.0
    tx_power: float = 1e5
    cell_size: float = 0.5
    # False freezes every small-scale coefficient to 1 (pathloss only)
    small_scale: bool = True

    def __post_init__(self):
        if not self.beta0 > 0:
            raise ValueError("beta0 must be > 0")
        if not self.alpha >= 0:
            raise ValueError("alpha must be >= 0")
        if not self.noise_power > 0:
            raise ValueError("noise_power must be > 0")
        if not self.tx_power >= 0:
            raise ValueError("tx_power must be >= 0")
        if not self.cell_size > 0:
            raise ValueError("cell_size must be > 0")


@dataclass(frozen=True)
class PowerModel:
    """Power amplifier efficiency, circuit power and per-metre movement cost.

    Attributes
    ----------
    amp_efficiency : float
        Output-to-input power ratio of the amplifier, in (0, 1].
    fixed_circuit : float
        System circuit power independent of the array size [W].
    per_antenna_circuit : float
        Transceiver chain power per active antenna [W].
    move_cost : float
        Power per metre of antenna travel [W/m].
    bandwidth : float
        System bandwidth [Hz].
    """

    amp_efficiency: float = 0.4
    fixed_circuit: float = 10.0
    per_antenna_circuit: float = 1.0
    move_cost: float = 1.0
    bandwidth: float = 1e6

    def __post_init__(self):
        if not 0 < self.amp_efficiency <= 1:
            raise ValueError("amp_efficiency must lie in (0, 1]")
        for name in ("fixed_circuit", "per_antenna_circuit", "move_cost"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be >= 0")
        if not self.bandwidth > 0:
            raise ValueError("bandwidth must be > 0")


def path_gain(d, h0: float, params: ChannelParams):
    """Large-scale gain ``beta0 * (d^2 + h0^2)^(-alpha/2)``; vectorised over ``d``."""
    d_arr = np.asarray(d, dtype=float)
    if np.any(d_arr < 0) or h0 < 0:
        raise ValueError("distance and height must be >= 0")
    if params.beta0 <= 0:
        raise ValueError("beta0 must be > 0")
    sq = d_arr * d_arr + h0 * h0
    # alpha == 0 must give beta0 even at d = h0 = 0
    gain = params.beta0 * np.power(sq, -0.5 * params.alpha) if params.alpha else np.full_like(sq, params.beta0)
    return float(gain) if np.ndim(gain) == 0 else gain


def small_scale_gain(rng: RngStream, cell, endpoint_id):
    """Rayleigh coefficient frozen on a lattice cell.

    ``cell`` is an integer pair (or an array ending in a length-2 axis) and
    ``endpoint_id`` identifies the far end of the link.  Two hashed uniforms
    are turned into a unit-power circular complex Gaussian by Box-Muller.
    """
    cell = np.asarray(cell, dtype=np.int64)
    cx, cy = cell[..., 0], cell[..., 1]
    u1 = rng.uniforms(cx, cy, endpoint_id, 0)
    u2 = rng.uniforms(cx, cy, endpoint_id, 1)
    g = np.sqrt(-np.log(u1)) * np.exp(2j * np.pi * u2)
    shape = np.broadcast_shapes(cx.shape, np.shape(endpoint_id))
    g = g.reshape(shape)
    return complex(g) if g.ndim == 0 else g


def cells_of(positions, cell_size: float) -> np.ndarray:
    return np.floor(np.asarray(positions, dtype=float) / cell_size).astype(np.int64)


def channel_batch(antenna_pos: np.ndarray, users: np.ndarray, h0: float,
                  params: ChannelParams, rng: RngStream) -> np.ndarray:
    """Channel tensors for a batch of antenna layouts.

    ``antenna_pos`` has shape ``(..., M, 2)``; the result has shape ``(..., M, K)``.
    No region check; :func:`channel_matrix` is the validated entry point.
    """
    diff = antenna_pos[..., :, None, :] - users[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=-1))
    beta = path_gain(dist, h0, params)
    h = np.sqrt(beta).astype(complex)
    if params.small_scale:
        cells = cells_of(antenna_pos, params.cell_size)[..., :, None, :]
        user_ids = np.arange(users.shape[0])
        h = h * small_scale_gain(rng, cells, user_ids)
    return h


def channel_matrix(scene: Scene, antenna_positions: Sequence, params: ChannelParams,
                   rng: RngStream) -> np.ndarray:
    """M x K uplink channel, ``h_mk = sqrt(beta(d_mk)) * g_mk``."""
    pos = np.asarray(antenna_positions, dtype=float)
    if pos.size == 0:
        raise ValueError("antenna list is empty")
    pos = _points(pos)
    if not scene.contains(pos).all():
        raise ValueError("antenna position outside the region")
    return channel_batch(pos, scene.users, scene.antenna_height, params, rng)


def sinr_mrc(H, p: float, noise: float) -> np.ndarray:
    """Per-user SINR under maximum-ratio combining.

    ``H`` is ``(..., M, K)``.  Users with an all-zero channel get SINR 0.
    """
    if not noise > 0:
        raise ValueError("noise must be > 0")
    if p < 0:
        raise ValueError("p must be >= 0")
    H = np.asarray(H, dtype=complex)
    gram = np.swapaxes(H.conj(), -1, -2) @ H
    own = np.real(np.diagonal(gram, axis1=-2, axis2=-1))
    K = gram.shape[-1]
    cross = ((np.abs(gram) ** 2) * (1.0 - np.eye(K))).sum(axis=-1)
    denom = p * cross + noise * own
    with np.errstate(divide="ignore", invalid="ignore"):
        sinr = np.where(own > 0, p * own**2 / np.where(denom > 0, denom, 1.0), 0.0)
    return sinr


def sum_se(sinr) -> float:
    sinr = np.asarray(sinr, dtype=float)
    if np.any(sinr < 0):
        raise ValueError("SINR entries must be >= 0")
    return float(np.log2(1.0 + sinr).sum())


def total_power(pm: PowerModel, K: int, p: float, M: int, path_len: float) -> float:
    """``K p / eta + P_fix + M P_ant + c_move * path_len`` in Watts."""
    if K < 0 or M < 0 or p < 0 or path_len < 0:
        raise ValueError("counts, power and path length must be >= 0")
    return (K * p / pm.amp_efficiency + pm.fixed_circuit
            + M * pm.per_antenna_circuit + pm.move_cost * path_len)


def energy_efficiency(se: float, power: float, B: float) -> float:
    if not power > 0:
        raise ValueError("power must be > 0")
    if se < 0 or not B > 0:
        raise ValueError("se must be >= 0 and B > 0")
    return B * se / power
