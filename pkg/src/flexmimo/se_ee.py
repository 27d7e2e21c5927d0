"""Single-link SE/EE tradeoff for fixed and flexible arrays."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .core import ChannelParams, PowerModel, energy_efficiency, total_power
from .hardening import sample_topk_gains
from .rng import SE_EE, RngStream


@dataclass(frozen=True)
class Fixed:
    M: int

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("M must be >= 1")

    @property
    def label(self) -> str:
        return f"fixed_M{self.M}"

    @property
    def antennas(self) -> int:
        return self.M

    @property
    def path_len(self) -> float:
        return 0.0


@dataclass(frozen=True)
class Flexible:
    k: int
    N: int
    spacing: float = 0.05

    def __post_init__(self):
        if not 1 <= self.k <= self.N:
            raise ValueError("need 1 <= k <= N")
        if not self.spacing > 0:
            raise ValueError("spacing must be > 0")

    @property
    def label(self) -> str:
        return f"flexible_k{self.k}_N{self.N}"

    @property
    def antennas(self) -> int:
        return self.k

    @property
    def path_len(self) -> float:
        # every antenna sweeps the full set of candidate positions
        return self.k * self.N * self.spacing


SystemKind = Union[Fixed, Flexible]


@dataclass(frozen=True)
class SeEePoint:
    tx_power: float
    se: float
    ee: float
    se_stderr: float = 0.0


def gain_samples(kind: SystemKind, trials: int, seed: int) -> np.ndarray:
    """Beamformed gain draws; Fixed{M} and Flexible{M, M} share the same stream."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = RngStream(seed, SE_EE)
    if isinstance(kind, Fixed):
        return sample_topk_gains(kind.M, kind.M, trials, rng)
    if isinstance(kind, Flexible):
        return sample_topk_gains(kind.k, kind.N, trials, rng)
    raise ValueError(f"unknown system kind {kind!r}")


def _se_from_gains(gains: np.ndarray, p: float, noise: float) -> tuple[float, float]:
    if p < 0:
        raise ValueError("p must be >= 0")
    rate = np.log2(1.0 + p * gains / noise)
    return float(rate.mean()), float(rate.std(ddof=1) / np.sqrt(rate.size)) if rate.size > 1 else 0.0


def expected_se(kind: SystemKind, p: float, params: ChannelParams = ChannelParams(),
                trials: int = 10_000, seed: int = 0) -> float:
    """``E[log2(1 + p S / sigma^2)]`` by Monte Carlo over the gain ``S``."""
    gains = gain_samples(kind, trials, seed)
    return _se_from_gains(gains, p, params.noise_power)[0]


def se_ee_curve(kind: SystemKind, p_sweep: Sequence[float], pm: PowerModel = PowerModel(),
                params: ChannelParams = ChannelParams(), trials: int = 10_000,
                seed: int = 0) -> list[SeEePoint]:
    p_sweep = [float(p) for p in p_sweep]
    if not p_sweep:
        raise ValueError("p_sweep must be non-empty")
    if any(b <= a for a, b in zip(p_sweep, p_sweep[1:])):
        raise ValueError("p_sweep must be strictly ascending")
    # common random numbers across the sweep keep SE monotone in p
    gains = gain_samples(kind, trials, seed)
    points = []
    for p in p_sweep:
        se, se_err = _se_from_gains(gains, p, params.noise_power)
        P = total_power(pm, 1, p, kind.antennas, kind.path_len)
        points.append(SeEePoint(p, se, energy_efficiency(se, P, pm.bandwidth), se_err))
    return points


def max_ee_point(curve: Sequence[SeEePoint]) -> SeEePoint:
    if not curve:
        raise ValueError("curve is empty")
    best = curve[0]
    for pt in curve[1:]:
        if pt.ee > best.ee or (pt.ee == best.ee and pt.tx_power < best.tx_power):
            best = pt
    return best


def default_sweep(n: int = 61, lo_db: float = -20.0, hi_db: float = 40.0) -> list[float]:
    return list(10.0 ** (np.linspace(lo_db, hi_db, n) / 10.0))


def compare_systems(kinds: Sequence[SystemKind], pm: PowerModel = PowerModel(),
                    params: ChannelParams = ChannelParams(), p_sweep: Sequence[float] | None = None,
                    trials: int = 10_000, seed: int = 0) -> list[dict]:
    """Max-EE summary per system: ``kind, max_ee, se_at_max_ee, p_at_max_ee, se_at_max_p``."""
    if len(kinds) < 2:
        raise ValueError("compare at least two systems")
    p_sweep = default_sweep() if p_sweep is None else p_sweep
    table = []
    for kind in kinds:
        curve = se_ee_curve(kind, p_sweep, pm, params, trials, seed)
        best = max_ee_point(curve)
        table.append({
            "kind": kind.label,
            "max_ee": best.ee,
            "se_at_max_ee": best.se,
            "p_at_max_ee": best.tx_power,
            "se_at_max_p": curve[-1].se,
        })
    return table
