"""Channel-hardening variance for fixed arrays and position-selecting arrays.

The hardening metric is ``Var(S / E[S])`` where ``S`` is the beamformed gain.
A fixed array of M antennas sums M unit-mean exponential gains.  A flexible
array of k antennas over N candidate positions sums the k largest of N.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .rng import HARDENING, RngStream


@dataclass(frozen=True)
class HardeningConfig:
    flexible_antennas: int
    positions: int
    trials: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.flexible_antennas <= self.positions:
            raise ValueError("need 1 <= flexible_antennas <= positions")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


@dataclass(frozen=True)
class HardeningResult:
    mean_gain: float
    variance: float
    stderr: float = 0.0


def _check_kn(k: int, N: int):
    if not 1 <= k <= N:
        raise ValueError(f"need 1 <= k <= N, got k={k}, N={N}")


def harmonic(n: int, order: int = 1) -> float:
    """Generalised harmonic number ``sum_{i=1}^n i^-order`` by direct summation."""
    if n <= 0:
        return 0.0
    i = np.arange(n, 0, -1, dtype=float)  # small terms first
    return float(np.sum(i**-order))


def fip_variance(M: int) -> float:
    if M < 1:
        raise ValueError("M must be >= 1")
    return 1.0 / M


def topk_sum_stats(k: int, N: int) -> tuple[float, float]:
    """Mean and variance of the sum of the k largest of N i.i.d. Exp(1) variables.

    Writing the order statistics through their independent exponential
    spacings, the sum equals ``sum_i E_i * min(i, k) / i``, hence
    ``mean = k + k (H_N - H_k)`` and ``var = k + k^2 (H2_N - H2_k)``.
    """
    _check_kn(k, N)
    tail1 = float(np.sum(1.0 / np.arange(N, k, -1, dtype=float)))
    tail2 = float(np.sum(1.0 / np.arange(N, k, -1, dtype=float) ** 2))
    return k + k * tail1, k + k * k * tail2


def flp_variance_analytic(k: int, N: int) -> float:
    mean, var = topk_sum_stats(k, N)
    return var / mean**2


def topk_sums(gains: np.ndarray, k: int) -> np.ndarray:
    """Row-wise sum of the k largest entries."""
    N = gains.shape[-1]
    if k == N:
        return gains.sum(axis=-1)
    if k == 1:
        return gains.max(axis=-1)
    return np.partition(gains, N - k, axis=-1)[..., N - k:].sum(axis=-1)


def normalized_variance(samples: np.ndarray) -> tuple[float, float, float]:
    """Estimate ``Var(S)/E[S]^2`` with a delta-method standard error.

    Returns ``(mean, variance_ratio, stderr)``.
    """
    s = np.asarray(samples, dtype=float)
    n = s.size
    mu = s.mean()
    c = s - mu
    var = np.mean(c * c)
    ratio = var / mu**2
    if n < 2:
        return float(mu), float(ratio), float("inf")
    influence = (c * c - var) / mu**2 - 2.0 * var * c / mu**3
    stderr = influence.std(ddof=1) / np.sqrt(n)
    return float(mu), float(ratio), float(stderr)


_CHUNK_VALUES = 4_000_000


def sample_topk_gains(k: int, N: int, trials: int, rng: RngStream) -> np.ndarray:
    """Monte Carlo draws of the top-k gain sum, one per trial.

    Trials are split into fixed-size blocks, each drawn from its own counter
    block, so the result does not depend on how blocks are scheduled.
    """
    _check_kn(k, N)
    block = max(1, _CHUNK_VALUES // N)
    out = np.empty(trials)
    for b, start in enumerate(range(0, trials, block)):
        stop = min(trials, start + block)
        gen = rng.generator(b)
        gains = gen.standard_exponential((stop - start, N))
        out[start:stop] = topk_sums(gains, k)
    return out


def flp_variance_mc(cfg: HardeningConfig) -> HardeningResult:
    rng = RngStream(cfg.seed, HARDENING)
    s = sample_topk_gains(cfg.flexible_antennas, cfg.positions, cfg.trials, rng)
    mean, var, se = normalized_variance(s)
    return HardeningResult(mean_gain=mean, variance=var, stderr=se)


def equivalent_positions(k: int, M_target: int) -> int:
    """Smallest N >= k whose flexible variance reaches the fixed-array level ``1/M_target``."""
    if k < 1 or M_target < 1:
        raise ValueError("k and M_target must be >= 1")
    threshold = 1.0 / M_target
    # incremental sums keep the scan linear in N
    N = k
    t1 = t2 = 0.0
    while True:
        mean, var = k + k * t1, k + k * k * t2
        if var / mean**2 <= threshold:
            return N
        N += 1
        t1 += 1.0 / N
        t2 += 1.0 / N**2
        if N > 10_000_000:
            raise ValueError("no equivalent position count below 1e7")


def hardening_curve(k_list: Sequence[int], N_max: int, M_max: int) -> list[dict]:
    """Rows ``index, fip, flp_k<k>...`` for index = 1..max(N_max, M_max).

    Where ``index < k`` only ``index`` antennas fit, so the flexible column
    reports ``flp_variance_analytic(index, index)``.
    """
    k_list = list(k_list)
    if not k_list:
        raise ValueError("k_list must be non-empty")
    if any(k < 1 for k in k_list) or N_max < max(k_list) or M_max < 1:
        raise ValueError("need N_max >= max(k_list) >= 1 and M_max >= 1")
    rows = []
    for n in range(1, max(N_max, M_max) + 1):
        row = {"index": n, "fip_variance": fip_variance(n)}
        for k in k_list:
            row[f"flp_k{k}"] = flp_variance_analytic(min(k, n), n)
        rows.append(row)
    return rows
