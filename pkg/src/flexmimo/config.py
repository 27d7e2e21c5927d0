"""JSON run configuration: nested dataclasses with strict key checking."""
from __future__ import annotations

import dataclasses
import json
import types
import typing
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import ChannelParams, PowerModel, Scene
from .se_ee import Fixed, Flexible
from .trajectory.baselines import PGConfig
from .trajectory.diffusion import DiffusionConfig


class ConfigError(ValueError):
    pass


@dataclass
class SceneConfig:
    region_size: float = 40.0
    users: list[list[float]] = field(default_factory=lambda: [
        [15.0, 24.0], [25.0, 26.0], [24.0, 15.0], [16.0, 16.0]])
    antenna_init: list[list[float]] = field(default_factory=lambda: [
        [18.5, 18.5], [21.5, 18.5], [18.5, 21.5], [21.5, 21.5]])
    antenna_height: float = 2.0

    def build(self) -> Scene:
        return Scene(self.region_size, np.array(self.users, dtype=float),
                     np.array(self.antenna_init, dtype=float), self.antenna_height)


@dataclass
class HardeningSettings:
    flexible: int = 1
    positions: int = 170
    trials: int = 100_000
    curve_k: list[int] = field(default_factory=lambda: [1, 2, 4, 8])
    n_max: int = 200
    m_max: int = 40


@dataclass
class SystemSpec:
    kind: str = "fixed"
    M: int = 1
    k: int = 1
    N: int = 1
    spacing: float = 0.05

    def build(self):
        if self.kind == "fixed":
            return Fixed(self.M)
        if self.kind == "flexible":
            return Flexible(self.k, self.N, self.spacing)
        raise ConfigError(f"system kind must be 'fixed' or 'flexible', got {self.kind!r}")


@dataclass
class SeEeSettings:
    systems: list[SystemSpec] = field(default_factory=lambda: [
        SystemSpec("fixed", M=20), SystemSpec("fixed", M=4),
        SystemSpec("flexible", k=4, N=30), SystemSpec("flexible", k=4, N=60)])
    p_min_db: float = -20.0
    p_max_db: float = 40.0
    points: int = 61
    trials: int = 10_000


@dataclass
class CemSettings:
    iterations: int = 30
    population: int = 64
    elite_fraction: float = 0.125
    smoothing: float = 0.4


@dataclass
class TrajectorySettings:
    objective: str = "sum_se"
    steps: int = 3
    budget: float = 10.0
    optimizer: str = "diffusion"
    grid_resolution: int = 11
    random_samples: int = 1920
    pg_episodes: int = 120
    cem: CemSettings = field(default_factory=CemSettings)
    diffusion: DiffusionConfig = field(default_factory=DiffusionConfig)
    pg: PGConfig = field(default_factory=PGConfig)


@dataclass
class SystemConfig:
    seed: int = 0
    scene: SceneConfig = field(default_factory=SceneConfig)
    channel: ChannelParams = field(default_factory=ChannelParams)
    power: PowerModel = field(default_factory=PowerModel)
    hardening: HardeningSettings = field(default_factory=HardeningSettings)
    se_ee: SeEeSettings = field(default_factory=SeEeSettings)
    trajectory: TrajectorySettings = field(default_factory=TrajectorySettings)


@dataclass
class RunConfig:
    experiment: str
    system: SystemConfig
    out: str | None = None


def _convert(tp, value, where: str):
    if dataclasses.is_dataclass(tp):
        return from_dict(tp, value, where)
    origin = typing.get_origin(tp)
    args = typing.get_args(tp)
    if origin in (typing.Union, types.UnionType):
        if value is None and type(None) in args:
            return None
        inner = [a for a in args if a is not type(None)]
        return _convert(inner[0], value, where)
    if origin in (list, tuple):
        if not isinstance(value, list):
            raise ConfigError(f"{where}: expected a list")
        item_tp = args[0] if args else typing.Any
        items = [_convert(item_tp, v, f"{where}[{i}]") for i, v in enumerate(value)]
        return tuple(items) if origin is tuple else items
    if tp is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where}: expected a number")
        return float(value)
    if tp is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where}: expected an integer")
        return value
    if tp is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{where}: expected true/false")
        return value
    if tp is str:
        if not isinstance(value, str):
            raise ConfigError(f"{where}: expected a string")
        return value
    return value


def from_dict(cls, data, where: str = "config"):
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected an object")
    hints = typing.get_type_hints(cls)
    names = [f.name for f in dataclasses.fields(cls)]
    unknown = sorted(set(data) - set(names))
    if unknown:
        raise ConfigError(f"{where}: unknown keys {unknown}")
    kwargs = {k: _convert(hints[k], v, f"{where}.{k}") for k, v in data.items()}
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def to_dict(obj):
    if dataclasses.is_dataclass(obj):
        return {f.name: to_dict(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [to_dict(v) for v in obj]
    return obj


def parse_config(data: dict) -> SystemConfig:
    cfg = from_dict(SystemConfig, data)
    validate(cfg)
    return cfg


def validate(cfg: SystemConfig) -> None:
    """Checks that need more than one section or the built domain objects."""
    try:
        cfg.scene.build()
        for spec in cfg.se_ee.systems:
            spec.build()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if not 0 <= cfg.seed < 2**64:
        raise ConfigError("seed must fit in 64 unsigned bits")
    t = cfg.trajectory
    if t.objective not in ("sum_se", "total_ee"):
        raise ConfigError("trajectory.objective must be 'sum_se' or 'total_ee'")
    if t.optimizer not in OPTIMIZERS:
        raise ConfigError(f"trajectory.optimizer must be one of {OPTIMIZERS}")
    if cfg.se_ee.points < 1:
        raise ConfigError("se_ee.points must be >= 1")


OPTIMIZERS = ("diffusion", "cem", "random", "pg", "oracle")


def load_config(path) -> SystemConfig:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return parse_config(data)


def dumps(cfg: SystemConfig) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(to_dict(cfg), indent=2, sort_keys=True) + "\n"
