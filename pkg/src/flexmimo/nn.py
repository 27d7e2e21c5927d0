"""Dense network with hand-written backprop and Adam."""
from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

ACTIVATIONS = ("relu", "silu")
MAGIC = b"FLXNN1"


@dataclass
class DenseNet:
    layer_sizes: tuple[int, ...]
    activation: str
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    init_seed: int = 0

    @property
    def params(self) -> list[np.ndarray]:
        """Parameters in layer order ``W0, b0, W1, b1, ...`` (views, not copies)."""
        out = []
        for W, b in zip(self.weights, self.biases):
            out += [W, b]
        return out

    def copy(self) -> "DenseNet":
        return DenseNet(self.layer_sizes, self.activation, [w.copy() for w in self.weights],
                        [b.copy() for b in self.biases], self.init_seed)

    def num_params(self) -> int:
        return sum(p.size for p in self.params)


def net_init(layer_sizes: Sequence[int], activation: str = "silu", seed: int = 0) -> DenseNet:
    sizes = tuple(int(s) for s in layer_sizes)
    if len(sizes) < 2 or any(s < 1 for s in sizes):
        raise ValueError("need at least two positive layer sizes")
    if activation not in ACTIVATIONS:
        raise ValueError(f"activation must be one of {ACTIVATIONS}")
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        bound = 1.0 / np.sqrt(fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return DenseNet(sizes, activation, weights, biases, seed)


def _act(z, kind):
    if kind == "relu":
        return np.maximum(z, 0.0)
    return z * _sigmoid(z)


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def _act_grad(z, kind):
    if kind == "relu":
        return (z > 0).astype(float)
    s = _sigmoid(z)
    return s * (1.0 + z * (1.0 - s))


def _check_input(net: DenseNet, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[1] != net.layer_sizes[0]:
        raise ValueError(f"input must be (n, {net.layer_sizes[0]}), got {x.shape}")
    return x


def _forward_cache(net: DenseNet, x: np.ndarray):
    inputs, pre = [x], []
    h = x
    last = len(net.weights) - 1
    for i, (W, b) in enumerate(zip(net.weights, net.biases)):
        z = h @ W + b
        pre.append(z)
        h = z if i == last else _act(z, net.activation)
        if i != last:
            inputs.append(h)
    return h, inputs, pre


def net_forward(net: DenseNet, batch) -> np.ndarray:
    """Hidden layers use the net's activation; the output layer is linear."""
    x = _check_input(net, batch)
    return _forward_cache(net, x)[0]


def net_backward(net: DenseNet, batch, upstream) -> list[np.ndarray]:
    """Gradients of ``sum(upstream * net_forward(net, batch))``, ordered like ``net.params``."""
    x = _check_input(net, batch)
    out, inputs, pre = _forward_cache(net, x)
    g = np.asarray(upstream, dtype=float)
    if g.shape != out.shape:
        raise ValueError(f"upstream shape {g.shape} != output shape {out.shape}")
    grads: list[np.ndarray] = [None] * (2 * len(net.weights))
    for i in range(len(net.weights) - 1, -1, -1):
        if i != len(net.weights) - 1:
            g = g * _act_grad(pre[i], net.activation)
        grads[2 * i] = inputs[i].T @ g
        grads[2 * i + 1] = g.sum(axis=0)
        if i:
            g = g @ net.weights[i].T
    return grads


@dataclass
class AdamState:
    lr: float = 1e-3
    b1: float = 0.9
    b2: float = 0.999
    eps: float = 1e-8
    m: list[np.ndarray] = field(default_factory=list)
    v: list[np.ndarray] = field(default_factory=list)
    step: int = 0

    def __post_init__(self):
        if not (0 < self.b1 < 1 and 0 < self.b2 < 1):
            raise ValueError("decay rates must lie in (0, 1)")
        if not self.lr > 0:
            raise ValueError("lr must be > 0")


def adam_step(state: AdamState, params: list[np.ndarray], grads: list[np.ndarray]) -> None:
    """Bias-corrected Adam update, applied to ``params`` in place."""
    if len(params) != len(grads) or any(p.shape != g.shape for p, g in zip(params, grads)):
        raise ValueError("params and grads must match in number and shape")
    if not state.m:
        state.m = [np.zeros_like(p) for p in params]
        state.v = [np.zeros_like(p) for p in params]
    elif any(m.shape != p.shape for m, p in zip(state.m, params)) or len(state.m) != len(params):
        raise ValueError("moment shapes do not match params")
    state.step += 1
    c1 = 1.0 - state.b1**state.step
    c2 = 1.0 - state.b2**state.step
    for p, g, m, v in zip(params, grads, state.m, state.v):
        m *= state.b1
        m += (1.0 - state.b1) * g
        v *= state.b2
        v += (1.0 - state.b2) * g * g
        p -= state.lr * (m / c1) / (np.sqrt(v / c2) + state.eps)


def save_checkpoint(net: DenseNet, path) -> None:
    """Write ``FLXNN1``, layer count and sizes (uint32 LE), then float64 LE params."""
    buf = bytearray(MAGIC)
    buf += struct.pack("<I", len(net.layer_sizes))
    buf += struct.pack(f"<{len(net.layer_sizes)}I", *net.layer_sizes)
    for p in net.params:
        buf += np.ascontiguousarray(p, dtype="<f8").tobytes()
    Path(path).write_bytes(bytes(buf))


def load_checkpoint(path, activation: str = "silu") -> DenseNet:
    data = Path(path).read_bytes()
    if data[:6] != MAGIC:
        raise ValueError("not a FLXNN1 checkpoint")
    (n,) = struct.unpack_from("<I", data, 6)
    sizes = struct.unpack_from(f"<{n}I", data, 10)
    offset = 10 + 4 * n
    net = net_init(sizes, activation)
    for p in net.params:
        count = p.size
        p[...] = np.frombuffer(data, dtype="<f8", count=count, offset=offset).reshape(p.shape)
        offset += 8 * count
    if offset != len(data):
        raise ValueError("checkpoint size does not match layer sizes")
    return net
