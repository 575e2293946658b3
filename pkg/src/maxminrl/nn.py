"""Minimal dense-network engine: MLP forward/backward, Adam, EMA targets.

Everything operates on plain numpy arrays. Networks are fixed-topology
multilayer perceptrons with rectified-linear hidden units and a linear
output layer; gradients are exact reverse-mode derivatives of the fixed
loss graphs built on top of this module. The batch dimension leads
everywhere; a single input is a batch of size 1.

Parameters live in one flat vector per network with the per-layer weight
matrices and bias vectors exposed as views, so optimizer and EMA updates
are single-pass vector operations.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

DEFAULT_DTYPE = np.float64

_MAGIC = b"MLPCKPT1"


def _layer_views(flat: np.ndarray, shapes: list[tuple[int, int]]):
    """Carve (weight, bias) views for each (out, in) layer shape out of a
    flat buffer laid out as w0, b0, w1, b1, ..."""
    weights, biases = [], []
    i = 0
    for out_dim, in_dim in shapes:
        weights.append(flat[i:i + out_dim * in_dim].reshape(out_dim, in_dim))
        i += out_dim * in_dim
        biases.append(flat[i:i + out_dim])
        i += out_dim
    assert i == flat.size
    return weights, biases


def _pack_flat(weights, biases) -> np.ndarray:
    parts = []
    for w, b in zip(weights, biases):
        parts.append(np.asarray(w).ravel())
        parts.append(np.asarray(b).ravel())
    return np.concatenate(parts)


@dataclass
class MlpNet:
    """Feed-forward network parameters.

    weights[k] has shape (out_k, in_k); consecutive layer dims chain.
    Hidden activations are rectified-linear, the output is linear.
    """

    weights: list
    biases: list
    flat: np.ndarray | None = None

    def __post_init__(self):
        if self.flat is None:
            self.flat = _pack_flat(self.weights, self.biases)
            shapes = [w.shape for w in self.weights]
            self.weights, self.biases = _layer_views(self.flat, shapes)

    @property
    def input_dim(self) -> int:
        return self.weights[0].shape[1]

    @property
    def output_dim(self) -> int:
        return self.weights[-1].shape[0]

    @property
    def dtype(self) -> np.dtype:
        return self.flat.dtype

    @property
    def layer_shapes(self) -> list:
        return [w.shape for w in self.weights]

    def num_params(self) -> int:
        return self.flat.size

    def copy(self) -> "MlpNet":
        flat = self.flat.copy()
        weights, biases = _layer_views(flat, self.layer_shapes)
        return MlpNet(weights, biases, flat)


@dataclass
class Gradients:
    """Shape-congruent mirror of MlpNet parameters holding loss derivatives."""

    weights: list
    biases: list
    flat: np.ndarray | None = None

    def __post_init__(self):
        if self.flat is None:
            self.flat = _pack_flat(self.weights, self.biases)
            shapes = [w.shape for w in self.weights]
            self.weights, self.biases = _layer_views(self.flat, shapes)

    @classmethod
    def zeros_like(cls, net: MlpNet) -> "Gradients":
        flat = np.zeros_like(net.flat)
        weights, biases = _layer_views(flat, net.layer_shapes)
        return cls(weights, biases, flat)

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.flat, self.flat)))


@dataclass
class AdamState:
    """First/second moment accumulators plus step counter for one network."""

    m: np.ndarray
    v: np.ndarray
    m_w: list
    v_w: list
    m_b: list
    v_b: list
    lr: float
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    scratch: np.ndarray | None = None


@dataclass
class ForwardCache:
    """Per-layer input activations retained for the backward pass; the
    relu masks are recovered from the stored post-activation inputs."""

    inputs: list = field(default_factory=list)
    output: np.ndarray | None = None


def _as_rng(seed_or_rng) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


def init_mlp(input_dim: int, output_dim: int, hidden_sizes, seed_or_rng,
             dtype=DEFAULT_DTYPE) -> MlpNet:
    """Create an MLP with weights uniform on [-1/sqrt(fan_in), +1/sqrt(fan_in)].

    Biases start at zero. Deterministic given an integer seed.
    """
    if input_dim <= 0 or output_dim <= 0 or any(h <= 0 for h in hidden_sizes):
        raise ValueError(f"layer dims must be positive, got "
                         f"{input_dim}, {list(hidden_sizes)}, {output_dim}")
    rng = _as_rng(seed_or_rng)
    dims = [input_dim, *hidden_sizes, output_dim]
    shapes = [(o, i) for i, o in zip(dims[:-1], dims[1:])]
    flat = np.zeros(sum(o * i + o for o, i in shapes), dtype=dtype)
    weights, biases = _layer_views(flat, shapes)
    for w in weights:
        bound = 1.0 / np.sqrt(w.shape[1])
        w[...] = rng.uniform(-bound, bound, size=w.shape)
    return MlpNet(weights, biases, flat)


def forward(net: MlpNet, batch: np.ndarray) -> np.ndarray:
    """Plain forward pass; batch shape (M, input_dim) -> (M, output_dim)."""
    h = _check_batch(net, batch)
    last = len(net.weights) - 1
    for k, (w, b) in enumerate(zip(net.weights, net.biases)):
        h = h @ w.T
        h += b
        if k < last:
            np.maximum(h, 0.0, out=h)
    return h


def forward_cached(net: MlpNet, batch: np.ndarray) -> tuple[np.ndarray, ForwardCache]:
    """Forward pass that retains per-layer inputs for backpropagation."""
    h = _check_batch(net, batch)
    cache = ForwardCache()
    last = len(net.weights) - 1
    for k, (w, b) in enumerate(zip(net.weights, net.biases)):
        cache.inputs.append(h)
        z = h @ w.T
        z += b
        if k < last:
            np.maximum(z, 0.0, out=z)
        h = z
    cache.output = h
    return h, cache


def _propagate(net: MlpNet, cache: ForwardCache, d: np.ndarray, k: int) -> np.ndarray:
    """One layer of reverse input propagation including the relu mask."""
    w = net.weights[k]
    d = d * w if w.shape[0] == 1 else d @ w  # rank-1 layers broadcast
    if k > 0:
        d *= cache.inputs[k] > 0.0
    return d


def backward_from_cache(net: MlpNet, cache: ForwardCache, upstream: np.ndarray,
                        out: Gradients | None = None) -> tuple[Gradients, np.ndarray]:
    """Reverse-mode gradient of <output, upstream> given a forward cache.

    Returns parameter gradients plus the gradient with respect to the
    input batch (needed by action-gradient probes and the reparameterized
    policy path). Pass `out` to reuse a preallocated gradient buffer.
    """
    if upstream.shape != cache.output.shape:
        raise ValueError(f"upstream shape {upstream.shape} != output shape "
                         f"{cache.output.shape}")
    grads = out if out is not None else Gradients.zeros_like(net)
    d = upstream
    for k in range(len(net.weights) - 1, -1, -1):
        np.matmul(d.T, cache.inputs[k], out=grads.weights[k])
        np.sum(d, axis=0, out=grads.biases[k])
        d = _propagate(net, cache, d, k)
    return grads, d


def input_gradient_from_cache(net: MlpNet, cache: ForwardCache,
                              upstream: np.ndarray) -> np.ndarray:
    """Gradient of <output, upstream> w.r.t. the input batch only."""
    d = upstream
    for k in range(len(net.weights) - 1, -1, -1):
        d = _propagate(net, cache, d, k)
    return d


def backward(net: MlpNet, batch: np.ndarray,
             upstream: np.ndarray) -> tuple[Gradients, np.ndarray]:
    """Forward + reverse pass in one call; see backward_from_cache."""
    _, cache = forward_cached(net, batch)
    return backward_from_cache(net, cache, upstream)


def adam_init(net: MlpNet, lr: float, beta1: float = 0.9, beta2: float = 0.999,
              eps: float = 1e-8) -> AdamState:
    m = np.zeros_like(net.flat)
    v = np.zeros_like(net.flat)
    m_w, m_b = _layer_views(m, net.layer_shapes)
    v_w, v_b = _layer_views(v, net.layer_shapes)
    return AdamState(m, v, m_w, v_w, m_b, v_b, lr=lr, beta1=beta1, beta2=beta2,
                     eps=eps, scratch=np.empty_like(net.flat))


def _locate_nonfinite(net_name: str, grads: Gradients) -> str:
    for k, g in enumerate(grads.weights):
        if not np.all(np.isfinite(g)):
            return f"{net_name} weights[{k}]"
    for k, g in enumerate(grads.biases):
        if not np.all(np.isfinite(g)):
            return f"{net_name} biases[{k}]"
    return f"{net_name} (unlocated)"


def adam_step(net: MlpNet, state: AdamState, grads: Gradients,
              net_name: str = "net") -> None:
    """Bias-corrected Adam update, applied in place."""
    g = grads.flat
    if not np.isfinite(np.sum(g)):
        raise FloatingPointError(f"non-finite gradient in {_locate_nonfinite(net_name, grads)}")
    state.step += 1
    t = state.step
    b1, b2 = state.beta1, state.beta2
    # effective step size with bias correction folded in
    alpha = state.lr * np.sqrt(1.0 - b2 ** t) / (1.0 - b1 ** t)
    eps_hat = state.eps * np.sqrt(1.0 - b2 ** t)
    m, v = state.m, state.v
    s = state.scratch if state.scratch is not None else np.empty_like(g)
    m *= b1
    np.multiply(g, 1.0 - b1, out=s)
    m += s
    v *= b2
    np.square(g, out=s)
    s *= 1.0 - b2
    v += s
    np.sqrt(v, out=s)
    s += eps_hat
    np.divide(m, s, out=s)
    s *= alpha
    net.flat -= s


def ema_update(target: MlpNet, online: MlpNet, rate: float) -> None:
    """target <- (1 - rate) * target + rate * online, in place."""
    if not 0.0 < rate <= 1.0:
        raise ValueError(f"EMA rate must be in (0, 1], got {rate}")
    if target.layer_shapes != online.layer_shapes:
        raise ValueError("EMA shape mismatch")
    target.flat *= 1.0 - rate
    target.flat += rate * online.flat


def _check_batch(net: MlpNet, batch: np.ndarray) -> np.ndarray:
    batch = np.asarray(batch, dtype=net.dtype)
    if batch.ndim != 2 or batch.shape[1] != net.input_dim:
        raise ValueError(f"batch shape {batch.shape} incompatible with "
                         f"input_dim {net.input_dim}")
    return batch


def save_mlp(net: MlpNet, path) -> None:
    """Write a checkpoint: magic, layer count, per-layer dims, row-major
    float64 weights then biases in layer order."""
    with open(path, "wb") as f:
        f.write(_MAGIC)
        f.write(struct.pack("<i", len(net.weights)))
        for w in net.weights:
            f.write(struct.pack("<ii", *w.shape))
        for w, b in zip(net.weights, net.biases):
            f.write(np.ascontiguousarray(w, dtype=np.float64).tobytes())
            f.write(np.ascontiguousarray(b, dtype=np.float64).tobytes())


def load_mlp(path, dtype=DEFAULT_DTYPE) -> MlpNet:
    with open(path, "rb") as f:
        magic = f.read(len(_MAGIC))
        if magic != _MAGIC:
            raise ValueError(f"bad checkpoint magic {magic!r}")
        (n_layers,) = struct.unpack("<i", f.read(4))
        shapes = [struct.unpack("<ii", f.read(8)) for _ in range(n_layers)]
        weights, biases = [], []
        for out_dim, in_dim in shapes:
            w = np.frombuffer(f.read(8 * out_dim * in_dim), dtype=np.float64)
            weights.append(w.reshape(out_dim, in_dim).astype(dtype))
            b = np.frombuffer(f.read(8 * out_dim), dtype=np.float64)
            biases.append(b.astype(dtype))
    return MlpNet(weights, biases)
