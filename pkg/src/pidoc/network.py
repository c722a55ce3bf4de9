"""Dense tanh network on scalar time, with exact time-derivatives and weight gradients.

The network maps t -> x_pred through affine layers with tanh activations on
every hidden layer and a linear output layer.  Training needs, at every
collocation time, the value together with its first and second time
derivatives; these are obtained in a single pass by propagating the
truncated Taylor triple (u, u', u'') through each layer:

    affine  W u + b:   (W u + b,  W u',  W u'')
    tanh, s = tanh u:  (s,  (1-s^2) u',  (1-s^2) u'' - 2 s (1-s^2) u'^2)

seeded at the input with (t, 1, 0).  The triple's slots are themselves
differentiable functions of the weights, so the gradient of any scalar loss
built from them is recovered by reverse accumulation through the same pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "LayerSpec",
    "NetworkParams",
    "Jet2",
    "init_params",
    "forward",
    "forward_jet",
    "value_and_grad",
    "loss_gradient",
    "save_params",
    "load_params",
]


@dataclass(frozen=True)
class LayerSpec:
    """Layer widths from scalar input to scalar output, e.g. (1, 30, 30, 1)."""

    sizes: tuple[int, ...]

    def __post_init__(self) -> None:
        sizes = tuple(int(s) for s in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        if len(sizes) < 3:
            raise ValueError("need at least one hidden layer")
        if sizes[0] != 1 or sizes[-1] != 1:
            raise ValueError(f"input and output widths must be 1, got {sizes}")
        if any(s < 1 for s in sizes):
            raise ValueError(f"all widths must be >= 1, got {sizes}")

    @classmethod
    def from_shape(cls, hidden_layers: int, hidden_width: int) -> "LayerSpec":
        """Build the spec for the `layers x width` notation, hidden layers only."""
        if hidden_layers < 1:
            raise ValueError("need at least one hidden layer")
        return cls((1, *([hidden_width] * hidden_layers), 1))

    @property
    def n_hidden(self) -> int:
        return len(self.sizes) - 2

    @property
    def param_count(self) -> int:
        return sum(o * i + o for i, o in zip(self.sizes[:-1], self.sizes[1:]))


@dataclass
class NetworkParams:
    """Per-layer weight matrices and bias vectors, flattenable to one vector."""

    spec: LayerSpec
    weights: list[np.ndarray]
    biases: list[np.ndarray]

    def flatten(self) -> np.ndarray:
        parts = []
        for w, b in zip(self.weights, self.biases):
            parts.append(w.ravel())
            parts.append(b)
        return np.concatenate(parts)

    @classmethod
    def from_flat(cls, spec: LayerSpec, flat: np.ndarray) -> "NetworkParams":
        flat = np.asarray(flat, dtype=float)
        if flat.shape != (spec.param_count,):
            raise ValueError(
                f"flat vector has length {flat.size}, spec needs {spec.param_count}"
            )
        weights, biases, offset = [], [], 0
        for fan_in, fan_out in zip(spec.sizes[:-1], spec.sizes[1:]):
            weights.append(flat[offset : offset + fan_out * fan_in].reshape(fan_out, fan_in).copy())
            offset += fan_out * fan_in
            biases.append(flat[offset : offset + fan_out].copy())
            offset += fan_out
        return cls(spec=spec, weights=weights, biases=biases)


@dataclass
class Jet2:
    """A value with its first and second derivatives w.r.t. the input time."""

    val: np.ndarray
    d1: np.ndarray
    d2: np.ndarray


def init_params(spec: LayerSpec, seed: int) -> NetworkParams:
    """Glorot-style initialization: N(0, 2/(fan_in+fan_out)) weights, zero biases."""
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(spec.sizes[:-1], spec.sizes[1:]):
        std = np.sqrt(2.0 / (fan_in + fan_out))
        weights.append(std * rng.standard_normal((fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return NetworkParams(spec=spec, weights=weights, biases=biases)


def _as_row(t) -> tuple[np.ndarray, bool]:
    arr = np.asarray(t, dtype=float)
    scalar = arr.ndim == 0
    return arr.reshape(1, -1), scalar


def forward(params: NetworkParams, t):
    """Evaluate the network at time(s) t; returns a scalar for scalar input."""
    a, scalar = _as_row(t)
    last = len(params.weights) - 1
    for layer, (w, b) in enumerate(zip(params.weights, params.biases)):
        a = w @ a + b[:, None]
        if layer < last:
            a = np.tanh(a)
    out = a[0]
    return float(out[0]) if scalar else out


def _forward_jet(params: NetworkParams, t, keep_tape: bool):
    a, scalar = _as_row(t)
    n = a.shape[1]
    a1 = np.ones_like(a)
    a2 = np.zeros_like(a)
    tape = []
    last = len(params.weights) - 1
    for layer, (w, b) in enumerate(zip(params.weights, params.biases)):
        # The value slot uses the same GEMM shape as forward() so the two
        # paths stay bit-identical; derivative slots share one stacked GEMM.
        z = w @ a + b[:, None]
        z12 = w @ np.concatenate([a1, a2], axis=1)
        z1, z2 = z12[:, :n], z12[:, n:]
        if layer < last:
            s = np.tanh(z)
            d = 1.0 - s * s
            if keep_tape:
                tape.append((a, a1, a2, z1, z2, s, d))
            a = s
            a1 = d * z1
            a2 = d * z2 - 2.0 * s * d * z1 * z1
        else:
            if keep_tape:
                tape.append((a, a1, a2, None, None, None, None))
            a, a1, a2 = z, z1, z2
    jet = Jet2(val=a[0], d1=a1[0], d2=a2[0])
    return jet, tape, scalar


def forward_jet(params: NetworkParams, t) -> Jet2:
    """Value, velocity and acceleration of the network output at time(s) t."""
    jet, _, scalar = _forward_jet(params, t, keep_tape=False)
    if scalar:
        return Jet2(val=float(jet.val[0]), d1=float(jet.d1[0]), d2=float(jet.d2[0]))
    return jet


def _backprop(params: NetworkParams, tape, cot: Jet2) -> np.ndarray:
    """Reverse accumulation of jet-slot cotangents into the flat weight gradient."""
    ga = np.atleast_2d(cot.val)
    ga1 = np.atleast_2d(cot.d1)
    ga2 = np.atleast_2d(cot.d2)
    last = len(params.weights) - 1
    grads_w: list[np.ndarray] = [None] * (last + 1)
    grads_b: list[np.ndarray] = [None] * (last + 1)
    for layer in range(last, -1, -1):
        w = params.weights[layer]
        a_in, a1_in, a2_in, z1, z2, s, d = tape[layer]
        if layer < last:
            # Adjoint of the tanh jet rule; sd = d/dz (1 - s^2) = -2 s d.
            sd = s * d
            gz = ga * d - 2.0 * ga1 * sd * z1 - ga2 * (2.0 * sd * z2 + 2.0 * d * (d - 2.0 * s * s) * z1 * z1)
            gz1 = ga1 * d - 4.0 * ga2 * sd * z1
            gz2 = ga2 * d
        else:
            gz, gz1, gz2 = ga, ga1, ga2
        grads_w[layer] = (
            np.concatenate([gz, gz1, gz2], axis=1)
            @ np.concatenate([a_in, a1_in, a2_in], axis=1).T
        )
        grads_b[layer] = gz.sum(axis=1)
        if layer > 0:
            back = w.T @ np.concatenate([gz, gz1, gz2], axis=1)
            n = gz.shape[1]
            ga, ga1, ga2 = back[:, :n], back[:, n : 2 * n], back[:, 2 * n :]
    parts = []
    for gw, gb in zip(grads_w, grads_b):
        parts.append(gw.ravel())
        parts.append(gb)
    return np.concatenate(parts)


LossFn = Callable[[Jet2], tuple[float, Jet2]]


def value_and_grad(params: NetworkParams, t, loss_fn: LossFn) -> tuple[float, np.ndarray]:
    """Evaluate `loss_fn` on the grid jets and return (loss, flat gradient).

    `loss_fn` maps the array-valued Jet2 over the grid to a scalar loss and
    the loss's partial derivatives w.r.t. each jet slot (another Jet2 of the
    same shape).
    """
    jet, tape, _ = _forward_jet(params, t, keep_tape=True)
    value, cot = loss_fn(jet)
    return value, _backprop(params, tape, cot)


def loss_gradient(params: NetworkParams, t, loss_fn: LossFn) -> np.ndarray:
    """Gradient of `loss_fn` w.r.t. the flat parameter vector."""
    return value_and_grad(params, t, loss_fn)[1]


def save_params(params: NetworkParams, path) -> None:
    """Checkpoint format: layer sizes on the first line, one number per line after."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(" ".join(str(s) for s in params.spec.sizes) + "\n")
        for value in params.flatten():
            fh.write(f"{value!r}\n")


def load_params(path) -> NetworkParams:
    with open(path, "r", encoding="utf-8") as fh:
        sizes = tuple(int(s) for s in fh.readline().split())
        flat = np.array([float(line) for line in fh if line.strip()])
    return NetworkParams.from_flat(LayerSpec(sizes), flat)
