"""Three-layer perceptron with an error-adaptive sigmoid gain.

The network is deliberately small and self-contained: one hidden layer,
logistic activation, online (per-pattern) backpropagation.  What sets it
apart from a textbook MLP is the gain parameter ``g`` inside the
activation, ``f(y) = 1 / (1 + exp(-g * y))``, which is re-adjusted before
every weight update from how far the current output is from the target:

    e_p = max |t_p - o_p|        worst-component error for pattern p
    Ap  = 2 * e_p
    g   = 1 / Ap   if Ap > 1.0   (shrink the gain on badly-missed patterns)
    g   = 1.0      otherwise

Shrinking the gain flattens the sigmoid, which keeps badly-off nodes out of
their saturated tails and the gradient alive.  The gain is shared by every
node and enters the backprop derivative (d sigma/dy = g * sigma * (1 -
sigma)) so the computed gradient is the exact gradient of the loss at the
applied gain.

All types are value types: training and update steps return new objects and
never mutate their inputs, so models can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError

# Open-interval bounds for the activation output.  float64 saturates the
# logistic to exactly 0.0 / 1.0 for |g*y| > ~37; clamping keeps the
# documented (0, 1) range without measurable effect elsewhere.
_SIG_LO = math.nextafter(0.0, 1.0)
_SIG_HI = math.nextafter(1.0, 0.0)
_EXP_CAP = 709.0  # largest |z| before exp overflows


@dataclass(frozen=True)
class MlpTopology:
    """Layer sizes of a three-layer perceptron."""

    n_inputs: int
    n_hidden: int = 8
    n_outputs: int = 1

    def __post_init__(self):
        for name in ("n_inputs", "n_hidden", "n_outputs"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")


@dataclass
class Mlp:
    """Weights plus gain state.

    ``w_hidden`` has shape (n_hidden, n_inputs + 1) and ``w_output``
    (n_outputs, n_hidden + 1); column 0 of each matrix is the bias weight,
    fed by a constant input of 1.
    """

    topology: MlpTopology
    w_hidden: np.ndarray
    w_output: np.ndarray
    gain: float = 1.0

    def __post_init__(self):
        self.w_hidden = np.asarray(self.w_hidden, dtype=float)
        self.w_output = np.asarray(self.w_output, dtype=float)
        t = self.topology
        if self.w_hidden.shape != (t.n_hidden, t.n_inputs + 1):
            raise DimensionError(
                f"w_hidden shape {self.w_hidden.shape} does not match topology "
                f"({t.n_hidden}, {t.n_inputs + 1})"
            )
        if self.w_output.shape != (t.n_outputs, t.n_hidden + 1):
            raise DimensionError(
                f"w_output shape {self.w_output.shape} does not match topology "
                f"({t.n_outputs}, {t.n_hidden + 1})"
            )
        if not (0.0 < self.gain <= 1.0):
            raise ValueError(f"gain must be in (0, 1], got {self.gain}")

    @classmethod
    def zeros(cls, topology: MlpTopology) -> "Mlp":
        """All-zero weights; every node then outputs exactly 0.5."""
        return cls(
            topology,
            np.zeros((topology.n_hidden, topology.n_inputs + 1)),
            np.zeros((topology.n_outputs, topology.n_hidden + 1)),
        )

    @classmethod
    def random(cls, topology: MlpTopology, rng: np.random.Generator,
               half_width: float = 0.5) -> "Mlp":
        """Weights drawn uniformly from [-half_width, +half_width]."""
        return cls(
            topology,
            rng.uniform(-half_width, half_width,
                        (topology.n_hidden, topology.n_inputs + 1)),
            rng.uniform(-half_width, half_width,
                        (topology.n_outputs, topology.n_hidden + 1)),
        )


@dataclass
class Pattern:
    """One normalized training pair; every component must lie in [0, 1]."""

    input: np.ndarray
    target: np.ndarray

    def __post_init__(self):
        self.input = np.asarray(self.input, dtype=float)
        self.target = np.asarray(self.target, dtype=float)
        for name, vec in (("input", self.input), ("target", self.target)):
            if vec.ndim != 1:
                raise DimensionError(f"pattern {name} must be one-dimensional")
            if vec.size and (vec.min() < 0.0 or vec.max() > 1.0):
                raise ValueError(f"pattern {name} components must lie in [0, 1]")


@dataclass(frozen=True)
class Normalizer:
    """Fixed-bound min-max scaling between a variable's unit and [0, 1]."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.hi > self.lo:
            raise ValueError(f"normalizer needs hi > lo, got [{self.lo}, {self.hi}]")


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for :func:`train`."""

    seed: int
    epochs: int = 1000
    learning_rate: float = 0.2
    init_half_width: float = 0.5

    def __post_init__(self):
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.learning_rate <= 0.0:
            raise ValueError("learning_rate must be > 0")
        if self.init_half_width <= 0.0:
            raise ValueError("init_half_width must be > 0")


@dataclass
class GainTrace:
    """One per-pattern record of the gain actually applied during training."""

    epoch: int
    pattern_index: int
    pattern_error: float
    gain: float


def _sigmoid_vec(z: np.ndarray) -> np.ndarray:
    z = np.clip(z, -_EXP_CAP, _EXP_CAP)
    return np.clip(1.0 / (1.0 + np.exp(-z)), _SIG_LO, _SIG_HI)


def sigmoid_gain(y: float, g: float) -> float:
    """Logistic activation with gain: 1 / (1 + exp(-g * y)), strictly in (0, 1)."""
    if not math.isfinite(y):
        raise ValueError(f"activation input must be finite, got {y}")
    if not (math.isfinite(g) and g > 0.0):
        raise ValueError(f"gain must be a positive finite real, got {g}")
    z = min(max(g * y, -_EXP_CAP), _EXP_CAP)
    return min(max(1.0 / (1.0 + math.exp(-z)), _SIG_LO), _SIG_HI)


def _forward_full(net: Mlp, x: np.ndarray, gain: float):
    """Forward pass returning every intermediate needed by backprop."""
    xa = np.empty(x.size + 1)
    xa[0] = 1.0
    xa[1:] = x
    h = _sigmoid_vec(gain * (net.w_hidden @ xa))
    ha = np.empty(h.size + 1)
    ha[0] = 1.0
    ha[1:] = h
    o = _sigmoid_vec(gain * (net.w_output @ ha))
    return xa, h, ha, o


def forward(net: Mlp, input: "np.ndarray | list[float]") -> np.ndarray:
    """Run the network on one input vector; outputs lie strictly in (0, 1)."""
    x = np.asarray(input, dtype=float)
    if x.shape != (net.topology.n_inputs,):
        raise DimensionError(
            f"input length {x.size} does not match n_inputs {net.topology.n_inputs}"
        )
    return _forward_full(net, x, net.gain)[3]


def pattern_error(target, output) -> float:
    """Worst-component error: max over outputs of |target - output|."""
    t = np.asarray(target, dtype=float)
    o = np.asarray(output, dtype=float)
    if t.shape != o.shape:
        raise DimensionError(f"target length {t.size} vs output length {o.size}")
    return float(np.max(np.abs(t - o)))


def adaptive_gain(e_p: float) -> float:
    """Gain for the next update from the pattern error; always in (0, 1]."""
    if e_p < 0.0:
        raise ValueError(f"pattern error must be >= 0, got {e_p}")
    ap = 2.0 * e_p
    return 1.0 / ap if ap > 1.0 else 1.0


def _step(net: Mlp, p: Pattern, lr: float):
    """One online update.  Returns (new net, sse, e_p, applied gain).

    A first forward pass at the network's current gain measures how far the
    pattern is off; that error fixes the gain applied to this update.  The
    loss differentiated is 0.5 * sum((t - o)^2) at the applied gain, so the
    returned weights are an exact gradient step; the reported error is the
    plain summed square sum((t - o)^2) before the update.
    """
    t = net.topology
    if p.input.shape != (t.n_inputs,) or p.target.shape != (t.n_outputs,):
        raise DimensionError(
            f"pattern dims ({p.input.size} in, {p.target.size} out) do not match "
            f"topology ({t.n_inputs} in, {t.n_outputs} out)"
        )
    xa, h, ha, o = _forward_full(net, p.input, net.gain)
    e_p = float(np.max(np.abs(p.target - o)))
    g = adaptive_gain(e_p)
    if g != net.gain:
        xa, h, ha, o = _forward_full(net, p.input, g)
    sse = float(np.sum((p.target - o) ** 2))
    d_out = (o - p.target) * (g * o * (1.0 - o))
    d_hid = (net.w_output[:, 1:].T @ d_out) * (g * h * (1.0 - h))
    w_output = net.w_output - lr * np.outer(d_out, ha)
    w_hidden = net.w_hidden - lr * np.outer(d_hid, xa)
    return Mlp(t, w_hidden, w_output, gain=g), sse, e_p, g


def backprop_step(net: Mlp, p: Pattern, lr: float) -> tuple[Mlp, float]:
    """One forward/backward pass plus weight update for a single pattern.

    The updated network carries the gain that was applied; the returned
    error is the pattern's summed squared error before the update.
    """
    if lr < 0.0:
        raise ValueError(f"learning rate must be >= 0, got {lr}")
    new_net, sse, _, _ = _step(net, p, lr)
    return new_net, sse


def train(net: Mlp, patterns: "list[Pattern]", cfg: TrainConfig,
          trace: "list[GainTrace] | None" = None) -> tuple[Mlp, list[float]]:
    """Online backpropagation over ``cfg.epochs`` full passes.

    Weights are re-initialized from ``cfg.seed`` (the incoming net supplies
    the topology only), patterns are visited in stored order, and
    ``loss_history[k]`` is the mean per-pattern squared error seen during
    epoch k.  Bit-deterministic for a fixed seed.  If ``trace`` is given,
    one :class:`GainTrace` entry is appended per pattern visit.
    """
    if not patterns:
        raise ValueError("cannot train on an empty pattern set")
    t = net.topology
    for i, p in enumerate(patterns):
        if p.input.shape != (t.n_inputs,) or p.target.shape != (t.n_outputs,):
            raise DimensionError(
                f"pattern {i} dims ({p.input.size} in, {p.target.size} out) do not "
                f"match topology ({t.n_inputs} in, {t.n_outputs} out)"
            )
    rng = np.random.default_rng(cfg.seed)
    current = Mlp.random(t, rng, cfg.init_half_width)
    loss_history: list[float] = []
    for epoch in range(cfg.epochs):
        total = 0.0
        for i, p in enumerate(patterns):
            current, sse, e_p, g = _step(current, p, cfg.learning_rate)
            total += sse
            if trace is not None:
                trace.append(GainTrace(epoch, i, e_p, g))
        loss_history.append(total / len(patterns))
    return current, loss_history


def normalize(x: float, nz: Normalizer) -> float:
    """Map x into [0, 1] against the fixed bounds; out-of-range x is clamped."""
    u = (x - nz.lo) / (nz.hi - nz.lo)
    return min(max(u, 0.0), 1.0)


def denormalize(u: float, nz: Normalizer) -> float:
    """Inverse of :func:`normalize` on [0, 1]; not clamped."""
    return nz.lo + u * (nz.hi - nz.lo)
