"""Sparse feed-forward ReLU network: representation, evaluation, gradients.

The network is a chain of L weight matrices with shifted-ReLU activations
between them: hidden layer i computes max(W_i h - v_i, 0) and the output
layer is a pure linear map (no activation, no shift).  A shift vector is
allocated for every layer for shape regularity; the output one stays unused.
All parameters are meant to live in [-1, 1] when class membership is
enforced; training keeps that soft via the L1 penalty instead.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .backends import kernels
from .errors import DimensionError


@dataclass(frozen=True)
class Architecture:
    """Shape metadata: depth L, layer widths (p_0..p_L), output bound, sparsity target.

    ``widths`` has length L+1 with widths[0] the input dimension and
    widths[-1] == 1.  ``output_bound`` is the clamp level F (only applied on
    request); ``sparsity_target`` is advisory bookkeeping.
    """

    depth: int
    widths: tuple[int, ...]
    output_bound: float = 1.0
    sparsity_target: int = 0

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        if len(self.widths) != self.depth + 1:
            raise DimensionError(
                f"widths must have length depth+1={self.depth + 1}, got {len(self.widths)}"
            )
        if any(w < 1 for w in self.widths):
            raise ValueError(f"all widths must be >= 1, got {self.widths}")
        if self.widths[-1] != 1:
            raise ValueError(f"output width must be 1, got {self.widths[-1]}")
        if not self.output_bound > 0:
            raise ValueError(f"output_bound must be positive, got {self.output_bound}")
        if self.sparsity_target < 0:
            raise ValueError("sparsity_target must be nonnegative")

    @property
    def input_dim(self) -> int:
        return self.widths[0]


def hidden_architecture(input_dim, hidden_widths, output_bound=1.0) -> Architecture:
    """Architecture with the given hidden-layer widths and scalar output."""
    widths = (input_dim, *hidden_widths, 1)
    return Architecture(depth=len(widths) - 1, widths=widths, output_bound=output_bound)


class Network:
    """Parameter state: weight matrices W_1..W_L and shift vectors v_1..v_L.

    W_i has shape (p_i, p_{i-1}); v_i has length p_i.  Arrays are copied on
    construction and frozen; training builds new Networks rather than
    mutating.
    """

    __slots__ = ("arch", "weights", "shifts")

    def __init__(self, arch: Architecture, weights, shifts):
        if len(weights) != arch.depth or len(shifts) != arch.depth:
            raise DimensionError(
                f"expected {arch.depth} weight matrices and shift vectors, "
                f"got {len(weights)} / {len(shifts)}"
            )
        ws, vs = [], []
        for i, (W, v) in enumerate(zip(weights, shifts)):
            W = np.array(W, dtype=np.float64, order="C")
            v = np.array(v, dtype=np.float64)
            want = (arch.widths[i + 1], arch.widths[i])
            if W.shape != want:
                raise DimensionError(f"W_{i + 1} has shape {W.shape}, expected {want}")
            if v.shape != (arch.widths[i + 1],):
                raise DimensionError(
                    f"v_{i + 1} has length {v.shape}, expected ({arch.widths[i + 1]},)"
                )
            W.flags.writeable = False
            v.flags.writeable = False
            ws.append(W)
            vs.append(v)
        object.__setattr__(self, "arch", arch)
        object.__setattr__(self, "weights", tuple(ws))
        object.__setattr__(self, "shifts", tuple(vs))

    def __setattr__(self, name, value):
        raise AttributeError("Network is immutable")


@dataclass
class Gradient:
    """Partials of a scalar loss, shape-congruent with a Network."""

    weights: list[np.ndarray]
    shifts: list[np.ndarray]


def init_network(arch: Architecture, seed_or_rng) -> Network:
    """Fresh network: weights uniform on (-r, r) with r = sqrt(6/(fan_in+fan_out)), shifts 0."""
    rng = np.random.default_rng(seed_or_rng) if not isinstance(
        seed_or_rng, np.random.Generator
    ) else seed_or_rng
    ws, vs = [], []
    for i in range(arch.depth):
        fan_in, fan_out = arch.widths[i], arch.widths[i + 1]
        r = math.sqrt(6.0 / (fan_in + fan_out))
        ws.append(rng.uniform(-r, r, size=(fan_out, fan_in)))
        vs.append(np.zeros(fan_out))
    return Network(arch, ws, vs)


def shifted_relu(x, v):
    """Entrywise max(x_i - v_i, 0)."""
    x = np.asarray(x, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if x.shape != v.shape:
        raise DimensionError(f"input and shift lengths differ: {x.shape} vs {v.shape}")
    return np.maximum(x - v, 0.0)


def forward(net: Network, x) -> float:
    """Evaluate the network at a single input vector."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != net.arch.input_dim:
        raise DimensionError(
            f"input must be a vector of length {net.arch.input_dim}, got shape {x.shape}"
        )
    return float(kernels.mlp_forward(x[None, :], list(net.weights), list(net.shifts))[0])


def predict(net: Network, X, clamp: bool = False) -> np.ndarray:
    """Evaluate the network on each row of X; optionally clamp to [-F, F]."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != net.arch.input_dim:
        raise DimensionError(
            f"X must be (n, {net.arch.input_dim}), got shape {X.shape}"
        )
    out = kernels.mlp_forward(X, list(net.weights), list(net.shifts))
    if clamp:
        F = net.arch.output_bound
        out = np.clip(out, -F, F)
    return out


def clamp_output(y: float, F: float) -> float:
    """Clip a scalar output into [-F, F]."""
    if not F > 0:
        raise ValueError(f"F must be positive, got {F}")
    return min(max(y, -F), F)


def sparsity(net: Network, tol: float = 0.0) -> int:
    """Number of weight and shift entries with |entry| > tol."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    count = 0
    for W, v in zip(net.weights, net.shifts):
        count += int((np.abs(W) > tol).sum()) + int((np.abs(v) > tol).sum())
    return count


def max_abs_param(net: Network) -> float:
    """Largest parameter magnitude; <= 1 means the uniform bound holds."""
    return max(
        max((float(np.abs(W).max()) for W in net.weights), default=0.0),
        max((float(np.abs(v).max()) for v in net.shifts), default=0.0),
    )


def project_params(net: Network) -> Network:
    """Clip every weight and shift entry into [-1, 1] (idempotent)."""
    ws = [np.clip(W, -1.0, 1.0) for W in net.weights]
    vs = [np.clip(v, -1.0, 1.0) for v in net.shifts]
    return Network(net.arch, ws, vs)


def grad_loss(net: Network, X, Y, lam: float) -> Gradient:
    """Exact gradient of mean((Y - f(X))^2) + lam * sum_i |W_i|_1.

    Shifts are not penalized; the L1 subgradient at a zero weight is 0.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    if X.ndim != 2 or Y.ndim != 1 or X.shape[0] != Y.shape[0]:
        raise DimensionError(f"incompatible shapes X {X.shape}, Y {Y.shape}")
    if X.shape[0] < 1:
        raise DimensionError("need at least one sample")
    if X.shape[1] != net.arch.input_dim:
        raise DimensionError(
            f"X has {X.shape[1]} columns, network expects {net.arch.input_dim}"
        )
    _, gw, gv = kernels.mlp_loss_grad(
        X, Y, list(net.weights), list(net.shifts), float(lam)
    )
    return Gradient(weights=gw, shifts=gv)


def build_linear_network(coeffs) -> Network:
    """Network computing x -> sum_i c_i x_i using paired one-sided ReLU units.

    Each input with coefficient c feeds ceil(|c|) units reading x and
    ceil(|c|) units reading -x; output weights +-c/ceil(|c|) recombine them so
    every parameter stays in [-1, 1] while the map is exactly linear.
    """
    coeffs = np.asarray(coeffs, dtype=np.float64)
    d = coeffs.shape[0]
    if d == 0:
        raise DimensionError("need at least one coefficient")
    rows, out = [], []
    for i, c in enumerate(coeffs):
        if c == 0.0:
            continue
        m = int(math.ceil(abs(c)))
        for sign in (1.0, -1.0):
            for _ in range(m):
                e = np.zeros(d)
                e[i] = sign
                rows.append(e)
                out.append(sign * c / m)
    if not rows:  # all-zero map still needs one (dead) unit
        rows.append(np.zeros(d))
        out.append(0.0)
    W1 = np.vstack(rows)
    W2 = np.array(out)[None, :]
    h = W1.shape[0]
    arch = Architecture(depth=2, widths=(d, h, 1), output_bound=max(1.0, float(np.abs(coeffs).sum())))
    return Network(arch, [W1, W2], [np.zeros(h), np.zeros(1)])


def to_json(net: Network) -> str:
    """Serialize to a JSON document; exact round trip for finite doubles."""
    doc = {
        "depth": net.arch.depth,
        "widths": list(net.arch.widths),
        "output_bound": net.arch.output_bound,
        "sparsity_target": net.arch.sparsity_target,
        "weights": [W.ravel().tolist() for W in net.weights],
        "shifts": [v.tolist() for v in net.shifts],
    }
    return json.dumps(doc)


def from_json(doc: str) -> Network:
    """Inverse of :func:`to_json`."""
    d = json.loads(doc)
    arch = Architecture(
        depth=d["depth"],
        widths=tuple(d["widths"]),
        output_bound=d["output_bound"],
        sparsity_target=d["sparsity_target"],
    )
    ws = [
        np.array(flat, dtype=np.float64).reshape(arch.widths[i + 1], arch.widths[i])
        for i, flat in enumerate(d["weights"])
    ]
    vs = [np.array(v, dtype=np.float64) for v in d["shifts"]]
    return Network(arch, ws, vs)
