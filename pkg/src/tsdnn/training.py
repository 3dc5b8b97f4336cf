"""Training protocol: chronological splits, penalized loss, full-batch descent.

Data is split into ordered thirds (train / validation / test).  Training
minimizes mean squared error over the train range plus an L1 penalty on the
weight matrices, by plain full-batch gradient descent with a fixed step.
After every epoch the unpenalized validation MSE is recorded; the run stops
once it has not improved for ``patience`` epochs and the parameter state at
the best epoch is returned.  Runs are deterministic given the config seed.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .backends import kernels
from .errors import DimensionError, InvalidSizeError, TrainingDivergedError
from .net import Network


@dataclass(frozen=True)
class Splits:
    """Contiguous, disjoint, ordered index ranges partitioning [0, n)."""

    train: range
    valid: range
    test: range

    @property
    def n(self) -> int:
        return self.test.stop


def split_indices(n: int) -> Splits:
    """Half-open thirds [0, n/2), [n/2, 3n/4), [3n/4, n) with floored cuts."""
    if n < 4:
        raise InvalidSizeError(f"need n >= 4 to form three nonempty splits, got {n}")
    half = n // 2
    q3 = (3 * n) // 4
    return Splits(train=range(0, half), valid=range(half, q3), test=range(q3, n))


@dataclass(frozen=True)
class TrainConfig:
    lam: float = 0.1
    learning_rate: float = 0.01
    max_epochs: int = 5000
    patience: int = 50
    dropout_rate: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lam must be nonnegative")
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if self.max_epochs < 0:
            raise ValueError("max_epochs must be nonnegative")
        if self.patience < 1:
            raise ValueError("patience must be >= 1")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError(f"dropout_rate must lie in [0, 1), got {self.dropout_rate}")


@dataclass
class TrainReport:
    """Outcome of one training run; network is the best-validation snapshot."""

    network: Network
    epochs_run: int
    train_loss_history: list[float] = field(default_factory=list)
    valid_mse_history: list[float] = field(default_factory=list)
    best_epoch: int = -1  # index into the histories; -1 when no epoch ran


def penalized_loss(net: Network, X, Y, lam: float) -> float:
    """Mean squared residual over the given rows plus lam * sum_i |W_i|_1."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    if X.shape[0] != Y.shape[0]:
        raise DimensionError(f"X has {X.shape[0]} rows but Y has {Y.shape[0]}")
    if X.shape[0] < 1:
        raise InvalidSizeError("need at least one sample")
    yhat = kernels.mlp_forward(X, list(net.weights), list(net.shifts))
    loss = float(np.mean((Y - yhat) ** 2))
    for W in net.weights:
        loss += lam * float(np.abs(W).sum())
    return loss


def apply_dropout(activations, rate: float, rng) -> np.ndarray:
    """Zero each entry with probability ``rate``; scale survivors by 1/(1-rate).

    Inverted scaling keeps the expectation unchanged, so evaluation needs no
    correction.  Only used on hidden activations during training passes.
    """
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"dropout rate must lie in [0, 1), got {rate}")
    x = np.asarray(activations, dtype=np.float64)
    if rate == 0.0:
        return x.copy()
    keep = rng.random(x.shape) >= rate
    return x * keep / (1.0 - rate)


def _dropout_masks(shape_widths, n, rate, rng):
    return [
        (rng.random((n, w)) >= rate) / (1.0 - rate) for w in shape_widths
    ]


def train(net: Network, data, splits: Splits, cfg: TrainConfig) -> TrainReport:
    """Full-batch gradient descent with patience-based validation stopping.

    ``data`` needs ``X`` (n, d) and ``Y`` (n,) attributes covering
    ``splits.n`` rows.  Histories record, per epoch, the penalized training
    loss at the post-update state (masked when dropout is on) and the
    unpenalized validation MSE.  Raises TrainingDivergedError when either
    turns non-finite.
    """
    X = np.ascontiguousarray(data.X, dtype=np.float64)
    Y = np.asarray(data.Y, dtype=np.float64)
    if X.shape[0] != Y.shape[0]:
        raise DimensionError("X and Y row counts differ")
    if splits.n > X.shape[0]:
        raise InvalidSizeError(
            f"splits cover {splits.n} rows but data has only {X.shape[0]}"
        )
    if cfg.max_epochs == 0:
        return TrainReport(network=net, epochs_run=0)

    Xt = X[splits.train.start : splits.train.stop]
    Yt = Y[splits.train.start : splits.train.stop]
    Xv = X[splits.valid.start : splits.valid.stop]
    Yv = Y[splits.valid.start : splits.valid.stop]

    rng = np.random.default_rng(cfg.seed)
    ws = [W.copy() for W in net.weights]
    vs = [v.copy() for v in net.shifts]
    hidden_widths = [W.shape[0] for W in ws[:-1]]
    n_train = Xt.shape[0]

    def loss_grad():
        masks = None
        if cfg.dropout_rate > 0.0 and hidden_widths:
            masks = _dropout_masks(hidden_widths, n_train, cfg.dropout_rate, rng)
        return kernels.mlp_loss_grad(Xt, Yt, ws, vs, cfg.lam, masks)

    loss, gw, gv = loss_grad()
    lr = cfg.learning_rate
    train_hist: list[float] = []
    valid_hist: list[float] = []
    best_mse = np.inf
    best_epoch = -1
    best_ws = [W.copy() for W in ws]
    best_vs = [v.copy() for v in vs]
    since_best = 0
    epochs_run = 0

    for epoch in range(1, cfg.max_epochs + 1):
        for W, g in zip(ws, gw):
            W -= lr * g
        for v, g in zip(vs, gv):
            v -= lr * g
        loss, gw, gv = loss_grad()
        pred = kernels.mlp_forward(Xv, ws, vs)
        vmse = float(np.mean((Yv - pred) ** 2))
        train_hist.append(loss)
        valid_hist.append(vmse)
        epochs_run = epoch
        if not (np.isfinite(loss) and np.isfinite(vmse)):
            raise TrainingDivergedError(epoch)
        if vmse < best_mse:
            best_mse = vmse
            best_epoch = epoch - 1
            best_ws = [W.copy() for W in ws]
            best_vs = [v.copy() for v in vs]
            since_best = 0
        else:
            since_best += 1
            if since_best >= cfg.patience:
                break

    final = Network(net.arch, best_ws, best_vs)
    return TrainReport(
        network=final,
        epochs_run=epochs_run,
        train_loss_history=train_hist,
        valid_mse_history=valid_hist,
        best_epoch=best_epoch,
    )


def empirical_risk(predictions, oracle) -> float:
    """Mean squared distance between oracle regression values and predictions."""
    p = np.asarray(predictions, dtype=np.float64)
    o = np.asarray(oracle, dtype=np.float64)
    if p.shape != o.shape:
        raise DimensionError(f"length mismatch: {p.shape} vs {o.shape}")
    if p.size < 1:
        raise InvalidSizeError("need at least one element")
    return float(np.mean((o - p) ** 2))


def report_to_csv(report: TrainReport) -> str:
    """TrainReport histories as CSV text (epoch, train_loss, valid_mse)."""
    buf = io.StringIO()
    buf.write("epoch,train_loss,valid_mse\n")
    for i, (tl, vm) in enumerate(
        zip(report.train_loss_history, report.valid_mse_history), start=1
    ):
        buf.write(f"{i},{tl!r},{vm!r}\n")
    return buf.getvalue()
