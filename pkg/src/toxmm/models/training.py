"""Shared minibatch training loop with optional early stopping.

When early stopping is on, the last ``val_fraction`` of the (seed-shuffled)
training rows becomes a validation slice; training stops once validation
MSE has not improved for more than ``patience`` epochs and the best
snapshot is restored. Remainder batches are kept, never dropped.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import NonFiniteLoss
from ..nn import Tape, Tensor, adam_step, backward, ops
from ..nn.init import spawn_rngs
from .configs import TrainConfig


@dataclass
class History:
    """Per-epoch losses. ``train_loss`` is the eval-mode MSE over the
    training rows at each epoch end (dropout off, batchnorm running stats),
    so the final entry is exactly recomputable from ``predict``;
    ``opt_loss`` is the train-mode running batch average."""
    train_loss: list = field(default_factory=list)
    opt_loss: list = field(default_factory=list)
    val_loss: list = field(default_factory=list)
    best_val: float | None = None
    best_epoch: int | None = None
    stopped_epoch: int | None = None

    @property
    def epochs_run(self) -> int:
        return len(self.train_loss)


def _partition(count: int, size: int) -> list[tuple[int, int]]:
    """Contiguous [start, end) spans of ~size rows; a lonely trailing row is
    merged into the previous span so batchnorm never sees a 1-row batch."""
    spans = [(start, min(start + size, count)) for start in range(0, count, size)]
    if len(spans) > 1 and spans[-1][1] - spans[-1][0] == 1:
        last = spans.pop()
        prev = spans.pop()
        spans.append((prev[0], last[1]))
    return spans


def _batches(n: int, size: int, rng=None):
    order = np.arange(n) if rng is None else rng.permutation(n)
    for start, end in _partition(n, size):
        yield order[start:end]


def predict(model, x: np.ndarray, batch: int = 256) -> np.ndarray:
    """Eval-mode predictions; batch partitioning does not change outputs."""
    outs = []
    for start in range(0, len(x), batch):
        xb = Tensor(np.asarray(x[start:start + batch], dtype=model.dtype))
        outs.append(model.forward(xb, train=False).data)
    return np.concatenate(outs, axis=0)


def _eval_loss(model, x, y, batch=256) -> float:
    pred = predict(model, x, batch)
    return float(np.mean((pred - y) ** 2))


def train_model(model, x: np.ndarray, y: np.ndarray, tcfg: TrainConfig) -> History:
    """Minimize MSE with Adam; returns the per-epoch loss history."""
    x = np.asarray(x, dtype=model.dtype)
    y = np.asarray(y, dtype=model.dtype)
    if y.ndim == 1:
        y = y[:, None]

    shuffle_rng, dropout_rng, split_rng = spawn_rngs(tcfg.seed, 3)
    history = History()
    early = tcfg.patience is not None

    if early:
        order = split_rng.permutation(len(x))
        n_val = max(1, int(np.ceil(tcfg.val_fraction * len(x))))
        val_idx, train_idx = order[len(x) - n_val:], order[: len(x) - n_val]
        x_val, y_val = x[val_idx], y[val_idx]
        x_tr, y_tr = x[train_idx], y[train_idx]
    else:
        x_tr, y_tr = x, y
        x_val = y_val = None

    best_snapshot = None
    patience_left = tcfg.patience if early else None

    chunk = tcfg.accum_chunk or tcfg.minibatch
    for epoch in range(tcfg.epochs):
        total, seen = 0.0, 0
        for idx in _batches(len(x_tr), tcfg.minibatch, shuffle_rng):
            model.store.zero_grads()
            batch_loss = 0.0
            for start, end in _partition(len(idx), chunk):
                part = idx[start:end]
                tape = Tape()
                pred = model.forward(Tensor(x_tr[part]), train=True, tape=tape,
                                     rng=dropout_rng)
                loss = ops.mse(pred, Tensor(y_tr[part]), tape)
                value = float(loss.data)
                if not np.isfinite(value):
                    raise NonFiniteLoss(epoch, value)
                weight = len(part) / len(idx)
                backward(tape, ops.scale(loss, weight, tape))
                batch_loss += value * weight
            adam_step(model.store, lr=tcfg.lr)
            total += batch_loss * len(idx)
            seen += len(idx)
        history.opt_loss.append(total / seen)
        history.train_loss.append(_eval_loss(model, x_tr, y_tr,
                                             batch=chunk if chunk < 256 else 256))

        if early:
            val = _eval_loss(model, x_val, y_val)
            history.val_loss.append(val)
            if history.best_val is None or val < history.best_val:
                history.best_val = val
                history.best_epoch = epoch
                best_snapshot = model.store.snapshot()
                patience_left = tcfg.patience
            else:
                patience_left -= 1
                if patience_left < 0:
                    history.stopped_epoch = epoch
                    break

    if early and best_snapshot is not None:
        model.store.restore(best_snapshot)
    return history
