"""Tensor container and the backward tape.

A Tape records (output, inputs, pullback) triples in forward order during
one pass; backward seeds the scalar loss with 1 and replays the records in
strict reverse, accumulating gradients into each tensor's ``grad`` slot.
Running without a tape gives a plain forward pass for prediction.
"""

from typing import Callable, Sequence

import numpy as np

from ..errors import NonScalarLoss


class Tensor:
    __slots__ = ("data", "grad", "requires_grad")

    def __init__(self, data, requires_grad: bool = False, dtype=None):
        self.data = np.asarray(data, dtype=dtype) if dtype is not None else np.asarray(data)
        self.grad: np.ndarray | None = None
        self.requires_grad = requires_grad

    @property
    def shape(self):
        return self.data.shape

    @property
    def dtype(self):
        return self.data.dtype

    @property
    def size(self):
        return self.data.size

    def zero_grad(self):
        self.grad = np.zeros_like(self.data)

    def __repr__(self):
        return f"Tensor(shape={self.data.shape}, dtype={self.data.dtype})"


class Tape:
    """Append-only operation record for a single forward pass."""

    def __init__(self):
        self._entries: list[tuple[Tensor, tuple[Tensor, ...], Callable]] = []

    def record(self, output: Tensor, inputs: Sequence[Tensor], pullback: Callable):
        self._entries.append((output, tuple(inputs), pullback))

    def __len__(self):
        return len(self._entries)

    def clear(self):
        self._entries.clear()


def backward(tape: Tape, loss: Tensor):
    """Populate gradients for every tensor reachable from the scalar loss.

    Intermediate gradients are released as soon as their producing entry
    has been replayed (all consumers sit later in the tape, so they have
    already accumulated); parameter gradients persist.
    """
    if loss.size != 1:
        raise NonScalarLoss(loss.shape)
    loss.grad = np.ones_like(loss.data)
    for output, inputs, pullback in reversed(tape._entries):
        if output.grad is None:
            continue
        out_grad = output.grad
        grads = pullback(out_grad)
        if not output.requires_grad:
            output.grad = None
        for tensor, grad in zip(inputs, grads):
            if grad is None:
                continue
            if tensor.grad is None:
                if grad.dtype != tensor.data.dtype:
                    tensor.grad = grad.astype(tensor.data.dtype)
                elif grad is out_grad or sum(1 for g in grads if g is grad) > 1:
                    # pullbacks may hand back the upstream array itself or
                    # share one array between inputs; only then copy
                    tensor.grad = grad.copy()
                else:
                    tensor.grad = grad
            else:
                tensor.grad += grad
