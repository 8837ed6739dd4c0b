"""Named parameter store with Adam moment state."""

import numpy as np

from ..errors import MissingGradient
from .tensor import Tensor


class ParamStore:
    """Trainable parameters plus non-trained buffers (batchnorm statistics).

    Adam moments mirror parameter shapes and start at zero; ``t`` counts
    optimizer steps. One store belongs to one training run.
    """

    def __init__(self):
        self.params: dict[str, Tensor] = {}
        self.buffers: dict[str, np.ndarray] = {}
        self.m: dict[str, np.ndarray] = {}
        self.v: dict[str, np.ndarray] = {}
        self.t = 0

    def add_param(self, name: str, data: np.ndarray) -> Tensor:
        tensor = Tensor(data, requires_grad=True)
        self.params[name] = tensor
        self.m[name] = np.zeros_like(tensor.data)
        self.v[name] = np.zeros_like(tensor.data)
        return tensor

    def add_buffer(self, name: str, data: np.ndarray) -> np.ndarray:
        self.buffers[name] = data
        return data

    def n_parameters(self) -> int:
        return sum(t.size for t in self.params.values())

    def zero_grads(self):
        for tensor in self.params.values():
            tensor.zero_grad()

    def snapshot(self) -> dict:
        return {
            "params": {k: t.data.copy() for k, t in self.params.items()},
            "buffers": {k: b.copy() for k, b in self.buffers.items()},
        }

    def restore(self, snap: dict):
        for k, data in snap["params"].items():
            self.params[k].data[...] = data
        for k, data in snap["buffers"].items():
            self.buffers[k][...] = data


def adam_step(store: ParamStore, lr: float = 1e-3, beta1: float = 0.9,
              beta2: float = 0.999, eps: float = 1e-8):
    """Bias-corrected Adam update applied in-place to every parameter."""
    for name, tensor in store.params.items():
        if tensor.grad is None:
            raise MissingGradient(name)
    store.t += 1
    t = store.t
    for name, tensor in store.params.items():
        g = tensor.grad
        m = store.m[name]
        v = store.v[name]
        m *= beta1
        m += (1.0 - beta1) * g
        v *= beta2
        v += (1.0 - beta2) * (g * g)
        m_hat = m / (1.0 - beta1 ** t)
        v_hat = v / (1.0 - beta2 ** t)
        tensor.data -= (lr * m_hat / (np.sqrt(v_hat) + eps)).astype(tensor.data.dtype,
                                                                    copy=False)
