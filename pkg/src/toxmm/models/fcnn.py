"""Fully connected network over the descriptor features."""

import numpy as np

from ..nn import ParamStore, Tensor, glorot_normal, make_rng, ops
from .configs import FcnnConfig


class Fcnn:
    kind = "fcnn"

    def __init__(self, n_features: int, cfg: FcnnConfig = FcnnConfig(),
                 seed: int = 0, dtype=np.float32):
        self.cfg = cfg
        self.n_features = n_features
        self.dtype = dtype
        rng = make_rng(seed)
        store = ParamStore()
        h1, h2 = cfg.hidden
        store.add_param("dense1.w", glorot_normal((n_features, h1), rng, dtype))
        store.add_param("dense1.b", np.zeros(h1, dtype=dtype))
        store.add_param("dense2.w", glorot_normal((h1, h2), rng, dtype))
        store.add_param("dense2.b", np.zeros(h2, dtype=dtype))
        store.add_param("out.w", glorot_normal((h2, 1), rng, dtype))
        store.add_param("out.b", np.zeros(1, dtype=dtype))
        self.store = store

        self.shape_trace = [("input", (n_features,)), ("dense1", (h1,)),
                            ("dense2", (h2,)), ("output", (1,))]
        expected = (n_features * h1 + h1) + (h1 * h2 + h2) + (h2 + 1)
        assert store.n_parameters() == expected

    def forward(self, x: Tensor, train: bool, tape=None, rng=None) -> Tensor:
        p = self.store.params
        cfg = self.cfg
        h = ops.activation(ops.dense(x, p["dense1.w"], p["dense1.b"], tape),
                           cfg.activations[0], tape)
        h = ops.dropout(h, cfg.dropout_after_layer1, train, rng, tape)
        h = ops.activation(ops.dense(h, p["dense2.w"], p["dense2.b"], tape),
                           cfg.activations[1], tape)
        return ops.dense(h, p["out.w"], p["out.b"], tape)
