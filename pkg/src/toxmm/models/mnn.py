"""Meta network combining the three component models' predictions."""

import numpy as np

from ..nn import ParamStore, Tensor, glorot_normal, make_rng, ops
from .configs import MnnConfig


class Mnn:
    kind = "mnn"

    def __init__(self, cfg: MnnConfig = MnnConfig(), seed: int = 0,
                 dtype=np.float32):
        self.cfg = cfg
        self.dtype = dtype
        rng = make_rng(seed)
        store = ParamStore()
        store.add_param("dense1.w", glorot_normal((cfg.n_inputs, cfg.hidden_units),
                                                  rng, dtype))
        store.add_param("dense1.b", np.zeros(cfg.hidden_units, dtype=dtype))
        store.add_param("out.w", glorot_normal((cfg.hidden_units, 1), rng, dtype))
        store.add_param("out.b", np.zeros(1, dtype=dtype))
        self.store = store
        self.shape_trace = [("input", (cfg.n_inputs,)),
                            ("dense1", (cfg.hidden_units,)), ("output", (1,))]

    def forward(self, x: Tensor, train: bool, tape=None, rng=None) -> Tensor:
        p = self.store.params
        h = ops.activation(ops.dense(x, p["dense1.w"], p["dense1.b"], tape),
                           self.cfg.activation, tape)
        h = ops.dropout(h, self.cfg.dropout, train, rng, tape)
        return ops.dense(h, p["out.w"], p["out.b"], tape)
