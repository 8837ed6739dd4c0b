"""Sequence model: embedding plus stacked 1D convolutions.

Temporal trace under valid padding: 52 -> 43 (width 10) -> 39 (width 5)
-> 37 (width 3); flatten gives 37 * 92 = 3404 inputs to the linear unit.
"""

import numpy as np

from ..nn import ParamStore, Tensor, glorot_normal, make_rng, ops
from .configs import ConvRnnConfig


class ConvRnn:
    kind = "convrnn"

    def __init__(self, cfg: ConvRnnConfig = ConvRnnConfig(), seed: int = 0,
                 dtype=np.float32):
        self.cfg = cfg
        self.dtype = dtype
        rng = make_rng(seed)
        store = ParamStore()
        store.add_param("embed.e", glorot_normal((cfg.one_hot, cfg.embed_dim),
                                                 rng, dtype))
        length = cfg.seq_len
        cin = cfg.embed_dim
        trace = [("input", (cfg.seq_len, cfg.one_hot)),
                 ("embed", (length, cin))]
        for i, width in enumerate(cfg.conv_widths, start=1):
            store.add_param(f"conv{i}.k",
                            glorot_normal((width, cin, cfg.conv_filters), rng, dtype))
            length = length - width + 1
            cin = cfg.conv_filters
            trace.append((f"conv{i}", (length, cin)))
        flat = length * cin
        store.add_param("out.w", glorot_normal((flat, 1), rng, dtype))
        store.add_param("out.b", np.zeros(1, dtype=dtype))
        trace += [("flatten", (flat,)), ("output", (1,))]
        self.store = store
        self.shape_trace = trace
        self.flatten_width = flat
        if cfg == ConvRnnConfig():
            assert flat == 3404, f"derived flatten width {flat}"

    def forward(self, x: Tensor, train: bool, tape=None, rng=None) -> Tensor:
        p = self.store.params
        h = ops.embedding(x, p["embed.e"], tape)
        for i in range(1, len(self.cfg.conv_widths) + 1):
            h = ops.relu(ops.conv1d(h, p[f"conv{i}.k"], tape), tape)
        h = ops.flatten(h, tape)
        return ops.dense(h, p["out.w"], p["out.b"], tape)
