"""Three-stage residual network over molecular images.

Every convolution is followed by batchnorm; relu sits after each batchnorm
except the block tails, where the skip add comes first. The conv block
projects its input through a 1x1 shortcut to the block's final channel
count; the identity block adds its input unchanged. Spatial extents follow
valid padding throughout: 100 -> 47 (7x7/2 conv) -> 23 (3x3/2 maxpool) ->
23 (stages) -> 11 (2x2 avgpool) -> flatten 11*11*512 = 61952.
"""

import numpy as np

from ..nn import ParamStore, Tensor, glorot_normal, make_rng, ops
from ..nn.ops import BatchNormState
from .configs import ResnetConfig


def _out(size, kernel, stride):
    return (size - kernel) // stride + 1


class Resnet:
    kind = "resnet"

    def __init__(self, cfg: ResnetConfig = ResnetConfig(), seed: int = 0,
                 dtype=np.float32):
        self.cfg = cfg
        self.dtype = dtype
        self._rng = make_rng(seed)
        store = ParamStore()
        self.store = store
        self._bn_states: dict[str, BatchNormState] = {}

        h, w, cin = cfg.input_shape
        kh, kw = cfg.stage1_kernel
        self._add_conv("stage1.conv", (kh, kw, cin, cfg.stage1_filters))
        self._add_bn("stage1.bn", cfg.stage1_filters)
        h = _out(h, kh, cfg.stage1_stride[0])
        w = _out(w, kw, cfg.stage1_stride[1])
        trace = [("input", cfg.input_shape), ("stage1.conv", (h, w, cfg.stage1_filters))]
        h = _out(h, cfg.maxpool_window[0], cfg.maxpool_stride[0])
        w = _out(w, cfg.maxpool_window[1], cfg.maxpool_stride[1])
        trace.append(("stage1.maxpool", (h, w, cfg.stage1_filters)))

        channels = cfg.stage1_filters
        channels = self._add_conv_block("stage2.conv_block", channels,
                                        cfg.stage2_conv_filters)
        self._add_identity_block("stage2.identity", channels,
                                 cfg.stage2_identity_filters)
        trace.append(("stage2", (h, w, channels)))
        channels = self._add_conv_block("stage3.conv_block", channels,
                                        cfg.stage3_conv_filters)
        self._add_identity_block("stage3.identity", channels,
                                 cfg.stage3_identity_filters)
        trace.append(("stage3", (h, w, channels)))

        h = _out(h, cfg.avgpool_window[0], cfg.avgpool_window[0])
        w = _out(w, cfg.avgpool_window[1], cfg.avgpool_window[1])
        flat = h * w * channels
        self._add_dense("out", flat, 1)
        trace += [("avgpool", (h, w, channels)), ("flatten", (flat,)), ("output", (1,))]

        self.shape_trace = trace
        self.flatten_width = flat
        if cfg == ResnetConfig():
            assert flat == 61952, f"derived flatten width {flat}"

    # --- parameter helpers -------------------------------------------------

    def _add_conv(self, name, shape):
        self.store.add_param(f"{name}.k", glorot_normal(shape, self._rng, self.dtype))

    def _add_bn(self, name, channels):
        state = BatchNormState(channels, momentum=self.cfg.bn_momentum,
                               dtype=self.dtype)
        self._bn_states[name] = state
        self.store.add_param(f"{name}.gamma", np.ones(channels, dtype=self.dtype))
        self.store.add_param(f"{name}.beta", np.zeros(channels, dtype=self.dtype))
        self.store.add_buffer(f"{name}.running_mean", state.running_mean)
        self.store.add_buffer(f"{name}.running_var", state.running_var)

    def _add_dense(self, name, fan_in, units):
        self.store.add_param(f"{name}.w", glorot_normal((fan_in, units), self._rng,
                                                        self.dtype))
        self.store.add_param(f"{name}.b", np.zeros(units, dtype=self.dtype))

    def _middle_kernel(self):
        return 3 if self.cfg.spatial_mix_middle else 1

    def _add_conv_block(self, name, cin, filters):
        f1, f2, f3 = filters
        mid = self._middle_kernel()
        self._add_conv(f"{name}.conv1", (1, 1, cin, f1))
        self._add_bn(f"{name}.bn1", f1)
        self._add_conv(f"{name}.conv2", (mid, mid, f1, f2))
        self._add_bn(f"{name}.bn2", f2)
        self._add_conv(f"{name}.conv3", (1, 1, f2, f3))
        self._add_bn(f"{name}.bn3", f3)
        self._add_conv(f"{name}.shortcut", (1, 1, cin, f3))
        self._add_bn(f"{name}.bn_sc", f3)
        return f3

    def _add_identity_block(self, name, cin, filters):
        f1, f2 = filters
        mid = self._middle_kernel()
        self._add_conv(f"{name}.conv1", (1, 1, cin, f1))
        self._add_bn(f"{name}.bn1", f1)
        self._add_conv(f"{name}.conv2", (mid, mid, f1, f2))
        self._add_bn(f"{name}.bn2", f2)

    # --- forward -----------------------------------------------------------

    def _bn(self, name, x, train, tape):
        p = self.store.params
        return ops.batchnorm(x, p[f"{name}.gamma"], p[f"{name}.beta"],
                             self._bn_states[name], train, tape)

    def _conv_bn(self, name, bn_name, x, train, tape, stride=(1, 1)):
        k = self.store.params[f"{name}.k"]
        if k.shape[0] == 3:  # optional 3x3 middle kernel keeps shape via padding
            x = ops.pad2d(x, 1, tape)
        return self._bn(bn_name, ops.conv2d(x, k, stride, tape), train, tape)

    def _conv_block(self, name, x, train, tape):
        h = ops.relu(self._conv_bn(f"{name}.conv1", f"{name}.bn1", x, train, tape), tape)
        h = ops.relu(self._conv_bn(f"{name}.conv2", f"{name}.bn2", h, train, tape), tape)
        h = self._conv_bn(f"{name}.conv3", f"{name}.bn3", h, train, tape)
        sc = self._conv_bn(f"{name}.shortcut", f"{name}.bn_sc", x, train, tape)
        return ops.relu(ops.add(h, sc, tape), tape)

    def _identity_block(self, name, x, train, tape):
        h = ops.relu(self._conv_bn(f"{name}.conv1", f"{name}.bn1", x, train, tape), tape)
        h = self._conv_bn(f"{name}.conv2", f"{name}.bn2", h, train, tape)
        return ops.relu(ops.add(h, x, tape), tape)

    def forward(self, x: Tensor, train: bool, tape=None, rng=None) -> Tensor:
        cfg = self.cfg
        h = ops.conv2d(x, self.store.params["stage1.conv.k"], cfg.stage1_stride, tape)
        h = ops.relu(self._bn("stage1.bn", h, train, tape), tape)
        h = ops.maxpool2d(h, cfg.maxpool_window, cfg.maxpool_stride, tape)
        h = self._conv_block("stage2.conv_block", h, train, tape)
        h = self._identity_block("stage2.identity", h, train, tape)
        h = self._conv_block("stage3.conv_block", h, train, tape)
        h = self._identity_block("stage3.identity", h, train, tape)
        h = ops.avgpool2d(h, cfg.avgpool_window, None, tape)
        h = ops.flatten(h, tape)
        return ops.dense(h, self.store.params["out.w"], self.store.params["out.b"], tape)
