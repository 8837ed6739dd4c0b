"""Differentiable kernels: dense, conv, pooling, batchnorm, dropout, losses.

Convolutions use cross-correlation semantics with valid (no) padding;
pooling defaults its stride to the window. Every op takes an optional tape;
with ``tape=None`` the op is a plain forward computation.
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..errors import DegenerateBatch, InvalidRate, ShapeMismatch
from .tensor import Tape, Tensor


def _out_extent(size: int, window: int, stride: int) -> int:
    return (size - window) // stride + 1


def add(x: Tensor, y: Tensor, tape: Tape | None = None) -> Tensor:
    if x.shape != y.shape:
        raise ShapeMismatch(f"add {x.shape} vs {y.shape}")
    out = Tensor(x.data + y.data)
    if tape is not None:
        tape.record(out, (x, y), lambda g: (g, g))
    return out


def dense(x: Tensor, w: Tensor, b: Tensor, tape: Tape | None = None) -> Tensor:
    if x.data.ndim != 2 or w.data.ndim != 2 or x.shape[1] != w.shape[0]:
        raise ShapeMismatch(f"dense x{x.shape} w{w.shape}")
    if b.shape != (w.shape[1],):
        raise ShapeMismatch(f"dense bias {b.shape} for {w.shape[1]} units")
    out = Tensor(x.data @ w.data + b.data)

    def pullback(g):
        return (g @ w.data.T, x.data.T @ g, g.sum(axis=0))

    if tape is not None:
        tape.record(out, (x, w, b), pullback)
    return out


def embedding(x: Tensor, e: Tensor, tape: Tape | None = None) -> Tensor:
    """Linear map over the last axis (no bias): [N, L, V] x [V, D]."""
    if x.shape[-1] != e.shape[0]:
        raise ShapeMismatch(f"embedding x{x.shape} e{e.shape}")
    out = Tensor(x.data @ e.data)

    def pullback(g):
        gx = g @ e.data.T
        ge = x.data.reshape(-1, e.shape[0]).T @ g.reshape(-1, e.shape[1])
        return (gx, ge)

    if tape is not None:
        tape.record(out, (x, e), pullback)
    return out


def conv2d(x: Tensor, k: Tensor, stride=(1, 1), tape: Tape | None = None) -> Tensor:
    if x.data.ndim != 4 or k.data.ndim != 4 or x.shape[3] != k.shape[2]:
        raise ShapeMismatch(f"conv2d x{x.shape} k{k.shape}")
    n, h, w, cin = x.shape
    kh, kw, _, cout = k.shape
    sh, sw = stride
    if kh > h or kw > w:
        raise ShapeMismatch(f"kernel {kh}x{kw} larger than input {h}x{w}")
    ho, wo = _out_extent(h, kh, sh), _out_extent(w, kw, sw)

    if (kh, kw) == (1, 1) and (sh, sw) == (1, 1):
        # pointwise convolution is a plain matmul over flattened pixels
        xmat = x.data.reshape(n * h * w, cin)
        kmat = k.data.reshape(cin, cout)
        out = Tensor((xmat @ kmat).reshape(n, h, w, cout))

        def pullback(g):
            gmat = g.reshape(n * h * w, cout)
            gk = (xmat.T @ gmat).reshape(k.shape)
            gx = (gmat @ kmat.T).reshape(x.shape)
            return (gx, gk)

        if tape is not None:
            tape.record(out, (x, k), pullback)
        return out

    def im2col(data):
        windows = sliding_window_view(data, (kh, kw), axis=(1, 2))[:, ::sh, ::sw]
        # windows: (n, ho, wo, cin, kh, kw) -> columns (n*ho*wo, kh*kw*cin)
        return np.ascontiguousarray(windows.transpose(0, 1, 2, 4, 5, 3)) \
            .reshape(n * ho * wo, kh * kw * cin)

    kmat = k.data.reshape(kh * kw * cin, cout)
    out = Tensor((im2col(x.data) @ kmat).reshape(n, ho, wo, cout))

    def pullback(g):
        # the column matrix is rebuilt here rather than captured so the
        # forward pass does not pin O(n*ho*wo*kh*kw*cin) memory
        gmat = g.reshape(n * ho * wo, cout)
        gk = (im2col(x.data).T @ gmat).reshape(k.shape)
        gcols = (gmat @ kmat.T).reshape(n, ho, wo, kh, kw, cin)
        gx = np.zeros_like(x.data)
        for i in range(kh):
            for j in range(kw):
                gx[:, i:i + sh * ho:sh, j:j + sw * wo:sw, :] += gcols[:, :, :, i, j, :]
        return (gx, gk)

    if tape is not None:
        tape.record(out, (x, k), pullback)
    return out


def conv1d(x: Tensor, k: Tensor, tape: Tape | None = None) -> Tensor:
    if x.data.ndim != 3 or k.data.ndim != 3 or x.shape[2] != k.shape[1]:
        raise ShapeMismatch(f"conv1d x{x.shape} k{k.shape}")
    n, length, cin = x.shape
    width, _, cout = k.shape
    if width > length:
        raise ShapeMismatch(f"kernel {width} longer than sequence {length}")
    lo = length - width + 1

    windows = sliding_window_view(x.data, width, axis=1)
    # windows: (n, lo, cin, width) -> columns (n*lo, width*cin)
    cols = windows.transpose(0, 1, 3, 2).reshape(n * lo, width * cin)
    kmat = k.data.reshape(width * cin, cout)
    out = Tensor((cols @ kmat).reshape(n, lo, cout))

    def pullback(g):
        gmat = g.reshape(n * lo, cout)
        gk = (cols.T @ gmat).reshape(k.shape)
        gcols = (gmat @ kmat.T).reshape(n, lo, width, cin)
        gx = np.zeros_like(x.data)
        for i in range(width):
            gx[:, i:i + lo, :] += gcols[:, :, i, :]
        return (gx, gk)

    if tape is not None:
        tape.record(out, (x, k), pullback)
    return out


def _pool_windows(x: Tensor, window, stride):
    n, h, w, c = x.shape
    wh, ww = window
    sh, sw = stride
    if wh > h or ww > w:
        raise ShapeMismatch(f"pool window {window} larger than input {h}x{w}")
    ho, wo = _out_extent(h, wh, sh), _out_extent(w, ww, sw)
    windows = sliding_window_view(x.data, (wh, ww), axis=(1, 2))[:, ::sh, ::sw]
    return windows, (n, ho, wo, c), (wh, ww, sh, sw)


def maxpool2d(x: Tensor, window, stride=None, tape: Tape | None = None) -> Tensor:
    stride = stride or window
    windows, (n, ho, wo, c), (wh, ww, sh, sw) = _pool_windows(x, window, stride)
    flat = windows.reshape(n, ho, wo, c, wh * ww)
    arg = flat.argmax(axis=4)
    out = Tensor(np.take_along_axis(flat, arg[..., None], axis=4)[..., 0])

    def pullback(g):
        gx = np.zeros_like(x.data)
        for p in range(wh * ww):
            i, j = divmod(p, ww)
            mask = (arg == p)
            gx[:, i:i + sh * ho:sh, j:j + sw * wo:sw, :] += g * mask
        return (gx,)

    if tape is not None:
        tape.record(out, (x,), pullback)
    return out


def avgpool2d(x: Tensor, window, stride=None, tape: Tape | None = None) -> Tensor:
    stride = stride or window
    windows, (n, ho, wo, c), (wh, ww, sh, sw) = _pool_windows(x, window, stride)
    out = Tensor(windows.mean(axis=(4, 5)))

    def pullback(g):
        gx = np.zeros_like(x.data)
        share = g / (wh * ww)
        for i in range(wh):
            for j in range(ww):
                gx[:, i:i + sh * ho:sh, j:j + sw * wo:sw, :] += share
        return (gx,)

    if tape is not None:
        tape.record(out, (x,), pullback)
    return out


class BatchNormState:
    """Running statistics for one batchnorm layer (not trained by Adam)."""

    def __init__(self, channels: int, momentum: float = 0.99, eps: float = 1e-5,
                 dtype=np.float32):
        self.running_mean = np.zeros(channels, dtype=dtype)
        self.running_var = np.ones(channels, dtype=dtype)
        self.momentum = momentum
        self.eps = eps


def batchnorm(x: Tensor, gamma: Tensor, beta: Tensor, state: BatchNormState,
              train: bool, tape: Tape | None = None) -> Tensor:
    channels = x.shape[-1]
    if gamma.shape != (channels,) or beta.shape != (channels,):
        raise ShapeMismatch(f"batchnorm affine {gamma.shape} for {channels} channels")
    axes = tuple(range(x.data.ndim - 1))

    if train:
        if x.shape[0] < 2:
            raise DegenerateBatch(x.shape[0])
        mean = x.data.mean(axis=axes)
        var = x.data.var(axis=axes)
        # in place so serialized buffers keep aliasing these arrays
        state.running_mean *= state.momentum
        state.running_mean += ((1.0 - state.momentum) * mean).astype(state.running_mean.dtype)
        state.running_var *= state.momentum
        state.running_var += ((1.0 - state.momentum) * var).astype(state.running_var.dtype)
    else:
        mean = state.running_mean
        var = state.running_var

    inv_std = 1.0 / np.sqrt(var + state.eps)
    out = Tensor((x.data - mean) * (gamma.data * inv_std) + beta.data)

    count = x.data.size // channels

    def pullback(g):
        # xhat is recomputed from the captured per-channel statistics;
        # capturing it would double the live activation memory
        xhat = (x.data - mean) * inv_std
        gbeta = g.sum(axis=axes)
        ggamma = (g * xhat).sum(axis=axes)
        if train:
            gx = (gamma.data * inv_std) * (
                g - gbeta / count - xhat * (ggamma / count))
        else:
            gx = g * gamma.data * inv_std
        return (gx.astype(x.data.dtype, copy=False), ggamma, gbeta)

    if tape is not None:
        tape.record(out, (x, gamma, beta), pullback)
    return out


def relu(x: Tensor, tape: Tape | None = None) -> Tensor:
    out = Tensor(np.maximum(x.data, 0))
    if tape is not None:
        # out > 0 exactly where x > 0, so no mask needs to be stored
        tape.record(out, (x,), lambda g: (g * (out.data > 0),))
    return out


def sigmoid(x: Tensor, tape: Tape | None = None) -> Tensor:
    s = 1.0 / (1.0 + np.exp(-x.data))
    out = Tensor(s)
    if tape is not None:
        tape.record(out, (x,), lambda g: (g * s * (1.0 - s),))
    return out


def linear(x: Tensor, tape: Tape | None = None) -> Tensor:
    out = Tensor(x.data)
    if tape is not None:
        tape.record(out, (x,), lambda g: (g,))
    return out


ACTIVATIONS = {"relu": relu, "sigmoid": sigmoid, "linear": linear}


def activation(x: Tensor, kind: str, tape: Tape | None = None) -> Tensor:
    try:
        return ACTIVATIONS[kind](x, tape)
    except KeyError:
        raise ShapeMismatch(f"unknown activation {kind!r}") from None


def dropout(x: Tensor, rate: float, train: bool, rng=None,
            tape: Tape | None = None) -> Tensor:
    if not 0.0 <= rate < 1.0:
        raise InvalidRate(rate)
    if not train or rate == 0.0:
        return linear(x, tape)
    keep = 1.0 - rate
    mask = (rng.random(x.shape) >= rate).astype(x.data.dtype) / keep
    out = Tensor(x.data * mask)
    if tape is not None:
        tape.record(out, (x,), lambda g: (g * mask,))
    return out


def pad2d(x: Tensor, pad: int, tape: Tape | None = None) -> Tensor:
    """Zero-pad the two spatial axes of an NHWC tensor symmetrically."""
    if x.data.ndim != 4:
        raise ShapeMismatch(f"pad2d expects NHWC, got {x.shape}")
    widths = ((0, 0), (pad, pad), (pad, pad), (0, 0))
    out = Tensor(np.pad(x.data, widths))
    if tape is not None:
        tape.record(out, (x,),
                    lambda g: (g[:, pad:g.shape[1] - pad, pad:g.shape[2] - pad, :],))
    return out


def reshape(x: Tensor, shape, tape: Tape | None = None) -> Tensor:
    out = Tensor(x.data.reshape(shape))
    if tape is not None:
        tape.record(out, (x,), lambda g: (g.reshape(x.shape),))
    return out


def flatten(x: Tensor, tape: Tape | None = None) -> Tensor:
    return reshape(x, (x.shape[0], -1), tape)


def mse(pred: Tensor, target: Tensor, tape: Tape | None = None) -> Tensor:
    if pred.shape != target.shape:
        raise ShapeMismatch(f"mse {pred.shape} vs {target.shape}")
    diff = pred.data - target.data
    out = Tensor(np.array(np.mean(diff * diff), dtype=pred.data.dtype))

    def pullback(g):
        factor = 2.0 / diff.size
        return (g * factor * diff, -g * factor * diff)

    if tape is not None:
        tape.record(out, (pred, target), pullback)
    return out


def scale(x: Tensor, factor: float, tape: Tape | None = None) -> Tensor:
    """Multiply by a constant (loss weighting for gradient accumulation)."""
    out = Tensor(x.data * factor)
    if tape is not None:
        tape.record(out, (x,), lambda g: (g * factor,))
    return out
