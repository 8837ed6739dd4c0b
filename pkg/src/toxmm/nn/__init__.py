"""Minimal tensor engine: reverse-mode autodiff, layer kernels, Adam."""

from .tensor import Tensor, Tape, backward
from .init import glorot_normal, make_rng
from .optim import ParamStore, adam_step
from . import ops

__all__ = [
    "Tensor", "Tape", "backward",
    "glorot_normal", "make_rng",
    "ParamStore", "adam_step",
    "ops",
]
