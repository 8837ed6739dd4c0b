"""Seeded initialization.

All randomness flows from Philox counter-based generators so runs reproduce
bit-for-bit across processes given the same seed.
"""

import numpy as np


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def spawn_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """Independent deterministic substreams for init/shuffle/dropout."""
    seqs = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.Philox(s)) for s in seqs]


def _fans(shape) -> tuple[int, int]:
    if len(shape) == 2:          # dense: (fan_in, fan_out)
        return shape[0], shape[1]
    if len(shape) == 3:          # conv1d kernel: (k, cin, cout)
        k, cin, cout = shape
        return k * cin, k * cout
    if len(shape) == 4:          # conv2d kernel: (kh, kw, cin, cout)
        kh, kw, cin, cout = shape
        return kh * kw * cin, kh * kw * cout
    raise ValueError(f"no fan convention for shape {shape}")


def glorot_normal(shape, rng: np.random.Generator, dtype=np.float32) -> np.ndarray:
    fan_in, fan_out = _fans(tuple(shape))
    std = np.sqrt(2.0 / (fan_in + fan_out))
    return rng.normal(0.0, std, size=shape).astype(dtype)
