"""Squared Pearson correlation, the benchmark's reported metric."""

import numpy as np

from ..errors import DegenerateInput


def pearson_r2(pred, target) -> float:
    pred = np.asarray(pred, dtype=np.float64).reshape(-1)
    target = np.asarray(target, dtype=np.float64).reshape(-1)
    if pred.shape != target.shape:
        raise DegenerateInput(f"length mismatch {pred.shape} vs {target.shape}")
    if pred.size < 2:
        raise DegenerateInput("need at least two points")
    pd = pred - pred.mean()
    td = target - target.mean()
    sp = float(np.sqrt((pd * pd).sum()))
    st = float(np.sqrt((td * td).sum()))
    if sp == 0.0 or st == 0.0:
        raise DegenerateInput("constant input vector")
    r = float((pd * td).sum()) / (sp * st)
    return r * r
