"""Ensemble averaging and the trained meta-network combiner."""

import numpy as np

from ..errors import InsufficientMetaData, LengthMismatch
from .configs import MnnConfig, TrainConfig
from .mnn import Mnn
from .training import History, train_model

MIN_META_ROWS = 10


def ensemble_average(p_fcnn: np.ndarray, p_cnn: np.ndarray,
                     p_rnn: np.ndarray) -> np.ndarray:
    """Elementwise arithmetic mean of the three component predictions.

    Computed in float64 so the persisted mean is exactly reproducible from
    the persisted component prediction files."""
    vectors = [np.asarray(p, dtype=np.float64).reshape(-1)
               for p in (p_fcnn, p_cnn, p_rnn)]
    lengths = [len(v) for v in vectors]
    if len(set(lengths)) != 1:
        raise LengthMismatch(lengths)
    return (vectors[0] + vectors[1] + vectors[2]) / 3.0


def train_mnn(component_preds: np.ndarray, targets: np.ndarray,
              cfg: MnnConfig = MnnConfig(), seed: int = 0) -> tuple[Mnn, History]:
    """Fit the meta network on out-of-fold component predictions."""
    component_preds = np.asarray(component_preds, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64).reshape(-1, 1)
    if component_preds.ndim != 2 or component_preds.shape[1] != cfg.n_inputs:
        raise LengthMismatch(component_preds.shape)
    if component_preds.shape[0] != targets.shape[0]:
        raise LengthMismatch((component_preds.shape[0], targets.shape[0]))
    if component_preds.shape[0] < MIN_META_ROWS:
        raise InsufficientMetaData(component_preds.shape[0], MIN_META_ROWS)
    model = Mnn(cfg, seed=seed)
    tcfg = TrainConfig(epochs=cfg.epochs, minibatch=cfg.minibatch, lr=cfg.lr,
                       patience=cfg.patience, seed=seed)
    history = train_model(model, component_preds, targets, tcfg)
    return model, history
