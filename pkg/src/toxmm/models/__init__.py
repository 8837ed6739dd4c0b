"""The four networks, their training loop, and the ensemble combiners."""

from .configs import ConvRnnConfig, FcnnConfig, MnnConfig, ResnetConfig, TrainConfig
from .fcnn import Fcnn
from .resnet import Resnet
from .convrnn import ConvRnn
from .mnn import Mnn
from .training import History, predict, train_model
from .ensemble import ensemble_average, train_mnn
from .persist import load_model, save_model

__all__ = [
    "FcnnConfig", "ResnetConfig", "ConvRnnConfig", "MnnConfig", "TrainConfig",
    "Fcnn", "Resnet", "ConvRnn", "Mnn",
    "History", "train_model", "predict",
    "ensemble_average", "train_mnn",
    "save_model", "load_model",
]
