"""Model persistence on top of the TOXMM1 container."""

from ..errors import VersionMismatch
from ..nn.serialize import load_payload, save_payload
from .configs import (
    ConvRnnConfig,
    FcnnConfig,
    MnnConfig,
    ResnetConfig,
    config_from_dict,
    config_to_dict,
)
from .convrnn import ConvRnn
from .fcnn import Fcnn
from .mnn import Mnn
from .resnet import Resnet

_CONFIG_CLASSES = {"fcnn": FcnnConfig, "resnet": ResnetConfig,
                   "convrnn": ConvRnnConfig, "mnn": MnnConfig}


def save_model(path, model):
    config = config_to_dict(model.cfg)
    if model.kind == "fcnn":
        config["n_features"] = str(model.n_features)
    params = {name: t.data for name, t in model.store.params.items()}
    save_payload(path, model.kind, config, params, model.store.buffers)


def load_model(path, expect_kind: str | None = None):
    kind, config, params, buffers = load_payload(path)
    if kind not in _CONFIG_CLASSES:
        raise VersionMismatch(f"unknown model kind {kind!r}")
    if expect_kind is not None and kind != expect_kind:
        raise VersionMismatch(f"file holds a {kind!r} model, expected {expect_kind!r}")
    n_features = int(config.pop("n_features", 0))
    cfg = config_from_dict(_CONFIG_CLASSES[kind], config)
    if kind == "fcnn":
        model = Fcnn(n_features, cfg)
    elif kind == "resnet":
        model = Resnet(cfg)
    elif kind == "convrnn":
        model = ConvRnn(cfg)
    else:
        model = Mnn(cfg)
    for name, array in params.items():
        tensor = model.store.params[name]
        tensor.data[...] = array.astype(tensor.data.dtype)
    for name, array in buffers.items():
        model.store.buffers[name][...] = array.astype(model.store.buffers[name].dtype)
    return model
