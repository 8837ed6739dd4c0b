"""Model and training configurations with their structural invariants."""

from dataclasses import dataclass, field, fields

from ..errors import ConfigInvalid


@dataclass(frozen=True)
class FcnnConfig:
    """Two hidden layers of 100 units (sigmoid then relu), dropout 0.1 after
    the first hidden layer only, 400 epochs at minibatch 1024, no early stop."""
    hidden: tuple = (100, 100)
    activations: tuple = ("sigmoid", "relu")
    dropout_after_layer1: float = 0.1
    epochs: int = 400
    minibatch: int = 1024
    lr: float = 1e-3
    patience: int | None = None

    def __post_init__(self):
        if len(self.hidden) != 2 or len(self.activations) != 2:
            raise ConfigInvalid("fcnn takes exactly two hidden layers")
        if not 0.0 <= self.dropout_after_layer1 < 1.0:
            raise ConfigInvalid(f"bad dropout {self.dropout_after_layer1}")


@dataclass(frozen=True)
class ResnetConfig:
    """Three-stage residual network over 100x100x4 images.

    Stage 1: 64 7x7 filters at stride 2, batchnorm, 3x3/2 maxpool. Stages 2
    and 3 pair a projection conv-block with an identity block, all 1x1
    kernels at stride 1 (filter triples below). Average pool 2x2, flatten,
    one output unit. ``spatial_mix_middle`` swaps each block's middle kernel
    to a zero-padded 3x3 for experiments.
    """
    stage1_filters: int = 64
    stage1_kernel: tuple = (7, 7)
    stage1_stride: tuple = (2, 2)
    maxpool_window: tuple = (3, 3)
    maxpool_stride: tuple = (2, 2)
    stage2_conv_filters: tuple = (64, 256, 256)
    stage2_identity_filters: tuple = (64, 256)
    stage3_conv_filters: tuple = (128, 512, 512)
    stage3_identity_filters: tuple = (128, 512)
    avgpool_window: tuple = (2, 2)
    spatial_mix_middle: bool = False
    bn_momentum: float = 0.99
    input_shape: tuple = (100, 100, 4)
    epochs: int = 150
    minibatch: int = 128
    lr: float = 1e-3
    patience: int | None = 20

    def __post_init__(self):
        for triple in (self.stage2_conv_filters, self.stage3_conv_filters):
            if len(triple) != 3:
                raise ConfigInvalid(f"conv-block filters must be a triple, got {triple}")
        for pair, triple in ((self.stage2_identity_filters, self.stage2_conv_filters),
                             (self.stage3_identity_filters, self.stage3_conv_filters)):
            if len(pair) != 2:
                raise ConfigInvalid(f"identity-block filters must be a pair, got {pair}")
            if pair[-1] != triple[-1]:
                raise ConfigInvalid(
                    "identity block must preserve the stage's channel count")


@dataclass(frozen=True)
class ConvRnnConfig:
    """Sequence model: 50-dim embedding then three 1D convolutions of 92
    filters (widths 10, 5, 3) with relu, flattened into one linear unit."""
    seq_len: int = 52
    one_hot: int = 50
    embed_dim: int = 50
    conv_filters: int = 92
    conv_widths: tuple = (10, 5, 3)
    epochs: int = 150
    minibatch: int = 128
    lr: float = 1e-3
    patience: int | None = 20

    def __post_init__(self):
        if len(self.conv_widths) != 3:
            raise ConfigInvalid("sequence model uses exactly three conv layers")
        if sum(w - 1 for w in self.conv_widths) >= self.seq_len:
            raise ConfigInvalid("conv widths consume the whole sequence")


@dataclass(frozen=True)
class MnnConfig:
    """Meta network: 3 component predictions -> 10 sigmoid units -> 1."""
    n_inputs: int = 3
    hidden_units: int = 10
    activation: str = "sigmoid"
    dropout: float = 0.4
    epochs: int = 400
    minibatch: int = 512
    lr: float = 1e-3
    patience: int | None = 20

    def __post_init__(self):
        if self.hidden_units < 1:
            raise ConfigInvalid("meta network needs a hidden layer")
        if not 0.0 <= self.dropout < 1.0:
            raise ConfigInvalid(f"bad dropout {self.dropout}")


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 100
    minibatch: int = 128
    lr: float = 1e-3
    patience: int | None = None   # None disables early stopping
    val_fraction: float = 0.1
    seed: int = 0
    # forward/backward chunk size within one optimizer step; bounds peak
    # activation memory for the image model without changing the update
    accum_chunk: int | None = None

    def __post_init__(self):
        if self.patience is not None and not 0.0 < self.val_fraction < 1.0:
            raise ConfigInvalid("early stopping needs a validation fraction in (0,1)")
        if self.accum_chunk is not None and self.accum_chunk < 2:
            raise ConfigInvalid("accumulation chunks need at least 2 rows")


def train_config_for(cfg, seed: int = 0) -> TrainConfig:
    """Lift a model config's optimization fields into a TrainConfig."""
    return TrainConfig(epochs=cfg.epochs, minibatch=cfg.minibatch, lr=cfg.lr,
                       patience=cfg.patience, seed=seed)


def config_to_dict(cfg) -> dict:
    out = {}
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if isinstance(value, tuple):
            out[f.name] = ",".join(str(v) for v in value)
        else:
            out[f.name] = str(value)
    return out


def config_from_dict(cls, data: dict):
    kwargs = {}
    for f in fields(cls):
        if f.name not in data:
            continue
        raw = data[f.name]
        default = f.default
        if isinstance(default, tuple) or (raw and "," in raw and
                                          not isinstance(default, str)):
            parts = raw.split(",") if raw else []
            conv = []
            for p in parts:
                try:
                    conv.append(int(p))
                except ValueError:
                    conv.append(p)
            kwargs[f.name] = tuple(conv)
        elif raw == "None":
            kwargs[f.name] = None
        elif isinstance(default, bool):
            kwargs[f.name] = raw == "True"
        elif isinstance(default, int) and not isinstance(default, bool):
            kwargs[f.name] = int(raw)
        elif isinstance(default, float):
            kwargs[f.name] = float(raw)
        elif default is None:
            kwargs[f.name] = int(raw)
        else:
            kwargs[f.name] = raw
    return cls(**kwargs)
