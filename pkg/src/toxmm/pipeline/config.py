"""Flat key=value run configuration files.

Keys are section-prefixed (``run.seed``, ``fcnn.epochs``, ``cnn.patience``,
``rnn.minibatch``, ``mnn.dropout``); unknown keys are errors so typos
cannot silently fall back to defaults.
"""

from dataclasses import fields
from pathlib import Path

from ..errors import ConfigInvalid
from ..models.configs import (
    ConvRnnConfig,
    FcnnConfig,
    MnnConfig,
    ResnetConfig,
    config_from_dict,
)
from .experiment import RunConfig

_SECTION_CLASSES = {"fcnn": FcnnConfig, "cnn": ResnetConfig,
                    "rnn": ConvRnnConfig, "mnn": MnnConfig}

_RUN_FIELDS = {f.name for f in fields(RunConfig)} - set(_SECTION_CLASSES)


def parse_config(text: str, **overrides) -> RunConfig:
    sections: dict[str, dict] = {name: {} for name in _SECTION_CLASSES}
    run_kwargs: dict = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigInvalid(f"malformed line {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        section, _, name = key.partition(".")
        if section == "run" and name in _RUN_FIELDS:
            run_kwargs[name] = value
        elif section in sections:
            if name not in {f.name for f in fields(_SECTION_CLASSES[section])}:
                raise ConfigInvalid(f"unknown key {key!r}")
            sections[section][name] = value
        else:
            raise ConfigInvalid(f"unknown key {key!r}")

    kwargs = {}
    for name, value in run_kwargs.items():
        kwargs[name] = _convert_run_field(name, value)
    for section, cls in _SECTION_CLASSES.items():
        if sections[section]:
            base = config_from_dict(cls, {**_defaults_of(cls), **sections[section]})
            kwargs[section] = base
    kwargs.update(overrides)
    return RunConfig(**kwargs)


def _defaults_of(cls) -> dict:
    out = {}
    for f in fields(cls):
        value = getattr(cls(), f.name)
        out[f.name] = ",".join(str(v) for v in value) if isinstance(value, tuple) \
            else str(value)
    return out


def _convert_run_field(name: str, value: str):
    if name in ("seed", "folds", "cnn_subsample"):
        return int(value)
    if name == "test_fraction":
        return float(value)
    if name in ("cv_pooled", "figures"):
        return value in ("True", "true", "1", "yes")
    if name in ("models", "ensembles"):
        return tuple(v.strip() for v in value.split(",") if v.strip())
    if name in ("dataset", "out_dir"):
        return Path(value)
    raise ConfigInvalid(f"unknown run key {name!r}")


def load_config(path, **overrides) -> RunConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"), **overrides)
