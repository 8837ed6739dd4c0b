"""Hyperparameter random search scored by k-fold cross-validation.

A search space declares discrete axes (``name = a | b | c``) and uniform
intervals (``name = lo .. hi``, floats). Each trial samples one value per
axis, builds a model config, and scores it; ties on the score go to the
earliest trial.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import EmptySpace


def _parse_scalar(text: str):
    text = text.strip()
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    if text == "None":
        return None
    return text


@dataclass
class SearchSpace:
    axes: dict  # name -> list of choices, or ("interval", lo, hi)

    @classmethod
    def parse(cls, text: str) -> "SearchSpace":
        axes = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            name, _, spec = line.partition("=")
            name, spec = name.strip(), spec.strip()
            if ".." in spec:
                lo, _, hi = spec.partition("..")
                axes[name] = ("interval", float(lo), float(hi))
            else:
                axes[name] = [_parse_scalar(p) for p in spec.split("|")]
        if not axes:
            raise EmptySpace("search space declares no axes")
        return cls(axes)

    @classmethod
    def load(cls, path) -> "SearchSpace":
        return cls.parse(Path(path).read_text(encoding="utf-8"))

    def sample(self, rng: np.random.Generator) -> dict:
        out = {}
        for name, axis in self.axes.items():
            if isinstance(axis, tuple) and axis[0] == "interval":
                out[name] = float(rng.uniform(axis[1], axis[2]))
            else:
                out[name] = axis[int(rng.integers(len(axis)))]
        return out


@dataclass
class Trial:
    index: int
    params: dict
    score: float


def random_search(space: SearchSpace, budget: int, score_fn,
                  seed: int = 0) -> tuple[Trial, list[Trial]]:
    """Sample ``budget`` configurations, score each, return (best, log)."""
    if not space.axes:
        raise EmptySpace("empty search space")
    rng = np.random.Generator(np.random.Philox(seed))
    trials: list[Trial] = []
    best: Trial | None = None
    for index in range(budget):
        params = space.sample(rng)
        score = float(score_fn(params))
        trial = Trial(index=index, params=params, score=score)
        trials.append(trial)
        if best is None or trial.score > best.score:
            best = trial
    return best, trials


def write_trials_csv(path, trials: list[Trial]):
    names = sorted({k for t in trials for k in t.params})
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("trial," + ",".join(names) + ",cv_r2\n")
        for t in trials:
            row = [str(t.index)] + [str(t.params.get(n, "")) for n in names]
            fh.write(",".join(row) + f",{t.score:.10g}\n")
