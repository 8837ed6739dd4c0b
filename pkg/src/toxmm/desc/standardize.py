"""Z-score standardization fitted on training rows only.

Constant features are dropped (and remembered) so every retained feature
has positive standard deviation; inverse_transform restores the original
width using the recorded means for dropped columns.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import EmptyTrainingSet


@dataclass
class Standardizer:
    names: tuple
    mean: np.ndarray
    std: np.ndarray
    kept: np.ndarray  # boolean mask over the original feature order

    @property
    def dropped_names(self) -> tuple:
        return tuple(n for n, k in zip(self.names, self.kept) if not k)

    @property
    def kept_names(self) -> tuple:
        return tuple(n for n, k in zip(self.names, self.kept) if k)

    def transform(self, rows: np.ndarray) -> np.ndarray:
        rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
        return (rows[:, self.kept] - self.mean[self.kept]) / self.std[self.kept]

    def inverse_transform(self, rows: np.ndarray) -> np.ndarray:
        rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
        out = np.tile(self.mean, (rows.shape[0], 1))
        out[:, self.kept] = rows * self.std[self.kept] + self.mean[self.kept]
        return out

    def save(self, path):
        lines = ["name,mean,std"]
        for i, name in enumerate(self.names):
            std = self.std[i] if self.kept[i] else 0.0
            lines.append(f"{name},{self.mean[i]:.17g},{std:.17g}")
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path):
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        names, means, stds = [], [], []
        for line in lines[1:]:
            if not line:
                continue
            name, mean, std = line.split(",")
            names.append(name)
            means.append(float(mean))
            stds.append(float(std))
        std = np.array(stds)
        return cls(names=tuple(names), mean=np.array(means), std=std,
                   kept=std > 0.0)


def fit_standardizer(rows: np.ndarray, names: tuple) -> Standardizer:
    """Population-moment fit; call with training rows exclusively."""
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[0] == 0:
        raise EmptyTrainingSet("standardizer needs a non-empty 2D training matrix")
    mean = rows.mean(axis=0)
    std = rows.std(axis=0)
    kept = std > 1e-12
    safe_std = np.where(kept, std, 1.0)
    return Standardizer(names=tuple(names), mean=mean, std=safe_std, kept=kept)
