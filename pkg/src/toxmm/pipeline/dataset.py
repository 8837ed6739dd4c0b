"""Benchmark ingestion, train/test splitting, and fold assignment.

Rows that fail to parse (bad target or SMILES the chem module rejects) are
itemized with their line numbers and error codes, never dropped silently.
"""

import csv
import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..chem import parse_smiles
from ..chem.parse import MolGraph
from ..errors import FileMissing, HeaderMismatch, KTooLarge, ToxmmError, TooFewRecords

EXPECTED_HEADER = ["smiles", "igc50"]
DATA_ENV_VAR = "TOXMM_DATA"


@dataclass
class Record:
    smiles: str
    igc50: float
    graph: MolGraph


@dataclass
class RejectedRow:
    line: int
    smiles: str
    code: str
    detail: str


def default_dataset_path() -> Path:
    env = os.environ.get(DATA_ENV_VAR)
    if env:
        return Path(env)
    return Path(__file__).resolve().parent.parent / "data" / "igc50_synthetic.csv"


def load_dataset(path) -> tuple[list[Record], list[RejectedRow]]:
    path = Path(path)
    if not path.exists():
        raise FileMissing(path)
    records: list[Record] = []
    rejects: list[RejectedRow] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != EXPECTED_HEADER:
            raise HeaderMismatch(header, EXPECTED_HEADER)
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            smiles = row[0].strip()
            try:
                target = float(row[1])
                if not math.isfinite(target):
                    raise ValueError(f"non-finite target {row[1]}")
            except (ValueError, IndexError) as exc:
                rejects.append(RejectedRow(line_no, smiles, "BadTarget", str(exc)))
                continue
            try:
                graph = parse_smiles(smiles)
            except ToxmmError as exc:
                rejects.append(RejectedRow(line_no, smiles, exc.code, str(exc)))
                continue
            records.append(Record(smiles=smiles, igc50=target, graph=graph))
    return records, rejects


def split(records: list, test_fraction: float = 0.30,
          seed: int = 0) -> tuple[list, list]:
    """Seeded shuffle then cut; the test side takes the ceil of its share."""
    if len(records) < 10:
        raise TooFewRecords(len(records), 10)
    rng = np.random.Generator(np.random.Philox(seed))
    order = rng.permutation(len(records))
    n_test = int(math.ceil(test_fraction * len(records)))
    test_idx = set(order[:n_test].tolist())
    train = [records[i] for i in range(len(records)) if i not in test_idx]
    test = [records[i] for i in range(len(records)) if i in test_idx]
    return train, test


def kfold(n: int, k: int = 5, seed: int = 0) -> list[np.ndarray]:
    """Disjoint index folds covering range(n), sizes differing by at most 1."""
    if k > n:
        raise KTooLarge(k, n)
    rng = np.random.Generator(np.random.Philox(seed))
    order = rng.permutation(n)
    base = n // k
    extra = n % k
    folds = []
    start = 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        folds.append(np.sort(order[start:start + size]))
        start += size
    return folds
