"""Dataset handling, splits, metrics, search, and the experiment driver."""

from .dataset import Record, RejectedRow, kfold, load_dataset, split
from .metrics import pearson_r2
from .search import SearchSpace, random_search

__all__ = [
    "Record", "RejectedRow", "load_dataset", "split", "kfold",
    "pearson_r2", "SearchSpace", "random_search",
]
