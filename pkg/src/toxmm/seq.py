"""Fixed-size one-hot sequence encoding of SMILES strings.

Strings pad to 52 rows of 50 one-hot columns; padding rows are all-zero so
no vocabulary slot is burned on a pad symbol. The vocabulary is built from
training data only and unknown characters fail loudly.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptyInput, TooLong, UnknownChar, VocabOverflow

MAX_LEN = 52
ONE_HOT_WIDTH = 50


@dataclass(frozen=True)
class Vocab:
    char_to_index: dict[str, int]

    @property
    def size(self) -> int:
        return len(self.char_to_index)

    def index_to_char(self) -> dict[int, str]:
        return {i: c for c, i in self.char_to_index.items()}

    def save(self, path):
        lines = [f"{c}\t{i}" for c, i in sorted(self.char_to_index.items(),
                                                key=lambda kv: kv[1])]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path):
        mapping = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if not line:
                continue
            char, idx = line.split("\t")
            mapping[char] = int(idx)
        return cls(mapping)


@dataclass
class SeqTensor:
    matrix: np.ndarray  # (MAX_LEN, ONE_HOT_WIDTH)
    true_length: int


def build_vocab(corpus: list[str]) -> Vocab:
    """Assign indices by first occurrence, scanning the corpus in order."""
    if not corpus:
        raise EmptyInput("empty corpus")
    mapping: dict[str, int] = {}
    for s in corpus:
        for c in s:
            if c not in mapping:
                mapping[c] = len(mapping)
    if len(mapping) > ONE_HOT_WIDTH:
        raise VocabOverflow(len(mapping), ONE_HOT_WIDTH)
    return Vocab(mapping)


def encode_one_hot(s: str, vocab: Vocab, dtype=np.float32) -> SeqTensor:
    if not s:
        raise EmptyInput("cannot encode an empty string")
    if len(s) > MAX_LEN:
        raise TooLong(len(s), MAX_LEN)
    matrix = np.zeros((MAX_LEN, ONE_HOT_WIDTH), dtype=dtype)
    for i, c in enumerate(s):
        idx = vocab.char_to_index.get(c)
        if idx is None:
            raise UnknownChar(c, i)
        matrix[i, idx] = 1.0
    return SeqTensor(matrix=matrix, true_length=len(s))


def decode(t: SeqTensor, vocab: Vocab) -> str:
    rev = vocab.index_to_char()
    chars = []
    for row in t.matrix[: t.true_length]:
        chars.append(rev[int(np.argmax(row))])
    return "".join(chars)


def encode_corpus(strings: list[str], vocab: Vocab, dtype=np.float32) -> np.ndarray:
    """Stack encodings into an (N, MAX_LEN, ONE_HOT_WIDTH) array."""
    out = np.zeros((len(strings), MAX_LEN, ONE_HOT_WIDTH), dtype=dtype)
    for n, s in enumerate(strings):
        out[n] = encode_one_hot(s, vocab, dtype=dtype).matrix
    return out
