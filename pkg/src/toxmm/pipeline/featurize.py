"""Per-modality featurization with a train-only fitting surface.

The vocabulary and the descriptor standardizer are fitted on training
records exclusively; images and sequences are stateless encodings. Image
arrays are built on demand (batched) because the full image set dwarfs the
other modalities in memory.
"""

import numpy as np

from ..depict import image_from_graph
from ..desc import DESCRIPTOR_NAMES, Standardizer, compute_descriptors, fit_standardizer
from ..seq import MAX_LEN, ONE_HOT_WIDTH, Vocab, build_vocab, encode_one_hot

SEQ_FEATURIZER_VERSION = "seq-1"
IMAGE_FEATURIZER_VERSION = "img-1"
DESC_FEATURIZER_VERSION = f"desc-1/{len(DESCRIPTOR_NAMES)}"


def fit_vocab(train_records) -> Vocab:
    return build_vocab([r.smiles for r in train_records])


def descriptor_matrix(records) -> np.ndarray:
    return np.stack([compute_descriptors(r.graph).values for r in records])


def fit_descriptor_standardizer(train_matrix: np.ndarray) -> Standardizer:
    return fit_standardizer(train_matrix, DESCRIPTOR_NAMES)


def descriptor_features(matrix: np.ndarray, standardizer: Standardizer) -> np.ndarray:
    return standardizer.transform(matrix).astype(np.float32)


def sequence_features(records, vocab: Vocab) -> np.ndarray:
    out = np.zeros((len(records), MAX_LEN, ONE_HOT_WIDTH), dtype=np.float32)
    for i, r in enumerate(records):
        out[i] = encode_one_hot(r.smiles, vocab).matrix
    return out


def image_features(records) -> np.ndarray:
    return np.stack([image_from_graph(r.graph).grid for r in records])


def predict_images(model, records, batch: int = 64) -> np.ndarray:
    """Eval-mode predictions with images rasterized batch by batch."""
    from ..models import predict

    outs = []
    for start in range(0, len(records), batch):
        chunk = records[start:start + batch]
        outs.append(predict(model, image_features(chunk), batch=batch))
    return np.concatenate(outs, axis=0)


def targets(records) -> np.ndarray:
    # float64 so metrics see the exact loaded values; the training loop
    # casts to the model dtype itself
    return np.array([r.igc50 for r in records], dtype=np.float64)[:, None]
