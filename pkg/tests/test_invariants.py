"""Cross-module invariants checked over samples of the bundled benchmark."""

import os

import numpy as np

from toxmm.chem import parse_smiles
from toxmm.data import packaged_benchmark_path
from toxmm.pipeline.dataset import DATA_ENV_VAR, default_dataset_path


def benchmark_smiles(step=1):
    lines = packaged_benchmark_path().read_text().splitlines()[1:]
    return [line.split(",")[0] for line in lines][::step]


def test_charge_neutrality_across_benchmark():
    # |sum of partial charges| <= 1e-6 for every formal-charge-free molecule
    for s in benchmark_smiles(step=11):
        g = parse_smiles(s)
        net_formal = sum(a.formal_charge for a in g.atoms)
        total = sum(a.partial_charge for a in g.atoms)
        assert abs(total - net_formal) < 1e-6, s


def test_valence_invariant_across_benchmark():
    from toxmm.chem.parse import BondOrder
    from toxmm.elements import DEFAULT_VALENCES

    for s in benchmark_smiles(step=13):
        g = parse_smiles(s)
        for idx, atom in enumerate(g.atoms):
            if atom.element not in DEFAULT_VALENCES:
                continue
            sigma = sum(1.0 if b.order is BondOrder.AROMATIC else b.order.value
                        for _, b in g.neighbors(idx))
            cap = max(DEFAULT_VALENCES[atom.element]) + abs(atom.formal_charge)
            assert sigma + atom.implicit_h <= cap + 1e-9, (s, idx)


def test_aromatic_atoms_sit_in_rings():
    for s in benchmark_smiles(step=17):
        g = parse_smiles(s)
        ring_members = {a for ring in g.rings for a in ring}
        for idx, atom in enumerate(g.atoms):
            if atom.aromatic:
                assert idx in ring_members, (s, idx)


def test_env_var_overrides_default_dataset(tmp_path):
    custom = tmp_path / "mine.csv"
    custom.write_text("smiles,igc50\nCC,1.0\n", encoding="utf-8")
    old = os.environ.get(DATA_ENV_VAR)
    os.environ[DATA_ENV_VAR] = str(custom)
    try:
        assert default_dataset_path() == custom
    finally:
        if old is None:
            del os.environ[DATA_ENV_VAR]
        else:
            os.environ[DATA_ENV_VAR] = old
    assert default_dataset_path() == packaged_benchmark_path()


def test_tokenizer_lossless_across_benchmark():
    from toxmm.chem import tokenize

    for s in benchmark_smiles(step=7):
        assert "".join(t.text for t in tokenize(s)) == s


def test_image_determinism_sample():
    from toxmm.depict import image_from_graph

    for s in benchmark_smiles(step=301):
        a = image_from_graph(parse_smiles(s))
        b = image_from_graph(parse_smiles(s))
        assert np.array_equal(a.grid, b.grid), s
