"""Deterministic surrogate benchmark generator.

Molecules assemble from small-organic scaffolds (chains, carbocycles,
benzenoids, five-membered heteroaromatics, naphthalene) decorated with
common substituents. The target mimics acute aquatic toxicity in
-log10(molar) units: a fragment hydrophobicity sum drives it up, polar
groups pull it down, electrophilic groups add a bonus, and Gaussian noise
caps the achievable fit well below 1. Everything derives from one Philox
seed, so the file regenerates bit-identically.
"""

import math
from pathlib import Path

import numpy as np

from ..chem import parse_smiles
from ..chem.parse import BondOrder

N_COMPOUNDS = 1792
DEFAULT_SEED = 1792
MAX_LEN = 52
NOISE_SD = 0.32

_SUBSTITUENTS = (
    ("O", 6), ("N", 4), ("Cl", 5), ("Br", 3), ("F", 3), ("I", 1),
    ("C", 8), ("CC", 5), ("CCC", 3), ("C(C)C", 3), ("OC", 4), ("C#N", 2),
    ("C(=O)O", 3), ("C(=O)C", 2), ("C=O", 2), ("[N+](=O)[O-]", 2),
    ("N(C)C", 2), ("SC", 1), ("C(F)(F)F", 1),
)

_RING_SCAFFOLDS = (
    ("benzene", 8), ("pyridine", 3), ("furan", 2), ("thiophene", 2),
    ("cyclohexane", 4), ("cyclopentane", 2), ("naphthalene", 2),
    ("phenol", 3), ("aniline", 2),
)


def _weighted_choice(rng, table):
    items = [t[0] for t in table]
    weights = np.array([t[1] for t in table], dtype=np.float64)
    return items[int(rng.choice(len(items), p=weights / weights.sum()))]


def _chain(rng, min_len=2, max_len=9) -> str:
    length = int(rng.integers(min_len, max_len + 1))
    out = []
    for i in range(length):
        out.append("C")
        if i and i < length - 1 and rng.random() < 0.18:
            out.append("(C)")
    return "".join(out)


def _decorate_positions(rng, n_slots, max_subs):
    count = int(rng.integers(0, max_subs + 1))
    if count == 0:
        return {}
    slots = rng.choice(n_slots, size=min(count, n_slots), replace=False)
    return {int(s): _weighted_choice(rng, _SUBSTITUENTS) for s in slots}


def _six_ring(rng, atoms: list[str], max_subs=3) -> str:
    subs = _decorate_positions(rng, len(atoms), max_subs)
    parts = []
    for i, atom in enumerate(atoms):
        ring_digit = "1" if i in (0, len(atoms) - 1) else ""
        branch = f"({subs[i]})" if i in subs and atom not in ("n", "o", "s") else ""
        parts.append(atom + ring_digit + branch)
    return "".join(parts)


def _scaffold(rng) -> str:
    kind = _weighted_choice(rng, _RING_SCAFFOLDS)
    if kind == "benzene":
        return _six_ring(rng, ["c"] * 6)
    if kind == "pyridine":
        atoms = ["c"] * 6
        atoms[int(rng.integers(1, 5))] = "n"
        return _six_ring(rng, atoms)
    if kind == "furan":
        return _six_ring(rng, ["c", "c", "o", "c", "c"], max_subs=2)
    if kind == "thiophene":
        return _six_ring(rng, ["c", "c", "s", "c", "c"], max_subs=2)
    if kind == "cyclohexane":
        return _six_ring(rng, ["C"] * 6)
    if kind == "cyclopentane":
        return _six_ring(rng, ["C"] * 5, max_subs=2)
    if kind == "naphthalene":
        sub = _weighted_choice(rng, _SUBSTITUENTS)
        if rng.random() < 0.5:
            return f"c1ccc2cc({sub})ccc2c1"
        return "c1ccc2ccccc2c1"
    if kind == "phenol":
        return _six_ring(rng, ["c"] * 6, max_subs=2) .replace("c1c", "c1(O)c", 1)
    if kind == "aniline":
        return _six_ring(rng, ["c"] * 6, max_subs=2).replace("c1c", "c1(N)c", 1)
    raise AssertionError(kind)


def _compose(rng) -> str:
    roll = rng.random()
    if roll < 0.38:                      # plain decorated chain
        core = _chain(rng)
        subs = _decorate_positions(rng, 1, 1)
        smiles = core + (subs.get(0, "") if subs else "")
    elif roll < 0.55:                    # chain linked to a ring scaffold
        smiles = _chain(rng, 1, 5) + _scaffold(rng)
    else:                                # ring scaffold, maybe with a tail
        smiles = _scaffold(rng)
        if rng.random() < 0.35:
            smiles += _chain(rng, 1, 4)
    if rng.random() < 0.02:              # occasional carboxylate/ammonium salt
        smiles = smiles + "C(=O)[O-].[NH4+]" if "1" not in smiles \
            else "CC(=O)[O-].[NH4+]"
    return smiles


# fragment hydrophobicity-style contributions driving the target
_HALOGEN_LOGP = {"F": 0.20, "Cl": 0.72, "Br": 0.92, "I": 1.15}


def _target_signal(graph) -> float:
    aliph_c = arom_c = ether_o = oh = carbonyl_o = 0
    amine_n = nitro = nitrile = sulfur = 0
    halogen_term = 0.0
    for idx, atom in enumerate(graph.atoms):
        orders = [b.order for _, b in graph.neighbors(idx)]
        if atom.element == "C":
            if atom.aromatic:
                arom_c += 1
            else:
                aliph_c += 1
            if any(b is BondOrder.TRIPLE for b in orders):
                nitrile += 0  # counted at the nitrogen
        elif atom.element == "O":
            if any(b is BondOrder.DOUBLE for b in orders):
                carbonyl_o += 1
            elif atom.implicit_h >= 1:
                oh += 1
            else:
                ether_o += 1
        elif atom.element == "N":
            if atom.formal_charge == 1:
                nitro += 1
            elif any(b is BondOrder.TRIPLE for b in orders):
                nitrile += 1
            elif atom.implicit_h >= 1 or not atom.aromatic:
                amine_n += 1
        elif atom.element == "S":
            sulfur += 1
        elif atom.element in _HALOGEN_LOGP:
            bonus = 1.25 if any(graph.atoms[j].aromatic
                                for j, _ in graph.neighbors(idx)) else 1.0
            halogen_term += _HALOGEN_LOGP[atom.element] * bonus

    logp = (0.36 * aliph_c + 0.30 * arom_c + 0.42 * sulfur + halogen_term
            - 1.05 * oh - 1.10 * amine_n - 0.62 * ether_o - 0.44 * carbonyl_o
            - 0.55 * nitrile - 0.30 * nitro)
    mw_proxy = 12.0 * (aliph_c + arom_c) + 16.0 * (oh + ether_o + carbonyl_o)
    size_term = 0.55 * math.tanh((mw_proxy - 110.0) / 90.0)
    electrophile = 0.45 * nitro + 0.25 * carbonyl_o * (arom_c > 0)
    charge_penalty = 0.6 * abs(sum(a.formal_charge for a in graph.atoms))
    return 0.62 * logp + size_term + electrophile - charge_penalty + 1.9


def generate_benchmark(n: int = N_COMPOUNDS, seed: int = DEFAULT_SEED):
    """Return n (smiles, igc50) rows; every SMILES parses cleanly."""
    rng = np.random.Generator(np.random.Philox(seed))
    rows = []
    seen = set()
    while len(rows) < n:
        smiles = _compose(rng)
        if not 2 <= len(smiles) <= MAX_LEN or smiles in seen:
            continue
        try:
            graph = parse_smiles(smiles)
        except Exception:
            continue
        seen.add(smiles)
        value = _target_signal(graph) + rng.normal(0.0, NOISE_SD)
        rows.append((smiles, round(float(value), 4)))
    return rows


def write_benchmark_csv(path, n: int = N_COMPOUNDS, seed: int = DEFAULT_SEED):
    rows = generate_benchmark(n, seed)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("smiles,igc50\n")
        for smiles, value in rows:
            fh.write(f"{smiles},{value}\n")
    return Path(path)
