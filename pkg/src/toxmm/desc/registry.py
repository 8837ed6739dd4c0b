"""Topological 2D descriptor registry.

A fixed, ordered set of graph descriptors computed straight off the
molecular graph: counts, topological indices (Wiener, Zagreb, Randic),
distance statistics, and charge summaries. Values that a descriptor cannot
define on a degenerate graph (Randic on a lone atom, radius of a single
fragment member) are 0 rather than NaN so downstream matrices stay finite.
"""

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from ..chem.parse import BondOrder, Hybridization, MolGraph
from ..elements import ATOMIC_MASSES

HALOGENS = ("F", "Cl", "Br", "I")


@dataclass
class DescriptorVector:
    values: np.ndarray
    names: tuple


def _distance_matrix(g: MolGraph) -> np.ndarray:
    """All-pairs BFS hop counts; unreachable pairs stay at -1."""
    n = len(g.atoms)
    adj = g.adjacency()
    dist = np.full((n, n), -1, dtype=np.int64)
    for start in range(n):
        dist[start, start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if dist[start, v] < 0:
                    dist[start, v] = dist[start, u] + 1
                    queue.append(v)
    return dist


def _degrees(g: MolGraph) -> list[int]:
    deg = [0] * len(g.atoms)
    for b in g.bonds:
        deg[b.a] += 1
        deg[b.b] += 1
    return deg


def _wiener(dist: np.ndarray) -> float:
    reachable = dist > 0
    return float(dist[reachable].sum()) / 2.0


def _eccentricities(dist: np.ndarray) -> list[int]:
    out = []
    for row in dist:
        finite = row[row >= 0]
        out.append(int(finite.max()) if finite.size else 0)
    return out


def _is_rotatable(g: MolGraph, bond, deg, ring_bonds) -> bool:
    if bond.order is not BondOrder.SINGLE:
        return False
    if (min(bond.a, bond.b), max(bond.a, bond.b)) in ring_bonds:
        return False
    return deg[bond.a] >= 2 and deg[bond.b] >= 2


def _aromatic_ring_count(g: MolGraph) -> int:
    return sum(1 for ring in g.rings
               if all(g.atoms[a].aromatic for a in ring))


def compute_descriptors(g: MolGraph) -> DescriptorVector:
    atoms, bonds = g.atoms, g.bonds
    n = len(atoms)
    deg = _degrees(g)
    dist = _distance_matrix(g)
    ring_bonds = g.ring_bond_keys()
    ring_atoms = {a for ring in g.rings for a in ring}

    def count_el(sym):
        return sum(1 for a in atoms if a.element == sym)

    n_halogen = sum(count_el(h) for h in HALOGENS)
    order_counts = {o: 0 for o in BondOrder}
    for b in bonds:
        order_counts[b.order] += 1
    aromatic_atoms = sum(1 for a in atoms if a.aromatic)

    mw = sum(ATOMIC_MASSES.get(a.element, 0.0) + a.implicit_h * ATOMIC_MASSES["H"]
             for a in atoms)
    total_h = sum(a.implicit_h for a in atoms)

    hbd = sum(1 for a in atoms if a.element in ("N", "O") and a.implicit_h >= 1)
    hba = sum(1 for a in atoms if a.element in ("N", "O"))

    zagreb1 = float(sum(d * d for d in deg))
    zagreb2 = float(sum(deg[b.a] * deg[b.b] for b in bonds))
    randic = float(sum(1.0 / math.sqrt(deg[b.a] * deg[b.b])
                       for b in bonds if deg[b.a] and deg[b.b]))

    ecc = _eccentricities(dist)
    diameter = float(max(ecc)) if ecc else 0.0
    radius = float(min(ecc)) if ecc else 0.0

    abs_q = [abs(a.partial_charge) for a in atoms]
    carbons = [a for a in atoms if a.element == "C"]
    sp3_c = sum(1 for a in carbons if a.hybridization is Hybridization.SP3)

    values = {
        "heavy_atoms": float(n),
        "n_C": float(count_el("C")),
        "n_N": float(count_el("N")),
        "n_O": float(count_el("O")),
        "n_S": float(count_el("S")),
        "n_P": float(count_el("P")),
        "n_F": float(count_el("F")),
        "n_Cl": float(count_el("Cl")),
        "n_Br": float(count_el("Br")),
        "n_I": float(count_el("I")),
        "n_halogen": float(n_halogen),
        "n_heteroatoms": float(sum(1 for a in atoms if a.element not in ("C", "H"))),
        "n_bonds": float(len(bonds)),
        "n_bond_single": float(order_counts[BondOrder.SINGLE]),
        "n_bond_double": float(order_counts[BondOrder.DOUBLE]),
        "n_bond_triple": float(order_counts[BondOrder.TRIPLE]),
        "n_bond_aromatic": float(order_counts[BondOrder.AROMATIC]),
        "n_aromatic_atoms": float(aromatic_atoms),
        "frac_aromatic_atoms": aromatic_atoms / n if n else 0.0,
        "n_rings": float(len(g.rings)),
        "n_aromatic_rings": float(_aromatic_ring_count(g)),
        "max_ring_size": float(max((len(r) for r in g.rings), default=0)),
        "n_ring_atoms": float(len(ring_atoms)),
        "n_rotatable": float(sum(1 for b in bonds
                                 if _is_rotatable(g, b, deg, ring_bonds))),
        "n_hbd": float(hbd),
        "n_hba": float(hba),
        "mol_weight": mw,
        "total_implicit_h": float(total_h),
        "total_formal_charge": float(sum(a.formal_charge for a in atoms)),
        "n_fragments": float(len(g.fragments())),
        "wiener_index": _wiener(dist),
        "zagreb_m1": zagreb1,
        "zagreb_m2": zagreb2,
        "randic": randic,
        "graph_radius": radius,
        "graph_diameter": diameter,
        "mean_degree": float(np.mean(deg)) if deg else 0.0,
        "frac_C": count_el("C") / n if n else 0.0,
        "frac_N": count_el("N") / n if n else 0.0,
        "frac_O": count_el("O") / n if n else 0.0,
        "frac_S": count_el("S") / n if n else 0.0,
        "frac_P": count_el("P") / n if n else 0.0,
        "frac_halogen": n_halogen / n if n else 0.0,
        "mean_abs_charge": float(np.mean(abs_q)) if abs_q else 0.0,
        "max_abs_charge": float(np.max(abs_q)) if abs_q else 0.0,
        "frac_sp3_carbon": sp3_c / len(carbons) if carbons else 0.0,
    }
    names = DESCRIPTOR_NAMES
    return DescriptorVector(
        values=np.array([values[k] for k in names], dtype=np.float64),
        names=names,
    )


DESCRIPTOR_NAMES = (
    "heavy_atoms", "n_C", "n_N", "n_O", "n_S", "n_P", "n_F", "n_Cl", "n_Br",
    "n_I", "n_halogen", "n_heteroatoms", "n_bonds", "n_bond_single",
    "n_bond_double", "n_bond_triple", "n_bond_aromatic", "n_aromatic_atoms",
    "frac_aromatic_atoms", "n_rings", "n_aromatic_rings", "max_ring_size",
    "n_ring_atoms", "n_rotatable", "n_hbd", "n_hba", "mol_weight",
    "total_implicit_h", "total_formal_charge", "n_fragments", "wiener_index",
    "zagreb_m1", "zagreb_m2", "randic", "graph_radius", "graph_diameter",
    "mean_degree", "frac_C", "frac_N", "frac_O", "frac_S", "frac_P",
    "frac_halogen", "mean_abs_charge", "max_abs_charge", "frac_sp3_carbon",
)


def descriptor_matrix(graphs: list[MolGraph]) -> np.ndarray:
    return np.stack([compute_descriptors(g).values for g in graphs])


def write_descriptor_csv(path, graphs_or_matrix, names=DESCRIPTOR_NAMES):
    """CSV export with the registry names as the header row."""
    if isinstance(graphs_or_matrix, np.ndarray):
        matrix = graphs_or_matrix
    else:
        matrix = descriptor_matrix(graphs_or_matrix)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(names) + "\n")
        for row in matrix:
            fh.write(",".join(f"{v:.10g}" for v in row) + "\n")
