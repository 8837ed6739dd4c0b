"""Iterative partial-equalization (PEOE) partial charges.

Implicit hydrogens join the iteration as explicit participants; afterwards
each heavy atom's reported ``partial_charge`` folds its hydrogens back in so
the per-graph total matches the net formal charge. The atom's own share and
the hydrogen share stay separable through ``h_charge``.

Scheme: chi(Q) = a + b*Q + c*Q^2 per participant; at iteration k (1-based)
each bond moves (chi_hi - chi_lo) / chi_plus(lo) * 0.5**k of charge toward
the more electronegative end, where chi_plus is the cation electronegativity
of the donor (a + b + c, hydrogen fixed at its published special value).
Six iterations, charges seeded from formal charges.
"""

from ..elements import PEOE_H_CATION_CHI, peoe_coefficients
from ..errors import UnparameterizedElement
from .parse import MolGraph

ITERATIONS = 6
DAMPING = 0.5


def peoe_charges(g: MolGraph) -> tuple[list[float], list[list[float]]]:
    """Run PEOE over the hydrogen-expanded graph.

    Returns (own charge per heavy atom, attached-hydrogen charges per heavy
    atom). Raises UnparameterizedElement when the table lacks an element.
    """
    symbols: list[str] = []
    params: list[tuple[float, float, float]] = []
    seeds: list[float] = []
    edges: list[tuple[int, int]] = []

    for atom in g.atoms:
        coeffs = peoe_coefficients(atom.element, atom.hybridization.value)
        if coeffs is None:
            raise UnparameterizedElement(atom.element)
        symbols.append(atom.element)
        params.append(coeffs)
        seeds.append(float(atom.formal_charge))

    h_params = peoe_coefficients("H", "Other")
    h_slots: list[list[int]] = [[] for _ in g.atoms]
    for idx, atom in enumerate(g.atoms):
        for _ in range(atom.implicit_h):
            symbols.append("H")
            params.append(h_params)
            seeds.append(0.0)
            h_slots[idx].append(len(symbols) - 1)
            edges.append((idx, len(symbols) - 1))
    for bond in g.bonds:
        edges.append((bond.a, bond.b))

    chi_plus = [
        PEOE_H_CATION_CHI if sym == "H" else sum(p)
        for sym, p in zip(symbols, params)
    ]

    q = list(seeds)
    for k in range(1, ITERATIONS + 1):
        damp = DAMPING ** k
        chi = [a + b * qi + c * qi * qi for (a, b, c), qi in zip(params, q)]
        dq = [0.0] * len(q)
        for i, j in edges:
            if chi[j] > chi[i]:
                t = (chi[j] - chi[i]) / chi_plus[i] * damp
            else:
                t = -(chi[i] - chi[j]) / chi_plus[j] * damp
            dq[i] += t
            dq[j] -= t
        for i in range(len(q)):
            q[i] += dq[i]

    own = q[: len(g.atoms)]
    h_per_atom = [[q[slot] for slot in h_slots[idx]] for idx in range(len(g.atoms))]
    return own, h_per_atom


def compute_partial_charges(g: MolGraph) -> MolGraph:
    """Set each atom's folded partial charge (own + attached implicit H)."""
    own, h_per_atom = peoe_charges(g)
    for atom, qi, hs in zip(g.atoms, own, h_per_atom):
        atom.h_charge = sum(hs)
        atom.partial_charge = qi + atom.h_charge
    return g
