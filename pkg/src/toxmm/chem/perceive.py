"""Hybridization assignment from bond orders."""

from .parse import BondOrder, Hybridization, MolGraph

# Elements that default to SP3 when no multiple bond forces SP/SP2.
_SP3_FAMILY = {"C", "N", "O", "P", "S", "B"}


def assign_hybridization(g: MolGraph) -> MolGraph:
    """SP for a triple bond or two doubles, SP2 for one double or aromatic,
    SP3 for the remaining tetravalent-family atoms, Other otherwise."""
    for idx, atom in enumerate(g.atoms):
        doubles = triples = 0
        for _, bond in g.neighbors(idx):
            if bond.order is BondOrder.DOUBLE:
                doubles += 1
            elif bond.order is BondOrder.TRIPLE:
                triples += 1
        if triples >= 1 or doubles >= 2:
            atom.hybridization = Hybridization.SP
        elif doubles == 1 or atom.aromatic:
            atom.hybridization = Hybridization.SP2
        elif atom.element in _SP3_FAMILY:
            atom.hybridization = Hybridization.SP3
        else:
            atom.hybridization = Hybridization.OTHER
    return g
