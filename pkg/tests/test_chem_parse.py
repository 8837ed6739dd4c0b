import pytest

from toxmm.chem import parse_smiles, parse_to_graph, tokenize
from toxmm.chem.parse import BondOrder, Hybridization
from toxmm.errors import (
    DanglingBond,
    DuplicateBond,
    UnbalancedBranch,
    UnmatchedRingClosure,
    ValenceViolation,
)

QUINONE = "CC1=CC(=O)C2=C(C=CC=C2O)C1=O"


def parse(s):
    return parse_to_graph(tokenize(s))


def test_quinone_graph():
    g = parse(QUINONE)
    elements = sorted(a.element for a in g.atoms)
    assert len(g.atoms) == 14
    assert elements.count("C") == 11
    assert elements.count("O") == 3
    assert len(g.bonds) == 15
    assert len(g.rings) == 2


def test_methane():
    g = parse("C")
    assert len(g.atoms) == 1
    assert g.atoms[0].implicit_h == 4
    assert len(g.bonds) == 0


def test_unbalanced_branch():
    with pytest.raises(UnbalancedBranch):
        parse("C(C")
    with pytest.raises(UnbalancedBranch):
        parse("CC)C")


def test_unmatched_ring():
    with pytest.raises(UnmatchedRingClosure):
        parse("C1CC")


def test_dangling_bond():
    with pytest.raises(DanglingBond):
        parse("CC=")


def test_duplicate_bond():
    with pytest.raises(DuplicateBond):
        parse("C1C1")


def test_valence_violation():
    with pytest.raises(ValenceViolation):
        parse("C(C)(C)(C)(C)C")


def test_branch_stack_resolution():
    g = parse("CC(C)(O)C")
    # central atom (index 1) bonds to indices 0, 2, 3, 4
    partners = sorted(b.other(1) for b in g.bonds if 1 in (b.a, b.b))
    assert partners == [0, 2, 3, 4]


def test_ring_closure_pairing():
    g = parse("C1CCCCC1")
    assert len(g.bonds) == 6
    assert len(g.rings) == 1
    assert sorted(g.rings[0]) == [0, 1, 2, 3, 4, 5]


def test_dot_fragments():
    g = parse("CC(=O)[O-].[NH4+]")
    frags = g.fragments()
    assert len(frags) == 2
    assert {len(f) for f in frags} == {1, 4}
    # no bond crosses the fragments
    ammonium = frags[1] if len(frags[1]) == 1 else frags[0]
    for b in g.bonds:
        assert not ({b.a, b.b} & set(ammonium))


def test_aromatic_ring_hydrogens():
    g = parse("c1ccccc1")
    assert all(a.aromatic for a in g.atoms)
    assert all(a.implicit_h == 1 for a in g.atoms)
    assert all(b.order is BondOrder.AROMATIC for b in g.bonds)
    # pyridine nitrogen carries no hydrogen
    g = parse("c1ccncc1")
    n = next(a for a in g.atoms if a.element == "N")
    assert n.implicit_h == 0


def test_pyrrole_and_furan_valence():
    g = parse("c1cc[nH]c1")
    n = next(a for a in g.atoms if a.element == "N")
    assert n.implicit_h == 1
    g = parse("c1ccoc1")
    o = next(a for a in g.atoms if a.element == "O")
    assert o.implicit_h == 0


def test_bracket_fields():
    g = parse("[13CH3-]")
    a = g.atoms[0]
    assert a.isotope == 13
    assert a.implicit_h == 3
    assert a.formal_charge == -1
    g = parse("C[N+](C)(C)C")
    n = next(a for a in g.atoms if a.element == "N")
    assert n.formal_charge == 1
    assert n.implicit_h == 0


def test_nitro_group():
    g = parse("CC[N+](=O)[O-]")
    assert len(g.atoms) == 5
    charges = sorted(a.formal_charge for a in g.atoms)
    assert charges == [-1, 0, 0, 0, 1]


def test_explicit_ring_bond_order():
    g = parse("C=1CCCCC=1")
    ring_bond = next(b for b in g.bonds if {b.a, b.b} == {0, 5})
    assert ring_bond.order is BondOrder.DOUBLE
    with pytest.raises(UnmatchedRingClosure):
        parse("C=1CCCCC#1")


def test_stereo_markers_ignored():
    g = parse("F/C=C/F")
    assert len(g.atoms) == 4
    orders = sorted(b.order.value for b in g.bonds)
    assert orders == [1.0, 1.0, 2.0]


def test_hybridization_rules():
    g = parse_smiles("C=C")
    assert all(a.hybridization is Hybridization.SP2 for a in g.atoms)
    g = parse_smiles("C#N")
    assert g.atoms[0].hybridization is Hybridization.SP
    g = parse_smiles("CC")
    assert all(a.hybridization is Hybridization.SP3 for a in g.atoms)
    g = parse_smiles("O=C=O")
    assert g.atoms[1].hybridization is Hybridization.SP
    g = parse_smiles("CCl")
    assert g.atoms[1].hybridization is Hybridization.OTHER


def signature(g):
    """Canonical multiset of (element, degree, bond-order multiset)."""
    sig = []
    for idx, atom in enumerate(g.atoms):
        orders = sorted(b.order.value for _, b in g.neighbors(idx))
        sig.append((atom.element, len(orders), tuple(orders)))
    return sorted(sig)


@pytest.mark.parametrize("left,right", [
    ("C(C)(O)N", "C(O)(C)N"),
    ("CC(=O)O", "OC(=O)C"),
    ("c1ccccc1O", "Oc1ccccc1"),
    ("CC(Cl)Br", "CC(Br)Cl"),
])
def test_branch_permutation_isomorphic(left, right):
    assert signature(parse(left)) == signature(parse(right))
