"""SMILES token stream -> validated molecular graph.

Branches resolve via a stack, ring-closure labels match pairwise, implicit
hydrogens fill organic-subset atoms to their standard valence, and lowercase
atoms are flagged aromatic. Aromatic bonds count as order 1 toward the sigma
framework when filling hydrogens and checking valence, with one extra unit
for the aromatic system itself during filling; this keeps pyrrole- and
furan-type atoms valid without Kekulization.
"""

import re
from dataclasses import dataclass, field
from enum import Enum

from ..elements import DEFAULT_VALENCES, atomic_number
from ..errors import (
    AromaticAtomNotInRing,
    DanglingBond,
    DuplicateBond,
    EmptyMolecule,
    UnbalancedBranch,
    UnknownCharacter,
    UnknownElement,
    UnmatchedRingClosure,
    ValenceViolation,
)
from .rings import sssr
from .tokenize import Token, TokenKind


class BondOrder(float, Enum):
    SINGLE = 1.0
    DOUBLE = 2.0
    TRIPLE = 3.0
    AROMATIC = 1.5


class Hybridization(Enum):
    SP = "SP"
    SP2 = "SP2"
    SP3 = "SP3"
    OTHER = "Other"


@dataclass
class Atom:
    element: str
    atomic_number: int
    aromatic: bool = False
    formal_charge: int = 0
    implicit_h: int = 0
    hybridization: Hybridization = Hybridization.OTHER
    partial_charge: float = 0.0
    # Share of partial_charge contributed by the folded-in implicit hydrogens;
    # partial_charge - h_charge is the heavy atom's own PEOE charge.
    h_charge: float = 0.0
    isotope: int | None = None
    from_bracket: bool = False


@dataclass
class Bond:
    a: int
    b: int
    order: BondOrder

    def other(self, idx: int) -> int:
        return self.b if idx == self.a else self.a


@dataclass
class MolGraph:
    atoms: list[Atom] = field(default_factory=list)
    bonds: list[Bond] = field(default_factory=list)
    rings: list[list[int]] = field(default_factory=list)
    source: str = ""

    def neighbors(self, idx: int) -> list[tuple[int, "Bond"]]:
        out = []
        for bond in self.bonds:
            if bond.a == idx or bond.b == idx:
                out.append((bond.other(idx), bond))
        return out

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in self.atoms]
        for bond in self.bonds:
            adj[bond.a].append(bond.b)
            adj[bond.b].append(bond.a)
        return adj

    def fragments(self) -> list[list[int]]:
        """Connected components as sorted atom-index lists, in discovery order."""
        adj = self.adjacency()
        seen = [False] * len(self.atoms)
        out = []
        for start in range(len(self.atoms)):
            if seen[start]:
                continue
            stack, comp = [start], []
            seen[start] = True
            while stack:
                u = stack.pop()
                comp.append(u)
                for v in adj[u]:
                    if not seen[v]:
                        seen[v] = True
                        stack.append(v)
            out.append(sorted(comp))
        return out

    def ring_bond_keys(self) -> set[tuple[int, int]]:
        keys = set()
        for ring in self.rings:
            for i, u in enumerate(ring):
                v = ring[(i + 1) % len(ring)]
                keys.add((min(u, v), max(u, v)))
        return keys


_BRACKET_RE = re.compile(
    r"^\[(?P<isotope>\d+)?(?P<element>[A-Z][a-z]?|[bcnops])(?P<stereo>@{1,2})?"
    r"(?P<hcount>H\d*)?(?P<charge>\+\++|--+|[+-]\d*)?(?P<cls>:\d+)?\]$"
)

_BOND_FROM_CHAR = {
    "-": BondOrder.SINGLE,
    "/": BondOrder.SINGLE,
    "\\": BondOrder.SINGLE,
    "=": BondOrder.DOUBLE,
    "#": BondOrder.TRIPLE,
    ":": BondOrder.AROMATIC,
}


def _parse_bracket(text: str, position: int) -> Atom:
    m = _BRACKET_RE.match(text)
    if m is None:
        raise UnknownCharacter(text, position)
    symbol = m.group("element")
    aromatic = symbol[0].islower()
    canonical = symbol.capitalize() if aromatic else symbol
    try:
        number = atomic_number(canonical)
    except UnknownElement:
        raise UnknownElement(canonical, position) from None
    hcount = 0
    if m.group("hcount"):
        digits = m.group("hcount")[1:]
        hcount = int(digits) if digits else 1
    charge = 0
    raw = m.group("charge")
    if raw:
        if raw in ("+", "-"):
            charge = 1 if raw == "+" else -1
        elif set(raw) <= {"+"}:
            charge = len(raw)
        elif set(raw) <= {"-"}:
            charge = -len(raw)
        else:
            charge = int(raw)
    isotope = int(m.group("isotope")) if m.group("isotope") else None
    return Atom(
        element=canonical,
        atomic_number=number,
        aromatic=aromatic,
        formal_charge=charge,
        implicit_h=hcount,
        isotope=isotope,
        from_bracket=True,
    )


def _resolve_order(pending: BondOrder | None, stored: BondOrder | None,
                   a: Atom, b: Atom, position: int) -> BondOrder:
    if pending is not None and stored is not None and pending != stored:
        raise UnmatchedRingClosure("bond order conflict", position)
    if pending is not None:
        return pending
    if stored is not None:
        return stored
    if a.aromatic and b.aromatic:
        return BondOrder.AROMATIC
    return BondOrder.SINGLE


def parse_to_graph(tokens: list[Token]) -> MolGraph:
    """Assemble the molecular graph and perceive rings, hydrogens, valence."""
    if not tokens:
        raise EmptyMolecule("no tokens")
    g = MolGraph(source="".join(t.text for t in tokens))
    bond_keys: set[tuple[int, int]] = set()
    prev: int | None = None
    pending: BondOrder | None = None
    pending_pos = 0
    branch_stack: list[int] = []
    open_rings: dict[str, tuple[int, BondOrder | None, int]] = {}

    def add_bond(a_idx: int, b_idx: int, order: BondOrder, position: int):
        if a_idx == b_idx:
            raise UnmatchedRingClosure("closure to the same atom", position)
        key = (min(a_idx, b_idx), max(a_idx, b_idx))
        if key in bond_keys:
            raise DuplicateBond(a_idx, b_idx)
        bond_keys.add(key)
        g.bonds.append(Bond(a_idx, b_idx, order))

    for tok in tokens:
        if tok.kind in (TokenKind.ATOM_ORGANIC, TokenKind.ATOM_BRACKET):
            if tok.kind == TokenKind.ATOM_ORGANIC:
                aromatic = tok.text.islower()
                canonical = tok.text.capitalize() if aromatic else tok.text
                atom = Atom(element=canonical, atomic_number=atomic_number(canonical),
                            aromatic=aromatic)
            else:
                atom = _parse_bracket(tok.text, tok.position)
            g.atoms.append(atom)
            idx = len(g.atoms) - 1
            if prev is not None:
                order = _resolve_order(pending, None, g.atoms[prev], atom, tok.position)
                add_bond(prev, idx, order, tok.position)
            pending = None
            prev = idx
        elif tok.kind == TokenKind.BOND:
            if prev is None:
                raise DanglingBond(tok.position)
            pending = _BOND_FROM_CHAR[tok.text]
            pending_pos = tok.position
        elif tok.kind == TokenKind.RING_CLOSURE:
            if prev is None:
                raise UnmatchedRingClosure(tok.text, tok.position)
            label = tok.text
            if label in open_rings:
                other, stored, _ = open_rings.pop(label)
                order = _resolve_order(pending, stored, g.atoms[other], g.atoms[prev],
                                       tok.position)
                add_bond(other, prev, order, tok.position)
            else:
                open_rings[label] = (prev, pending, tok.position)
            pending = None
        elif tok.kind == TokenKind.BRANCH_OPEN:
            if prev is None or pending is not None:
                raise UnbalancedBranch(tok.position)
            branch_stack.append(prev)
        elif tok.kind == TokenKind.BRANCH_CLOSE:
            if not branch_stack:
                raise UnbalancedBranch(tok.position)
            prev = branch_stack.pop()
        elif tok.kind == TokenKind.DOT:
            if pending is not None or branch_stack:
                raise UnbalancedBranch(tok.position)
            prev = None

    if branch_stack:
        raise UnbalancedBranch(len(g.source))
    if open_rings:
        label, (_, _, position) = next(iter(open_rings.items()))
        raise UnmatchedRingClosure(label, position)
    if pending is not None:
        raise DanglingBond(pending_pos)
    if not g.atoms:
        raise EmptyMolecule(g.source)

    g.rings = sssr(len(g.atoms), [(b.a, b.b) for b in g.bonds])
    _fill_implicit_hydrogens(g)
    _validate(g)
    return g


def _sigma_sum(g: MolGraph, idx: int) -> float:
    total = 0.0
    for _, bond in g.neighbors(idx):
        total += 1.0 if bond.order is BondOrder.AROMATIC else float(bond.order.value)
    return total


def _fill_implicit_hydrogens(g: MolGraph):
    for idx, atom in enumerate(g.atoms):
        if atom.from_bracket:
            continue  # bracket atoms carry an explicit H count (default 0)
        valences = DEFAULT_VALENCES.get(atom.element)
        if valences is None:
            continue
        bond_sum = int(round(_sigma_sum(g, idx))) + (1 if atom.aromatic else 0)
        target = next((v for v in valences if v >= bond_sum), None)
        atom.implicit_h = (target - bond_sum) if target is not None else 0


def _allowed_valence(atom: Atom) -> float | None:
    valences = DEFAULT_VALENCES.get(atom.element)
    if valences is None:
        return None
    base = max(valences)
    if atom.element in ("N", "P", "O", "S"):
        return base + atom.formal_charge
    return base - abs(atom.formal_charge)


def _validate(g: MolGraph):
    ring_members = set()
    for ring in g.rings:
        ring_members.update(ring)
    for idx, atom in enumerate(g.atoms):
        if atom.aromatic and idx not in ring_members:
            raise AromaticAtomNotInRing(idx)
        allowed = _allowed_valence(atom)
        if allowed is None:
            continue
        used = _sigma_sum(g, idx) + atom.implicit_h
        if used > allowed + 1e-9:
            raise ValenceViolation(idx, f"{used:g} exceeds {allowed:g} for {atom.element}")
