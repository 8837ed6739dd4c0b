"""SMILES tokenizer, parser, and chemistry perception."""

from .tokenize import Token, TokenKind, tokenize
from .parse import Atom, Bond, MolGraph, parse_to_graph
from .perceive import assign_hybridization
from .charges import compute_partial_charges, peoe_charges

__all__ = [
    "Token", "TokenKind", "tokenize",
    "Atom", "Bond", "MolGraph", "parse_to_graph",
    "assign_hybridization", "compute_partial_charges", "peoe_charges",
    "parse_smiles",
]


def parse_smiles(smiles: str) -> MolGraph:
    """Full perception pipeline: tokens -> graph -> hybridization -> charges."""
    g = parse_to_graph(tokenize(smiles))
    assign_hybridization(g)
    compute_partial_charges(g)
    return g
