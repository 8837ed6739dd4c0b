"""Lossless SMILES tokenizer for the organic-subset grammar.

Token texts concatenate back to the exact input string; positions are
0-based character offsets. Stereo bond markers ``/`` and ``\\`` are emitted
as Bond tokens (the 2D pipeline treats them as plain single bonds).
"""

from dataclasses import dataclass
from enum import Enum

from ..errors import UnknownCharacter


class TokenKind(Enum):
    ATOM_ORGANIC = "AtomOrganic"
    ATOM_BRACKET = "AtomBracket"
    BOND = "Bond"
    RING_CLOSURE = "RingClosureDigit"
    BRANCH_OPEN = "BranchOpen"
    BRANCH_CLOSE = "BranchClose"
    DOT = "Dot"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    position: int


_BOND_CHARS = "-=#:/\\"
_TWO_LETTER = ("Cl", "Br")
_ONE_LETTER = set("BCNOPSFI")
_AROMATIC = set("bcnops")


def tokenize(smiles: str) -> list[Token]:
    """Split a SMILES string into a lossless token stream.

    Raises UnknownCharacter for anything outside the supported grammar and
    EmptyInput-style UnknownCharacter for an empty string.
    """
    if not smiles:
        raise UnknownCharacter("", 0)
    tokens: list[Token] = []
    i, n = 0, len(smiles)
    while i < n:
        c = smiles[i]
        if smiles.startswith(_TWO_LETTER[0], i) or smiles.startswith(_TWO_LETTER[1], i):
            tokens.append(Token(TokenKind.ATOM_ORGANIC, smiles[i:i + 2], i))
            i += 2
        elif c in _ONE_LETTER or c in _AROMATIC:
            tokens.append(Token(TokenKind.ATOM_ORGANIC, c, i))
            i += 1
        elif c == "[":
            j = smiles.find("]", i + 1)
            if j < 0:
                raise UnknownCharacter("[", i)
            tokens.append(Token(TokenKind.ATOM_BRACKET, smiles[i:j + 1], i))
            i = j + 1
        elif c in _BOND_CHARS:
            tokens.append(Token(TokenKind.BOND, c, i))
            i += 1
        elif c.isdigit():
            tokens.append(Token(TokenKind.RING_CLOSURE, c, i))
            i += 1
        elif c == "%":
            if i + 2 >= n or not (smiles[i + 1].isdigit() and smiles[i + 2].isdigit()):
                raise UnknownCharacter("%", i)
            tokens.append(Token(TokenKind.RING_CLOSURE, smiles[i:i + 3], i))
            i += 3
        elif c == "(":
            tokens.append(Token(TokenKind.BRANCH_OPEN, c, i))
            i += 1
        elif c == ")":
            tokens.append(Token(TokenKind.BRANCH_CLOSE, c, i))
            i += 1
        elif c == ".":
            tokens.append(Token(TokenKind.DOT, c, i))
            i += 1
        else:
            raise UnknownCharacter(c, i)
    return tokens
