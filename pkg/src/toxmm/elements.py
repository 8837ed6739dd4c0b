"""Element data: atomic numbers, masses, valence sets, PEOE coefficients."""

from .errors import UnknownElement

# Atomic numbers for the symbols the bracket grammar may produce. The organic
# subset (B C N O P S F Cl Br I) is what the benchmark actually exercises;
# the rest appear only inside brackets (counter-ions and the like).
ATOMIC_NUMBERS = {
    "H": 1, "He": 2, "Li": 3, "Be": 4, "B": 5, "C": 6, "N": 7, "O": 8,
    "F": 9, "Ne": 10, "Na": 11, "Mg": 12, "Al": 13, "Si": 14, "P": 15,
    "S": 16, "Cl": 17, "Ar": 18, "K": 19, "Ca": 20, "Ti": 22, "Cr": 24,
    "Mn": 25, "Fe": 26, "Co": 27, "Ni": 28, "Cu": 29, "Zn": 30, "Ga": 31,
    "Ge": 32, "As": 33, "Se": 34, "Br": 35, "Kr": 36, "Rb": 37, "Sr": 38,
    "Ag": 47, "Cd": 48, "Sn": 50, "Sb": 51, "Te": 52, "I": 53, "Xe": 54,
    "Cs": 55, "Ba": 56, "Pt": 78, "Au": 79, "Hg": 80, "Pb": 82, "Bi": 83,
}

ATOMIC_MASSES = {
    "H": 1.008, "He": 4.003, "Li": 6.94, "Be": 9.012, "B": 10.811,
    "C": 12.011, "N": 14.007, "O": 15.999, "F": 18.998, "Ne": 20.180,
    "Na": 22.990, "Mg": 24.305, "Al": 26.982, "Si": 28.086, "P": 30.974,
    "S": 32.06, "Cl": 35.45, "Ar": 39.948, "K": 39.098, "Ca": 40.078,
    "Ti": 47.867, "Cr": 51.996, "Mn": 54.938, "Fe": 55.845, "Co": 58.933,
    "Ni": 58.693, "Cu": 63.546, "Zn": 65.38, "Ga": 69.723, "Ge": 72.630,
    "As": 74.922, "Se": 78.971, "Br": 79.904, "Kr": 83.798, "Rb": 85.468,
    "Sr": 87.62, "Ag": 107.868, "Cd": 112.414, "Sn": 118.710, "Sb": 121.760,
    "Te": 127.60, "I": 126.904, "Xe": 131.293, "Cs": 132.905, "Ba": 137.327,
    "Pt": 195.084, "Au": 196.967, "Hg": 200.592, "Pb": 207.2, "Bi": 208.980,
}

# Allowed standard valences, smallest first. Implicit hydrogens fill to the
# smallest member at or above the bond-order sum; the validity check uses the
# largest, adjusted for formal charge.
DEFAULT_VALENCES = {
    "B": (3,), "C": (4,), "N": (3, 5), "O": (2,), "P": (3, 5),
    "S": (2, 4, 6), "F": (1,), "Cl": (1,), "Br": (1,), "I": (1,),
}

ORGANIC_SUBSET = {"B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"}
AROMATIC_ORGANIC = {"b", "c", "n", "o", "p", "s"}

# Gasteiger-Marsili PEOE coefficients (a, b, c) keyed by element and, where
# the scheme distinguishes them, hybridization. chi(Q) = a + b*Q + c*Q^2.
_PEOE = {
    ("H", None): (7.17, 6.24, -0.56),
    ("C", "SP3"): (7.98, 9.18, 1.88),
    ("C", "SP2"): (8.79, 9.32, 1.51),
    ("C", "SP"): (10.39, 9.45, 0.73),
    ("N", "SP3"): (11.54, 10.82, 1.36),
    ("N", "SP2"): (12.87, 11.15, 0.85),
    ("N", "SP"): (15.68, 11.70, -0.27),
    ("O", "SP3"): (14.18, 12.92, 1.39),
    ("O", "SP2"): (17.07, 13.79, 0.47),
    ("F", None): (14.66, 13.85, 2.31),
    ("Cl", None): (11.00, 9.69, 1.35),
    ("Br", None): (10.08, 8.47, 1.16),
    ("I", None): (9.90, 7.96, 0.96),
    ("S", None): (10.14, 9.13, 1.38),
    ("P", None): (8.90, 8.24, 0.96),
}

# Electronegativity of the cation, used to normalize charge flow toward the
# more electronegative bond partner. Hydrogen gets the published special value.
PEOE_H_CATION_CHI = 20.02


def atomic_number(symbol: str) -> int:
    try:
        return ATOMIC_NUMBERS[symbol]
    except KeyError:
        raise UnknownElement(symbol) from None


def atomic_mass(symbol: str) -> float:
    try:
        return ATOMIC_MASSES[symbol]
    except KeyError:
        raise UnknownElement(symbol) from None


def peoe_coefficients(symbol: str, hybridization: str):
    """(a, b, c) for an element, falling back across hybridizations.

    Elements keyed with hybridization use SP3 parameters for the SP3/Other
    cases; single-entry elements ignore hybridization entirely. Returns None
    when the element is not parameterized.
    """
    if (symbol, None) in _PEOE:
        return _PEOE[(symbol, None)]
    hyb = hybridization if hybridization in ("SP", "SP2", "SP3") else "SP3"
    return _PEOE.get((symbol, hyb))
