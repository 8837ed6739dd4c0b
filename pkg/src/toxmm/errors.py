"""Error taxonomy for the whole toolkit.

Every error carries a stable ``code`` (the class name) so CLI reports and
reject files can enumerate failures without string-matching messages.
"""


class ToxmmError(Exception):
    """Base class; ``code`` is the stable machine-readable identifier."""

    @property
    def code(self) -> str:
        return type(self).__name__


# --- chem ---------------------------------------------------------------

class UnknownCharacter(ToxmmError):
    def __init__(self, char: str, position: int):
        self.char = char
        self.position = position
        super().__init__(f"unsupported character {char!r} at position {position}")


class UnknownElement(ToxmmError):
    def __init__(self, symbol: str, position: int = -1):
        self.symbol = symbol
        self.position = position
        super().__init__(f"unknown element symbol {symbol!r}")


class UnmatchedRingClosure(ToxmmError):
    def __init__(self, label: str, position: int):
        self.label = label
        self.position = position
        super().__init__(f"ring closure {label!r} at position {position} has no partner")


class UnbalancedBranch(ToxmmError):
    def __init__(self, position: int):
        self.position = position
        super().__init__(f"unbalanced branch parenthesis at position {position}")


class ValenceViolation(ToxmmError):
    def __init__(self, atom_index: int, detail: str = ""):
        self.atom_index = atom_index
        super().__init__(f"valence violation at atom {atom_index}" + (f": {detail}" if detail else ""))


class DuplicateBond(ToxmmError):
    def __init__(self, a: int, b: int):
        self.a, self.b = a, b
        super().__init__(f"duplicate bond between atoms {a} and {b}")


class DanglingBond(ToxmmError):
    def __init__(self, position: int):
        self.position = position
        super().__init__(f"bond symbol at position {position} has no following atom")


class AromaticAtomNotInRing(ToxmmError):
    def __init__(self, atom_index: int):
        self.atom_index = atom_index
        super().__init__(f"aromatic atom {atom_index} is not a member of any perceived ring")


class UnparameterizedElement(ToxmmError):
    def __init__(self, symbol: str):
        self.symbol = symbol
        super().__init__(f"no partial-charge parameters for element {symbol!r}")


class EmptyMolecule(ToxmmError):
    pass


# --- seq ----------------------------------------------------------------

class VocabOverflow(ToxmmError):
    def __init__(self, count: int, limit: int):
        self.count, self.limit = count, limit
        super().__init__(f"{count} distinct characters exceed the {limit}-column one-hot width")


class UnknownChar(ToxmmError):
    def __init__(self, char: str, position: int):
        self.char, self.position = char, position
        super().__init__(f"character {char!r} at position {position} missing from vocabulary")


class TooLong(ToxmmError):
    def __init__(self, length: int, limit: int):
        self.length, self.limit = length, limit
        super().__init__(f"string of length {length} exceeds maximum {limit}")


class EmptyInput(ToxmmError):
    pass


# --- desc ---------------------------------------------------------------

class EmptyTrainingSet(ToxmmError):
    pass


# --- nn -----------------------------------------------------------------

class ShapeMismatch(ToxmmError):
    def __init__(self, detail: str):
        super().__init__(detail)


class DegenerateBatch(ToxmmError):
    def __init__(self, n: int):
        self.n = n
        super().__init__(f"batch of size {n} is too small for train-mode batchnorm")


class InvalidRate(ToxmmError):
    def __init__(self, rate: float):
        self.rate = rate
        super().__init__(f"dropout rate {rate} outside [0, 1)")


class NonScalarLoss(ToxmmError):
    def __init__(self, shape):
        self.shape = shape
        super().__init__(f"backward requires a scalar loss, got shape {tuple(shape)}")


class MissingGradient(ToxmmError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"parameter {name!r} has no gradient; run backward first")


# --- models -------------------------------------------------------------

class ConfigInvalid(ToxmmError):
    def __init__(self, detail: str):
        super().__init__(detail)


class NonFiniteLoss(ToxmmError):
    def __init__(self, epoch: int, loss: float):
        self.epoch, self.loss = epoch, loss
        super().__init__(f"non-finite loss {loss} at epoch {epoch}")


class LengthMismatch(ToxmmError):
    def __init__(self, lengths):
        self.lengths = tuple(lengths)
        super().__init__(f"prediction vectors have mismatched lengths {self.lengths}")


class InsufficientMetaData(ToxmmError):
    def __init__(self, n: int, minimum: int):
        self.n, self.minimum = n, minimum
        super().__init__(f"{n} rows are too few to train the meta network (need >= {minimum})")


# --- pipeline -----------------------------------------------------------

class FileMissing(ToxmmError):
    def __init__(self, path):
        self.path = str(path)
        super().__init__(f"file not found: {path}")


class HeaderMismatch(ToxmmError):
    def __init__(self, got, expected):
        self.got, self.expected = got, expected
        super().__init__(f"bad CSV header {got!r}, expected {expected!r}")


class TooFewRecords(ToxmmError):
    def __init__(self, n: int, minimum: int):
        self.n, self.minimum = n, minimum
        super().__init__(f"{n} records are too few to split (need >= {minimum})")


class KTooLarge(ToxmmError):
    def __init__(self, k: int, n: int):
        self.k, self.n = k, n
        super().__init__(f"cannot split {n} rows into {k} folds")


class DegenerateInput(ToxmmError):
    def __init__(self, detail: str):
        super().__init__(detail)


class EmptySpace(ToxmmError):
    pass


class VersionMismatch(ToxmmError):
    def __init__(self, detail: str):
        super().__init__(detail)


class CorruptPayload(ToxmmError):
    def __init__(self, detail: str):
        super().__init__(detail)
