"""Exception hierarchy.

Everything raised on bad input derives from :class:`MatroidError` (a
``ValueError``).  Size limits raise subclasses of :class:`CapExceeded` so the
CLI can map them to a distinct exit code.
"""


class MatroidError(ValueError):
    pass


class EmptyFamily(MatroidError):
    def __init__(self):
        super().__init__("basis family is empty")


class UnequalCardinality(MatroidError):
    def __init__(self, b1, b2):
        self.b1, self.b2 = b1, b2
        super().__init__(f"bases of different sizes: {_fmt(b1)} and {_fmt(b2)}")


class ExchangeAxiomFailure(MatroidError):
    def __init__(self, b1, b2, e):
        self.b1, self.b2, self.e = b1, b2, e
        super().__init__(
            f"exchange axiom fails: B1={_fmt(b1)} B2={_fmt(b2)} e={e + 1} "
            "has no f in B2\\B1 with (B1\\e)+f a basis"
        )


class ElementOutOfRange(MatroidError):
    pass


class InvalidRank(MatroidError):
    pass


class EmptyGraph(MatroidError):
    pass


class NonPrimeModulus(MatroidError):
    pass


class OverlappingArguments(MatroidError):
    pass


class DependentContraction(MatroidError):
    pass


class RankCollapse(MatroidError):
    pass


class NotABasis(MatroidError):
    pass


class ElementNotExchangeable(MatroidError):
    pass


class NotKMatroid(MatroidError):
    pass


class NotDisjoint(MatroidError):
    pass


class SizeMismatch(MatroidError):
    pass


class EntryNotMappedToBasis(MatroidError):
    pass


class LiftFailure(MatroidError):
    pass


class CapExceeded(MatroidError):
    pass


class GroundSetTooLarge(CapExceeded):
    pass


class VertexCountCapExceeded(CapExceeded):
    pass


class FiberCapExceeded(CapExceeded):
    pass


class MatroidSyntaxError(MatroidError):
    """Malformed matroid file; carries 1-based ``line`` and ``column``."""

    def __init__(self, msg, line=None, column=None):
        self.line, self.column = line, column
        where = f"line {line}" + (f", column {column}" if column else "") if line else ""
        super().__init__(f"{where}: {msg}" if where else msg)


def _fmt(mask):
    if isinstance(mask, int):
        items = [i + 1 for i in range(mask.bit_length()) if mask >> i & 1]
    else:
        items = sorted(mask)
    return "{" + ",".join(map(str, items)) + "}"
