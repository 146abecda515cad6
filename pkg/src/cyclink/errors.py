"""Exception types shared across the package."""


class CyclinkError(Exception):
    """Base class for every error raised by this package."""


class BadLevel(CyclinkError):
    """The level N is not an integer >= 2."""


class NonPrimitiveRoot(CyclinkError):
    """The requested root exponent does not give a primitive root."""


class IndexOutOfRange(CyclinkError):
    """An index fell outside the window {0, ..., N-1}."""


class ChargeSumViolation(CyclinkError):
    """Corner charges at a crossing do not sum to 1 mod N."""


class ParseError(CyclinkError):
    """Malformed PD-code input."""


class ValenceError(CyclinkError):
    """An edge label does not occur the required number of times."""


class PlanarityError(CyclinkError):
    """Face tracing is inconsistent with an embedding in the sphere."""


class EdgeNotFound(CyclinkError):
    """A referenced edge label is not present in the diagram."""


class IllegalMove(CyclinkError):
    """The requested Reidemeister move is not legal at the given site."""


class NoSolution(CyclinkError):
    """The charge congruence system is inconsistent mod N."""


class TooLarge(CyclinkError):
    """Brute-force enumeration would exceed the configured term cap."""


class RankCapExceeded(CyclinkError):
    """No contraction order keeps intermediate tensors under the cap."""


class EvenLevel(CyclinkError):
    """An operation requiring odd N was called with even N."""


class PoleError(CyclinkError):
    """A denominator z - x*omega^j of the w-function vanishes."""


class FermatViolation(CyclinkError):
    """Tetrahedron data violates x^N + y^N = z^N or vertex injectivity."""


class GluingInconsistency(CyclinkError):
    """Face identifications of the hard-coded complex fail orientation checks."""
