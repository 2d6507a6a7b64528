"""
Exceptions raised by the hecke services.

Every service error derives from HeckeError (itself a ValueError) so callers
can catch the whole family; management commands turn them into CommandError
with exit status 2.
"""


class HeckeError(ValueError):
    """Base class for all domain errors"""


class UnsupportedType(HeckeError):
    pass


class InvalidRank(HeckeError):
    pass


class DimensionMismatch(HeckeError):
    pass


class NonIntegralCoweight(HeckeError):
    pass


class IndexOutOfRange(HeckeError):
    pass


class NonDominant(HeckeError):
    pass


class NotInWeylGroup(HeckeError):
    """A signed permutation that is not an element of the Weyl group"""


class BudgetExceeded(HeckeError):
    """Word descent ran past its budget; signals an internal inconsistency"""


class ZeroCocharacter(HeckeError):
    pass


class InvalidCocharacter(HeckeError):
    pass


class DegeneratePairing(HeckeError):
    pass


class RootNotInSystem(HeckeError):
    pass


class OddGenus(HeckeError):
    pass


class SearchBudgetExceeded(HeckeError):
    pass


class SchemeFormatError(HeckeError):
    """Scheme document failed validation"""


class InconsistentRoutes(HeckeError):
    """Two independent computations of the same quantity disagree"""


class ElementFormatError(HeckeError):
    """Affine element document failed validation"""
