"""Exception hierarchy.

Every domain error carries a short machine-readable ``code`` (the class name)
which the command line front end prints on failure.
"""


class SemifrobError(Exception):
    """Base class for all domain errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


class RankMismatch(SemifrobError, ValueError):
    pass


class NotASublattice(SemifrobError, ValueError):
    pass


class InfiniteQuotient(SemifrobError, ValueError):
    pass


class NotPointed(SemifrobError, ValueError):
    pass


class NotFullDimensional(SemifrobError, ValueError):
    pass


class UnknownFace(SemifrobError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class NotInCone(SemifrobError, ValueError):
    pass


class MonotonicityViolation(SemifrobError, ValueError):
    pass


class InfiniteIndex(SemifrobError, ValueError):
    pass


class InvalidFaceLattice(SemifrobError, ValueError):
    """A face lattice that does not live in the span of its face."""


class NotFSplit(SemifrobError, ValueError):
    pass


class LevelTooSmall(SemifrobError, ValueError):
    def __init__(self, e, e_min):
        super().__init__(f"level e={e} is below e_min={e_min}")
        self.e = e
        self.e_min = e_min


class LevelMismatch(SemifrobError, ValueError):
    pass


class NotInMonoid(SemifrobError, ValueError):
    pass


class NotAHom(SemifrobError, ValueError):
    pass
