"""Exception hierarchy shared by all modules."""


class TwoCatError(Exception):
    """Base class for every error raised by the package."""


class DanglingId(TwoCatError):
    """A table refers to an id that was never declared."""


class UnknownObject(TwoCatError, KeyError):
    pass


class UnknownCell(TwoCatError, KeyError):
    pass


class ShapeMismatch(TwoCatError):
    """A map does not respect sources and targets."""


class NonInvertibleCell(TwoCatError):
    """A cell required to be invertible has no two-sided inverse."""


class BoundaryMismatch(TwoCatError):
    def __init__(self, message, subtree=None):
        super().__init__(message)
        self.subtree = subtree


class ElevatorSyntaxError(TwoCatError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownAtom(TwoCatError):
    pass


class BoundTooSmall(TwoCatError):
    """A bounded search was inconclusive. This is not a negative verdict."""


class NotFiltered(TwoCatError):
    pass


class HomotopyNotEquivalence(TwoCatError):
    """The computed homotopy relation failed reflexivity, symmetry or transitivity."""


class NoMediator(TwoCatError):
    pass


class NotFound(TwoCatError):
    pass


class HypothesisFails(TwoCatError):
    pass


class NoFiller(TwoCatError):
    pass


class SchemaError(TwoCatError):
    def __init__(self, path, location, message):
        super().__init__(f"{path}: {location}: {message}")
        self.path = path
        self.location = location


class UnknownName(TwoCatError):
    pass
