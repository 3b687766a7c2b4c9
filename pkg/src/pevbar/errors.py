"""Exception hierarchy shared by all modules."""


class PevbarError(Exception):
    """Base class for every error raised by pevbar."""


class MalformedTerm(PevbarError):
    pass


class TermSyntaxError(PevbarError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class LevelMismatch(PevbarError):
    pass


class SearchSpaceTooLarge(PevbarError):
    pass


class MixedSemirings(PevbarError):
    pass


class ConstraintViolation(PevbarError):
    pass


class CarrierMismatch(PevbarError):
    pass


class IndexOutOfRange(PevbarError):
    pass


class IncomposableWitnesses(PevbarError):
    pass


class UnsupportedInstance(PevbarError):
    pass


class MarginalMismatch(PevbarError):
    pass


class NonCommutingSquare(PevbarError):
    pass


class InvalidHorn(PevbarError):
    pass


class ConfigError(PevbarError):
    pass
