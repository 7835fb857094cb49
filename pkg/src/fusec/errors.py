"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class FusecError(Exception):
    """Base class for all errors raised by this package."""


class InputError(FusecError, ValueError):
    """Malformed input: files, permutations, tables, maps."""


class GroupTooLarge(FusecError):
    pass


class LatticeTooLarge(FusecError):
    pass


class NotASubgroup(InputError):
    pass


class BudgetExceeded(FusecError):
    pass


class NotFullyNormalized(FusecError):
    pass


class NotSaturated(FusecError):
    pass


class ModelError(FusecError):
    """A group model violates one of its structural conditions."""


class PresentationError(FusecError):
    pass
