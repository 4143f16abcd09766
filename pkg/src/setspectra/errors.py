"""Exception hierarchy shared by every module."""


class SetSpectraError(Exception):
    pass


class ContractError(SetSpectraError, ValueError):
    """Input violates an operation's precondition."""


class CapacityError(SetSpectraError):
    """A size or enumeration cap was exceeded.

    ``partial`` carries whatever count was reached before giving up.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class BudgetError(CapacityError):
    """A search node budget ran out before the answer was exact."""


class ConsistencyError(SetSpectraError, AssertionError):
    """An internal cross-check failed; points at a bug or a counterexample."""
