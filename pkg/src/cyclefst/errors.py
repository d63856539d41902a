"""Exception types shared by every permutation store."""


class PermutationError(ValueError):
    """Base class for errors raised by permutation stores."""


class ValidationError(PermutationError):
    """Input is not a permutation, or an element lies outside 1..n.

    ``position`` is the 1-based index of the offending entry (when there is
    one) and ``value`` the offending value.
    """

    def __init__(self, message, position=None, value=None):
        super().__init__(message)
        self.position = position
        self.value = value


class DomainError(PermutationError):
    """Arguments are in range but the operation is undefined for them,
    e.g. a flip across two cycles or a transposition with i == j."""
