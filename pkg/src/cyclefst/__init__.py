"""Dynamic permutations with cycle queries, backed by a forest of splay trees."""

from .errors import DomainError, PermutationError, ValidationError
from .fst import INFINITY, FstPermutation
from .oracle import OneLineOracle, OneLinePlusInverseOracle
from .splay import Forest

__all__ = [
    "INFINITY",
    "DomainError",
    "Forest",
    "FstPermutation",
    "OneLineOracle",
    "OneLinePlusInverseOracle",
    "PermutationError",
    "ValidationError",
]
