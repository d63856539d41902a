"""Naive reference stores: the plain one-line array, and one-line plus inverse.

Both answer cycle questions by walking the cycle, and recount cycles from
scratch on demand. They exist to be obviously correct; the loops are
compiled only so that differential runs and benchmarks finish quickly.
Arrays are 1-based (slot 0 unused).
"""

import numpy as np
from numba import njit

from .errors import DomainError, ValidationError
from .fst import INFINITY, validate_one_line


@njit(cache=True)
def _walk_inverse(fwd, j):
    x = j
    while fwd[x] != j:
        x = fwd[x]
    return x


@njit(cache=True)
def _cycle_length(fwd, i):
    c = 1
    x = fwd[i]
    while x != i:
        x = fwd[x]
        c += 1
    return c


@njit(cache=True)
def _steps(fwd, i, k):
    x = i
    for _ in range(k):
        x = fwd[x]
    return x


@njit(cache=True)
def _distance(fwd, i, j):
    d = 0
    x = i
    while x != j:
        x = fwd[x]
        d += 1
        if x == i:
            return -1
    return d


@njit(cache=True)
def _count_cycles(fwd):
    n = fwd.shape[0] - 1
    seen = np.zeros(n + 1, dtype=np.bool_)
    cycles = 0
    for s in range(1, n + 1):
        if not seen[s]:
            cycles += 1
            x = s
            while not seen[x]:
                seen[x] = True
                x = fwd[x]
    return cycles


@njit(cache=True)
def _flip(fwd, i, j):
    """Reverse the path i -> j in place; False if j is not on i's cycle."""
    seg = [i]
    x = i
    while x != j:
        x = fwd[x]
        if x == i:
            return False
        seg.append(x)
    succ = fwd[j]
    pred = _walk_inverse(fwd, i)
    m = len(seg)
    for t in range(1, m):
        fwd[seg[t]] = seg[t - 1]
    if succ == i:
        fwd[i] = j
    else:
        fwd[pred] = j
        fwd[i] = succ
    return True


@njit(cache=True)
def _repair_inverse(fwd, bwd, i):
    # a flip rewires entries of one cycle only
    x = i
    while True:
        bwd[fwd[x]] = x
        x = fwd[x]
        if x == i:
            return


class OneLineOracle:
    """pi kept as a single array: pi(i) is O(1), nearly everything else walks a cycle."""

    name = "oneline"

    def __init__(self, one_line):
        perm = validate_one_line(one_line)
        self.fwd = np.concatenate(([0], perm)).astype(np.int64)
        self.n = perm.size

    def _check(self, *elements):
        for v in elements:
            if not 1 <= v <= self.n:
                raise ValidationError(f"element {v} outside 1..{self.n}", value=v)

    def _distinct(self, i, j):
        if i == j:
            raise DomainError(f"transposition needs distinct elements, got {i} twice")

    def apply(self, i):
        self._check(i)
        return int(self.fwd[i])

    def inverse(self, j):
        self._check(j)
        return int(_walk_inverse(self.fwd, j))

    def num_cycles(self):
        return int(_count_cycles(self.fwd))

    def cycle_size(self, i):
        self._check(i)
        return int(_cycle_length(self.fwd, i))

    def same_cycle(self, i, j):
        self._check(i, j)
        return bool(_distance(self.fwd, i, j) >= 0)

    def distance(self, i, j):
        self._check(i, j)
        d = _distance(self.fwd, i, j)
        return INFINITY if d < 0 else int(d)

    def power(self, i, k):
        self._check(i)
        c = _cycle_length(self.fwd, i)
        return int(_steps(self.fwd, i, k % c))

    def transpose_at(self, i, j):
        self._check(i, j)
        self._distinct(i, j)
        self._swap(i, j)

    def transpose_values(self, i, j):
        self._check(i, j)
        self._distinct(i, j)
        self._swap(self.inverse(i), self.inverse(j))

    def _swap(self, x, y):
        fwd = self.fwd
        fwd[x], fwd[y] = fwd[y], fwd[x]

    def flip(self, i, j):
        self._check(i, j)
        if i != j and not _flip(self.fwd, i, j):
            raise DomainError(f"flip({i}, {j}): elements lie in different cycles")

    def to_one_line(self):
        return self.fwd[1:].copy()


class OneLinePlusInverseOracle(OneLineOracle):
    """One-line array plus its inverse, making pi^-1 and (i, j) transpositions O(1)."""

    name = "oneline-inv"

    def __init__(self, one_line):
        super().__init__(one_line)
        self.bwd = np.empty_like(self.fwd)
        self.bwd[self.fwd] = np.arange(self.fwd.size)

    def inverse(self, j):
        self._check(j)
        return int(self.bwd[j])

    def power(self, i, k):
        self._check(i)
        c = _cycle_length(self.fwd, i)
        if k < 0:
            return int(_steps(self.bwd, i, (-k) % c))
        return int(_steps(self.fwd, i, k % c))

    def _swap(self, x, y):
        super()._swap(x, y)
        self.bwd[self.fwd[x]] = x
        self.bwd[self.fwd[y]] = y

    def flip(self, i, j):
        super().flip(i, j)
        _repair_inverse(self.fwd, self.bwd, i)

    def consistent(self):
        """True when bwd is exactly the inverse of fwd."""
        return bool((self.bwd[self.fwd] == np.arange(self.fwd.size)).all())
