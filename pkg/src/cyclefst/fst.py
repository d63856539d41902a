"""Dynamic permutations stored as a forest of splay trees, one tree per cycle.

Each tree is keyed implicitly by position within its cycle: the in-order
sequence of a tree (with pending reversals resolved) is one linearization
of the cycle. Any rotation of that sequence represents the same cycle, and
most operations below exploit this by re-linearizing a cycle so that a
chosen element comes last.
"""

import math

import numpy as np
from numba import njit

from .errors import DomainError, ValidationError
from .splay import (
    LEFT,
    NIL,
    PARENT,
    RIGHT,
    SIZE,
    Forest,
    build_balanced,
    in_order_into,
    join,
    leftmost,
    rightmost,
    select,
    splay,
    split_after,
)

INFINITY = math.inf


def validate_one_line(values):
    """Return ``values`` as an int64 array, or raise ValidationError.

    The error names the first offending 1-based position.
    """
    arr = np.asarray(values, dtype=np.int64).reshape(-1)
    n = arr.size
    bad = (arr < 1) | (arr > n)
    if bad.any():
        pos = int(np.argmax(bad))
        raise ValidationError(
            f"value {arr[pos]} at position {pos + 1} outside 1..{n}",
            position=pos + 1, value=int(arr[pos]),
        )
    counts = np.bincount(arr, minlength=n + 1)
    if (counts > 1).any():
        order = np.argsort(arr, kind="stable")
        dup = np.flatnonzero(arr[order][1:] == arr[order][:-1])
        pos = int(order[1:][dup].min())
        raise ValidationError(
            f"duplicate value {arr[pos]} at position {pos + 1}",
            position=pos + 1, value=int(arr[pos]),
        )
    return arr


@njit(cache=True)
def _build(perm):
    n = perm.shape[0]
    M = np.zeros((n + 1, 4), dtype=np.int64)
    seen = np.zeros(n + 1, dtype=np.bool_)
    seq = np.empty(max(n, 1), dtype=np.int64)
    stack = np.empty(3 * 136, dtype=np.int64)
    # compact copy keeps the cycle walk's random reads in cache for longer
    nxt = perm.astype(np.int32)
    cycles = 0
    for start in range(1, n + 1):
        if seen[start]:
            continue
        cycles += 1
        count = 0
        v = start
        while not seen[v]:
            seen[v] = True
            seq[count] = v
            count += 1
            v = nxt[v - 1]
        build_balanced(M, seq, count, stack)
    return M, cycles


@njit(cache=True)
def _to_one_line(M, buf, stack_v, stack_f):
    n = M.shape[0] - 1
    pi = np.empty(n, dtype=np.int64)
    for r in range(1, n + 1):
        if M[r, PARENT] != NIL:
            continue
        k = in_order_into(M, r, buf, 0, stack_v, stack_f)
        for t in range(k - 1):
            pi[buf[t] - 1] = buf[t + 1]
        pi[buf[k - 1] - 1] = buf[0]
    return pi


@njit(cache=True)
def _apply(M, cnt, i):
    splay(M, cnt, i, NIL)
    r = M[i, RIGHT]
    t = leftmost(M, cnt, i if r == NIL else r)
    splay(M, cnt, t, NIL)
    return t


@njit(cache=True)
def _inverse(M, cnt, j):
    splay(M, cnt, j, NIL)
    a = M[j, LEFT]
    t = rightmost(M, cnt, j if a == NIL else a)
    splay(M, cnt, t, NIL)
    return t


@njit(cache=True)
def _same_cycle(M, cnt, i, j):
    if i == j:
        return True
    splay(M, cnt, i, NIL)
    splay(M, cnt, j, NIL)
    return M[i, PARENT] != NIL


@njit(cache=True)
def _power(M, cnt, i, k):
    splay(M, cnt, i, NIL)
    c = M[i, SIZE]
    step = k % c
    if step == 0:
        return i
    r = M[i, RIGHT]
    after = abs(M[r, SIZE])
    if step <= after:
        t = select(M, cnt, r, step)
    else:
        t = select(M, cnt, i, step - after)
    splay(M, cnt, t, NIL)
    return t


@njit(cache=True)
def _cycle_size(M, cnt, i):
    splay(M, cnt, i, NIL)
    return M[i, SIZE]


@njit(cache=True)
def _rotate_cycle(M, cnt, i):
    """Re-linearize i's cycle (A, i, B) as (B, A, i); return the new root."""
    rest = split_after(M, cnt, i)
    if rest == NIL:
        return i
    return join(M, cnt, rest, i)


@njit(cache=True)
def _distance(M, cnt, i, j):
    if i == j:
        return 0
    if not _same_cycle(M, cnt, i, j):
        return -1
    _rotate_cycle(M, cnt, j)
    splay(M, cnt, i, NIL)
    return abs(M[M[i, RIGHT], SIZE])


@njit(cache=True)
def _transpose_at(M, cnt, i, j):
    """Left-multiply by (pi(i), pi(j)); return the change in cycle count."""
    if _same_cycle(M, cnt, i, j):
        # (A, j, B, i) -> (A, j)(B, i)
        _rotate_cycle(M, cnt, i)
        split_after(M, cnt, j)
        return 1
    # (A', i)(D', j) -> (A', i, D', j)
    _rotate_cycle(M, cnt, i)
    _rotate_cycle(M, cnt, j)
    splay(M, cnt, i, NIL)
    splay(M, cnt, j, NIL)
    join(M, cnt, i, j)
    return -1


@njit(cache=True)
def _flip(M, cnt, i, j):
    """Reverse the forward path i -> j; return False if i, j are in different cycles."""
    if i == j:
        return True
    if not _same_cycle(M, cnt, i, j):
        return False
    succ = _apply(M, cnt, j)
    if succ == i:
        # the path covers the whole cycle; _apply left i at the root
        M[i, SIZE] = -M[i, SIZE]
        return True
    pred = _inverse(M, cnt, i)
    _rotate_cycle(M, cnt, succ)
    if pred == succ:
        # cycle is (path, succ): everything left of succ
        splay(M, cnt, succ, NIL)
        v = M[succ, LEFT]
    else:
        # linearization is (..., pred, path, succ); isolate path between them
        splay(M, cnt, pred, NIL)
        splay(M, cnt, succ, pred)
        v = M[succ, LEFT]
    M[v, SIZE] = -M[v, SIZE]
    return True


class FstPermutation:
    """A permutation of ``1..n`` supporting cycle queries and updates.

    Every query and update costs amortized O(log n); :meth:`num_cycles` is
    O(1). Queries restructure the trees, so even read-only use needs
    exclusive access.

    >>> p = FstPermutation([1, 3, 6, 4, 2, 8, 11, 5, 10, 7, 9])
    >>> p.num_cycles(), p.apply(6), p.power(2, -1)
    (4, 8, 5)
    """

    name = "fst"

    def __init__(self, one_line):
        perm = validate_one_line(one_line)
        self.forest = Forest(0)
        M, cycles = _build(perm)
        self.forest.M = M
        self.cycles = int(cycles)
        self._scratch = None

    @property
    def n(self):
        return self.forest.n

    @property
    def M(self):
        return self.forest.M

    def _check(self, *elements):
        n = self.forest.n
        for v in elements:
            if not 1 <= v <= n:
                raise ValidationError(f"element {v} outside 1..{n}", value=v)

    def apply(self, i):
        self._check(i)
        return int(_apply(self.M, self.forest.counters, i))

    def inverse(self, j):
        self._check(j)
        return int(_inverse(self.M, self.forest.counters, j))

    def num_cycles(self):
        return self.cycles

    def same_cycle(self, i, j):
        self._check(i, j)
        return bool(_same_cycle(self.M, self.forest.counters, i, j))

    def power(self, i, k):
        """pi^k(i) for any signed 64-bit ``k``."""
        self._check(i)
        return int(_power(self.M, self.forest.counters, i, k))

    def distance(self, i, j):
        """Least d >= 0 with pi^d(i) == j, or INFINITY across cycles."""
        self._check(i, j)
        d = _distance(self.M, self.forest.counters, i, j)
        return INFINITY if d < 0 else int(d)

    def cycle_size(self, i):
        self._check(i)
        return int(_cycle_size(self.M, self.forest.counters, i))

    def rotate_cycle(self, i):
        """Make ``i`` the last element of its tree; the permutation is unchanged."""
        self._check(i)
        _rotate_cycle(self.M, self.forest.counters, i)

    def transpose_at(self, i, j):
        """pi <- (pi(i), pi(j)) . pi"""
        self._check(i, j)
        if i == j:
            raise DomainError(f"transposition needs distinct elements, got {i} twice")
        self.cycles += int(_transpose_at(self.M, self.forest.counters, i, j))

    def transpose_values(self, i, j):
        """pi <- (i, j) . pi"""
        self._check(i, j)
        if i == j:
            raise DomainError(f"transposition needs distinct elements, got {i} twice")
        cnt = self.forest.counters
        a = _inverse(self.M, cnt, i)
        b = _inverse(self.M, cnt, j)
        self.cycles += int(_transpose_at(self.M, cnt, a, b))

    def flip(self, i, j):
        """Reverse the direction of the cycle segment running from i forward to j."""
        self._check(i, j)
        if not _flip(self.M, self.forest.counters, i, j):
            raise DomainError(f"flip({i}, {j}): elements lie in different cycles")

    def to_one_line(self):
        """Current permutation in one-line notation (int64 array, no splaying)."""
        if self._scratch is None:
            self._scratch = tuple(np.empty(self.n + 1, dtype=np.int64) for _ in range(3))
        return _to_one_line(self.M, *self._scratch)

    def cycles_list(self):
        """Each tree's in-order sequence, i.e. one linearization per cycle."""
        return [self.forest.in_order(r) for r in self.forest.roots()]

    def potential(self):
        return self.forest.potential()
