"""Element-addressed splay forest.

Every element ``1..n`` owns one node. Nodes live in a single ``(n + 1, 4)``
int64 matrix ``M``; row ``v`` holds parent, left child, right child and signed
subtree size of ``v`` (node-major, so one node is one cache line). Row 0 is
the NIL sentinel (size 0, never linked). A negative
size ``-s`` means the subtree has ``s`` nodes and must be read mirrored; the
flag is pushed one level down by :func:`fix` whenever a node is visited.

The hot paths are numba kernels taking ``(M, counters, ...)``.  ``counters``
is a length-3 int64 array of rotations, splays and fixes.  :class:`Forest`
wraps the kernels with argument checks for interactive and test use.
"""

import math

import numpy as np
from numba import njit

NIL = 0
PARENT, LEFT, RIGHT, SIZE = 0, 1, 2, 3
ROTATIONS, SPLAYS, FIXES = 0, 1, 2


@njit(cache=True)
def fix(M, cnt, v):
    if v == NIL or M[v, SIZE] >= 0:
        return
    M[v, SIZE] = -M[v, SIZE]
    a = M[v, LEFT]
    b = M[v, RIGHT]
    if a != NIL:
        M[a, SIZE] = -M[a, SIZE]
    if b != NIL:
        M[b, SIZE] = -M[b, SIZE]
    M[v, LEFT] = b
    M[v, RIGHT] = a
    cnt[FIXES] += 1


@njit(cache=True)
def rotate_edge(M, cnt, x):
    # x and its parent must already be fixed.
    p = M[x, PARENT]
    g = M[p, PARENT]
    e = M[p, SIZE]
    d = M[x, SIZE]
    if M[p, LEFT] == x:
        b = M[x, RIGHT]
        M[p, LEFT] = b
        M[x, RIGHT] = p
    else:
        b = M[x, LEFT]
        M[p, RIGHT] = b
        M[x, LEFT] = p
    if b != NIL:
        M[b, PARENT] = p
    M[p, PARENT] = x
    M[x, PARENT] = g
    if g != NIL:
        if M[g, LEFT] == p:
            M[g, LEFT] = x
        else:
            M[g, RIGHT] = x
    M[x, SIZE] = e
    M[p, SIZE] = e - d + abs(M[b, SIZE])
    cnt[ROTATIONS] += 1


@njit(cache=True)
def splay(M, cnt, x, goal):
    """Rotate x upward until its parent is ``goal`` (NIL: until x is root).

    Before each step the grandparent, parent and x are fixed, in that order.
    x itself is fixed on exit.
    """
    cnt[SPLAYS] += 1
    while True:
        p = M[x, PARENT]
        if p == goal:
            break
        g = M[p, PARENT]
        if g == goal:
            fix(M, cnt, p)
            fix(M, cnt, x)
            rotate_edge(M, cnt, x)
            break
        fix(M, cnt, g)
        fix(M, cnt, p)
        fix(M, cnt, x)
        if (M[g, LEFT] == p) == (M[p, LEFT] == x):
            rotate_edge(M, cnt, p)
            rotate_edge(M, cnt, x)
        else:
            rotate_edge(M, cnt, x)
            rotate_edge(M, cnt, x)
    fix(M, cnt, x)


@njit(cache=True)
def split_after(M, cnt, x):
    splay(M, cnt, x, NIL)
    r = M[x, RIGHT]
    if r != NIL:
        M[r, PARENT] = NIL
        M[x, RIGHT] = NIL
        M[x, SIZE] -= abs(M[r, SIZE])
    return r


@njit(cache=True)
def rightmost(M, cnt, v):
    while True:
        fix(M, cnt, v)
        r = M[v, RIGHT]
        if r == NIL:
            return v
        v = r


@njit(cache=True)
def leftmost(M, cnt, v):
    while True:
        fix(M, cnt, v)
        a = M[v, LEFT]
        if a == NIL:
            return v
        v = a


@njit(cache=True)
def join(M, cnt, a, b):
    if b == NIL:
        return a
    if a == NIL:
        return b
    m = rightmost(M, cnt, a)
    splay(M, cnt, m, NIL)
    M[m, RIGHT] = b
    M[b, PARENT] = m
    M[m, SIZE] += abs(M[b, SIZE])
    return m


@njit(cache=True)
def select(M, cnt, v, rank):
    while True:
        fix(M, cnt, v)
        below = abs(M[M[v, LEFT], SIZE]) + 1
        if rank == below:
            return v
        if rank < below:
            v = M[v, LEFT]
        else:
            rank -= below
            v = M[v, RIGHT]


@njit(cache=True)
def in_order_into(M, root, out, pos, stack_v, stack_f):
    """Write the sign-resolved in-order of ``root``'s subtree to ``out[pos:]``.

    Read-only: pending flags are tracked as a running parity instead of
    being pushed down. Returns the position after the last written entry.
    """
    top = 0
    cur = root
    parity = 0
    while cur != NIL or top > 0:
        while cur != NIL:
            f = parity ^ (1 if M[cur, SIZE] < 0 else 0)
            stack_v[top] = cur
            stack_f[top] = f
            top += 1
            cur = M[cur, RIGHT] if f else M[cur, LEFT]
            parity = f
        top -= 1
        v = stack_v[top]
        f = stack_f[top]
        out[pos] = v
        pos += 1
        cur = M[v, LEFT] if f else M[v, RIGHT]
        parity = f
    return pos


@njit(cache=True)
def build_balanced(M, seq, count, stack):
    """Link ``seq[:count]`` into a perfectly balanced tree; return its root.

    The upper median becomes the root of each range, which reproduces the
    standard layout (e.g. cycle (2,3,6,8,5) is rooted at 6 with 3 and 5 as
    children). Each node writes only its own row, since its children are
    the medians of its two subranges. ``stack`` needs room for
    3 * (log2(count) + 2) entries.
    """
    stack[0] = 0
    stack[1] = count - 1
    stack[2] = NIL
    top = 3
    while top > 0:
        top -= 3
        lo = stack[top]
        hi = stack[top + 1]
        par = stack[top + 2]
        mid = (lo + hi + 1) // 2
        v = seq[mid]
        M[v, PARENT] = par
        M[v, LEFT] = seq[(lo + mid) // 2] if lo < mid else NIL
        M[v, RIGHT] = seq[(mid + hi + 2) // 2] if mid < hi else NIL
        M[v, SIZE] = hi - lo + 1
        if lo < mid:
            stack[top] = lo
            stack[top + 1] = mid - 1
            stack[top + 2] = v
            top += 3
        if mid < hi:
            stack[top] = mid + 1
            stack[top + 1] = hi
            stack[top + 2] = v
            top += 3
    return seq[(count) // 2]


class Forest:
    """A forest of splay trees over the elements ``1..n``.

    A fresh forest holds ``n`` singleton trees. Queries restructure trees
    (splaying), so a forest must not be shared between threads.
    """

    def __init__(self, n):
        if n < 0:
            raise ValueError(f"n must be non-negative, got {n}")
        self.M = np.zeros((n + 1, 4), dtype=np.int64)
        self.M[1:, SIZE] = 1
        self.counters = np.zeros(3, dtype=np.int64)

    @classmethod
    def from_children(cls, n, children, reversed_=()):
        """Build a forest from an explicit ``{node: (left, right)}`` map.

        Nodes absent from the map are leaves; 0 stands for NIL. Sizes are
        computed, then negated for every node listed in ``reversed_``.
        """
        forest = cls(n)
        M = forest.M
        for v, (a, b) in children.items():
            M[v, LEFT] = a
            M[v, RIGHT] = b
            if a:
                M[a, PARENT] = v
            if b:
                M[b, PARENT] = v

        def size(v):
            if v == NIL:
                return 0
            s = 1 + size(M[v, LEFT]) + size(M[v, RIGHT])
            M[v, SIZE] = s
            return s

        for v in forest.roots():
            size(v)
        for v in reversed_:
            M[v, SIZE] = -M[v, SIZE]
        forest.check()
        return forest

    @property
    def n(self):
        return self.M.shape[0] - 1

    @property
    def rotations(self):
        return int(self.counters[ROTATIONS])

    @property
    def splays(self):
        return int(self.counters[SPLAYS])

    @property
    def fixes(self):
        return int(self.counters[FIXES])

    def _node(self, v):
        if not 1 <= v <= self.n:
            raise IndexError(f"element {v} outside 1..{self.n}")
        return int(v)

    def parent(self, v):
        return int(self.M[self._node(v), PARENT])

    def left(self, v):
        return int(self.M[self._node(v), LEFT])

    def right(self, v):
        return int(self.M[self._node(v), RIGHT])

    def size(self, v):
        """Signed subtree size of ``v`` (0 for NIL)."""
        return int(self.M[v, SIZE])

    def root(self, v):
        """Root of ``v``'s tree, found by walking parents (no splaying)."""
        v = self._node(v)
        while self.M[v, PARENT] != NIL:
            v = self.M[v, PARENT]
        return int(v)

    def roots(self):
        return [int(v) for v in np.flatnonzero(self.M[1:, PARENT] == NIL) + 1]

    def fix(self, v):
        if v != NIL:
            fix(self.M, self.counters, self._node(v))

    def rotate_edge(self, x):
        x = self._node(x)
        p = self.M[x, PARENT]
        if p == NIL:
            raise ValueError(f"cannot rotate root {x}")
        g = self.M[p, PARENT]
        if min(self.M[x, SIZE], self.M[p, SIZE], self.M[g, SIZE]) < 0:
            raise ValueError("rotate_edge needs x, parent and grandparent fixed")
        rotate_edge(self.M, self.counters, x)

    def splay(self, x):
        splay(self.M, self.counters, self._node(x), NIL)

    def split_after(self, x):
        """Split off everything after ``x``; return ``(x, right_root)``."""
        x = self._node(x)
        return x, int(split_after(self.M, self.counters, x))

    def join(self, a, b):
        """Append tree ``b`` after tree ``a``; return the new root."""
        a = self._node(a)
        if self.M[a, PARENT] != NIL:
            raise ValueError(f"{a} is not a root")
        if b != NIL:
            b = self._node(b)
            if self.M[b, PARENT] != NIL:
                raise ValueError(f"{b} is not a root")
            if a == b:
                raise ValueError("cannot join a tree with itself")
        return int(join(self.M, self.counters, a, b))

    def select(self, v, rank):
        """The ``rank``-th (1-based) node in in-order of ``v``'s subtree."""
        v = self._node(v)
        total = abs(self.M[v, SIZE])
        if not 1 <= rank <= total:
            raise IndexError(f"rank {rank} outside 1..{total}")
        return int(select(self.M, self.counters, v, rank))

    def toggle_reverse(self, v):
        if v != NIL:
            v = self._node(v)
            self.M[v, SIZE] = -self.M[v, SIZE]

    def in_order(self, root):
        root = self._node(root)
        total = abs(self.M[root, SIZE])
        out = np.empty(total, dtype=np.int64)
        stack_v = np.empty(self.n + 1, dtype=np.int64)
        stack_f = np.empty(self.n + 1, dtype=np.int64)
        in_order_into(self.M, root, out, 0, stack_v, stack_f)
        return [int(v) for v in out]

    def potential(self):
        """Sum of log2 |size| over all nodes (the splay potential)."""
        sizes = np.abs(self.M[1:, SIZE])
        return float(np.log2(sizes).sum()) if sizes.size else 0.0

    def check(self):
        """Raise AssertionError if links or sizes are inconsistent."""
        M = self.M
        n = self.n
        assert M[NIL, SIZE] == 0 and M[NIL, PARENT] == NIL
        for v in range(1, n + 1):
            for side in (LEFT, RIGHT):
                c = M[v, side]
                assert c == NIL or M[c, PARENT] == v, f"child link of {v}"
            p = M[v, PARENT]
            assert p == NIL or v in (M[p, LEFT], M[p, RIGHT]), f"parent link of {v}"
            s = M[v, SIZE]
            assert s != 0, f"zero size at {v}"
            assert abs(s) == 1 + abs(M[M[v, LEFT], SIZE]) + abs(M[M[v, RIGHT], SIZE]), (
                f"size of {v}"
            )
        # sizes are consistent, so tree sizes summing to n rules out cycles
        assert sum(abs(int(M[r, SIZE])) for r in self.roots()) == n


def balanced_potential_bound(r):
    """Upper bound 2r + 10 log2(r)^2 used for freshly built trees."""
    return 2 * r + 10 * math.log2(r) ** 2 if r > 1 else 0.0
