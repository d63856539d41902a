import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclefst import DomainError, FstPermutation, INFINITY, ValidationError

import naive

SAMPLE = [1, 3, 6, 4, 2, 8, 11, 5, 10, 7, 9]
SPLIT_BEFORE = naive.from_cycles(9, [[1, 8, 4, 3, 5], [2], [6, 7, 9]])
JOIN_BEFORE = naive.from_cycles(9, [[1, 3, 5], [2], [4, 8], [6, 7, 9]])


def one_line(p):
    return p.to_one_line().tolist()


def cycle_sizes(p):
    return sorted(len(c) for c in naive.cycles_of(one_line(p)))


perms = st.integers(1, 10).flatmap(lambda n: st.permutations(range(1, n + 1)))


class TestBuild:
    def test_sample(self):
        p = FstPermutation(SAMPLE)
        assert p.num_cycles() == 4
        assert sorted(len(c) for c in p.cycles_list()) == [1, 1, 4, 5]
        assert one_line(p) == SAMPLE

    def test_identity(self):
        p = FstPermutation(range(1, 9))
        assert p.num_cycles() == 8
        assert all(p.forest.parent(v) == 0 and p.forest.size(v) == 1 for v in range(1, 9))

    def test_single_cycle_is_rotation(self):
        (seq,) = FstPermutation([2, 3, 4, 5, 1]).cycles_list()
        assert naive.canonical(seq) == [1, 2, 3, 4, 5]

    def test_balanced_height(self):
        n = 1023
        p = FstPermutation(list(range(2, n + 1)) + [1])
        f = p.forest
        (root,) = f.roots()
        depth = {root: 0}
        for v in range(1, n + 1):
            path = []
            while v not in depth:
                path.append(v)
                v = f.parent(v)
            for u in reversed(path):
                depth[u] = depth[f.parent(u)] + 1
        assert max(depth.values()) == 9

    @pytest.mark.parametrize("n", range(1, 7))
    def test_roundtrip_exhaustive(self, n):
        for perm in itertools.permutations(range(1, n + 1)):
            p = FstPermutation(perm)
            assert one_line(p) == list(perm)
            assert p.num_cycles() == len(naive.cycles_of(list(perm)))

    @given(perms)
    @settings(max_examples=200, deadline=None)
    def test_roundtrip_random(self, perm):
        assert one_line(FstPermutation(perm)) == list(perm)

    @pytest.mark.parametrize("values, pos", [
        ([1, 2, 2], 3),
        ([0, 1, 2], 1),
        ([1, 4, 2], 2),
        ([3, 1, 3, 1], 3),
        ([1, 2, -5], 3),
    ])
    def test_rejects_non_permutations(self, values, pos):
        with pytest.raises(ValidationError) as info:
            FstPermutation(values)
        assert info.value.position == pos
        assert f"position {pos}" in str(info.value)


class TestQueries:
    @pytest.fixture
    def p(self):
        return FstPermutation(SAMPLE)

    def test_apply(self, p):
        assert p.apply(6) == 8
        assert p.apply(4) == 4
        assert p.apply(5) == 2

    def test_inverse(self, p):
        assert p.inverse(8) == 6
        assert p.inverse(2) == 5
        assert all(p.inverse(p.apply(i)) == i for i in range(1, 12))

    def test_same_cycle(self, p):
        assert p.same_cycle(2, 8)
        assert p.same_cycle(7, 7)
        assert not p.same_cycle(1, 4)

    def test_same_cycle_self_does_not_splay(self, p):
        p.same_cycle(8, 8)
        assert p.forest.splays == 0

    def test_power(self, p):
        assert p.power(2, 2) == 6
        assert p.power(9, 0) == 9
        assert p.power(2, 5) == 2
        assert p.power(2, -1) == 5 == p.inverse(2)

    def test_power_extreme_exponents(self, p):
        for k in (2**63 - 1, -(2**63), 10**18 + 3):
            assert p.power(2, k) == naive.power(SAMPLE, 2, k % 5)

    def test_distance(self, p):
        assert p.distance(2, 5) == 4
        assert p.distance(5, 2) == 1
        assert p.distance(3, 3) == 0
        assert p.distance(1, 4) == INFINITY

    def test_cycle_size(self, p):
        assert p.cycle_size(2) == 5
        assert p.cycle_size(4) == 1
        assert p.cycle_size(10) == 4

    def test_num_cycles_after_join(self, p):
        p.transpose_at(1, 2)
        assert p.num_cycles() == 3

    @pytest.mark.parametrize("call", [
        lambda p: p.apply(0),
        lambda p: p.inverse(12),
        lambda p: p.power(-1, 3),
        lambda p: p.same_cycle(1, 99),
        lambda p: p.distance(12, 1),
        lambda p: p.cycle_size(0),
        lambda p: p.transpose_at(1, 12),
        lambda p: p.flip(0, 1),
    ])
    def test_out_of_range(self, p, call):
        with pytest.raises(ValidationError):
            call(p)


class TestRotateCycle:
    def test_fixpoint(self):
        p = FstPermutation(SAMPLE)
        before = p.M.copy()
        p.rotate_cycle(4)
        assert np.array_equal(p.M, before)

    def test_sample_cycle(self):
        p = FstPermutation(SAMPLE)
        p.rotate_cycle(6)
        assert p.forest.in_order(p.forest.root(6)) == [8, 5, 2, 3, 6]

    @given(perms, st.data())
    @settings(max_examples=100, deadline=None)
    def test_invisible(self, perm, data):
        p = FstPermutation(perm)
        for i in data.draw(st.lists(st.integers(1, len(perm)), max_size=8)):
            p.rotate_cycle(i)
            seq = p.forest.in_order(p.forest.root(i))
            assert seq[-1] == i
            assert one_line(p) == list(perm)
        p.forest.check()


class TestTranspose:
    def test_split_example(self):
        p = FstPermutation(SPLIT_BEFORE)
        p.transpose_at(1, 4)
        assert one_line(p) == [3, 2, 5, 8, 1, 7, 9, 4, 6]
        assert p.num_cycles() == 4
        cycles = sorted(naive.canonical(c) for c in naive.cycles_of(one_line(p)))
        assert cycles == [[1, 3, 5], [2], [4, 8], [6, 7, 9]]

    def test_join_example(self):
        p = FstPermutation(JOIN_BEFORE)
        p.transpose_at(3, 6)
        assert one_line(p) == [3, 2, 7, 8, 1, 5, 9, 4, 6]
        assert p.num_cycles() == 3
        assert [1, 3, 7, 9, 6, 5] in [naive.canonical(c) for c in naive.cycles_of(one_line(p))]

    def test_values_sample(self):
        p = FstPermutation(SAMPLE)
        p.transpose_values(1, 4)
        assert one_line(p) == [4, 3, 6, 1, 2, 8, 11, 5, 10, 7, 9]
        assert one_line(p) == naive.compose_transposition(SAMPLE, 1, 4)

    def test_equal_arguments_rejected(self):
        p = FstPermutation(SAMPLE)
        with pytest.raises(DomainError):
            p.transpose_at(3, 3)
        with pytest.raises(DomainError):
            p.transpose_values(3, 3)
        assert one_line(p) == SAMPLE

    @given(perms.filter(lambda q: len(q) >= 2), st.data())
    @settings(max_examples=200, deadline=None)
    def test_counter_law_and_involution(self, perm, data):
        n = len(perm)
        p = FstPermutation(perm)
        current = list(perm)
        for _ in range(6):
            i = data.draw(st.integers(1, n))
            j = data.draw(st.integers(1, n).filter(lambda x: x != i))
            by_values = data.draw(st.booleans())
            shared = naive.distance(current, i, j) is not None
            before = p.num_cycles()
            if by_values:
                shared = naive.distance(current, naive.inverse_list(current)[i - 1],
                                        naive.inverse_list(current)[j - 1]) is not None
                p.transpose_values(i, j)
                expected = naive.compose_transposition(current, i, j)
            else:
                p.transpose_at(i, j)
                expected = naive.compose_transposition(current, current[i - 1], current[j - 1])
            assert one_line(p) == expected
            assert p.num_cycles() - before == (1 if shared else -1)
            assert p.num_cycles() == len(naive.cycles_of(expected))
            if data.draw(st.booleans()):
                (p.transpose_values if by_values else p.transpose_at)(i, j)
                assert one_line(p) == current
                assert p.num_cycles() == before
            else:
                current = expected
        p.forest.check()


class TestFlip:
    def test_example(self):
        p = FstPermutation(SAMPLE)
        p.flip(11, 9)
        cyc = [c for c in naive.cycles_of(one_line(p)) if 7 in c][0]
        assert naive.canonical(cyc) == [7, 9, 11, 10]

    def test_self_is_noop(self):
        p = FstPermutation(SAMPLE)
        p.flip(6, 6)
        assert one_line(p) == SAMPLE

    def test_whole_cycle(self):
        p = FstPermutation(SAMPLE)
        p.flip(2, 5)  # 2 -> 3 -> 6 -> 8 -> 5 is the whole cycle
        assert one_line(p) == naive.flip(SAMPLE, 2, 5)
        assert p.apply(2) == 5

    def test_cycle_minus_one(self):
        p = FstPermutation(SAMPLE)
        p.flip(3, 5)
        assert one_line(p) == naive.flip(SAMPLE, 3, 5)

    def test_across_cycles_rejected(self):
        p = FstPermutation(SAMPLE)
        with pytest.raises(DomainError):
            p.flip(1, 2)
        assert one_line(p) == SAMPLE

    def test_fixpoint(self):
        p = FstPermutation(SAMPLE)
        p.flip(4, 4)
        assert one_line(p) == SAMPLE

    @given(perms, st.data())
    @settings(max_examples=300, deadline=None)
    def test_matches_naive_and_involution(self, perm, data):
        n = len(perm)
        p = FstPermutation(perm)
        current = list(perm)
        for _ in range(5):
            i = data.draw(st.integers(1, n))
            cyc = [c for c in naive.cycles_of(current) if i in c][0]
            j = data.draw(st.sampled_from(cyc))
            p.flip(i, j)
            flipped = naive.flip(current, i, j)
            assert one_line(p) == flipped
            assert p.num_cycles() == len(naive.cycles_of(current))
            assert all(p.same_cycle(i, v) for v in cyc)
            p.flip(j, i)
            assert one_line(p) == current
            p.flip(i, j)
            current = flipped
        p.forest.check()


class TestCoherence:
    @given(st.integers(1, 64).flatmap(lambda n: st.permutations(range(1, n + 1))), st.data())
    @settings(max_examples=60, deadline=None)
    def test_power(self, perm, data):
        n = len(perm)
        p = FstPermutation(perm)
        i = data.draw(st.integers(1, n))
        for k in range(0, 2 * n + 1):
            assert p.power(i, k) == naive.power(perm, i, k)
            assert p.power(i, -k) == naive.power(perm, i, -k)

    @given(st.integers(1, 64).flatmap(lambda n: st.permutations(range(1, n + 1))), st.data())
    @settings(max_examples=60, deadline=None)
    def test_distance_and_same_cycle(self, perm, data):
        n = len(perm)
        p = FstPermutation(perm)
        for _ in range(10):
            i = data.draw(st.integers(1, n))
            j = data.draw(st.integers(1, n))
            d = p.distance(i, j)
            back = p.distance(j, i)
            same = p.same_cycle(i, j)
            assert same == (d != INFINITY) == (back != INFINITY)
            if d == INFINITY:
                assert naive.distance(perm, i, j) is None
            else:
                assert isinstance(d, int)
                assert p.power(i, d) == j
                assert all(naive.power(perm, i, e) != j for e in range(d))

    @given(perms)
    @settings(max_examples=100, deadline=None)
    def test_cycle_sizes_partition(self, perm):
        p = FstPermutation(perm)
        reps = [naive.canonical(c)[0] for c in naive.cycles_of(list(perm))]
        assert sum(p.cycle_size(r) for r in reps) == len(perm)
        for c in naive.cycles_of(list(perm)):
            assert all(p.cycle_size(v) == len(c) for v in c)


def test_potential_after_build_within_bound():
    for r in (2**8, 2**10):
        p = FstPermutation(list(range(2, r + 1)) + [1])
        assert p.potential() <= 2 * r + 10 * math.log2(r) ** 2
