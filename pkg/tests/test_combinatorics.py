import math
from fractions import Fraction

import pytest

from peaklab.combinatorics import (
    CycleType,
    class_size,
    moebius,
    partitions_of,
    stirling2,
    stirling2_row,
)
from peaklab.errors import SizeLimitError


def test_cycle_type_basics():
    lam = CycleType({3: 1, 1: 2})
    assert lam.n == 5
    assert lam.parts() == (3, 1, 1)
    assert lam.mult(1) == 2
    assert lam.mult(7) == 0
    assert lam.fixed_points == 2
    assert lam.fixed_point_density == Fraction(2, 5)
    assert str(lam) == "1^2 3^1"
    assert lam.items() == ((1, 2), (3, 1))


def test_cycle_type_normalization():
    # repeated pairs accumulate, zero multiplicities are dropped
    assert CycleType([(2, 1), (2, 1)]) == CycleType({2: 2})
    assert CycleType({2: 1, 5: 0, 1: 1}) == CycleType.from_parts([2, 1])
    assert CycleType.from_parts([1, 3, 1]) == CycleType({3: 1, 1: 2})
    assert hash(CycleType({2: 2})) == hash(CycleType([(2, 2)]))


def test_cycle_type_rejects_bad_input():
    with pytest.raises(ValueError):
        CycleType({})
    with pytest.raises(ValueError):
        CycleType({0: 2})
    with pytest.raises(ValueError):
        CycleType({2: -1})
    with pytest.raises(ValueError):
        CycleType.from_parts([])


def test_class_sizes_sum_to_group_order():
    for n in range(1, 13):
        assert sum(class_size(lam) for lam in partitions_of(n)) == math.factorial(n)


def test_class_size_examples():
    assert class_size(CycleType({1: 4})) == 1
    assert class_size(CycleType({4: 1})) == 6
    assert class_size(CycleType({2: 1, 1: 2})) == 6
    big = CycleType({2: 250, 4: 125})
    expected = math.factorial(1000) // (
        2**250 * math.factorial(250) * 4**125 * math.factorial(125)
    )
    assert class_size(big) == expected


def test_stirling_against_closed_forms():
    for n in range(2, 51):
        assert stirling2(n, n - 1) == math.comb(n, 2)
        assert stirling2(n, n - 2) == 2 * math.comb(n, 4) + math.comb(n + 1, 4)


def test_stirling_reconstructs_powers():
    # sum_k S(n, k) a(a-1)...(a-k+1) = a^n
    for n in range(1, 51):
        row = stirling2_row(n)
        for a in range(11):
            assert sum(row[k] * math.perm(a, k) for k in range(n + 1)) == a**n


def test_stirling_bounds_and_guard():
    assert stirling2(5, 7) == 0
    assert stirling2(5, 0) == 0
    assert stirling2(0, 0) == 1
    with pytest.raises(ValueError):
        stirling2(-1, 2)
    with pytest.raises(SizeLimitError):
        stirling2(10_001, 3)


def test_moebius_values_and_multiplicativity():
    known = {1: 1, 2: -1, 3: -1, 4: 0, 5: -1, 6: 1, 7: -1, 8: 0, 9: 0,
             10: 1, 12: 0, 30: -1, 210: 1}
    for d, expect in known.items():
        assert moebius(d) == expect
    for a in range(1, 40):
        for b in range(1, 40):
            if math.gcd(a, b) == 1:
                assert moebius(a * b) == moebius(a) * moebius(b)
    with pytest.raises(ValueError):
        moebius(0)


def test_partition_count_and_order():
    def pcount(n):
        # classic coin-style DP, independent of the generator under test
        table = [1] + [0] * n
        for part in range(1, n + 1):
            for v in range(part, n + 1):
                table[v] += table[v - part]
        return table[n]

    assert len(list(partitions_of(4))) == 5
    assert len(list(partitions_of(8))) == 22
    for n in range(1, 15):
        assert len(list(partitions_of(n))) == pcount(n)
    seqs = [lam.parts() for lam in partitions_of(8)]
    assert seqs == sorted(seqs, reverse=True)
    assert len(set(seqs)) == len(seqs)
    for lam in partitions_of(9):
        assert lam.n == 9


def test_partition_guard():
    with pytest.raises(SizeLimitError):
        list(partitions_of(31))
