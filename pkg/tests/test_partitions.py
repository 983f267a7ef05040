import pytest

import schurhad as sh
from schurhad.errors import BudgetExceeded
from schurhad.partitions import Partition, classify, coarsenings, double_factorial_odd

from oracles import oracle_is_crossing


def test_canonical_form_and_validation():
    p = Partition.from_blocks([[3, 4], [2, 1]])
    assert p.blocks == ((1, 2), (3, 4))
    assert p.ground_size == 4 and p.size == 2
    with pytest.raises(ValueError):
        Partition.from_blocks([[1, 2], [2, 3]])  # overlap
    with pytest.raises(ValueError):
        Partition.from_blocks([[1, 3]])  # gap
    with pytest.raises(ValueError):
        Partition.from_blocks([[1], []])


def test_string_round_trip():
    p = Partition.from_string("1,4/2,3")
    assert p.to_string() == "1,4/2,3"
    assert Partition.from_string("2,3/1,4") == p
    with pytest.raises(ValueError):
        Partition.from_string("1,x/2")


def test_from_labeled_relabels():
    p, labels = Partition.from_labeled([[2, 9, 11], [4, 14], [5]])
    assert labels == (2, 4, 5, 9, 11, 14)
    assert p.blocks == ((1, 4, 5), (2, 6), (3,))


def test_pair_partition_counts():
    for k in range(1, 6):
        assert len(sh.enumerate_pair_partitions(2 * k)) == double_factorial_odd(2 * k)
    assert len(sh.enumerate_pair_partitions(4)) == 3
    assert len(sh.enumerate_pair_partitions(6)) == 15


def test_pair_partitions_lexicographic():
    got = [p.blocks for p in sh.enumerate_pair_partitions(4)]
    assert got == sorted(got)
    assert got[0] == ((1, 2), (3, 4))


def test_pair_partitions_validation_and_budget():
    with pytest.raises(ValueError):
        sh.enumerate_pair_partitions(3)
    with pytest.raises(BudgetExceeded):
        sh.enumerate_pair_partitions(14)


def test_nc2_counts_match_catalan():
    for k in range(1, 9):
        nc = sh.enumerate_nc2(2 * k)
        assert len(nc) == sh.catalan(k)
        assert all(p.is_pair_partition() and sh.is_noncrossing(p) for p in nc)


def test_nc2_examples():
    assert {p.to_string() for p in sh.enumerate_nc2(4)} == {"1,2/3,4", "1,4/2,3"}
    assert len(sh.enumerate_nc2(2)) == 1
    with pytest.raises(ValueError):
        sh.enumerate_nc2(5)
    with pytest.raises(BudgetExceeded):
        sh.enumerate_nc2(18)


def test_is_noncrossing_examples():
    assert not sh.is_noncrossing(Partition.from_string("1,3/2,4"))
    assert sh.is_noncrossing(Partition.from_string("1,2/3,4"))
    p0, _ = Partition.from_labeled([[2, 9, 11], [4, 14], [5]])
    assert not sh.is_noncrossing(p0)


def test_is_noncrossing_matches_oracle():
    for k in (4, 6):
        for p in sh.enumerate_partitions(k):
            assert sh.is_noncrossing(p) == (not oracle_is_crossing(p.blocks))


def test_classify_examples():
    c = classify(Partition.from_string("1,2/3,4"))
    assert c.primaries == (1, 3)
    assert c.generating_positions == frozenset({1, 2, 4})
    c = classify(Partition.from_string("1,3/2,4"))
    assert c.primaries == (1, 2)
    assert c.generating_positions == frozenset({1, 2, 3})
    p0, _ = Partition.from_labeled([[2, 9, 11], [4, 14], [5]])
    assert classify(p0).primaries == (1, 2, 3)  # block minima after relabeling


def test_generating_count_is_size_plus_one():
    for k in (2, 4, 6):
        for p in sh.enumerate_pair_partitions(k):
            c = classify(p)
            assert len(c.generating_positions) == p.size + 1
            assert set(c.primaries) | set(c.secondaries) == set(range(1, k + 1))


def test_catalan_values():
    assert [sh.catalan(m) for m in range(7)] == [1, 1, 2, 5, 14, 42, 132]
    with pytest.raises(BudgetExceeded):
        sh.catalan(31)


def test_good_block_removal_recursion():
    # every NC2 partition has an adjacent block whose removal stays NC2
    def shrink(p):
        if p.size == 0:
            return True
        good = [b for b in p.blocks if b[1] == b[0] + 1]
        if not good:
            return False
        rest = [b for b in p.blocks if b != good[0]]
        if not rest:
            return True
        reduced, _ = Partition.from_labeled(rest)
        return sh.is_noncrossing(reduced) and shrink(reduced)

    for k in range(1, 6):
        assert all(shrink(p) for p in sh.enumerate_nc2(2 * k))


def test_nc2_blocks_pair_odd_with_even():
    for k in range(1, 6):
        for p in sh.enumerate_nc2(2 * k):
            assert all((r + s) % 2 == 1 for r, s in p.blocks)


def test_enumerate_partitions_bell_numbers():
    assert [len(sh.enumerate_partitions(k)) for k in (1, 2, 3, 4, 5)] == [1, 2, 5, 15, 52]


def test_coarsenings():
    p = Partition.from_string("1,2/3,4")
    cs = coarsenings(p)
    assert Partition.from_string("1,2,3,4") in cs
    assert p in cs
    assert len(cs) == 2
