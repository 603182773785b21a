import itertools
import random

import pytest

from freeprob import exactcount
from freeprob.errors import CrossingPartitionError, SizeMismatchError, UsageError
from freeprob.partitions import (
    Category,
    ColoredWord,
    Partition,
    as_permutation,
    compose,
    count,
    enumerate_partitions,
    even_block_count,
    fatten,
    full_cycle,
    inverse_permutation,
    join,
    kernel,
    leq,
    meet,
    mobius,
    mobius_matrix,
    permutation_cycle_count,
    shrink,
    two_row,
)


def test_restricted_growth_labels():
    p = Partition.from_blocks([[1, 3], [0, 2]])
    assert p.labels == (0, 1, 0, 1)
    assert str(p) == "{1,3}{2,4}"
    assert p.block_sizes() == [2, 2]
    with pytest.raises(UsageError):
        Partition((1, 0))
    with pytest.raises(UsageError):
        Partition.from_blocks([[0, 1], [1, 2]])


def test_noncrossing():
    assert Partition((0, 1, 1, 0)).is_noncrossing()
    assert not Partition((0, 1, 0, 1)).is_noncrossing()
    assert Partition((0, 1, 1, 2, 2, 0)).is_noncrossing()


def test_category_parsing():
    assert Category.parse("Ps:3") == Category("Ps", 3)
    assert str(Category.parse("NCs", s="inf")) == "NCs:inf"
    with pytest.raises(UsageError):
        Category.parse("Ps")
    with pytest.raises(UsageError):
        Category.parse("NC2:2")
    with pytest.raises(UsageError):
        Category("XX")
    assert Category("P2").free == Category("NC2")
    assert Category("MatchNC2").classical == Category("MatchP2")


@pytest.mark.parametrize("k", range(1, 9))
def test_counts_match_closed_forms(k):
    assert count(Category("NC"), k) == exactcount.catalan(k)
    assert count(Category("NC2"), 2 * k) == exactcount.catalan(k)
    assert count(Category("P"), k) == exactcount.bell(k)
    assert count(Category("P2"), 2 * k) == exactcount.odd_double_factorial(k)


def test_enumeration_agrees_with_counts():
    for k in range(1, 7):
        assert len(enumerate_partitions(Category("NC"), k)) == exactcount.catalan(k)
        assert len(enumerate_partitions(Category("P"), k)) == exactcount.bell(k)
    assert len(enumerate_partitions(Category("P2"), 3)) == 0
    assert len(enumerate_partitions(Category("NCeven"), 6)) == 12


def test_enumeration_is_ordered_and_duplicate_free():
    parts = enumerate_partitions(Category("P"), 5)
    assert len(set(parts)) == len(parts)
    assert parts == sorted(parts, key=Partition.sort_key)
    assert parts[0] == Partition.one(5)
    assert parts[-1] == Partition.zero(5)


def test_colored_categories():
    assert count(Category("MatchP2"), "oobb") == 2
    assert count(Category("MatchNC2"), "oobb") == 1
    assert count(Category("MatchNC2"), "obob") == 2
    assert count(Category("MatchP2"), "ooob") == 0
    # blocks of Ps balance to a multiple of s
    assert Category("Ps", 2).contains(Partition.one(2), "oo")
    assert not Category("Ps", 3).contains(Partition.one(2), "oo")
    assert Category("Ps", 3).contains(Partition.one(3), "ooo")
    assert count(Category("Ps", 1), 4) == exactcount.bell(4)


def test_contains_checks_sizes():
    with pytest.raises(SizeMismatchError):
        Category("P").contains(Partition.one(3), "oo")


def test_kernel():
    assert kernel([5, 7, 5, 9]) == Partition((0, 1, 0, 2))
    assert kernel([]) == Partition(())


def test_lattice_absorption_laws():
    rng = random.Random(7)
    for k in range(1, 7):
        parts = enumerate_partitions(Category("P"), k)
        for _ in range(30):
            a, b = rng.choice(parts), rng.choice(parts)
            j, m = join(a, b), meet(a, b)
            assert leq(a, j) and leq(b, j)
            assert leq(m, a) and leq(m, b)
            assert join(a, meet(a, b)) == a
            assert meet(a, join(a, b)) == a


def test_lattice_operations_need_equal_sizes():
    with pytest.raises(SizeMismatchError):
        join(Partition.one(2), Partition.one(3))


@pytest.mark.parametrize("k", range(1, 6))
def test_mobius_inverts_the_order(k):
    parts = enumerate_partitions(Category("P"), k)
    for a, c in itertools.product(parts, repeat=2):
        total = sum(mobius(a, b) for b in parts if leq(b, c))
        assert total == (1 if a == c else 0)


def test_mobius_values():
    assert mobius(Partition.zero(3), Partition.one(3)) == 2
    assert mobius(Partition.zero(4), Partition.one(4)) == -6
    # the noncrossing lattice: signed Catalan numbers
    assert mobius(Partition.zero(4), Partition.one(4), "NC") == -5
    assert mobius(Partition.one(3), Partition.zero(3)) == 0
    with pytest.raises(CrossingPartitionError):
        mobius(Partition((0, 1, 0, 1)), Partition.one(4), "NC")
    with pytest.raises(UsageError):
        mobius(Partition.zero(2), Partition.one(2), "XX")


def test_mobius_matrix_is_unitriangular():
    parts = enumerate_partitions(Category("NC"), 3)
    M = mobius_matrix(parts, "NC")
    assert all(M[i][i] == 1 for i in range(len(parts)))


def test_fatten_and_shrink():
    assert fatten(Partition.one(1)) == Partition((0, 0))
    for k in range(1, 6):
        fattened = {fatten(p) for p in enumerate_partitions(Category("NC"), k)}
        assert fattened == set(enumerate_partitions(Category("NC2"), 2 * k))
        assert all(shrink(q) in enumerate_partitions(Category("NC"), k) for q in fattened)
    for p in enumerate_partitions(Category("NC"), 4):
        assert shrink(fatten(p)) == p
    with pytest.raises(CrossingPartitionError):
        fatten(Partition((0, 1, 0, 1)))


def test_even_block_count():
    assert even_block_count(Partition.one(2)) == 1
    assert even_block_count(Partition.zero(3)) == 0
    assert even_block_count(Partition.from_blocks([[0, 1], [2, 3, 4, 5]])) == 2


@pytest.mark.parametrize("p", range(1, 7))
def test_cycle_identities_on_noncrossing_partitions(p):
    gamma = full_cycle(p)
    for sigma in enumerate_partitions(Category("NC"), p):
        perm = as_permutation(sigma)
        assert permutation_cycle_count(compose(perm, inverse_permutation(gamma))) - 1 == p - sigma.block_count
        assert permutation_cycle_count(compose(perm, gamma)) - 1 == even_block_count(sigma)


def test_two_row_split():
    split = two_row(Partition((0, 1, 1, 0)), 2)
    assert split.upper == (0, 1)
    assert split.lower == (1, 0)
    assert split.l == 2


def test_colored_word():
    w = ColoredWord.parse("○●o")
    assert str(w) == "obo"
    assert w.balance([0, 1, 2]) == 1
    with pytest.raises(UsageError):
        ColoredWord("oxb")
