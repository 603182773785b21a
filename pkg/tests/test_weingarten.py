import itertools
import math
from fractions import Fraction

import pytest

from freeprob import exactcount
from freeprob.errors import SingularGramError, SizeMismatchError, UsageError
from freeprob.linalg import is_identity
from freeprob.partitions import Category, Partition, enumerate_partitions
from freeprob.weingarten import (
    EasyGroup,
    basis,
    gram,
    gram_determinant,
    gram_determinant_formula,
    haar_row_norm,
    integrate_monomial,
    integrate_word,
    on_two_generic_coordinates,
    parse_monomial,
    sn_closed_form,
    sn_weingarten_exact,
    sn_weingarten_leading,
    sphere_integrate,
    truncated_character_moments,
    truncated_character_stirling,
    weingarten,
    weingarten_asymptotics,
)


def test_group_parsing():
    assert EasyGroup.parse("O+") == EasyGroup("O", free=True)
    assert str(EasyGroup.parse("Hs:3")) == "Hs:3"
    assert str(EasyGroup.parse("Hs+", s="inf")) == "Hs+:inf"
    assert EasyGroup("U", free=True).category() == Category("MatchNC2")
    with pytest.raises(UsageError):
        EasyGroup.parse("Hs")
    with pytest.raises(UsageError):
        EasyGroup.parse("Q")


def test_colored_groups_split_integer_words():
    assert str(EasyGroup("U").word(4)) == "oobb"
    with pytest.raises(UsageError):
        EasyGroup("U").word(3)


def test_gram_matrix_of_orthogonal_group():
    G = gram(EasyGroup("O"), 4, 5)
    assert G.shape == (3, 3)
    assert all(G[i, i] == 25 for i in range(3))
    assert G[0, 1] == 5


@pytest.mark.parametrize("k", range(1, 5))
def test_gram_determinant_formula(k):
    for N in range(1, 7):
        assert gram_determinant(k, N) == gram_determinant_formula(k, N)
    # singular as soon as N < k
    if k > 1:
        assert gram_determinant(k, k - 1) == 0


def test_weingarten_inverts_gram():
    for group in (EasyGroup("O"), EasyGroup("O", True), EasyGroup("S"), EasyGroup("H", True)):
        table = weingarten(group, 4, 4)
        assert is_identity(table.gram.dot(table.wg))


def test_orthogonal_weingarten_table():
    for N in (3, 5, 10):
        table = weingarten(EasyGroup("O"), 4, N)
        scale = Fraction(1, N * (N - 1) * (N + 2))
        assert table.wg[0, 0] == scale * (N + 1)
        assert table.wg[0, 1] == -scale


def test_singular_gram_raises():
    with pytest.raises(SingularGramError):
        weingarten(EasyGroup("S"), 3, 2)


def test_orthogonal_integrals():
    O = EasyGroup("O")
    N = 4
    assert integrate_monomial(O, N, [1, 1], [1, 1]) == Fraction(1, N)
    assert integrate_monomial(O, N, [1] * 4, [1] * 4) == Fraction(3, N * (N + 2))
    assert integrate_monomial(O, N, [1] * 4, [1, 1, 2, 2]) == Fraction(1, N * (N + 2))
    assert integrate_monomial(O, N, [1, 1, 2, 2], [1, 1, 2, 2]) == Fraction(N + 1, N * (N - 1) * (N + 2))
    assert integrate_monomial(O, N, [1, 1, 2, 2], [1, 2, 1, 2]) == -Fraction(1, N * (N - 1) * (N + 2))
    assert integrate_monomial(O, N, [1], [1]) == 0
    assert integrate_monomial(O, N, [], []) == 1


def test_unitary_integrals():
    U = EasyGroup("U")
    N = 3
    assert integrate_word(U, N, "u[1,1]u[1,1]*") == Fraction(1, N)
    assert integrate_word(U, N, "u[1,1]u[1,1]u[1,1]*u[1,1]*") == Fraction(2, N * (N + 1))
    assert integrate_word(U, N, "u[1,1]u[1,1]") == 0
    with pytest.raises(UsageError):
        integrate_monomial(U, N, [1, 1], [1, 1])


def test_rows_are_unit_vectors():
    for group in (EasyGroup("O"), EasyGroup("U"), EasyGroup("S"), EasyGroup("O", True), EasyGroup("H")):
        assert haar_row_norm(group, 4) == 1


def test_symmetric_group_matches_kernel_formula():
    S = EasyGroup("S")
    N = 5
    for k in range(1, 4):
        for a in enumerate_partitions(Category("P"), k):
            for b in enumerate_partitions(Category("P"), k):
                rows = [x + 1 for x in a.labels]
                cols = [x + 1 for x in b.labels]
                assert integrate_monomial(S, N, rows, cols) == sn_closed_form(N, rows, cols)


def test_integration_argument_checks():
    O = EasyGroup("O")
    with pytest.raises(SizeMismatchError):
        integrate_monomial(O, 3, [1, 2], [1])
    with pytest.raises(UsageError):
        integrate_monomial(O, 3, [1, 4], [1, 1])
    with pytest.raises(UsageError):
        parse_monomial("u[1,1] v(2,2)")


def test_parse_monomial():
    rows, cols, word = parse_monomial("u[1,2]u[3,4]*")
    assert rows == [1, 3] and cols == [2, 4] and str(word) == "ob"


def test_sphere_integrals():
    assert sphere_integrate("real", 3, [2]) == Fraction(1, 3)
    assert sphere_integrate("real", 3, [4]) == Fraction(1, 5)
    assert sphere_integrate("real", 3, [2, 2]) == Fraction(1, 15)
    assert sphere_integrate("real", 3, [1]) == 0
    assert sphere_integrate("complex", 2, [1]) == Fraction(1, 2)
    assert sphere_integrate("complex", 2, [1, 1]) == Fraction(1, 6)
    assert sphere_integrate("complex", 2, [1], [2]) == 0
    # the first column of O_N is uniform on the sphere
    assert sphere_integrate("real", 4, [4]) == integrate_monomial(EasyGroup("O"), 4, [1] * 4, [1] * 4)
    with pytest.raises(UsageError):
        sphere_integrate("quaternion", 2, [2])


def test_two_generic_coordinates():
    O = EasyGroup("O")
    for N in (3, 4, 5):
        assert on_two_generic_coordinates(N, 2, 0) == Fraction(1, N)
        assert on_two_generic_coordinates(N, 2, 2) == integrate_monomial(O, N, [1, 1, 2, 2], [2, 2, 1, 1])
    assert on_two_generic_coordinates(4, 1, 2) == 0


def test_truncated_characters():
    S = EasyGroup("S")
    for N in (4, 5, 6):
        for t in (Fraction(1), Fraction(1, 2)):
            s = math.floor(t * N)
            for k in range(1, 4):
                assert truncated_character_moments(S, N, t, k) == truncated_character_stirling(N, s, k)
    # the full character of S_N counts fixed points, so its first moments are Bell numbers
    assert [truncated_character_moments(S, 6, 1, k) for k in range(1, 5)] == [1, 2, 5, 15]
    with pytest.raises(UsageError):
        truncated_character_moments(S, 4, Fraction(3, 2), 2)


def test_sn_weingarten_closed_sum():
    N = 6
    table = weingarten(EasyGroup("S"), 3, N)
    for a, pi in enumerate(table.partitions):
        for b, nu in enumerate(table.partitions):
            assert table.wg[a, b] == sn_weingarten_exact(N, pi, nu)


def test_sn_weingarten_leading_order():
    pi, nu = Partition((0, 0, 1)), Partition((0, 1, 1))
    estimate = sn_weingarten_leading(pi, nu)
    assert estimate.exponent == -3
    N = 10 ** 6
    exact = sn_weingarten_exact(N, pi, nu)
    assert float(exact / estimate.leading_term(N)) == pytest.approx(1.0, rel=1e-4)


def test_weingarten_asymptotics():
    O = EasyGroup("O")
    pairings = basis(O, 4)
    same = weingarten_asymptotics(O, pairings[0], pairings[0], 4)
    assert same.exponent == -2 and same.coefficient == 1
    other = weingarten_asymptotics(O, pairings[0], pairings[1], 4)
    assert other.exponent == -3 and other.coefficient is None
    assert other.leading_term(10) is None
    with pytest.raises(UsageError):
        weingarten_asymptotics(O, Partition.one(4), pairings[0], 4)

    # comparable pairs in P(3) carry the Mobius function
    S = EasyGroup("S")
    est = weingarten_asymptotics(S, Partition.zero(3), Partition.one(3), 3)
    assert est.exponent == -3 and est.coefficient == 2


def test_gram_counts_basis_size():
    assert len(basis(EasyGroup("O", True), 6)) == exactcount.catalan(3)
    assert len(basis(EasyGroup("H"), 4)) == 4
    assert len(basis(EasyGroup("B"), 3)) == 4


@pytest.mark.parametrize("group", ["S", "S+", "O", "O+", "B", "B+", "H", "H+", "U", "U+", "K", "K+",
                                   "Hs:2", "Hs+:2"])
@pytest.mark.parametrize("N", [5, 7])
def test_weingarten_inverts_gram_for_every_series(group, N):
    table = weingarten(EasyGroup.parse(group), 4, N)
    assert table.size > 0
    assert is_identity(table.gram.dot(table.wg))
    assert is_identity(table.wg.dot(table.gram))


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("N", [3, 4, 6])
def test_symmetric_and_free_symmetric_agree_below_four(k, N):
    # every partition of at most three points is noncrossing
    classical = weingarten(EasyGroup("S"), k, N)
    free = weingarten(EasyGroup("S", free=True), k, N)
    assert sorted(classical.partitions, key=str) == sorted(free.partitions, key=str)
    for pi in classical.partitions:
        for nu in classical.partitions:
            assert classical.entry(pi, nu) == free.entry(pi, nu)


@pytest.mark.parametrize("colors", ["o", "bb", "oob", "ooo"])
def test_unitary_integrals_vanish_on_unbalanced_words(colors):
    U, N = EasyGroup("U"), 4
    k = len(colors)
    for rows in itertools.product(range(1, N + 1), repeat=k):
        for cols in itertools.product(range(1, N + 1), repeat=k):
            assert integrate_monomial(U, N, rows, cols, colors) == 0


def test_orthogonal_rows_and_columns_are_orthonormal():
    O, N = EasyGroup("O"), 5
    for i, j in itertools.product(range(1, N + 1), repeat=2):
        delta = int(i == j)
        assert sum(integrate_monomial(O, N, [i, j], [r, r]) for r in range(1, N + 1)) == delta
        assert sum(integrate_monomial(O, N, [r, r], [i, j]) for r in range(1, N + 1)) == delta


@pytest.mark.parametrize("N", [4, 5, 7])
def test_free_orthogonal_character_counts_noncrossing_pairings(N):
    O_plus = EasyGroup("O", free=True)
    assert truncated_character_moments(O_plus, N, 1, 2) == 1
    assert truncated_character_moments(O_plus, N, 1, 4) == 2
    assert truncated_character_moments(O_plus, N, 1, 6) == 5
