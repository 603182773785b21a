"""Exact special numbers: Catalan, Bell, Stirling, Fuss-Catalan/Narayana, derangements, poker, spheres.

All rational results are `fractions.Fraction`.

Double factorials come in two flavours here. `double_factorial(m)` follows the
shifted convention m!! = (m-1)(m-3)(m-5)..., used by the sphere integrals and
volumes. `odd_double_factorial(k)` is the usual 1*3*5*...*(2k-1), the number of
pairings of 2k points.
"""
import math
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Dict, Iterable, Sequence, Tuple, Union

from .errors import UsageError

Number = Union[int, Fraction]


def binomial(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def generalized_binomial(x: Number, j: int) -> Fraction:
    """x(x-1)...(x-j+1)/j! for rational x."""
    out = Fraction(1)
    for i in range(j):
        out *= Fraction(x) - i
    return out / math.factorial(j)


def double_factorial(m: int) -> int:
    """m!! = (m-1)(m-3)... down to 1 or 2; 0!! = 1!! = 1."""
    out = 1
    j = m - 1
    while j > 1:
        out *= j
        j -= 2
    return out


def odd_double_factorial(k: int) -> int:
    """(2k-1)!! in the usual sense, the number of pairings of 2k points."""
    out = 1
    for j in range(1, 2 * k, 2):
        out *= j
    return out


def catalan(k: int) -> int:
    if k < 0:
        raise UsageError("k must be nonnegative")
    return math.comb(2 * k, k) // (k + 1)


@lru_cache(maxsize=None)
def bell(k: int) -> int:
    if k < 0:
        raise UsageError("k must be nonnegative")
    if k == 0:
        return 1
    return sum(math.comb(k - 1, s) * bell(k - 1 - s) for s in range(k))


@lru_cache(maxsize=None)
def stirling2(r: int, b: int) -> int:
    if r == 0 and b == 0:
        return 1
    if r <= 0 or b <= 0 or b > r:
        return 0
    return b * stirling2(r - 1, b) + stirling2(r - 1, b - 1)


def narayana(k: int, b: int) -> int:
    """Number of noncrossing partitions of k points with b blocks."""
    if k == 0:
        return 1 if b == 0 else 0
    if b < 1 or b > k:
        return 0
    return math.comb(k, b) * math.comb(k, b - 1) // k


def touchard(k: int, t: Number) -> Number:
    """sum_b S(k,b) t^b, the k-th moment of the Poisson law of parameter t."""
    return sum(stirling2(k, b) * t ** b for b in range(k + 1))


def bell_log_growth(k: int) -> float:
    """log(B_k) / (k log k); drifts slowly towards 1."""
    if k < 2:
        raise UsageError("k must be at least 2")
    return math.log(bell(k)) / (k * math.log(k))


def fuss_catalan(s: Number, k: int) -> Fraction:
    """binomial(sk+k, k)/(sk+1), in the product form (sk+2)(sk+3)...(sk+k)/k!, valid for rational s."""
    if k < 0:
        raise UsageError("k must be nonnegative")
    s = Fraction(s)
    out = Fraction(1)
    for j in range(2, k + 1):
        out *= s * k + j
    return out / math.factorial(k)


def fuss_narayana(s: Number, k: int, t: Number) -> Number:
    if k < 1:
        raise UsageError("k must be positive")
    s = Fraction(s)
    total: Number = 0
    for b in range(1, k + 1):
        coef = Fraction(binomial(k - 1, b - 1)) * generalized_binomial(s * k, b - 1) / b
        total += coef * t ** b
    return total


def derangements(m: int) -> int:
    if m < 0:
        raise UsageError("m must be nonnegative")
    d = [1, 0]
    for j in range(2, m + 1):
        d.append((j - 1) * (d[j - 1] + d[j - 2]))
    return d[m]


def derangement_profile(N: int, r: int) -> Fraction:
    """Probability that a uniform permutation of N points has exactly r fixed points."""
    if not 0 <= r <= N:
        raise UsageError("need 0 <= r <= N")
    return Fraction(binomial(N, r) * derangements(N - r), math.factorial(N))


# poker on the 32-card deck: ranks 7,8,9,10,J,Q,K,A (0..7), four suits

POKER_RANKS = 8
POKER_SUITS = 4
POKER_CLASSES = (
    "one_pair", "two_pairs", "three_of_a_kind", "straight",
    "flush", "full_house", "four_of_a_kind", "straight_flush",
)
# the ace only plays high, so the straights start at 7, 8, 9 or 10
_STRAIGHTS = POKER_RANKS - 4

Card = Tuple[int, int]


def classify_poker_hand(hand: Sequence[Card]) -> str:
    """Highest class the five (rank, suit) cards belong to, or 'high_card'."""
    ranks = Counter(r for r, _ in hand)
    shape = sorted(ranks.values(), reverse=True)
    flush = len({s for _, s in hand}) == 1
    straight = len(ranks) == 5 and max(ranks) - min(ranks) == 4
    if straight and flush:
        return "straight_flush"
    if shape[0] == 4:
        return "four_of_a_kind"
    if shape == [3, 2]:
        return "full_house"
    if flush:
        return "flush"
    if straight:
        return "straight"
    if shape[0] == 3:
        return "three_of_a_kind"
    if shape == [2, 2, 1]:
        return "two_pairs"
    if shape[0] == 2:
        return "one_pair"
    return "high_card"


def poker_hand_counts() -> Dict[str, int]:
    """Full enumeration of all binomial(32, 5) hands."""
    deck = list(product(range(POKER_RANKS), range(POKER_SUITS)))
    counts = Counter(classify_poker_hand(h) for h in combinations(deck, 5))
    return {name: counts.get(name, 0) for name in POKER_CLASSES + ("high_card",)}


def poker_counts_by_formula() -> Dict[str, int]:
    R, S = POKER_RANKS, POKER_SUITS
    return {
        "one_pair": R * binomial(S, 2) * binomial(R - 1, 3) * S ** 3,
        "two_pairs": binomial(R, 2) * binomial(S, 2) ** 2 * (R - 2) * S,
        "three_of_a_kind": R * binomial(S, 3) * binomial(R - 1, 2) * S ** 2,
        "straight": _STRAIGHTS * (S ** 5 - S),
        "flush": S * (binomial(R, 5) - _STRAIGHTS),
        "full_house": R * binomial(S, 3) * (R - 1) * binomial(S, 2),
        "four_of_a_kind": R * (R - 1) * S,
        "straight_flush": _STRAIGHTS * S,
    }


def poker_probabilities() -> Dict[str, Fraction]:
    total = binomial(POKER_RANKS * POKER_SUITS, 5)
    return {name: Fraction(n, total) for name, n in poker_counts_by_formula().items()}


def sphere_volume_ratio(N: int) -> Tuple[Fraction, int]:
    """(c, e) with V_N / 2^N = c (pi/2)^e for the unit ball of R^N."""
    if N < 1:
        raise UsageError("N must be positive")
    return Fraction(1, double_factorial(N + 1)), N // 2


def sphere_volume(N: int) -> float:
    c, e = sphere_volume_ratio(N)
    return 2 ** N * float(c) * (math.pi / 2) ** e


def as_fraction_strings(values: Iterable[Number]):
    return [fraction_str(v) for v in values]


def fraction_str(v: Number) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
