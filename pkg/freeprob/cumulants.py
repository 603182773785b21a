"""Moment/cumulant conversion over P(n) (classical) and NC(n) (free), and the Bercovici-Pata map."""
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Sequence, Tuple, Union

import structlog

from .errors import UsageError
from .partitions import Category, WordLike, as_word, enumerate_partitions

logger = structlog.get_logger(__name__)

Number = Union[int, Fraction, float]
FLAVORS = ("classical", "free")


def _check_flavor(flavor: str) -> str:
    if flavor not in FLAVORS:
        raise UsageError(f"flavor must be one of {FLAVORS}, got {flavor!r}")
    return flavor


@dataclass(frozen=True)
class MomentSequence:
    """M_1..M_n; M_0 = 1 is implicit."""

    values: Tuple[Number, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    @property
    def order(self) -> int:
        return len(self.values)

    def moment(self, n: int) -> Number:
        return 1 if n == 0 else self.values[n - 1]

    def truncate(self, order: int) -> "MomentSequence":
        return MomentSequence(self.values[:order])


@dataclass(frozen=True)
class CumulantSequence:
    values: Tuple[Number, ...]
    flavor: str = "classical"

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        _check_flavor(self.flavor)

    @property
    def order(self) -> int:
        return len(self.values)

    def reinterpret(self, flavor: str) -> "CumulantSequence":
        return CumulantSequence(self.values, flavor)


def integer_partitions(n: int, largest: int = None) -> Iterator[Tuple[int, ...]]:
    """Partitions of n as nonincreasing tuples."""
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def moment_cumulant_coefficients(flavor: str, n: int) -> Dict[Tuple[int, ...], int]:
    """How many partitions of P(n) (classical) or NC(n) (free) have each block-size type."""
    _check_flavor(flavor)
    table = {}
    for shape in integer_partitions(n):
        mult = Counter(shape)
        denom = 1
        for m in mult.values():
            denom *= math.factorial(m)
        if flavor == "classical":
            for size in shape:
                denom *= math.factorial(size)
            table[shape] = math.factorial(n) // denom
        else:
            table[shape] = math.factorial(n) // (math.factorial(n - len(shape) + 1) * denom)
    return table


def _block_product(shape: Sequence[int], c: Sequence[Number]) -> Number:
    out: Number = 1
    for size in shape:
        out *= c[size - 1]
    return out


def moments_from_cumulants(c: CumulantSequence) -> MomentSequence:
    values = []
    for n in range(1, c.order + 1):
        table = moment_cumulant_coefficients(c.flavor, n)
        values.append(sum(coef * _block_product(shape, c.values) for shape, coef in table.items()))
    return MomentSequence(tuple(values))


def cumulants_from_moments(m: MomentSequence, flavor: str = "classical") -> CumulantSequence:
    _check_flavor(flavor)
    c: List[Number] = []
    for n in range(1, m.order + 1):
        table = moment_cumulant_coefficients(flavor, n)
        # every shape except (n,) involves only lower cumulants
        rest = sum(coef * _block_product(shape, c) for shape, coef in table.items() if shape != (n,))
        c.append(m.values[n - 1] - rest)
    return CumulantSequence(tuple(c), flavor)


def bercovici_pata(m: MomentSequence, direction: str = "classical_to_free") -> MomentSequence:
    """Keep the cumulant sequence, switch its flavor, and re-expand."""
    if direction == "classical_to_free":
        source, target = "classical", "free"
    elif direction == "free_to_classical":
        source, target = "free", "classical"
    else:
        raise UsageError("direction must be 'classical_to_free' or 'free_to_classical'")
    return moments_from_cumulants(cumulants_from_moments(m, source).reinterpret(target))


def block_count_polynomial(cat: Category, word: WordLike) -> List[int]:
    """Coefficients p_b = #{pi in D(word) : |pi| = b}, b = 0..k."""
    w = as_word(word)
    coeffs = [0] * (len(w) + 1)
    for p in enumerate_partitions(cat, w):
        coeffs[p.block_count] += 1
    return coeffs


def partition_weighted_moment(cat: Category, t: Number, word: WordLike) -> Number:
    """sum over pi in D(word) of t^|pi|."""
    return sum(n * t ** b for b, n in enumerate(block_count_polynomial(cat, word)) if n)


# cumulants of asymptotic truncated characters: k_n = t when n is in the group's set L, else 0
CHARACTER_SETS = {
    "S": lambda n: True,
    "O": lambda n: n == 2,
    "H": lambda n: n % 2 == 0,
    "B": lambda n: n in (1, 2),
}
CHARACTER_CATEGORIES = {"S": "P", "O": "P2", "H": "Peven", "B": "P12"}


def character_cumulants(group: str, t: Number, order: int, free: bool = False) -> CumulantSequence:
    if group not in CHARACTER_SETS:
        raise UsageError(f"character cumulants are available for {sorted(CHARACTER_SETS)}, got {group!r}")
    rule = CHARACTER_SETS[group]
    values = tuple(t if rule(n) else 0 for n in range(1, order + 1))
    return CumulantSequence(values, "free" if free else "classical")


def character_moments(group: str, t: Number, order: int, free: bool = False) -> MomentSequence:
    if group not in CHARACTER_CATEGORIES:
        raise UsageError(f"character moments are available for {sorted(CHARACTER_CATEGORIES)}, got {group!r}")
    cat = Category(CHARACTER_CATEGORIES[group])
    if free:
        cat = cat.free
    return MomentSequence(tuple(partition_weighted_moment(cat, t, k) for k in range(1, order + 1)))
