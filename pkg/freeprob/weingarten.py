"""Gram and Weingarten matrices over partition categories, and Haar integration on easy groups.

For an easy group G with category D and a word of length k, the Gram matrix is
G(pi, nu) = N^|pi v nu| over D(k), the Weingarten matrix is its exact inverse, and

    int_G g_{i1 j1}^{e1} ... g_{ik jk}^{ek} dg = sum_{pi, nu} delta_pi(i) delta_nu(j) W(pi, nu)

where delta_pi(i) = 1 when the indices are constant on the blocks of pi.
"""
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from . import exactcount
from .cache import TableCache, create_default_cache
from .errors import SingularGramError, SizeMismatchError, UsageError
from .linalg import determinant, fraction_matrix, inverse_matrix, trace
from .partitions import (
    INFINITY,
    Category,
    ColoredWord,
    Partition,
    WordLike,
    as_word,
    enumerate_partitions,
    format_s,
    join,
    kernel,
    leq,
    meet,
    mobius,
    parse_s,
)

logger = structlog.get_logger(__name__)

SERIES = ("S", "O", "U", "B", "H", "K", "Hs")
_CLASSICAL_CATEGORY = {"S": "P", "O": "P2", "U": "MatchP2", "B": "P12", "H": "Peven", "K": "MatchPeven", "Hs": "Ps"}
_COLORED = ("U", "K", "Hs")


@dataclass(frozen=True)
class EasyGroup:
    series: str
    free: bool = False
    s: Union[int, float] = 1

    def __post_init__(self):
        if self.series not in SERIES:
            raise UsageError(f"unknown group series {self.series!r}; expected one of {', '.join(SERIES)}")
        if self.series == "Hs":
            object.__setattr__(self, "s", parse_s(self.s))

    @classmethod
    def parse(cls, text: str, free: bool = False, s=None) -> "EasyGroup":
        """'O', 'O+', 'Hs:3', 'Hs+:inf'."""
        name, _, tail = text.strip().partition(":")
        if name.endswith("+"):
            name, free = name[:-1], True
        if name == "Hs":
            raw = tail or s
            if raw in (None, ""):
                raise UsageError("group Hs needs a parameter s")
            return cls("Hs", free, parse_s(raw))
        if tail:
            raise UsageError(f"group {name} takes no parameter")
        return cls(name, free)

    @property
    def is_colored(self) -> bool:
        return self.series in _COLORED

    def category(self) -> Category:
        base = Category(_CLASSICAL_CATEGORY[self.series], self.s if self.series == "Hs" else 1)
        return base.free if self.free else base

    def word(self, k: WordLike) -> ColoredWord:
        """An integer k on a colored group means k/2 white letters followed by k/2 black ones."""
        if isinstance(k, int) and self.series in ("U", "K"):
            if k % 2:
                raise UsageError(f"group {self} needs an even word length or an explicit colored word")
            return ColoredWord("o" * (k // 2) + "b" * (k // 2))
        return as_word(k)

    def __str__(self) -> str:
        name = self.series + ("+" if self.free else "")
        return f"{name}:{format_s(self.s)}" if self.series == "Hs" else name


@dataclass
class WeingartenTable:
    group: EasyGroup
    word: ColoredWord
    N: int
    partitions: List[Partition]
    gram: np.ndarray
    wg: np.ndarray

    @property
    def size(self) -> int:
        return len(self.partitions)

    def index(self, p: Partition) -> int:
        return self.partitions.index(p)

    def entry(self, pi: Partition, nu: Partition) -> Fraction:
        return self.wg[self.index(pi), self.index(nu)]

    def to_json(self) -> dict:
        return {
            "group": str(self.group),
            "word": str(self.word),
            "N": self.N,
            "partitions": [p.to_json() for p in self.partitions],
            "gram": [[exactcount.fraction_str(x) for x in row] for row in self.gram],
            "wg": [[exactcount.fraction_str(x) for x in row] for row in self.wg],
        }

    @classmethod
    def from_json(cls, data: dict) -> "WeingartenTable":
        n = len(data["partitions"])
        return cls(
            group=EasyGroup.parse(data["group"]),
            word=ColoredWord(data["word"]),
            N=int(data["N"]),
            partitions=[Partition.from_json(p) for p in data["partitions"]],
            gram=_square(data["gram"], n),
            wg=_square(data["wg"], n),
        )


def _square(rows, n: int) -> np.ndarray:
    if n == 0:
        return np.empty((0, 0), dtype=object)
    return fraction_matrix([[Fraction(x) for x in row] for row in rows])


def basis(group: EasyGroup, k: WordLike) -> List[Partition]:
    return enumerate_partitions(group.category(), group.word(k))


def _gram_on(partitions: Sequence[Partition], N: int) -> np.ndarray:
    n = len(partitions)
    G = np.empty((n, n), dtype=object)
    for a in range(n):
        for b in range(a, n):
            G[a, b] = G[b, a] = Fraction(N) ** join(partitions[a], partitions[b]).block_count
    return G


def gram(group: EasyGroup, k: WordLike, N: int) -> np.ndarray:
    """G(pi, nu) = N^|pi v nu| over D(k), in the canonical partition order."""
    if N < 1:
        raise UsageError("N must be positive")
    return _gram_on(basis(group, k), N)


def gram_determinant(k: int, N: int) -> Fraction:
    """Determinant of the Gram matrix over the full lattice P(k)."""
    return determinant(gram(EasyGroup("S"), k, N))


def gram_determinant_formula(k: int, N: int) -> int:
    """prod over pi in P(k) of N!/(N-|pi|)!, zero as soon as some |pi| exceeds N."""
    out = 1
    for p in enumerate_partitions(Category("P"), k):
        b = p.block_count
        out *= math.perm(N, b) if b <= N else 0
    return out


_table_cache: Optional[TableCache] = None


def get_table_cache() -> TableCache:
    global _table_cache
    if _table_cache is None:
        _table_cache = create_default_cache()
    return _table_cache


def set_table_cache(cache: Optional[TableCache]) -> None:
    global _table_cache
    _table_cache = cache


def _cache_key(group: EasyGroup, word: ColoredWord, N: int) -> str:
    return f"{group}:{word.letters or '-'}:{N}"


def weingarten(group: EasyGroup, k: WordLike, N: int) -> WeingartenTable:
    word = group.word(k)
    key = _cache_key(group, word, N)
    cache = get_table_cache()
    try:
        cached = cache.get(key)
    except Exception:
        logger.exception("cache_read_failed", key=key)
        cached = None
    if isinstance(cached, WeingartenTable):
        return cached
    if cached is not None:
        return WeingartenTable.from_json(cached)

    partitions = basis(group, word)
    G = _gram_on(partitions, N)
    try:
        W = inverse_matrix(G)
    except ZeroDivisionError:
        logger.warning("gram_singular", group=str(group), k=len(word), N=N)
        raise SingularGramError(str(group), len(word), N)
    table = WeingartenTable(group, word, N, partitions, G, W)
    logger.info("weingarten_table_built", group=str(group), word=str(word), N=N, size=len(partitions))
    try:
        cache.put(key, table.to_json() if cache.shared else table)
    except Exception:
        logger.exception("cache_write_failed", key=key)
    return table


def _resolve_colors(group: EasyGroup, k: int, colors: Optional[WordLike]) -> ColoredWord:
    if colors is None:
        if group.series in ("U", "K"):
            raise UsageError(f"group {group} needs the colors of the monomial")
        return ColoredWord.plain(k)
    w = as_word(colors)
    if len(w) != k:
        raise SizeMismatchError(len(w), k)
    return w


def integrate_monomial(group: EasyGroup, N: int, rows: Sequence[int], cols: Sequence[int],
                       colors: Optional[WordLike] = None) -> Fraction:
    if len(rows) != len(cols):
        raise SizeMismatchError(len(rows), len(cols))
    for i in list(rows) + list(cols):
        if not 1 <= i <= N:
            raise UsageError(f"index {i} is outside 1..{N}")
    word = _resolve_colors(group, len(rows), colors)
    if not rows:
        return Fraction(1)
    table = weingarten(group, word, N)
    ker_i, ker_j = kernel(rows), kernel(cols)
    left = [a for a, p in enumerate(table.partitions) if leq(p, ker_i)]
    right = [b for b, p in enumerate(table.partitions) if leq(p, ker_j)]
    return sum((table.wg[a, b] for a in left for b in right), Fraction(0))


_MONOMIAL = re.compile(r"\s*([uvgz])\[(\d+)\s*,\s*(\d+)\](\*?)")


def parse_monomial(pattern: str) -> Tuple[List[int], List[int], ColoredWord]:
    """'u[1,1]u[1,2]*' -> rows, cols and colors; a trailing * marks a conjugate."""
    rows, cols, letters = [], [], []
    pos = 0
    text = pattern.strip()
    while pos < len(text):
        m = _MONOMIAL.match(text, pos)
        if not m:
            raise UsageError(f"cannot parse monomial {pattern!r} at position {pos}")
        rows.append(int(m.group(2)))
        cols.append(int(m.group(3)))
        letters.append("b" if m.group(4) else "o")
        pos = m.end()
    return rows, cols, ColoredWord("".join(letters))


def integrate_word(group: EasyGroup, N: int, pattern: str) -> Fraction:
    rows, cols, word = parse_monomial(pattern)
    return integrate_monomial(group, N, rows, cols, word)


def sn_closed_form(N: int, rows: Sequence[int], cols: Sequence[int]) -> Fraction:
    """(N - |ker i|)!/N! when ker i = ker j, else 0."""
    ker_i, ker_j = kernel(rows), kernel(cols)
    if ker_i != ker_j:
        return Fraction(0)
    return Fraction(math.factorial(N - ker_i.block_count), math.factorial(N))


def haar_row_norm(group: EasyGroup, N: int, row: int = 1) -> Fraction:
    """sum_j int |g_{row j}|^2."""
    colors = "ob" if group.is_colored else "oo"
    return sum((integrate_monomial(group, N, [row, row], [j, j], colors) for j in range(1, N + 1)), Fraction(0))


def sphere_integrate(field: str, N: int, exponents: Sequence[int],
                     conjugate_exponents: Optional[Sequence[int]] = None) -> Fraction:
    """Integral of a coordinate monomial over the unit sphere of R^N or C^N (uniform probability).

    real:    x_1^k_1 ... x_n^k_n
    complex: z_1^k_1 ... conj(z_1)^l_1 ... (zero unless k = l)
    """
    if any(e < 0 for e in exponents):
        raise UsageError("exponents must be nonnegative")
    if len(exponents) > N:
        raise UsageError(f"{len(exponents)} coordinates on a sphere of dimension {N}")
    df = exactcount.double_factorial
    if field == "real":
        if any(e % 2 for e in exponents):
            return Fraction(0)
        num = df(N - 1)
        for e in exponents:
            num *= df(e)
        return Fraction(num, df(N + sum(exponents) - 1))
    if field == "complex":
        if conjugate_exponents is not None and list(conjugate_exponents) != list(exponents):
            return Fraction(0)
        num = math.factorial(N - 1)
        for e in exponents:
            num *= math.factorial(e)
        return Fraction(num, math.factorial(N + sum(exponents) - 1))
    raise UsageError("field must be 'real' or 'complex'")


def truncated_character_moments(group: EasyGroup, N: int, t: Union[Fraction, int, str], k: WordLike) -> Fraction:
    """int (g_11 + ... + g_ss)^k dg with s = floor(tN), as Tr(W_kN G_ks)."""
    t = Fraction(t)
    if not 0 < t <= 1:
        raise UsageError(f"t must lie in (0, 1], got {t}")
    s = math.floor(t * N)
    if s < 1:
        raise UsageError(f"floor(tN) = {s}; need at least one diagonal entry")
    table = weingarten(group, k, N)
    if table.size == 0:
        return Fraction(0)
    return trace(table.wg.dot(_gram_on(table.partitions, s)))


def truncated_character_stirling(N: int, s: int, k: int) -> Fraction:
    """The same moment for S_N, summed over the number b of distinct indices."""
    return sum((Fraction(exactcount.stirling2(k, b) * math.perm(s, b) * math.factorial(N - b), math.factorial(N))
                for b in range(0, min(k, s, N) + 1)), Fraction(0))


@dataclass(frozen=True)
class AsymptoticEstimate:
    exponent: int
    coefficient: Optional[int]
    note: str = ""

    def leading_term(self, N: int) -> Optional[Fraction]:
        if self.coefficient is None:
            return None
        return self.coefficient * Fraction(N) ** self.exponent


def _poset_mobius(elements: Tuple[Partition, ...], a: Partition, b: Partition) -> int:
    @lru_cache(maxsize=None)
    def mu(x: Partition) -> int:
        if x == a:
            return 1
        return -sum(mu(c) for c in elements if c != x and leq(a, c) and leq(c, x))

    return mu(b) if leq(a, b) else 0


def category_mobius(cat: Category, word: WordLike, a: Partition, b: Partition) -> int:
    """Mobius function of the poset D(word) ordered by refinement."""
    if cat.kind in ("P",) or (cat.kind == "Ps" and cat.s == 1):
        return mobius(a, b, "P")
    if cat.kind == "NC" or (cat.kind == "NCs" and cat.s == 1):
        return mobius(a, b, "NC")
    elements = tuple(enumerate_partitions(cat, word))
    return _poset_mobius(elements, a, b)


def weingarten_asymptotics(group: EasyGroup, pi: Partition, nu: Partition, k: WordLike) -> AsymptoticEstimate:
    """Leading order of W_kN(pi, nu) as N grows: N^(|pi v nu| - |pi| - |nu|) times a coefficient."""
    word = group.word(k)
    cat = group.category()
    for p in (pi, nu):
        if not cat.contains(p, word):
            raise UsageError(f"{p} is not in {cat} for the word {word}")
    exponent = join(pi, nu).block_count - pi.block_count - nu.block_count
    if leq(pi, nu):
        return AsymptoticEstimate(exponent, category_mobius(cat, word, pi, nu))
    if leq(nu, pi):
        return AsymptoticEstimate(exponent, category_mobius(cat, word, nu, pi))
    return AsymptoticEstimate(exponent, None, "path-count, not computed")


def sn_weingarten_exact(N: int, pi: Partition, nu: Partition) -> Fraction:
    """W_kN(pi, nu) for S_N as a sum over tau <= pi ^ nu of mu(tau, pi) mu(tau, nu) (N-|tau|)!/N!."""
    low = meet(pi, nu)
    total = Fraction(0)
    for tau in enumerate_partitions(Category("P"), pi.size):
        if leq(tau, low) and tau.block_count <= N:
            total += mobius(tau, pi) * mobius(tau, nu) * Fraction(math.factorial(N - tau.block_count), math.factorial(N))
    return total


def sn_weingarten_leading(pi: Partition, nu: Partition) -> AsymptoticEstimate:
    """For S_N: W ~ N^-|pi ^ nu| mu(pi ^ nu, pi) mu(pi ^ nu, nu)."""
    low = meet(pi, nu)
    return AsymptoticEstimate(-low.block_count, mobius(low, pi) * mobius(low, nu))


def on_two_generic_coordinates(N: int, alpha: int, beta: int) -> Fraction:
    """int_{O_N} v_12^alpha v_21^beta, in the closed form over shifted double factorials."""
    if alpha < 0 or beta < 0:
        raise UsageError("exponents must be nonnegative")
    if alpha % 2 or beta % 2:
        return Fraction(0)
    if N < 2:
        raise UsageError("need N >= 2 for two coordinates")
    df = exactcount.double_factorial
    num = math.factorial(N - 2) * df(alpha) * df(beta) * df(alpha + beta + N - 2)
    den = df(alpha + N - 2) * df(beta + N - 2) * df(alpha + beta + N - 1)
    return Fraction(num, den)
