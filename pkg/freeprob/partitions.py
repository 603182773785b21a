"""Set partitions, the partition categories of easy groups, and lattice calculus on them.

Points are numbered 0..k-1 internally and 1..k in anything printed for humans.
A Partition stores its block labels in restricted-growth form, so two equal
partitions always have equal label tuples.
"""
import math
from bisect import bisect_right
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import structlog

from . import exactcount
from .config import get_settings
from .errors import ConfigurationLimitError, CrossingPartitionError, SizeMismatchError, UsageError

logger = structlog.get_logger(__name__)

INFINITY = math.inf


@dataclass(frozen=True)
class Partition:
    labels: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(int(x) for x in self.labels))
        top = -1
        for x in self.labels:
            if x < 0 or x > top + 1:
                raise UsageError(f"labels {list(self.labels)} are not in restricted-growth form")
            top = max(top, x)

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[int]], size: Optional[int] = None) -> "Partition":
        """Build from 0-based blocks; every point 0..size-1 must be covered exactly once."""
        n = size if size is not None else sum(len(b) for b in blocks)
        raw = [-1] * n
        for label, block in enumerate(blocks):
            for i in block:
                if not 0 <= i < n or raw[i] != -1:
                    raise UsageError(f"blocks {blocks} do not partition {n} points")
                raw[i] = label
        if -1 in raw:
            raise UsageError(f"blocks {blocks} do not partition {n} points")
        return kernel(raw)

    @classmethod
    def from_json(cls, data: Sequence[int]) -> "Partition":
        return cls(tuple(data))

    @classmethod
    def zero(cls, k: int) -> "Partition":
        return cls(tuple(range(k)))

    @classmethod
    def one(cls, k: int) -> "Partition":
        return cls((0,) * k)

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def block_count(self) -> int:
        return max(self.labels) + 1 if self.labels else 0

    def blocks(self) -> List[Tuple[int, ...]]:
        out: List[List[int]] = [[] for _ in range(self.block_count)]
        for i, b in enumerate(self.labels):
            out[b].append(i)
        return [tuple(b) for b in out]

    def block_sizes(self) -> List[int]:
        return [len(b) for b in self.blocks()]

    def is_noncrossing(self) -> bool:
        blocks = self.blocks()
        for a, b in combinations(blocks, 2):
            if _blocks_cross(a, b):
                return False
        return True

    def to_json(self) -> List[int]:
        return list(self.labels)

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.block_count, self.labels)

    def __str__(self) -> str:
        if not self.labels:
            return "{}"
        return "".join("{" + ",".join(str(i + 1) for i in b) + "}" for b in self.blocks())


def _blocks_cross(a: Sequence[int], b: Sequence[int]) -> bool:
    # b avoids crossing a iff all of b sits in a single gap of a; the two outer gaps are one region
    gaps = set()
    for x in b:
        g = bisect_right(a, x)
        gaps.add(0 if g == len(a) else g)
    return len(gaps) > 1


class ColoredWord:
    """A word over white (o) and black (b) letters indexing mixed moments of a variable and its adjoint."""

    WHITE = "o"
    BLACK = "b"

    def __init__(self, letters: str = ""):
        letters = letters.replace("○", "o").replace("●", "b")
        bad = set(letters) - {self.WHITE, self.BLACK}
        if bad:
            raise UsageError(f"colored word may only contain 'o' and 'b', got {sorted(bad)}")
        self.letters = letters

    @classmethod
    def parse(cls, text: str) -> "ColoredWord":
        return cls(text.strip())

    @classmethod
    def plain(cls, k: int) -> "ColoredWord":
        return cls(cls.WHITE * k)

    def __len__(self) -> int:
        return len(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, ColoredWord) and other.letters == self.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __str__(self) -> str:
        return self.letters

    def __repr__(self) -> str:
        return f"ColoredWord({self.letters!r})"

    def is_white(self, i: int) -> bool:
        return self.letters[i] == self.WHITE

    def balance(self, points: Sequence[int]) -> int:
        """#white minus #black over the given points."""
        return sum(1 if self.letters[i] == self.WHITE else -1 for i in points)


WordLike = Union[ColoredWord, int, str]


def as_word(word: WordLike) -> ColoredWord:
    if isinstance(word, ColoredWord):
        return word
    if isinstance(word, int):
        if word < 0:
            raise UsageError("word length must be nonnegative")
        return ColoredWord.plain(word)
    return ColoredWord.parse(word)


KINDS = (
    "P", "P2", "Peven", "Ps", "P12",
    "NC", "NC2", "NCeven", "NCs", "NC12",
    "MatchP2", "MatchNC2", "MatchPeven", "MatchNCeven",
)


@dataclass(frozen=True)
class Category:
    kind: str
    s: Union[int, float] = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UsageError(f"unknown partition category {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.kind in ("Ps", "NCs"):
            if self.s != INFINITY and (int(self.s) != self.s or self.s < 1):
                raise UsageError(f"category {self.kind} needs s >= 1 or s = inf, got {self.s}")

    @classmethod
    def parse(cls, text: str, s: Union[int, float, str, None] = None) -> "Category":
        """Accepts 'NC2', 'Ps:3', 'NCs:inf' or a kind plus a separate s."""
        kind, _, tail = text.strip().partition(":")
        raw = tail or s
        if kind in ("Ps", "NCs"):
            if raw in (None, ""):
                raise UsageError(f"category {kind} needs a parameter s")
            return cls(kind, parse_s(raw))
        if tail:
            raise UsageError(f"category {kind} takes no parameter")
        return cls(kind)

    @property
    def is_free(self) -> bool:
        return self.kind.startswith("NC") or self.kind.startswith("MatchNC")

    @property
    def is_matching(self) -> bool:
        return self.kind.startswith("Match")

    @property
    def classical(self) -> "Category":
        if not self.is_free:
            return self
        return Category(self.kind.replace("NC", "P", 1), self.s)

    @property
    def free(self) -> "Category":
        if self.is_free:
            return self
        return Category(self.kind.replace("P", "NC", 1), self.s)

    def block_ok(self, block: Sequence[int], word: ColoredWord) -> bool:
        kind = self.kind.replace("NC", "P", 1)
        n = len(block)
        if kind == "P":
            return True
        if kind == "P2":
            return n == 2
        if kind == "Peven":
            return n % 2 == 0
        if kind == "P12":
            return n <= 2
        if kind == "Ps":
            bal = word.balance(block)
            return bal == 0 if self.s == INFINITY else bal % int(self.s) == 0
        if kind == "MatchP2":
            return n == 2 and word.balance(block) == 0
        if kind == "MatchPeven":
            return word.balance(block) == 0
        raise AssertionError(kind)

    def contains(self, p: Partition, word: Optional[WordLike] = None) -> bool:
        w = as_word(p.size if word is None else word)
        if len(w) != p.size:
            raise SizeMismatchError(len(w), p.size)
        if self.is_free and not p.is_noncrossing():
            return False
        return all(self.block_ok(b, w) for b in p.blocks())

    def __str__(self) -> str:
        if self.kind in ("Ps", "NCs"):
            return f"{self.kind}:{format_s(self.s)}"
        return self.kind


def parse_s(raw: Union[int, float, str]) -> Union[int, float]:
    if isinstance(raw, str):
        if raw.strip().lower() in ("inf", "infinity", "∞"):
            return INFINITY
        try:
            raw = int(raw)
        except ValueError:
            raise UsageError(f"s must be a positive integer or 'inf', got {raw!r}")
    if raw == INFINITY:
        return INFINITY
    if raw < 1 or int(raw) != raw:
        raise UsageError(f"s must be a positive integer or 'inf', got {raw!r}")
    return int(raw)


def format_s(s: Union[int, float]) -> str:
    return "inf" if s == INFINITY else str(int(s))


def _set_partitions(k: int) -> Iterator[Tuple[int, ...]]:
    """All restricted-growth strings of length k, lexicographically."""
    if k == 0:
        yield ()
        return
    labels = [0] * k

    def rec(i: int, top: int):
        if i == k:
            yield tuple(labels)
            return
        for x in range(top + 2):
            labels[i] = x
            yield from rec(i + 1, max(top, x))

    yield from rec(1, 0)


def _nc_blocks(points: Tuple[int, ...]) -> Iterator[List[Tuple[int, ...]]]:
    # the block of the first point splits the rest into independent gaps
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for r in range(len(rest) + 1):
        for chosen in combinations(range(len(rest)), r):
            block = (first,) + tuple(rest[i] for i in chosen)
            cuts = [-1] + list(chosen) + [len(rest)]
            gaps = [rest[cuts[j] + 1:cuts[j + 1]] for j in range(len(cuts) - 1)]
            yield from _fill_gaps(block, gaps)


def _fill_gaps(block, gaps) -> Iterator[List[Tuple[int, ...]]]:
    if not gaps:
        yield [block]
        return
    for head in _nc_blocks(gaps[0]):
        for tail in _fill_gaps(block, gaps[1:]):
            yield head + tail


def _check_size(k: int) -> None:
    limit = get_settings().max_k
    if k > limit:
        raise ConfigurationLimitError("k", k, limit)


@lru_cache(maxsize=256)
def _enumerate_cached(cat: Category, word: ColoredWord) -> Tuple[Partition, ...]:
    k = len(word)
    if cat.is_free:
        candidates = (Partition.from_blocks(b, k) for b in _nc_blocks(tuple(range(k))))
    else:
        candidates = (Partition(labels) for labels in _set_partitions(k))
    out = [p for p in candidates if all(cat.block_ok(b, word) for b in p.blocks())]
    out.sort(key=Partition.sort_key)
    logger.debug("partitions_enumerated", category=str(cat), word=str(word), count=len(out))
    return tuple(out)


def enumerate_partitions(cat: Category, word: WordLike) -> List[Partition]:
    """Every partition of the category on the given word, ordered by (block count, labels)."""
    w = as_word(word)
    _check_size(len(w))
    return list(_enumerate_cached(cat, w))


def count(cat: Category, word: WordLike) -> int:
    w = as_word(word)
    k = len(w)
    kind = cat.kind
    if kind == "P" or (kind == "Ps" and cat.s == 1):
        return exactcount.bell(k)
    if kind == "NC" or (kind == "NCs" and cat.s == 1):
        return exactcount.catalan(k)
    if kind == "P2":
        return exactcount.odd_double_factorial(k // 2) if k % 2 == 0 else 0
    if kind == "NC2":
        return exactcount.catalan(k // 2) if k % 2 == 0 else 0
    if kind == "MatchP2":
        whites = w.letters.count(ColoredWord.WHITE)
        return math.factorial(whites) if 2 * whites == k else 0
    return len(enumerate_partitions(cat, w))


def kernel(indices: Sequence) -> Partition:
    """Partition whose blocks collect the positions holding equal values."""
    seen: Dict = {}
    labels = []
    for x in indices:
        if x not in seen:
            seen[x] = len(seen)
        labels.append(seen[x])
    return Partition(tuple(labels))


def _same_size(a: Partition, b: Partition) -> None:
    if a.size != b.size:
        raise SizeMismatchError(a.size, b.size)


def _merge(n: int, groups) -> Partition:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for group in groups:
        for x in group[1:]:
            ra, rb = find(group[0]), find(x)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    return kernel([find(i) for i in range(n)])


def join(a: Partition, b: Partition) -> Partition:
    _same_size(a, b)
    return _merge(a.size, a.blocks() + b.blocks())


def meet(a: Partition, b: Partition) -> Partition:
    _same_size(a, b)
    return kernel(list(zip(a.labels, b.labels)))


def leq(a: Partition, b: Partition) -> bool:
    """True when every block of a lies inside a block of b."""
    _same_size(a, b)
    image: Dict[int, int] = {}
    for x, y in zip(a.labels, b.labels):
        if image.setdefault(x, y) != y:
            return False
    return True


def _mobius_full_lattice(a: Partition, b: Partition) -> int:
    # [a, b] in P(k) is a product of full lattices P(n_i), n_i = blocks of a inside block i of b
    inside: Dict[int, set] = {}
    for x, y in zip(a.labels, b.labels):
        inside.setdefault(y, set()).add(x)
    value = 1
    for blocks in inside.values():
        n = len(blocks)
        value *= (-1) ** (n - 1) * math.factorial(n - 1)
    return value


@lru_cache(maxsize=4096)
def _mobius_nc(a: Partition, b: Partition) -> int:
    if a == b:
        return 1
    interval = [c for c in _enumerate_cached(Category("NC"), ColoredWord.plain(a.size))
                if leq(a, c) and leq(c, b) and c != b]
    return -sum(_mobius_nc(a, c) for c in interval)


def mobius(a: Partition, b: Partition, lattice: str = "P") -> int:
    _same_size(a, b)
    if lattice not in ("P", "NC"):
        raise UsageError(f"lattice must be 'P' or 'NC', got {lattice!r}")
    if not leq(a, b):
        return 0
    if lattice == "P":
        return _mobius_full_lattice(a, b)
    for p in (a, b):
        if not p.is_noncrossing():
            raise CrossingPartitionError(f"{p} is not noncrossing")
    _check_size(a.size)
    return _mobius_nc(a, b)


def mobius_matrix(elements: Sequence[Partition], lattice: str = "P") -> List[List[int]]:
    return [[mobius(a, b, lattice) for b in elements] for a in elements]


def fatten(p: Partition) -> Partition:
    """Double every leg: point i becomes legs 2i, 2i+1, giving a noncrossing pairing of 2k points."""
    if not p.is_noncrossing():
        raise CrossingPartitionError(f"{p} is not noncrossing")
    pairs = []
    for block in p.blocks():
        pairs.append((2 * block[0], 2 * block[-1] + 1))
        for x, y in zip(block, block[1:]):
            pairs.append((2 * x + 1, 2 * y))
    return Partition.from_blocks(pairs, 2 * p.size)


def shrink(q: Partition) -> Partition:
    if q.size % 2 or any(n != 2 for n in q.block_sizes()):
        raise UsageError(f"{q} is not a pairing of an even number of points")
    if not q.is_noncrossing():
        raise CrossingPartitionError(f"{q} is not noncrossing")
    return _merge(q.size // 2, [(x // 2, y // 2) for x, y in q.blocks()])


def even_block_count(p: Partition) -> int:
    return sum(1 for n in p.block_sizes() if n % 2 == 0)


Permutation = Tuple[int, ...]


def as_permutation(p: Partition) -> Permutation:
    """Cycle through each block in increasing order."""
    perm = [0] * p.size
    for block in p.blocks():
        for x, y in zip(block, block[1:] + block[:1]):
            perm[x] = y
    return tuple(perm)


def full_cycle(k: int) -> Permutation:
    return tuple((i + 1) % k for i in range(k))


def inverse_permutation(perm: Permutation) -> Permutation:
    out = [0] * len(perm)
    for i, j in enumerate(perm):
        out[j] = i
    return tuple(out)


def compose(sigma: Permutation, tau: Permutation) -> Permutation:
    """(sigma o tau)(i) = sigma(tau(i))."""
    return tuple(sigma[t] for t in tau)


def permutation_cycle_count(perm: Permutation) -> int:
    seen = [False] * len(perm)
    cycles = 0
    for i in range(len(perm)):
        if not seen[i]:
            cycles += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
    return cycles


@dataclass(frozen=True)
class TwoRowPartition:
    """A partition of k upper and l lower points, stored as one row of k + l points."""

    partition: Partition
    k: int
    l: int

    def __post_init__(self):
        if self.partition.size != self.k + self.l:
            raise SizeMismatchError(self.partition.size, self.k + self.l)

    @property
    def upper(self) -> Tuple[int, ...]:
        return self.partition.labels[:self.k]

    @property
    def lower(self) -> Tuple[int, ...]:
        return self.partition.labels[self.k:]


def two_row(p: Partition, k: int) -> TwoRowPartition:
    return TwoRowPartition(p, k, p.size - k)


def noncrossing_pairings_count_by_recurrence(k: int) -> int:
    """|NC2(2k)| from the first-pair recurrence C_{j+1} = sum_{a+b=j} C_a C_b."""
    c = [1]
    for j in range(k):
        c.append(sum(c[a] * c[j - a] for a in range(j + 1)))
    return c[k]
