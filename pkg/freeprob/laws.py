"""Parametric limit laws of classical and free probability: moments, cumulants, densities, atoms."""
import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import structlog

from . import exactcount
from .cumulants import (
    CumulantSequence,
    MomentSequence,
    cumulants_from_moments,
    moments_from_cumulants,
    partition_weighted_moment,
)
from .errors import LawRangeError, UsageError
from .partitions import INFINITY, Category, ColoredWord, as_word, format_s, parse_s
from .transforms import free_multiplicative_convolution, free_multiplicative_power

logger = structlog.get_logger(__name__)

Number = Union[int, Fraction, float, complex]
TAIL_TOLERANCE = 1e-12


class DiscreteMeasure:
    """Finitely many atoms (location, mass); masses need not sum to one (e.g. t * rho)."""

    def __init__(self, atoms: Sequence[Tuple[Number, Number]], tail_mass: float = 0.0):
        self.atoms: List[Tuple[Number, Number]] = [(loc, mass) for loc, mass in atoms]
        for _, mass in self.atoms:
            if (mass.real if isinstance(mass, complex) else mass) < 0:
                raise UsageError("atom masses must be nonnegative")
        self.tail_mass = tail_mass

    @classmethod
    def point(cls, location: Number, mass: Number = 1) -> "DiscreteMeasure":
        return cls([(location, mass)])

    @classmethod
    def roots_of_unity(cls, s, mass: Number = 1) -> "RootsOfUnityMeasure":
        return RootsOfUnityMeasure(s, mass)

    def total_mass(self) -> Number:
        return sum((m for _, m in self.atoms), Fraction(0))

    def moment(self, n: int) -> Number:
        return sum((m * loc ** n for loc, m in self.atoms), Fraction(0))

    def moments(self, order: int) -> Tuple[Number, ...]:
        return tuple(self.moment(n) for n in range(1, order + 1))

    def scaled(self, c: Number) -> "DiscreteMeasure":
        return DiscreteMeasure([(loc, m * c) for loc, m in self.atoms], self.tail_mass * float(c))

    def to_json(self) -> List[dict]:
        out = []
        for loc, m in self.atoms:
            if isinstance(loc, complex):
                entry = {"location": [loc.real, loc.imag]}
            else:
                entry = {"location": exactcount.fraction_str(loc) if isinstance(loc, (int, Fraction)) else float(loc)}
            entry["mass"] = exactcount.fraction_str(m) if isinstance(m, (int, Fraction)) else float(m)
            out.append(entry)
        return out


class RootsOfUnityMeasure(DiscreteMeasure):
    """mass times the uniform measure on the s-th roots of unity (s = inf: the unit circle)."""

    def __init__(self, s, mass: Number = 1):
        self.s = parse_s(s)
        self.weight = mass
        if self.s == INFINITY:
            atoms = []
        else:
            k = int(self.s)
            atoms = [(1 if j == 0 else cmath.exp(2j * math.pi * j / k), Fraction(mass) / k) for j in range(k)]
        super().__init__(atoms)

    def total_mass(self) -> Number:
        return self.weight

    def moment(self, n: int) -> Number:
        if self.s == INFINITY:
            return self.weight if n == 0 else 0
        return self.weight if n % int(self.s) == 0 else 0

    def scaled(self, c: Number) -> "RootsOfUnityMeasure":
        return RootsOfUnityMeasure(self.s, self.weight * c)


FAMILIES = (
    "PointMass", "Gaussian", "ComplexGaussian", "Poisson", "Bessel", "Semicircle",
    "MarchenkoPastur", "Circular", "FreeBessel", "CompoundPoisson", "CompoundFreePoisson",
    "FreeHyperspherical",
)
COLORED_FAMILIES = ("ComplexGaussian", "Circular")
FREE_BESSEL_READINGS = ("compound", "multiplicative")


@dataclass(frozen=True)
class LawSpec:
    family: str
    t: Number = 1
    s: Union[int, float, Fraction] = 1
    c: Number = 0
    N: Optional[int] = None
    rho: Optional[DiscreteMeasure] = None
    reading: str = "compound"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UsageError(f"unknown law family {self.family!r}; expected one of {', '.join(FAMILIES)}")
        if self.family in ("Gaussian", "ComplexGaussian", "Poisson", "Bessel", "Semicircle",
                           "MarchenkoPastur", "Circular", "FreeBessel") and not self.t > 0:
            raise LawRangeError(f"{self.family} needs t > 0, got {self.t}")
        if self.family == "Bessel":
            object.__setattr__(self, "s", parse_s(self.s))
        if self.family == "FreeBessel":
            if self.reading not in FREE_BESSEL_READINGS:
                raise UsageError(f"free Bessel reading must be one of {FREE_BESSEL_READINGS}")
            if self.reading == "compound":
                object.__setattr__(self, "s", parse_s(self.s))
            else:
                if self.s == INFINITY or not self.s > 0:
                    raise LawRangeError(f"multiplicative free Bessel needs rational s > 0, got {self.s}")
                if 0 < self.s < 1 and self.t > 1:
                    raise LawRangeError(f"(s, t) = ({self.s}, {self.t}) lies in the excluded range (0,1) x (1,inf)")
                object.__setattr__(self, "s", Fraction(self.s))
        if self.family in ("CompoundPoisson", "CompoundFreePoisson") and self.rho is None:
            raise UsageError(f"{self.family} needs a measure rho")
        if self.family == "FreeHyperspherical":
            if self.N is None or int(self.N) != self.N or self.N < 3:
                raise LawRangeError(f"FreeHyperspherical needs an integer N >= 3, got {self.N}")

    @property
    def is_colored(self) -> bool:
        return self.family in COLORED_FAMILIES

    @property
    def accepts_words(self) -> bool:
        return self.is_colored or self.family == "Bessel" or (self.family == "FreeBessel" and self.reading == "compound")

    def describe(self) -> Dict[str, str]:
        out = {"family": self.family}
        if self.family == "PointMass":
            out["c"] = str(self.c)
        elif self.family == "FreeHyperspherical":
            out["N"] = str(self.N)
        elif self.family in ("CompoundPoisson", "CompoundFreePoisson"):
            out["rho_mass"] = str(self.rho.total_mass())
        else:
            out["t"] = str(self.t)
        if self.family in ("Bessel", "FreeBessel"):
            out["s"] = format_s(self.s) if self.s == INFINITY or isinstance(self.s, int) else str(self.s)
        if self.family == "FreeBessel":
            out["reading"] = self.reading
        return out


def _category(law: LawSpec) -> Category:
    fam = law.family
    if fam == "Gaussian":
        return Category("P2")
    if fam == "ComplexGaussian":
        return Category("MatchP2")
    if fam == "Poisson":
        return Category("P")
    if fam == "Bessel":
        return Category("Ps", law.s)
    if fam == "Semicircle":
        return Category("NC2")
    if fam == "MarchenkoPastur":
        return Category("NC")
    if fam == "Circular":
        return Category("MatchNC2")
    if fam == "FreeBessel" and law.reading == "compound":
        return Category("NCs", law.s)
    raise UsageError(f"{fam} has no partition-sum moment formula")


def _resolve_word(law: LawSpec, word_or_order) -> ColoredWord:
    if isinstance(word_or_order, int):
        return ColoredWord.plain(word_or_order)
    w = as_word(word_or_order)
    if not law.accepts_words:
        raise UsageError(f"{law.family} is not a colored law; pass an integer order")
    return w


def _closed_moment(law: LawSpec, w: ColoredWord) -> Optional[Number]:
    k = len(w)
    plain = ColoredWord.WHITE * k == w.letters
    fam, t = law.family, law.t
    if k == 0:
        return 1
    if fam == "PointMass":
        return law.c ** k
    if fam == "Gaussian":
        return t ** (k // 2) * exactcount.odd_double_factorial(k // 2) if k % 2 == 0 else 0
    if fam == "ComplexGaussian":
        whites = w.letters.count(ColoredWord.WHITE)
        return t ** whites * math.factorial(whites) if 2 * whites == k else 0
    if fam == "Poisson":
        return exactcount.touchard(k, t)
    if fam == "Semicircle":
        return t ** (k // 2) * exactcount.catalan(k // 2) if k % 2 == 0 else 0
    if fam == "MarchenkoPastur":
        return exactcount.fuss_narayana(1, k, t)
    if fam == "Circular":
        alternating = all(w.letters[i] != w.letters[i + 1] for i in range(k - 1))
        if alternating and k % 2 == 0:
            return t ** (k // 2) * exactcount.catalan(k // 2)
        return None
    if fam == "Bessel" and plain:
        if law.s == INFINITY:
            return 0
        return moments_from_cumulants(bessel_cumulants(law.s, t, k)).values[-1]
    if fam == "FreeBessel":
        if law.reading == "multiplicative":
            return exactcount.fuss_narayana(law.s, k, t)
        if not plain:
            return None
        if law.s == INFINITY or k % int(law.s):
            return 0
        return exactcount.fuss_narayana(law.s, k // int(law.s), t)
    if fam in ("CompoundPoisson", "CompoundFreePoisson"):
        return law_moments(law, k).values[-1]
    if fam == "FreeHyperspherical":
        return 0 if k % 2 else free_hyperspherical_moment(law.N, k // 2)
    return None


def law_moment(law: LawSpec, word_or_order, method: str = "auto") -> Number:
    """k-th moment (or colored-word moment). method: 'closed', 'partitions' or 'auto'."""
    w = _resolve_word(law, word_or_order)
    if method not in ("auto", "closed", "partitions"):
        raise UsageError("method must be 'auto', 'closed' or 'partitions'")
    if method in ("auto", "closed"):
        value = _closed_moment(law, w)
        if value is not None:
            return value
        if method == "closed":
            raise UsageError(f"no closed form for {law.family} at word {w}")
    return partition_weighted_moment(_category(law), law.t, w)


def law_cumulants(law: LawSpec, order: int) -> CumulantSequence:
    """Cumulants in the law's natural flavor (classical for classical laws, free for free ones)."""
    fam, t = law.family, law.t
    if fam == "PointMass":
        return CumulantSequence((law.c,) + (0,) * (order - 1), "classical")
    if fam == "Gaussian":
        return CumulantSequence(tuple(t if n == 2 else 0 for n in range(1, order + 1)), "classical")
    if fam == "Semicircle":
        return CumulantSequence(tuple(t if n == 2 else 0 for n in range(1, order + 1)), "free")
    if fam == "Poisson":
        return CumulantSequence((t,) * order, "classical")
    if fam == "MarchenkoPastur":
        return CumulantSequence((t,) * order, "free")
    if fam == "Bessel":
        return bessel_cumulants(law.s, t, order)
    if fam == "FreeBessel" and law.reading == "compound":
        return bessel_cumulants(law.s, t, order).reinterpret("free")
    if fam == "CompoundPoisson":
        return CumulantSequence(law.rho.moments(order), "classical")
    if fam == "CompoundFreePoisson":
        return CumulantSequence(law.rho.moments(order), "free")
    if fam in ("FreeBessel", "FreeHyperspherical"):
        return cumulants_from_moments(law_moments(law, order), "free")
    raise UsageError(f"{fam} is a colored law; its cumulants are not a single sequence")


def bessel_cumulants(s, t: Number, order: int) -> CumulantSequence:
    """k_n = t [s divides n], the cumulants of the compound Poisson law of t times the s-roots measure."""
    return CumulantSequence(RootsOfUnityMeasure(s, t).moments(order), "classical")


def law_moments(law: LawSpec, order: int) -> MomentSequence:
    if law.family in ("CompoundPoisson", "CompoundFreePoisson"):
        return moments_from_cumulants(law_cumulants(law, order))
    return MomentSequence(tuple(law_moment(law, k) for k in range(1, order + 1)))


def compound_poisson(rho: DiscreteMeasure, flavor: str, order: int) -> MomentSequence:
    """Moments of the (free) compound Poisson law whose (free) cumulants are the moments of rho."""
    family = "CompoundPoisson" if flavor == "classical" else "CompoundFreePoisson"
    if flavor not in ("classical", "free"):
        raise UsageError("flavor must be 'classical' or 'free'")
    return law_moments(LawSpec(family, rho=rho), order)


BP_PARTNERS = {
    "PointMass": "PointMass",
    "Gaussian": "Semicircle",
    "ComplexGaussian": "Circular",
    "Poisson": "MarchenkoPastur",
    "Bessel": "FreeBessel",
    "CompoundPoisson": "CompoundFreePoisson",
}


def bercovici_pata_partner(law: LawSpec) -> LawSpec:
    fam = law.family
    partners = dict(BP_PARTNERS)
    partners.update({v: k for k, v in BP_PARTNERS.items()})
    if fam not in partners or (fam == "FreeBessel" and law.reading != "compound"):
        raise UsageError(f"{fam} has no Bercovici-Pata partner in this library")
    return LawSpec(partners[fam], t=law.t, s=law.s, c=law.c, rho=law.rho)


def marchenko_pastur_support(t: Number) -> Tuple[float, float]:
    """Support of the continuous part, read off the density."""
    r = math.sqrt(t)
    return (1 - r) ** 2, (1 + r) ** 2


def law_density(law: LawSpec, x: float) -> Tuple[float, List[Tuple[Number, Number]]]:
    """(density at x, atoms) for the families with a known real density or atomic form."""
    fam = law.family
    if law.is_colored:
        raise UsageError(f"{fam} is a planar law: no real density")
    t = float(law.t)
    if fam == "Semicircle":
        v = 4 * t - x * x
        return (math.sqrt(v) / (2 * math.pi * t) if v > 0 else 0.0), []
    if fam == "MarchenkoPastur":
        lo, hi = marchenko_pastur_support(t)
        d = math.sqrt(4 * t - (x - 1 - t) ** 2) / (2 * math.pi * x) if lo < x < hi and x > 0 else 0.0
        return d, law_atoms(law).atoms
    if fam == "Gaussian":
        return math.exp(-x * x / (2 * t)) / math.sqrt(2 * math.pi * t), []
    if fam in ("PointMass", "Poisson", "Bessel"):
        return 0.0, law_atoms(law).atoms
    raise LawRangeError(f"no closed-form density for {fam}")


def law_atoms(law: LawSpec) -> DiscreteMeasure:
    fam = law.family
    if fam == "PointMass":
        return DiscreteMeasure.point(law.c)
    if fam == "MarchenkoPastur":
        mass = max(1 - law.t, 0)
        return DiscreteMeasure([(0, mass)] if mass else [])
    if fam == "Poisson":
        return _poisson_atoms(float(law.t))
    if fam == "Bessel":
        return bessel_atoms(law.s, float(law.t))
    raise LawRangeError(f"{fam} is not atomic")


def _poisson_weights(t: float) -> Tuple[List[float], float]:
    weights, k, tail = [], 0, 1.0
    p = math.exp(-t)
    while True:
        weights.append(p)
        tail -= p
        k += 1
        if tail < TAIL_TOLERANCE and k > t:
            break
        p *= t / k
    return weights, max(tail, 0.0)


def _poisson_atoms(t: float) -> DiscreteMeasure:
    weights, tail = _poisson_weights(t)
    return DiscreteMeasure(list(enumerate(weights)), tail_mass=tail)


def bessel_atoms(s, t: float) -> DiscreteMeasure:
    """Law of sum_j w^j N_j, N_j independent Poisson(t/s), w = exp(2 pi i/s)."""
    s = parse_s(s)
    if s == INFINITY:
        raise LawRangeError("the s = inf Bessel law is not atomic")
    s = int(s)
    if s == 1:
        return _poisson_atoms(t)
    weights, tail = _poisson_weights(t / s)
    roots = [cmath.exp(2j * math.pi * j / s) for j in range(s)]
    dist: Dict[complex, float] = {0j: 1.0}
    for root in roots:
        nxt: Dict[complex, float] = {}
        for loc, mass in dist.items():
            for n, w in enumerate(weights):
                key = complex(round((loc + n * root).real, 9), round((loc + n * root).imag, 9))
                nxt[key] = nxt.get(key, 0.0) + mass * w
        dist = nxt
    total_tail = 1.0 - sum(dist.values())
    if s == 2:
        atoms = sorted((int(round(loc.real)), m) for loc, m in dist.items())
    else:
        atoms = sorted(dist.items(), key=lambda a: (a[0].real, a[0].imag))
    logger.debug("bessel_atoms_built", s=s, t=t, atoms=len(atoms), tail=total_tail)
    return DiscreteMeasure(atoms, tail_mass=max(total_tail, 0.0))


def bessel2_atom(r: int, t: float, terms: int = 60) -> float:
    """Mass of the s = 2 Bessel law at the integer r."""
    r = abs(r)
    return math.exp(-t) * sum((t / 2) ** (r + 2 * p) / (math.factorial(r + p) * math.factorial(p)) for p in range(terms))


def hyperspherical_q(N: int) -> float:
    """The root of q + 1/q = -N lying in (-1, 0)."""
    if N < 3:
        raise LawRangeError(f"free hyperspherical moments need N >= 3, got {N}")
    return (-N + math.sqrt(N * N - 4)) / 2


def free_hyperspherical_moment(N: int, l: int) -> float:
    """Moment of order 2l of a coordinate on the free real sphere of dimension N."""
    if l < 1:
        raise UsageError("l must be positive")
    q = hyperspherical_q(N)
    total = 0.0
    for r in range(-l - 1, l + 2):
        if r == 0:
            continue
        total += (-1) ** (r % 2) * math.comb(2 * l + 2, l + r + 1) * r / (1 + q ** r)
    return (q + 1) / (q - 1) / (l + 1) * total / (N + 2) ** l


def free_bessel_product_identity(s: int, t: Number, order: int) -> Tuple[MomentSequence, MomentSequence]:
    """Both sides of pi^(boxtimes s-1) boxtimes pi_t = ((1-t) delta_0 + t delta_1) boxtimes pi^(boxtimes s)."""
    if not 0 < t <= 1:
        raise LawRangeError(f"the Bernoulli factorization needs t in (0, 1], got {t}")
    if int(s) != s or s < 1:
        raise LawRangeError("s must be a positive integer")
    pi1 = law_moments(LawSpec("MarchenkoPastur", t=1), order)
    pit = law_moments(LawSpec("MarchenkoPastur", t=t), order)
    bernoulli = MomentSequence((t,) * order)
    lhs = free_multiplicative_convolution(free_multiplicative_power(pi1, s - 1), pit)
    rhs = free_multiplicative_convolution(bernoulli, free_multiplicative_power(pi1, s))
    return lhs, rhs
