"""Cauchy, R and S transforms on truncated series, convolutions, Stieltjes inversion and Hankel checks.

Series conventions:
  G   Cauchy transform, stored as a series in w = 1/xi: G = w + M_1 w^2 + M_2 w^3 + ...
  R   R-transform in z: R = kappa_1 + kappa_2 z + kappa_3 z^2 + ...
  zK  z times K(z) = 1/z + R(z), i.e. 1 + z R(z)
  S   S-transform in z, built from psi = f - 1 and its compositional inverse chi
"""
import cmath
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import structlog
from scipy.integrate import trapezoid
from scipy.interpolate import pade

from .cumulants import CumulantSequence, MomentSequence, cumulants_from_moments, moments_from_cumulants
from .errors import SizeMismatchError, TransformUndefinedError, UsageError
from .linalg import determinant
from .series import FormalSeries

logger = structlog.get_logger(__name__)

CAUCHY_VARIABLE = "1/xi"
ATOM_THRESHOLD = 10.0


def cauchy_from_moments(m: MomentSequence) -> FormalSeries:
    return FormalSeries([0, 1] + list(m.values), order=m.order + 1, variable=CAUCHY_VARIABLE)


def r_from_moments(m: MomentSequence) -> FormalSeries:
    """Coefficient of z^(n-1) is the free cumulant kappa_n, n = 1..order."""
    if m.order < 1:
        raise UsageError("R-transform needs at least one moment")
    w = cauchy_from_moments(m).reverse()          # w(z) = 1/K(z)
    v = w.divide_z().reciprocal()                 # z K(z) = 1 + z R(z)
    return FormalSeries(v.coefficients[1:], order=m.order - 1)


def k_from_r(R: FormalSeries) -> FormalSeries:
    """z K(z) = 1 + z R(z); K itself carries the 1/z pole."""
    return 1 + R.multiply_z()


def moments_from_r(R: FormalSeries) -> MomentSequence:
    n = R.order + 1
    w = k_from_r(R).reciprocal().multiply_z()    # 1/K(z)
    w.variable = CAUCHY_VARIABLE
    G = w.reverse()
    return MomentSequence(tuple(G[j + 1] for j in range(1, n + 1)))


def s_from_moments(m: MomentSequence) -> FormalSeries:
    if m.order < 1 or m.values[0] == 0:
        raise TransformUndefinedError("S-transform undefined at this truncation: first moment is zero")
    psi = FormalSeries([0] + list(m.values), order=m.order)
    chi = psi.reverse()
    one_plus_z = FormalSeries([1, 1], order=m.order - 1)
    return one_plus_z * chi.divide_z()


def moments_from_s(S: FormalSeries) -> MomentSequence:
    n = S.order + 1
    if S[0] == 0:
        raise TransformUndefinedError("S-transform with zero constant term")
    chi = (S * FormalSeries([1, 1], order=S.order).reciprocal()).multiply_z()
    psi = chi.reverse()
    return MomentSequence(tuple(psi[j] for j in range(1, n + 1)))


def _same_order(a: MomentSequence, b: MomentSequence) -> None:
    if a.order != b.order:
        raise SizeMismatchError(a.order, b.order)


def _add_cumulants(a: MomentSequence, b: MomentSequence, flavor: str) -> MomentSequence:
    _same_order(a, b)
    ca = cumulants_from_moments(a, flavor).values
    cb = cumulants_from_moments(b, flavor).values
    return moments_from_cumulants(CumulantSequence(tuple(x + y for x, y in zip(ca, cb)), flavor))


def free_additive_convolution(a: MomentSequence, b: MomentSequence) -> MomentSequence:
    return _add_cumulants(a, b, "free")


def classical_convolution(a: MomentSequence, b: MomentSequence) -> MomentSequence:
    return _add_cumulants(a, b, "classical")


def free_multiplicative_convolution(a: MomentSequence, b: MomentSequence) -> MomentSequence:
    _same_order(a, b)
    return moments_from_s(s_from_moments(a) * s_from_moments(b))


def free_multiplicative_power(m: MomentSequence, s: int) -> MomentSequence:
    """m boxtimes m boxtimes ... (s factors); s = 0 gives delta_1."""
    if s < 0:
        raise UsageError("power must be nonnegative")
    if s == 0:
        return MomentSequence((Fraction(1),) * m.order)
    S = s_from_moments(m) ** s
    return moments_from_s(S)


def hankel_check(m: MomentSequence) -> Tuple[bool, Optional[int]]:
    """(True, None) when every available Hankel determinant det(M_{i+j})_{i,j<=d} is >= 0,
    else (False, first failing d)."""
    for d in range(m.order // 2 + 1):
        H = np.array([[Fraction(m.moment(i + j)) for j in range(d + 1)] for i in range(d + 1)], dtype=object)
        if determinant(H) < 0:
            return False, d
    return True, None


# closed-form Cauchy transforms; the sqrt(xi-a)sqrt(xi-b) product picks the branch with G ~ 1/xi

def semicircle_cauchy(t: float = 1.0) -> Callable[[complex], complex]:
    r = 2 * math.sqrt(t)

    def G(xi: complex) -> complex:
        root = cmath.sqrt(xi - r) * cmath.sqrt(xi + r)
        return (xi - root) / (2 * t)

    return G


def marchenko_pastur_cauchy(t: float = 1.0) -> Callable[[complex], complex]:
    a, b = (1 - math.sqrt(t)) ** 2, (1 + math.sqrt(t)) ** 2

    def G(xi: complex) -> complex:
        root = cmath.sqrt(xi - a) * cmath.sqrt(xi - b)
        return (xi + 1 - t - root) / (2 * xi)

    return G


def point_mass_cauchy(c: float) -> Callable[[complex], complex]:
    return lambda xi: 1 / (xi - c)


def cauchy_evaluate(m: MomentSequence) -> Callable[[complex], complex]:
    """Diagonal Pade approximant of the 1/xi series; approximate away from the real axis."""
    coeffs = [float(x) for x in cauchy_from_moments(m).coefficients]
    p, q = pade(coeffs, (len(coeffs) - 1) // 2)

    def G(xi: complex) -> complex:
        w = 1 / xi
        return p(w) / q(w)

    return G


@dataclass
class DensityGrid:
    points: np.ndarray
    densities: np.ndarray
    atoms: List[Tuple[float, float]] = field(default_factory=list)
    eps: Optional[float] = None
    bin_width: Optional[float] = None

    def continuous_mass(self) -> float:
        if self.bin_width is not None:
            return float(np.sum(self.densities) * self.bin_width)
        return float(trapezoid(self.densities, self.points))

    def total_mass(self) -> float:
        return self.continuous_mass() + sum(mass for _, mass in self.atoms)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("x,density\n")
        for x, d in zip(self.points, self.densities):
            buf.write(f"{float(x)!r},{float(d)!r}\n")
        return buf.getvalue()

    def atoms_json(self) -> List[dict]:
        return [{"location": float(x), "mass": float(mass)} for x, mass in self.atoms]


def _atom_mass(G, x: float, eps: float) -> float:
    coarse = eps * abs(G(complex(x, eps)).imag)
    fine = (eps / 2) * abs(G(complex(x, eps / 2)).imag)
    return 2 * fine - coarse


def stieltjes_invert(G: Callable[[complex], complex], grid: Sequence[float], eps: float,
                     atom_candidates: Sequence[float] = ()) -> DensityGrid:
    """density(x) = -Im G(x + i eps)/pi; points where |Im G| exceeds the atom threshold become atoms."""
    if eps <= 0:
        raise UsageError("eps must be positive")
    xs = np.asarray(grid, dtype=float)
    im = np.array([G(complex(x, eps)).imag for x in xs])
    densities = -im / math.pi
    flagged = np.abs(im) > ATOM_THRESHOLD

    atoms: List[Tuple[float, float]] = []
    i = 0
    while i < len(xs):
        if not flagged[i]:
            i += 1
            continue
        j = i
        while j + 1 < len(xs) and flagged[j + 1]:
            j += 1
        peak = i + int(np.argmax(np.abs(im[i:j + 1])))
        atoms.append((float(xs[peak]), _atom_mass(G, xs[peak], eps)))
        densities[i:j + 1] = 0.0
        i = j + 1

    for c in atom_candidates:
        if any(abs(c - x) <= eps for x, _ in atoms):
            continue
        if abs(G(complex(c, eps)).imag) > ATOM_THRESHOLD:
            atoms.append((float(c), _atom_mass(G, c, eps)))

    logger.debug("stieltjes_inverted", points=len(xs), eps=eps, atoms=len(atoms))
    return DensityGrid(xs, densities, sorted(atoms), eps=eps)
