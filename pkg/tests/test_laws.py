import math
from fractions import Fraction

import pytest
from scipy.integrate import quad

from freeprob.cumulants import bercovici_pata
from freeprob.errors import LawRangeError, UsageError
from freeprob.laws import (
    DiscreteMeasure,
    LawSpec,
    bercovici_pata_partner,
    bessel2_atom,
    bessel_atoms,
    compound_poisson,
    free_bessel_product_identity,
    free_hyperspherical_moment,
    hyperspherical_q,
    law_atoms,
    law_cumulants,
    law_density,
    law_moment,
    law_moments,
    marchenko_pastur_support,
)
from freeprob.transforms import classical_convolution, free_additive_convolution


def test_classical_moments():
    assert law_moment(LawSpec("Gaussian", t=1), 4) == 3
    assert law_moment(LawSpec("Gaussian", t=2), 3) == 0
    assert law_moment(LawSpec("Poisson", t=2), 3) == 22
    assert law_moment(LawSpec("PointMass", c=Fraction(1, 2)), 3) == Fraction(1, 8)


def test_free_moments():
    assert law_moments(LawSpec("Semicircle", t=1), 6).values == (0, 1, 0, 2, 0, 5)
    assert law_moments(LawSpec("MarchenkoPastur", t=1), 5).values == (1, 2, 5, 14, 42)
    assert law_moment(LawSpec("MarchenkoPastur", t=Fraction(1, 2)), 2) == Fraction(3, 4)


def test_closed_forms_agree_with_partition_sums():
    t = Fraction(2, 3)
    laws = [
        LawSpec("Gaussian", t=t), LawSpec("Poisson", t=t), LawSpec("Semicircle", t=t),
        LawSpec("MarchenkoPastur", t=t), LawSpec("Bessel", t=t, s=2), LawSpec("Bessel", t=t, s=3),
        LawSpec("FreeBessel", t=t, s=2),
    ]
    for law in laws:
        for k in range(1, 7):
            assert law_moment(law, k, "closed") == law_moment(law, k, "partitions"), (law.family, k)


def test_colored_moments():
    gauss = LawSpec("ComplexGaussian", t=1)
    assert law_moment(gauss, "ob") == 1
    assert law_moment(gauss, "oobb") == 2
    assert law_moment(gauss, "ooob") == 0
    circular = LawSpec("Circular", t=1)
    assert law_moment(circular, "obob") == 2
    assert law_moment(circular, "oobb") == 1
    with pytest.raises(UsageError):
        law_moment(circular, "oobb", "closed")
    with pytest.raises(UsageError):
        law_moment(LawSpec("Semicircle"), "ob")


def test_bessel_laws():
    assert law_moments(LawSpec("Bessel", s=2), 4).values == (0, 1, 0, 4)
    assert law_moment(LawSpec("Bessel", s="inf"), 3) == 0
    assert law_moment(LawSpec("Bessel", s="inf"), "ob") == 1
    assert law_moments(LawSpec("FreeBessel", s=2), 4).values == (0, 1, 0, 3)


def test_multiplicative_free_bessel():
    law = LawSpec("FreeBessel", s=2, t=1, reading="multiplicative")
    assert law_moments(law, 4).values == (1, 3, 12, 55)
    with pytest.raises(LawRangeError):
        LawSpec("FreeBessel", s=Fraction(1, 2), t=2, reading="multiplicative")


def test_compound_laws():
    assert law_moments(LawSpec("CompoundPoisson", rho=DiscreteMeasure.point(1, 2)), 5) == \
        law_moments(LawSpec("Poisson", t=2), 5)
    free = compound_poisson(DiscreteMeasure.roots_of_unity(2), "free", 6)
    assert free == law_moments(LawSpec("FreeBessel", s=2), 6)
    with pytest.raises(UsageError):
        compound_poisson(DiscreteMeasure.point(1), "boolean", 3)


def test_law_validation():
    with pytest.raises(LawRangeError):
        LawSpec("Semicircle", t=0)
    with pytest.raises(UsageError):
        LawSpec("Cauchy")
    with pytest.raises(UsageError):
        LawSpec("CompoundFreePoisson")
    with pytest.raises(LawRangeError):
        LawSpec("FreeHyperspherical", N=1)
    with pytest.raises(LawRangeError):
        LawSpec("FreeHyperspherical", N=2)
    with pytest.raises(UsageError):
        DiscreteMeasure([(0, -1)])


def test_cumulants():
    c = law_cumulants(LawSpec("MarchenkoPastur", t=2), 4)
    assert c.flavor == "free" and c.values == (2, 2, 2, 2)
    assert law_cumulants(LawSpec("Bessel", s=3), 6).values == (0, 0, 1, 0, 0, 1)
    with pytest.raises(UsageError):
        law_cumulants(LawSpec("Circular"), 3)


def test_bercovici_pata_partners():
    partner = bercovici_pata_partner(LawSpec("Gaussian", t=2))
    assert partner.family == "Semicircle" and partner.t == 2
    assert bercovici_pata_partner(LawSpec("MarchenkoPastur")).family == "Poisson"
    assert bercovici_pata(law_moments(LawSpec("Gaussian", t=1), 6)) == law_moments(LawSpec("Semicircle", t=1), 6)
    with pytest.raises(UsageError):
        bercovici_pata_partner(LawSpec("FreeHyperspherical", N=4))


def test_densities_and_atoms():
    assert law_density(LawSpec("Semicircle"), 0.0)[0] == pytest.approx(1 / math.pi)
    assert law_density(LawSpec("Semicircle"), 2.5)[0] == 0.0
    assert marchenko_pastur_support(Fraction(1, 4)) == pytest.approx((0.25, 2.25))
    atoms = law_atoms(LawSpec("MarchenkoPastur", t=Fraction(1, 2))).atoms
    assert atoms == [(0, Fraction(1, 2))]
    assert law_atoms(LawSpec("MarchenkoPastur", t=2)).atoms == []
    with pytest.raises(UsageError):
        law_density(LawSpec("Circular"), 0.0)


def test_poisson_atoms_are_normalised():
    measure = law_atoms(LawSpec("Poisson", t=1))
    assert measure.atoms[0][1] == pytest.approx(math.exp(-1))
    assert float(measure.total_mass()) + measure.tail_mass == pytest.approx(1.0)


def test_bessel_atoms_match_modified_bessel_masses():
    measure = bessel_atoms(2, 1.0)
    masses = dict(measure.atoms)
    for r in (-2, 0, 1, 3):
        assert masses[r] == pytest.approx(bessel2_atom(r, 1.0), abs=1e-9)
    with pytest.raises(LawRangeError):
        bessel_atoms("inf", 1.0)


def test_free_hyperspherical():
    for N in range(3, 8):
        assert free_hyperspherical_moment(N, 1) == pytest.approx(1 / N, abs=1e-12)
    assert law_moment(LawSpec("FreeHyperspherical", N=5), 3) == 0
    with pytest.raises(LawRangeError):
        hyperspherical_q(2)


def test_free_bessel_factorisation():
    lhs, rhs = free_bessel_product_identity(2, Fraction(1, 2), 5)
    assert lhs == rhs
    with pytest.raises(LawRangeError):
        free_bessel_product_identity(2, 2, 5)


def test_describe():
    law = LawSpec("FreeBessel", s=3, t=Fraction(1, 2))
    assert law.describe() == {"family": "FreeBessel", "t": "1/2", "s": "3", "reading": "compound"}


@pytest.mark.parametrize("family", ["Semicircle", "MarchenkoPastur"])
@pytest.mark.parametrize("t", [Fraction(1, 2), Fraction(1), Fraction(2)])
def test_densities_integrate_to_the_moments(family, t):
    law = LawSpec(family, t=t)
    if family == "Semicircle":
        lo, hi = -2 * math.sqrt(t), 2 * math.sqrt(t)
    else:
        lo, hi = marchenko_pastur_support(t)
    atoms = law_density(law, lo)[1]

    def integral(p):
        return quad(lambda x: x ** p * law_density(law, x)[0], lo, hi, limit=200)[0]

    mass = integral(0) + sum(float(m) for _, m in atoms)
    assert mass == pytest.approx(1.0, abs=1e-6)
    for p in range(1, 5):
        expected = float(law_moment(law, p)) - sum(float(x) ** p * float(m) for x, m in atoms)
        assert integral(p) == pytest.approx(expected, rel=1e-6, abs=1e-9)


@pytest.mark.parametrize("s", [1, 2, 3])
@pytest.mark.parametrize("t,u", [(Fraction(1, 2), Fraction(1, 3)), (1, 2), (Fraction(3, 2), Fraction(5, 2))])
def test_bessel_laws_form_convolution_semigroups(s, t, u):
    def moments(family, r):
        return law_moments(LawSpec(family, s=s, t=r), 6)

    assert classical_convolution(moments("Bessel", t), moments("Bessel", u)) == moments("Bessel", t + u)
    assert free_additive_convolution(moments("FreeBessel", t), moments("FreeBessel", u)) == \
        moments("FreeBessel", t + u)


@pytest.mark.parametrize("law", [
    LawSpec("Gaussian"),
    LawSpec("Poisson"),
    LawSpec("Bessel", s=2),
    LawSpec("Bessel", s=3),
    LawSpec("PointMass", c=Fraction(3, 2)),
], ids=lambda law: law.family + (str(law.s) if law.family == "Bessel" else ""))
@pytest.mark.parametrize("t", [Fraction(1, 2), 1, 3])
def test_bercovici_pata_maps_each_family_to_its_partner(law, t):
    law = LawSpec(law.family, t=t, s=law.s, c=law.c)
    partner = bercovici_pata_partner(law)
    classical, free = law_moments(law, 6), law_moments(partner, 6)
    assert bercovici_pata(classical) == free
    assert bercovici_pata(free, "free_to_classical") == classical
