import numpy as np
import pytest

from freeprob.config import get_settings
from freeprob.errors import ConfigurationLimitError, UsageError
from freeprob.laws import LawSpec, law_density
from freeprob.randmat import (
    EnsembleSpec,
    block_modify,
    box_muller,
    complex_gaussian,
    empirical_free_pair_moment,
    empirical_moments,
    empirical_spectrum,
    empirical_word_moment,
    l1_distance,
    permutation_fixed_point_moments,
    rescale_factor,
    sample,
    seed_plan,
    spectrum_sample,
    trial_rng,
)
from freeprob.transforms import DensityGrid


def test_samples_are_reproducible():
    spec = EnsembleSpec("wigner", N=20)
    assert np.array_equal(sample(spec, (4, 2)), sample(spec, (4, 2)))
    assert not np.array_equal(sample(spec, (4, 2)), sample(spec, (4, 3)))
    # a bare seed is trial 0
    assert np.array_equal(sample(spec, 4), sample(spec, (4, 0)))


def test_trial_order_does_not_change_estimates():
    spec = EnsembleSpec("wigner", N=30)
    seeds = seed_plan(9, 4)
    forward = empirical_moments(spec, seeds, 3)
    backward = empirical_moments(spec, list(reversed(seeds)), 3)
    assert [e.mean for e in forward] == [e.mean for e in backward]
    assert forward[0].trials == 4


def test_box_muller_is_standard_normal():
    z = box_muller(trial_rng(5), (200000,))
    assert abs(z.mean()) < 0.01
    assert abs(z.var() - 1) < 0.02
    assert box_muller(trial_rng(5), (3, 7)).shape == (3, 7)


def test_complex_gaussian_variance():
    z = complex_gaussian(trial_rng(6), (100000,), t=2.0)
    assert abs(np.mean(np.abs(z) ** 2) - 2.0) < 0.05


def test_wigner_is_hermitian():
    A = sample(EnsembleSpec("wigner", N=15), 1)
    assert np.allclose(A, A.conj().T)


def test_block_maps():
    W = np.arange(16, dtype=complex).reshape(4, 4)
    assert np.array_equal(block_modify(block_modify(W, 2, "transpose"), 2, "transpose"), W)
    assert np.array_equal(block_modify(W, 2, "identity"), W)
    eye = np.eye(4)
    assert np.allclose(block_modify(eye, 2, "trace_one"), 2 * eye)
    assert np.allclose(block_modify(eye, 2, "diagonal"), eye)
    with pytest.raises(UsageError):
        block_modify(np.eye(3), 2, "transpose")


def test_wigner_moments_approach_semicircle():
    m = empirical_moments(EnsembleSpec("wigner", N=200), seed_plan(1, 5), 4)
    assert abs(m[0].mean) < 0.05
    assert abs(m[1].mean - 1) < 0.05
    assert abs(m[3].mean - 2) < 0.1


def test_wishart_moments_approach_marchenko_pastur():
    m = empirical_moments(EnsembleSpec("wishart", N=100, M=50), seed_plan(2, 4), 2)
    assert abs(m[0].mean - 0.5) < 0.025
    assert abs(m[1].mean - 0.75) < 0.04


def test_complex_gaussian_word_moments():
    spec = EnsembleSpec("complex_gaussian", N=150)
    seeds = seed_plan(3, 3)
    assert abs(empirical_word_moment(spec, seeds, "ob").mean - 1) < 0.05
    assert abs(empirical_word_moment(spec, seeds, "obob").mean - 2) < 0.2
    with pytest.raises(UsageError):
        empirical_moments(spec, seeds, 2)
    with pytest.raises(UsageError):
        spectrum_sample(spec, seeds)


def test_empirical_spectrum_is_a_density():
    spec = EnsembleSpec("wigner", N=200)
    grid = empirical_spectrum(spec, seed_plan(1, 10), 0.1)
    assert grid.continuous_mass() == pytest.approx(1.0)
    law = LawSpec("Semicircle", t=1)
    assert l1_distance(grid, lambda x: law_density(law, x)[0]) < 0.1
    with pytest.raises(UsageError):
        l1_distance(DensityGrid(np.zeros(2), np.zeros(2)), lambda x: 0.0)


def test_ensemble_validation(monkeypatch):
    with pytest.raises(UsageError):
        EnsembleSpec("gue", N=3)
    with pytest.raises(UsageError):
        EnsembleSpec("wigner", N=3, t=0)
    with pytest.raises(UsageError):
        EnsembleSpec("block_wishart", d=2, n=2, m=0)
    monkeypatch.setenv("FREEPROB_MAX_MATRIX", "50")
    get_settings.cache_clear()
    with pytest.raises(ConfigurationLimitError):
        EnsembleSpec("wigner", N=100)


def test_block_wishart_normalisations():
    compound = EnsembleSpec("block_wishart", d=4, n=2, m=3)
    shifted = EnsembleSpec("block_wishart", d=4, n=2, m=3, normalization="shifted")
    assert compound.dimension == 8
    assert rescale_factor(compound) == pytest.approx(1 / 4)
    assert rescale_factor(shifted) == pytest.approx(1 / 12)


def test_independent_wigner_matrices_are_asymptotically_free():
    assert abs(empirical_free_pair_moment(100, seed_plan(4, 4)).mean) < 0.1


def test_fixed_points_of_truncated_permutations():
    got = permutation_fixed_point_moments(50, 0.5, 20000, 3, 2)
    assert got[0] == pytest.approx(0.5, abs=0.03)
    assert got[1] == pytest.approx(0.5 + 25 * 24 / (50 * 49), abs=0.05)
    with pytest.raises(UsageError):
        permutation_fixed_point_moments(1, 0.5, 10, 3, 1)
