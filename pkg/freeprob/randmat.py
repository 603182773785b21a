"""Seed-reproducible random matrix ensembles and their empirical moments and spectra.

Seed contract: a trial is keyed by (seed, trial). Its stream is
numpy Generator(Philox(SeedSequence(seed, spawn_key=(trial,)))), and every
Gaussian is produced by Box-Muller from that stream's uniforms. A bare integer
seed means (seed, 0).
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple, Union

import numpy as np
import structlog

from .config import get_settings
from .errors import ConfigurationLimitError, UsageError
from .partitions import ColoredWord, as_word
from .transforms import DensityGrid

logger = structlog.get_logger(__name__)

KINDS = ("wigner", "complex_gaussian", "wishart", "block_wishart")
BLOCK_MAPS = ("identity", "transpose", "trace_one", "diagonal")
NORMALIZATIONS = ("compound", "shifted")

TrialKey = Union[int, Tuple[int, int]]


@dataclass(frozen=True)
class EnsembleSpec:
    kind: str
    N: int = 0
    t: float = 1.0
    M: int = 0
    d: int = 0
    n: int = 0
    m: int = 0
    block_map: str = "identity"
    normalization: str = "compound"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UsageError(f"unknown ensemble {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.t <= 0:
            raise UsageError("t must be positive")
        if self.kind in ("wigner", "complex_gaussian") and self.N < 1:
            raise UsageError(f"{self.kind} needs N >= 1")
        if self.kind == "wishart" and (self.N < 1 or self.M < 1):
            raise UsageError("wishart needs N, M >= 1")
        if self.kind == "block_wishart":
            if min(self.d, self.n, self.m) < 1:
                raise UsageError("block_wishart needs d, n, m >= 1")
            if self.block_map not in BLOCK_MAPS:
                raise UsageError(f"block map must be one of {BLOCK_MAPS}")
            if self.normalization not in NORMALIZATIONS:
                raise UsageError(f"normalization must be one of {NORMALIZATIONS}")
        limit = get_settings().max_matrix
        if max(self.dimension, self.M, self.d * self.m) > limit:
            raise ConfigurationLimitError("matrix dimension", max(self.dimension, self.M, self.d * self.m), limit)

    @property
    def dimension(self) -> int:
        return self.d * self.n if self.kind == "block_wishart" else self.N

    @property
    def self_adjoint(self) -> bool:
        return self.kind != "complex_gaussian"

    def describe(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "block_wishart":
            out.update(d=self.d, n=self.n, m=self.m, block_map=self.block_map, normalization=self.normalization)
        else:
            out["N"] = self.N
            if self.kind == "wishart":
                out["M"] = self.M
            else:
                out["t"] = self.t
        return out


@dataclass(frozen=True)
class SpectrumSample:
    seeds: Tuple[TrialKey, ...]
    eigenvalues: np.ndarray
    trials: int


@dataclass(frozen=True)
class MomentEstimate:
    mean: float
    stderr: float
    trials: int

    def to_json(self) -> dict:
        return {"mean": self.mean, "stderr": self.stderr, "trials": self.trials}


def _key(seed: TrialKey) -> Tuple[int, int]:
    if isinstance(seed, tuple):
        return int(seed[0]), int(seed[1])
    return int(seed), 0


def seed_plan(seed: int, trials: int) -> List[Tuple[int, int]]:
    return [(seed, i) for i in range(trials)]


def trial_rng(seed: int, trial: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(trial,))))


def box_muller(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard normals from pairs of uniforms."""
    size = int(np.prod(shape))
    half = (size + 1) // 2
    u1 = rng.random(half)
    u2 = rng.random(half)
    r = np.sqrt(-2.0 * np.log1p(-u1))
    z = np.concatenate([r * np.cos(2 * np.pi * u2), r * np.sin(2 * np.pi * u2)])
    return z[:size].reshape(shape)


def complex_gaussian(rng: np.random.Generator, shape, t: float = 1.0) -> np.ndarray:
    """Centered complex normals with E|z|^2 = t."""
    re = box_muller(rng, shape)
    im = box_muller(rng, shape)
    return (re + 1j * im) * math.sqrt(t / 2)


def block_modify(W: np.ndarray, n: int, block_map: str) -> np.ndarray:
    """Apply a map to the n x n factor of a (d n) x (d n) matrix indexed W[(i,a),(j,b)]."""
    size = W.shape[0]
    if W.shape != (size, size) or n < 1 or size % n:
        raise UsageError(f"matrix of shape {W.shape} does not split into blocks of size {n}")
    if block_map not in BLOCK_MAPS:
        raise UsageError(f"block map must be one of {BLOCK_MAPS}")
    d = size // n
    W4 = W.reshape(d, n, d, n)
    if block_map == "identity":
        return W.copy()
    if block_map == "transpose":
        return W4.transpose(0, 3, 2, 1).reshape(size, size).copy()
    eye = np.eye(n)
    if block_map == "trace_one":
        traces = np.einsum("iaja->ij", W4)
        return np.einsum("ij,ab->iajb", traces, eye).reshape(size, size)
    diag = np.einsum("iaja->iaj", W4)
    return np.einsum("iaj,ab->iajb", diag, eye).reshape(size, size)


def sample(spec: EnsembleSpec, seed: TrialKey = 0) -> np.ndarray:
    """One matrix of the ensemble, before rescaling. Deterministic in (spec, seed)."""
    rng = trial_rng(*_key(seed))
    if spec.kind == "complex_gaussian":
        return complex_gaussian(rng, (spec.N, spec.N), spec.t)
    if spec.kind == "wigner":
        N = spec.N
        G = complex_gaussian(rng, (N, N), spec.t)
        upper = np.triu(G, k=1)
        diag = box_muller(rng, (N,)) * math.sqrt(spec.t)
        return upper + upper.conj().T + np.diag(diag).astype(complex)
    if spec.kind == "wishart":
        Y = complex_gaussian(rng, (spec.N, spec.M))
        return Y @ Y.conj().T
    Y = complex_gaussian(rng, (spec.d * spec.n, spec.d * spec.m))
    return block_modify(Y @ Y.conj().T, spec.n, spec.block_map)


def rescale_factor(spec: EnsembleSpec) -> float:
    if spec.kind in ("wigner", "complex_gaussian"):
        return 1 / math.sqrt(spec.N)
    if spec.kind == "wishart":
        return 1 / spec.N
    if spec.normalization == "compound":
        return 1 / spec.d
    return 1 / (spec.d * spec.m)


def _hermitian_eigenvalues(A: np.ndarray) -> np.ndarray:
    return np.linalg.eigvalsh((A + A.conj().T) / 2)


def _run_trials(seeds: Sequence[TrialKey], fn: Callable[[Tuple[int, int]], np.ndarray]) -> List[np.ndarray]:
    """Per-trial results, ordered by trial key so the merge does not depend on the order of `seeds`."""
    if not seeds:
        raise UsageError("at least one seed is needed")
    keys = sorted(_key(s) for s in seeds)
    with ThreadPoolExecutor() as pool:
        results = list(pool.map(fn, keys))
    logger.debug("simulation_trials_done", trials=len(keys))
    return results


def _estimates(per_trial: List[np.ndarray]) -> List[MomentEstimate]:
    data = np.array(per_trial, dtype=float)
    trials = data.shape[0]
    mean = data.sum(axis=0) / trials
    if trials > 1:
        stderr = data.std(axis=0, ddof=1) / math.sqrt(trials)
    else:
        stderr = np.zeros_like(mean)
    return [MomentEstimate(float(m), float(e), trials) for m, e in zip(mean, stderr)]


def empirical_moments(spec: EnsembleSpec, seeds: Sequence[TrialKey], order: int) -> List[MomentEstimate]:
    """E tr(A^p), p = 1..order, for the rescaled self-adjoint matrix A."""
    if not spec.self_adjoint:
        raise UsageError(f"{spec.kind} is not self-adjoint; use empirical_word_moment")
    scale = rescale_factor(spec)

    def trial(key):
        ev = _hermitian_eigenvalues(sample(spec, key)) * scale
        return np.array([np.mean(ev ** p) for p in range(1, order + 1)])

    return _estimates(_run_trials(seeds, trial))


def empirical_word_moment(spec: EnsembleSpec, seeds: Sequence[TrialKey], word) -> MomentEstimate:
    """E tr of the word in (A, A*), white letters A and black letters A*."""
    w: ColoredWord = as_word(word)
    scale = rescale_factor(spec)

    def trial(key):
        A = sample(spec, key) * scale
        Astar = A.conj().T
        P = np.eye(A.shape[0], dtype=complex)
        for i in range(len(w)):
            P = P @ (A if w.is_white(i) else Astar)
        return np.array([np.trace(P).real / A.shape[0]])

    return _estimates(_run_trials(seeds, trial))[0]


def spectrum_sample(spec: EnsembleSpec, seeds: Sequence[TrialKey]) -> SpectrumSample:
    if not spec.self_adjoint:
        raise UsageError(f"{spec.kind} is not self-adjoint: no real spectrum")
    scale = rescale_factor(spec)
    per_trial = _run_trials(seeds, lambda key: _hermitian_eigenvalues(sample(spec, key)) * scale)
    return SpectrumSample(tuple(seeds), np.sort(np.concatenate(per_trial)), len(per_trial))


def empirical_spectrum(spec: EnsembleSpec, seeds: Sequence[TrialKey], bin_width: float = 0.1) -> DensityGrid:
    """Pooled eigenvalue histogram of the rescaled matrix, as a density per bin centre."""
    if bin_width <= 0:
        raise UsageError("bin width must be positive")
    ev = spectrum_sample(spec, seeds).eigenvalues
    lo = math.floor(ev.min() / bin_width) * bin_width
    hi = math.ceil(ev.max() / bin_width) * bin_width
    nbins = max(int(round((hi - lo) / bin_width)), 1)
    counts, edges = np.histogram(ev, bins=nbins, range=(lo, lo + nbins * bin_width))
    centers = (edges[:-1] + edges[1:]) / 2
    return DensityGrid(centers, counts / (len(ev) * bin_width), bin_width=bin_width)


def l1_distance(grid: DensityGrid, density: Callable[[float], float]) -> float:
    """sum over bins of |histogram - density(centre)| times the bin width."""
    if grid.bin_width is None:
        raise UsageError("l1_distance needs a histogram grid")
    reference = np.array([density(float(x)) for x in grid.points])
    return float(np.sum(np.abs(grid.densities - reference)) * grid.bin_width)


def empirical_free_pair_moment(N: int, seeds: Sequence[TrialKey]) -> MomentEstimate:
    """E tr(ABAB) for independent rescaled unit-variance Wigner matrices; the free value is 0."""
    spec = EnsembleSpec("wigner", N=N)

    def trial(key):
        seed, index = key
        A = sample(spec, (seed, 2 * index)) / math.sqrt(N)
        B = sample(spec, (seed, 2 * index + 1)) / math.sqrt(N)
        AB = A @ B
        return np.array([np.trace(AB @ AB).real / N])

    return _estimates(_run_trials(seeds, trial))[0]


def permutation_fixed_point_moments(N: int, t: float, samples: int, seed: int, order: int,
                                    batch: int = 10000) -> List[float]:
    """Monte Carlo E[(fixed points of a uniform permutation among 1..floor(tN))^p], p = 1..order."""
    s = math.floor(t * N)
    if s < 1:
        raise UsageError("floor(tN) must be at least 1")
    rng = trial_rng(seed, 0)
    sums = np.zeros(order)
    done = 0
    while done < samples:
        size = min(batch, samples - done)
        perms = rng.permuted(np.tile(np.arange(N), (size, 1)), axis=1)
        fixed = (perms[:, :s] == np.arange(s)).sum(axis=1).astype(float)
        for p in range(order):
            sums[p] += np.sum(fixed ** (p + 1))
        done += size
    return [float(x) / samples for x in sums]
