"""Acceptance checks, grouped into the `exact` and `montecarlo` suites.

Each check returns (passed, detail); `run_suite` times them, logs failures and
leaves one record per run in the run log.
"""
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import structlog

from . import exactcount
from .cumulants import (
    CumulantSequence,
    MomentSequence,
    bercovici_pata,
    cumulants_from_moments,
    moments_from_cumulants,
)
from .errors import UsageError
from .graphs import ade_graph, circular_even_moments, theta_direct, theta_from_poincare
from .laws import DiscreteMeasure, LawSpec, free_hyperspherical_moment, law_density, law_moments
from .partitions import (
    Category,
    count,
    enumerate_partitions,
    even_block_count,
    fatten,
    noncrossing_pairings_count_by_recurrence,
    shrink,
)
from .provenance import record_run
from .randmat import (
    EnsembleSpec,
    empirical_moments,
    empirical_spectrum,
    l1_distance,
    permutation_fixed_point_moments,
    seed_plan,
)
from .transforms import (
    free_additive_convolution,
    marchenko_pastur_cauchy,
    r_from_moments,
    s_from_moments,
    semicircle_cauchy,
    stieltjes_invert,
)
from .weingarten import (
    EasyGroup,
    gram_determinant,
    gram_determinant_formula,
    integrate_monomial,
    sn_closed_form,
    truncated_character_moments,
    truncated_character_stirling,
    weingarten,
)

logger = structlog.get_logger(__name__)

SUITES = ("exact", "montecarlo", "all")

CheckOutcome = Tuple[bool, Dict[str, object]]


@dataclass
class CheckResult:
    name: str
    suite: str
    passed: bool
    seconds: float
    detail: Dict[str, object] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "suite": self.suite, "passed": self.passed,
                "seconds": round(self.seconds, 3), "detail": self.detail}


def _within(value: float, target: float, rel: float) -> bool:
    return abs(value - target) <= rel * abs(target)


# exact suite

POKER_EXPECTED = {
    "one_pair": Fraction(480, 899),
    "two_pairs": Fraction(108, 899),
    "three_of_a_kind": Fraction(48, 899),
    "straight": Fraction(255, 12586),
    "flush": Fraction(13, 12586),
    "full_house": Fraction(6, 899),
    "four_of_a_kind": Fraction(1, 899),
    "straight_flush": Fraction(1, 12586),
}


def check_poker(seed: int) -> CheckOutcome:
    probs = exactcount.poker_probabilities()
    enumerated = exactcount.poker_hand_counts()
    formula = exactcount.poker_counts_by_formula()
    mismatched = [k for k, v in POKER_EXPECTED.items() if probs[k] != v]
    oracle = [k for k in formula if formula[k] != enumerated[k]]
    return not mismatched and not oracle, {"mismatched": mismatched, "oracle_disagrees": oracle}


def check_gram_determinant(seed: int) -> CheckOutcome:
    failures = []
    for k in range(1, 6):
        for N in range(1, 9):
            if gram_determinant(k, N) != gram_determinant_formula(k, N):
                failures.append(f"k={k},N={N}")
    return not failures, {"failures": failures}


def check_orthogonal_weingarten(seed: int) -> CheckOutcome:
    failures = []
    group = EasyGroup("O")
    for N in range(3, 11):
        scale = Fraction(1, N * (N - 1) * (N + 2))
        table = weingarten(group, 4, N)
        for a in range(3):
            for b in range(3):
                expected = scale * (N + 1 if a == b else -1)
                if table.wg[a, b] != expected:
                    failures.append(f"N={N} entry ({a},{b})")
        integrals = {
            "u11^4": (integrate_monomial(group, N, [1] * 4, [1] * 4), Fraction(3, N * (N + 2))),
            "u11^2 u12^2": (integrate_monomial(group, N, [1] * 4, [1, 1, 2, 2]), Fraction(1, N * (N + 2))),
            "u11^2 u22^2": (integrate_monomial(group, N, [1, 1, 2, 2], [1, 1, 2, 2]), scale * (N + 1)),
            "u11 u12 u21 u22": (integrate_monomial(group, N, [1, 1, 2, 2], [1, 2, 1, 2]), -scale),
        }
        failures += [f"N={N} {name}" for name, (got, want) in integrals.items() if got != want]
    return not failures, {"failures": failures}


def check_symmetric_oracle(seed: int) -> CheckOutcome:
    """The S_N integral depends on the indices only through their kernels; every kernel pair is tested."""
    N = 5
    group = EasyGroup("S")
    checked, failures = 0, []
    for k in range(1, 5):
        kernels = enumerate_partitions(Category("P"), k)
        for a in kernels:
            rows = [x + 1 for x in a.labels]
            for b in kernels:
                cols = [x + 1 for x in b.labels]
                checked += 1
                if integrate_monomial(group, N, rows, cols) != sn_closed_form(N, rows, cols):
                    failures.append(f"{a} vs {b}")
    return not failures, {"kernel_pairs": checked, "failures": failures}


def _classical_closed(k: List[Fraction]) -> List[Fraction]:
    k1, k2, k3, k4 = k
    return [k1, k2 + k1 ** 2, k3 + 3 * k2 * k1 + k1 ** 3,
            k4 + 4 * k3 * k1 + 3 * k2 ** 2 + 6 * k2 * k1 ** 2 + k1 ** 4]


def _free_closed(k: List[Fraction]) -> List[Fraction]:
    k1, k2, k3, k4 = k
    return [k1, k2 + k1 ** 2, k3 + 3 * k2 * k1 + k1 ** 3,
            k4 + 4 * k3 * k1 + 2 * k2 ** 2 + 6 * k2 * k1 ** 2 + k1 ** 4]


def check_moment_cumulant(seed: int) -> CheckOutcome:
    rng = random.Random(seed)
    failures = []
    for _ in range(10):
        k = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(4)]
        for flavor, closed in (("classical", _classical_closed), ("free", _free_closed)):
            if list(moments_from_cumulants(CumulantSequence(k, flavor)).values) != closed(k):
                failures.append(f"{flavor} closed form at {k}")
        m = MomentSequence([Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(10)])
        for flavor in ("classical", "free"):
            if moments_from_cumulants(cumulants_from_moments(m, flavor)) != m:
                failures.append(f"{flavor} round trip")
    bp = bercovici_pata(MomentSequence((1, 2, 5, 15, 52)), "classical_to_free")
    if list(bp.values) != [1, 2, 5, 14, 42]:
        failures.append(f"Bercovici-Pata gave {list(bp.values)}")
    return not failures, {"failures": failures}


def _compound_free_poisson_r(m: int, n: int, order: int):
    rho = DiscreteMeasure([(-1, Fraction(m * (n - 1), 2)), (1, Fraction(m * (n + 1), 2))])
    return r_from_moments(law_moments(LawSpec("CompoundFreePoisson", rho=rho), order))


def check_transforms(seed: int) -> CheckOutcome:
    failures = []
    for t in (Fraction(1, 2), Fraction(1), Fraction(2)):
        moments = law_moments(LawSpec("MarchenkoPastur", t=t), 11)
        R = r_from_moments(moments)
        if list(R.coefficients) != [t] * 11:
            failures.append(f"R of pi_{t}")
        S = s_from_moments(moments)
        if list(S.coefficients) != [Fraction((-1) ** n) / t ** (n + 1) for n in range(11)]:
            failures.append(f"S of pi_{t}")
    for s, t in ((Fraction(1, 2), Fraction(3, 2)), (Fraction(1), Fraction(2))):
        for family in ("Semicircle", "MarchenkoPastur"):
            a = law_moments(LawSpec(family, t=s), 8)
            b = law_moments(LawSpec(family, t=t), 8)
            if free_additive_convolution(a, b) != law_moments(LawSpec(family, t=s + t), 8):
                failures.append(f"{family} {s} + {t}")
    for m, n in ((1, 2), (2, 3), (3, 2)):
        R = _compound_free_poisson_r(m, n, 9)
        s, t = Fraction(m * (n + 1), 2), Fraction(m * (n - 1), 2)
        # R_{pi_s}(z) - R_{pi_t}(-z)
        expected = [s - t * (-1) ** p for p in range(9)]
        if list(R.coefficients) != expected:
            failures.append(f"R decomposition m={m} n={n}")
    return not failures, {"failures": failures}


def check_stieltjes_inversion(seed: int) -> CheckOutcome:
    eps = 1e-4
    grid = np.linspace(-1.9, 1.9, 381)
    recovered = stieltjes_invert(semicircle_cauchy(1.0), grid, eps)
    law = LawSpec("Semicircle", t=1)
    error = max(abs(d - law_density(law, float(x))[0]) for x, d in zip(recovered.points, recovered.densities))
    mp = stieltjes_invert(marchenko_pastur_cauchy(0.5), np.linspace(-0.5, 3.5, 401), eps, atom_candidates=[0.0])
    at_zero = [mass for x, mass in mp.atoms if abs(x) < 1e-9]
    mass = at_zero[0] if at_zero else 0.0
    passed = error <= 1e-3 and abs(mass - 0.5) <= 0.01
    return passed, {"semicircle_sup_error": float(error), "atom_mass_at_zero": float(mass)}


def check_truncated_characters_exact(seed: int) -> CheckOutcome:
    failures = []
    group = EasyGroup("S")
    for N in range(4, 9):
        for t in (Fraction(1), Fraction(1, 2)):
            s = math.floor(t * N)
            for k in range(1, 5):
                if truncated_character_moments(group, N, t, k) != truncated_character_stirling(N, s, k):
                    failures.append(f"N={N} t={t} k={k}")
    return not failures, {"failures": failures}


def check_free_hyperspherical(seed: int) -> CheckOutcome:
    failures = []
    for N in range(3, 11):
        if abs(free_hyperspherical_moment(N, 1) - 1 / N) > 1e-12:
            failures.append(f"l=1 N={N}")
    group = EasyGroup("O", free=True)
    for N in range(4, 9):
        exact = float(integrate_monomial(group, N, [1] * 4, [1] * 4))
        if abs(free_hyperspherical_moment(N, 2) - exact) > 1e-8:
            failures.append(f"l=2 N={N}")
    N = 10 ** 4
    for l in range(1, 4):
        if not _within(N ** l * free_hyperspherical_moment(N, l), exactcount.catalan(l), 0.01):
            failures.append(f"catalan limit l={l}")
    return not failures, {"failures": failures}


def check_graphs(seed: int) -> CheckOutcome:
    failures = []
    for k in range(1, 6):
        moments = circular_even_moments(ade_graph(f"At{2 * k}"), 10)
        if moments != [Fraction(1 if n % k == 0 else 0) for n in range(11)]:
            failures.append(f"At{2 * k}")
    rng = random.Random(seed)
    for _ in range(20):
        c = [1] + [rng.randint(-20, 20) for _ in range(12)]
        if theta_from_poincare(c, 12) != theta_direct(c, 12):
            failures.append(f"theta at {c}")
    return not failures, {"failures": failures}


def check_category_counts(seed: int) -> CheckOutcome:
    failures = []
    for k in range(1, 9):
        if count(Category("NC"), k) != exactcount.catalan(k):
            failures.append(f"NC({k})")
        if count(Category("NC2"), 2 * k) != exactcount.catalan(k):
            failures.append(f"NC2({2 * k})")
        if noncrossing_pairings_count_by_recurrence(k) != exactcount.catalan(k):
            failures.append(f"recurrence {k}")
        if count(Category("P"), k) != exactcount.bell(k):
            failures.append(f"P({k})")
        if count(Category("P2"), 2 * k) != exactcount.odd_double_factorial(k):
            failures.append(f"P2({2 * k})")
        if len(enumerate_partitions(Category("NC"), k)) != exactcount.catalan(k):
            failures.append(f"NC({k}) enumeration")
        if len(enumerate_partitions(Category("P"), k)) != exactcount.bell(k):
            failures.append(f"P({k}) enumeration")
    for k in range(1, 6):
        fattened = set()
        for p in enumerate_partitions(Category("NC"), k):
            q = fatten(p)
            if shrink(q) != p:
                failures.append(f"shrink(fatten({p}))")
            fattened.add(q)
        if fattened != set(enumerate_partitions(Category("NC2"), 2 * k)):
            failures.append(f"fatten onto NC2({2 * k})")
    return not failures, {"failures": failures}


# Monte Carlo suite


def check_wigner(seed: int) -> CheckOutcome:
    spec = EnsembleSpec("wigner", N=300, t=1.0)
    seeds = seed_plan(seed, 20)
    m = empirical_moments(spec, seeds, 4)
    law = LawSpec("Semicircle", t=1)
    dist = l1_distance(empirical_spectrum(spec, seeds, 0.1), lambda x: law_density(law, x)[0])
    passed = 0.95 <= m[1].mean <= 1.05 and 1.9 <= m[3].mean <= 2.1 and dist < 0.05
    return passed, {"M2": m[1].mean, "M4": m[3].mean, "l1_distance": dist}


def check_wishart(seed: int) -> CheckOutcome:
    spec = EnsembleSpec("wishart", N=400, M=200)
    m = empirical_moments(spec, seed_plan(seed, 10), 4)
    expected = law_moments(LawSpec("MarchenkoPastur", t=Fraction(1, 2)), 4).values
    ok = [_within(est.mean, float(want), 0.05) for est, want in zip(m, expected)]
    return all(ok), {"moments": [est.mean for est in m], "expected": [float(x) for x in expected]}


def _transpose_moment(p: int, m: int, n: int) -> int:
    return sum(m ** q.block_count * n ** even_block_count(q) for q in enumerate_partitions(Category("NC"), p))


def check_block_wishart(seed: int) -> CheckOutcome:
    d, n, m = 150, 2, 2
    spec = EnsembleSpec("block_wishart", d=d, n=n, m=m, block_map="transpose")
    seeds = seed_plan(seed, 10)
    got = empirical_moments(spec, seeds, 3)
    expected = [_transpose_moment(p, m, n) for p in range(1, 4)]
    shifted = EnsembleSpec("block_wishart", d=d, n=n, m=m, block_map="transpose", normalization="shifted")
    mean = empirical_moments(shifted, seeds, 1)[0].mean
    passed = all(_within(e.mean, w, 0.10) for e, w in zip(got, expected)) and abs(mean - 1) <= 0.05
    return passed, {"moments": [e.mean for e in got], "expected": expected, "shifted_mean": mean}


def check_truncated_characters_montecarlo(seed: int) -> CheckOutcome:
    got = permutation_fixed_point_moments(200, 0.5, 100000, seed, 3)
    expected = [float(exactcount.touchard(k, Fraction(1, 2))) for k in range(1, 4)]
    return all(_within(g, w, 0.02) for g, w in zip(got, expected)), {"moments": got, "expected": expected}


CHECKS: List[Tuple[str, str, Callable[[int], CheckOutcome]]] = [
    ("poker", "exact", check_poker),
    ("gram_determinant", "exact", check_gram_determinant),
    ("orthogonal_weingarten", "exact", check_orthogonal_weingarten),
    ("symmetric_oracle", "exact", check_symmetric_oracle),
    ("moment_cumulant", "exact", check_moment_cumulant),
    ("transforms", "exact", check_transforms),
    ("stieltjes_inversion", "exact", check_stieltjes_inversion),
    ("wigner", "montecarlo", check_wigner),
    ("wishart", "montecarlo", check_wishart),
    ("block_wishart", "montecarlo", check_block_wishart),
    ("truncated_characters", "exact", check_truncated_characters_exact),
    ("truncated_characters_montecarlo", "montecarlo", check_truncated_characters_montecarlo),
    ("free_hyperspherical", "exact", check_free_hyperspherical),
    ("graphs", "exact", check_graphs),
    ("category_counts", "exact", check_category_counts),
]


def run_check(name: str, seed: int = 1) -> CheckResult:
    for check_name, suite, fn in CHECKS:
        if check_name == name:
            start = time.perf_counter()
            passed, detail = fn(seed)
            result = CheckResult(name, suite, passed, time.perf_counter() - start, detail)
            if not passed:
                logger.warning("verify_check_failed", check=name, seed=seed, detail=detail)
            return result
    raise UsageError(f"unknown check {name!r}")


def run_suite(suite: str = "exact", seed: int = 1, only: Optional[List[str]] = None) -> List[CheckResult]:
    if suite not in SUITES:
        raise UsageError(f"suite must be one of {SUITES}")
    names = [name for name, s, _ in CHECKS if suite == "all" or s == suite]
    if only:
        unknown = set(only) - {name for name, _, _ in CHECKS}
        if unknown:
            raise UsageError(f"unknown checks {sorted(unknown)}")
        names = [n for n in names if n in only]
    results = [run_check(name, seed) for name in names]
    record_run({
        "event": "verify",
        "suite": suite,
        "seed": seed,
        "checks": names,
        "failed": [r.name for r in results if not r.passed],
        "passed": all(r.passed for r in results),
    })
    return results
