import random
from fractions import Fraction

import pytest
from structlog.testing import capture_logs

from freeprob import exactcount
from freeprob.errors import UsageError
from freeprob.graphs import (
    RootedBipartiteGraph,
    ade_circular_measure,
    ade_graph,
    circular_even_moments,
    circular_measure_moments,
    circular_moments_from_atoms,
    circular_moments_from_theta,
    cyclotomic_atoms,
    cyclotomic_moment,
    loop_count,
    loop_count_bfs,
    poincare,
    poincare_from_circular,
    spectral_measure,
    theta_direct,
    theta_from_poincare,
)


def test_bipartition_from_edges():
    g = RootedBipartiteGraph.from_edges([(0, 1), (1, 2), (1, 3)], root=0, name="star")
    assert g.a_part == [0, 2, 3]
    assert g.b_part == [1]
    assert g.vertex_count == 4
    assert g.loop_matrix().tolist() == [[1, 1, 1], [1, 1, 1], [1, 1, 1]]


def test_invalid_graphs():
    with pytest.raises(UsageError):
        RootedBipartiteGraph.from_edges([(0, 1), (1, 2), (2, 0)], root=0)
    with pytest.raises(UsageError):
        RootedBipartiteGraph.from_edges([(0, 0)], root=0)
    with pytest.raises(UsageError):
        RootedBipartiteGraph.from_edges([(0, 1)], root=0, vertices=[0, 1, 2])
    with pytest.raises(UsageError):
        RootedBipartiteGraph(["a"], ["b"], [[0]], "a")
    with pytest.raises(UsageError):
        RootedBipartiteGraph.from_json({"edges": [[1]]})


def test_json_keeps_multiplicities():
    g = ade_graph("At2")
    data = g.to_json()
    assert data["edges"] == [[2]]
    assert RootedBipartiteGraph.from_json(data).loop_matrix().tolist() == [[4]]


@pytest.mark.parametrize("name", ["A4", "D5", "At2", "At6", "Dt6", "E7", "Et8"])
def test_loop_counts_agree_with_walk_enumeration(name):
    g = ade_graph(name)
    for n in range(6):
        assert loop_count(g, n) == loop_count_bfs(g, n)


def test_infinite_graphs_truncate():
    path = ade_graph("Ainf", depth=7)
    assert poincare(path, 6) == [exactcount.catalan(n) for n in range(7)]
    assert ade_graph("Dinf", depth=5).truncation_depth == 5
    with pytest.raises(UsageError):
        ade_graph("Ainf")
    with pytest.raises(UsageError):
        ade_graph("Dinf", depth=1)


def test_shallow_truncation_is_logged():
    with capture_logs() as logs:
        poincare(ade_graph("Ainf", depth=3), 6)
    assert any(e["event"] == "graph_truncation_too_shallow" for e in logs)


def test_poincare_series_of_small_graphs():
    assert poincare(ade_graph("A3"), 4) == [1, 1, 2, 4, 8]
    assert poincare(ade_graph("D4"), 4) == [1, 1, 3, 9, 27]
    assert poincare(ade_graph("At2"), 3) == [1, 4, 16, 64]


def test_theta_formula_matches_substitution():
    rng = random.Random(11)
    for _ in range(10):
        c = [1] + [rng.randint(-20, 20) for _ in range(10)]
        assert theta_from_poincare(c, 10) == theta_direct(c, 10)
    with pytest.raises(UsageError):
        theta_from_poincare([1, 1], 4)


def test_theta_of_a3():
    theta = theta_from_poincare(poincare(ade_graph("A3"), 4), 4)
    assert theta[:2] == [1, 0]
    assert circular_moments_from_theta(theta) == [1, Fraction(-1, 2), 0, Fraction(-1, 2), 1]


@pytest.mark.parametrize("k", range(1, 6))
def test_affine_a_is_uniform_on_roots_of_unity(k):
    moments = circular_even_moments(ade_graph(f"At{2 * k}"), 10)
    assert moments == [1 if n % k == 0 else 0 for n in range(11)]


@pytest.mark.parametrize("name", ["A3", "A5", "A7", "D4", "D6", "At4", "At6", "Dt5", "Dt6", "Et6", "Et7", "Et8"])
def test_closed_circular_measures(name):
    g = ade_graph(name)
    closed = circular_measure_moments(ade_circular_measure(name), 8)
    assert circular_even_moments(g, 8) == closed
    assert poincare_from_circular(closed, 8) == poincare(g, 8)


@pytest.mark.parametrize("name", ["A3", "D4", "Dt5", "Et6"])
def test_circular_measure_from_spectrum(name):
    g = ade_graph(name)
    numeric = circular_moments_from_atoms(spectral_measure(g), 6)
    exact = circular_even_moments(g, 6)
    assert numeric == pytest.approx([float(x) for x in exact], abs=1e-9)


def test_spectral_measure_of_a3():
    atoms = spectral_measure(ade_graph("A3"))
    assert [x for x, _ in atoms] == pytest.approx([0.0, 2.0], abs=1e-9)
    assert [p for _, p in atoms] == pytest.approx([0.5, 0.5])


def test_norms():
    assert ade_graph("Et6").norm_squared() == pytest.approx(4.0)
    assert ade_graph("Dt7").norm_squared() == pytest.approx(4.0)
    assert ade_graph("E8").norm_squared() < 4.0


def test_cyclotomic_moments():
    assert [cyclotomic_moment("d", 3, n) for n in range(7)] == [1, 0, 0, 1, 0, 0, 1]
    assert [cyclotomic_moment("d'", 2, n) for n in range(5)] == [1, 0, -1, 0, 1]
    assert cyclotomic_moment("d", 4, 1, "alpha") == Fraction(-1, 2)
    atoms = cyclotomic_atoms(3)
    assert sum(mass for _, mass in atoms) == 1
    assert sum(float(mass) * (u ** 6).real for u, mass in atoms) == pytest.approx(1.0)
    with pytest.raises(UsageError):
        cyclotomic_moment("d", 0, 1)
    with pytest.raises(UsageError):
        cyclotomic_moment("x", 2, 0)


def test_names():
    assert ade_graph("~E6").a_part == ade_graph("Et6").a_part
    assert ade_graph("A_5").vertex_count == 5
    assert ade_graph("Dt7").vertex_count == 8
    assert ade_graph("E6").vertex_count == 6
    for bad in ("A1", "E9", "At3", "Q4", "D"):
        with pytest.raises(UsageError):
            ade_graph(bad)
    with pytest.raises(UsageError):
        ade_circular_measure("E6")
