"""Rooted bipartite graphs: loop counts, Poincare and theta series, circular measures, ADE graphs.

The circular measure eps of a graph lives on the unit circle and is symmetric under
u -> conj(u) and u -> -u. Only its even moments m_n = int u^(2n) d eps are nonzero,
and they come from the theta series by 2 sum_n m_n q^n = 1 + Theta(q) - q.
"""
import cmath
import math
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from .errors import UsageError
from .series import FormalSeries

logger = structlog.get_logger(__name__)


@dataclass
class RootedBipartiteGraph:
    a_part: List[Hashable]
    b_part: List[Hashable]
    E: np.ndarray
    root: Hashable
    name: str = ""
    truncation_depth: Optional[int] = None

    def __post_init__(self):
        self.E = np.array(self.E, dtype=object).reshape(len(self.a_part), len(self.b_part))
        if self.root not in self.a_part:
            raise UsageError(f"root {self.root!r} is not in the first part")
        if any(x < 0 for x in self.E.flat):
            raise UsageError("edge multiplicities must be nonnegative")
        if not self._connected():
            raise UsageError("graph is not connected")

    def _connected(self) -> bool:
        na = len(self.a_part)
        seen_a, seen_b = {self.a_part.index(self.root)}, set()
        queue = deque([("a", self.a_part.index(self.root))])
        while queue:
            side, i = queue.popleft()
            if side == "a":
                for j in range(len(self.b_part)):
                    if self.E[i, j] and j not in seen_b:
                        seen_b.add(j)
                        queue.append(("b", j))
            else:
                for r in range(na):
                    if self.E[r, i] and r not in seen_a:
                        seen_a.add(r)
                        queue.append(("a", r))
        return len(seen_a) == na and len(seen_b) == len(self.b_part)

    @classmethod
    def from_edges(cls, edges: Sequence[Tuple[Hashable, Hashable]], root: Hashable, name: str = "",
                   vertices: Sequence[Hashable] = ()) -> "RootedBipartiteGraph":
        """Bipartition by breadth-first 2-colouring from the root; repeated edges add multiplicity."""
        adj: Dict[Hashable, List[Hashable]] = {v: [] for v in vertices}
        adj.setdefault(root, [])
        for u, v in edges:
            if u == v:
                raise UsageError(f"self-loop at {u!r} breaks bipartiteness")
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        colour = {root: 0}
        order = [root]
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in colour:
                    colour[v] = 1 - colour[u]
                    order.append(v)
                    queue.append(v)
                elif colour[v] == colour[u]:
                    raise UsageError(f"edge {u!r}-{v!r} closes an odd cycle")
        if len(colour) != len(adj):
            raise UsageError("graph is not connected")
        a_part = [v for v in order if colour[v] == 0]
        b_part = [v for v in order if colour[v] == 1]
        E = np.zeros((len(a_part), len(b_part)), dtype=object)
        E[:] = 0
        for u, v in edges:
            if colour[u] == 1:
                u, v = v, u
            E[a_part.index(u), b_part.index(v)] += 1
        return cls(a_part, b_part, E, root, name)

    @classmethod
    def from_json(cls, data: dict) -> "RootedBipartiteGraph":
        try:
            parts = data["parts"]
            return cls(list(parts[0]), list(parts[1]), np.array(data["edges"], dtype=object),
                       data["root"], data.get("name", ""))
        except (KeyError, IndexError, TypeError, ValueError) as e:
            raise UsageError(f"malformed graph JSON: {e}")

    def to_json(self) -> dict:
        out = {
            "parts": [list(self.a_part), list(self.b_part)],
            "edges": [[int(x) for x in row] for row in self.E],
            "root": self.root,
        }
        if self.name:
            out["name"] = self.name
        if self.truncation_depth is not None:
            out["truncation_depth"] = self.truncation_depth
        return out

    @property
    def vertex_count(self) -> int:
        return len(self.a_part) + len(self.b_part)

    @property
    def root_index(self) -> int:
        return self.a_part.index(self.root)

    def loop_matrix(self) -> np.ndarray:
        """L = E E^t on the first part."""
        return self.E.dot(self.E.T)

    def adjacency(self) -> np.ndarray:
        na, nb = len(self.a_part), len(self.b_part)
        A = np.zeros((na + nb, na + nb), dtype=object)
        A[:] = 0
        A[:na, na:] = self.E
        A[na:, :na] = self.E.T
        return A

    def norm_squared(self) -> float:
        """Largest eigenvalue of L, the squared norm of the graph."""
        L = np.array(self.loop_matrix(), dtype=float)
        return float(np.linalg.eigvalsh(L).max()) if L.size else 0.0


def loop_count(g: RootedBipartiteGraph, n: int) -> int:
    """Number of 2n-loops based at the root: the (root, root) entry of L^n."""
    if n < 0:
        raise UsageError("n must be nonnegative")
    r = g.root_index
    v = np.zeros(len(g.a_part), dtype=object)
    v[:] = 0
    v[r] = 1
    L = g.loop_matrix()
    for _ in range(n):
        v = L.dot(v)
    return int(v[r])


def loop_count_bfs(g: RootedBipartiteGraph, n: int) -> int:
    """Explicit enumeration of the closed walks of length 2n from the root, edge multiplicities included."""
    A = g.adjacency()
    start = g.root_index
    size = A.shape[0]
    count = 0
    frontier = [(start, 1)]
    for _ in range(2 * n):
        nxt = []
        for vertex, weight in frontier:
            for w in range(size):
                if A[vertex, w]:
                    nxt.append((w, weight * int(A[vertex, w])))
        frontier = nxt
    for vertex, weight in frontier:
        if vertex == start:
            count += weight
    return count


def poincare(g: RootedBipartiteGraph, order: int) -> List[int]:
    if g.truncation_depth is not None and g.truncation_depth < order + 1:
        logger.warning("graph_truncation_too_shallow", depth=g.truncation_depth, order=order)
    return [loop_count(g, n) for n in range(order + 1)]


def theta_from_poincare(c: Sequence[int], order: int) -> List[int]:
    """Coefficients a_0..a_order of Theta(q) = q + (1-q)/(1+q) f(q/(1+q)^2)."""
    if len(c) < order + 1:
        raise UsageError(f"need {order + 1} Poincare coefficients, got {len(c)}")
    out = [Fraction(c[0])]
    for s in range(1, order + 1):
        a = sum(((-1) ** (s - n) * Fraction(2 * s, s + n) * math.comb(s + n, s - n) * c[n] for n in range(s + 1)),
                Fraction(0))
        out.append(a + 1 if s == 1 else a)
    for a in out:
        if a.denominator != 1:
            raise ArithmeticError(f"non-integral theta coefficient {a}")
    return [int(a) for a in out]


def theta_direct(c: Sequence[int], order: int) -> List[int]:
    """The same coefficients by substituting q/(1+q)^2 into the Poincare series."""
    f = FormalSeries(list(c)[:order + 1], order=order)
    one_plus_q = FormalSeries([1, 1], order=order)
    q = FormalSeries.identity(order)
    inner = q * (one_plus_q * one_plus_q).reciprocal()
    theta = q + (1 - q) * one_plus_q.reciprocal() * f.compose(inner)
    return [int(x) for x in theta.coefficients]


def circular_even_moments(g: RootedBipartiteGraph, order: int) -> List[Fraction]:
    """m_n = int u^(2n) d eps, n = 0..order."""
    return circular_moments_from_theta(theta_from_poincare(poincare(g, order), order))


def circular_moments_from_theta(a: Sequence[int]) -> List[Fraction]:
    return [Fraction((1 if n == 0 else 0) + a[n] - (1 if n == 1 else 0), 2) for n in range(len(a))]


def poincare_from_circular(m: Sequence[Fraction], order: int) -> List[Fraction]:
    """c_n = int (u + 1/u)^(2n) d eps = sum_j binomial(2n, n+j) m_|j|."""
    return [sum((math.comb(2 * n, n + j) * m[abs(j)] for j in range(-n, n + 1)), Fraction(0))
            for n in range(order + 1)]


def spectral_measure(g: RootedBipartiteGraph) -> List[Tuple[float, float]]:
    """The measure mu at the root of L = E E^t, whose moments are the loop counts."""
    L = np.array(g.loop_matrix(), dtype=float)
    values, vectors = np.linalg.eigh(L)
    weights = vectors[g.root_index, :] ** 2
    atoms: Dict[float, float] = {}
    for x, w in zip(values, weights):
        key = round(float(x), 10)
        atoms[key] = atoms.get(key, 0.0) + float(w)
    return sorted((x, w) for x, w in atoms.items() if w > 1e-14)


def circular_moments_from_atoms(atoms: Sequence[Tuple[float, float]], order: int) -> List[float]:
    """Pull back a measure on [0, 4] under u -> (u + 1/u)^2 with |u| = 1 and average the four preimages."""
    out = []
    for n in range(order + 1):
        total = 0.0
        for x, p in atoms:
            theta = math.acos(max(-1.0, min(1.0, math.sqrt(max(x, 0.0)) / 2)))
            total += p * math.cos(2 * n * theta)
        out.append(total)
    return out


# measures on the circle built from roots of unity and the densities alpha, beta, gamma

_DENSITY_SHIFT = {"": 0, "alpha": 1, "beta": 2, "gamma": 3}


def _base_average(base: str, k: int, m: int) -> int:
    """Average of q^(2m) over d_k (uniform on 2k-roots) or d'_k (uniform on odd 4k-roots)."""
    if m % k:
        return 0
    if base == "d":
        return 1
    if base == "d'":
        return -1 if (m // k) % 2 else 1
    raise UsageError(f"unknown base measure {base!r}")


def cyclotomic_moment(base: str, k: int, n: int, density: str = "") -> Fraction:
    """int u^(2n) of density * base_k, with alpha = Re(1-q^2), beta = Re(1-q^4), gamma = Re(1-q^6)."""
    if k < 1:
        raise UsageError("k must be positive")
    r = _DENSITY_SHIFT[density]
    if r == 0:
        return Fraction(_base_average(base, k, n))
    return (Fraction(_base_average(base, k, n))
            - Fraction(_base_average(base, k, n + r), 2)
            - Fraction(_base_average(base, k, n - r), 2))


CircularMeasure = List[Tuple[Fraction, str, int, str]]


def ade_circular_measure(name: str) -> CircularMeasure:
    """Terms (coefficient, base, k, density) of the circular measure of A_{k-1}, At_{2k}, D_{k+1}, Dt_{k+2}, Et_{k+3}."""
    family, k = _parse_ade(name)
    half = Fraction(1, 2)
    if family == "A":
        return [(Fraction(1), "d", k + 1, "alpha")]
    if family == "At":
        if k % 2:
            raise UsageError("At needs an even number of vertices")
        return [(Fraction(1), "d", k // 2, "")]
    if family == "D":
        return [(Fraction(1), "d'", k - 1, "alpha")]
    if family == "Dt":
        return [(half, "d", k - 2, ""), (half, "d'", 1, "")]
    if family == "Et":
        return [(half, "d", k - 3, ""), (half, "d", 3, ""), (half, "d", 2, ""), (-half, "d", 1, "")]
    raise UsageError(f"no closed circular measure for {name}")


def circular_measure_moments(terms: CircularMeasure, order: int) -> List[Fraction]:
    return [sum((coef * cyclotomic_moment(base, k, n, dens) for coef, base, k, dens in terms), Fraction(0))
            for n in range(order + 1)]


def cyclotomic_atoms(k: int) -> List[Tuple[complex, Fraction]]:
    """d_k as explicit atoms: the 2k-th roots of unity with mass 1/(2k) each."""
    return [(cmath.exp(1j * math.pi * j / k), Fraction(1, 2 * k)) for j in range(2 * k)]


_ADE_NAME = re.compile(r"^(A|D|At|Dt|E|Et|Ainf|Dinf)(\d*)$")


def _parse_ade(name: str) -> Tuple[str, int]:
    text = name.strip().replace("_", "").replace("Ã", "At").replace("D̃", "Dt").replace("Ẽ", "Et")
    text = text.replace("~A", "At").replace("~D", "Dt").replace("~E", "Et").replace("∞", "inf")
    m = _ADE_NAME.match(text)
    if not m:
        raise UsageError(f"unknown ADE graph {name!r}")
    family, digits = m.group(1), m.group(2)
    if family in ("Ainf", "Dinf"):
        return family, int(digits) if digits else 0
    if not digits:
        raise UsageError(f"graph {name!r} needs an index")
    return family, int(digits)


def _path(count: int, start: int = 0) -> List[Tuple[int, int]]:
    return [(start + i, start + i + 1) for i in range(count - 1)]


def ade_graph(name: str, depth: Optional[int] = None) -> RootedBipartiteGraph:
    """Principal graphs of index <= 4, rooted at vertex 0; A_inf and D_inf are truncated at `depth`."""
    family, k = _parse_ade(name)
    label = name.strip()
    if family == "A":
        if k < 2:
            raise UsageError("A_k needs k >= 2")
        return RootedBipartiteGraph.from_edges(_path(k), 0, label)
    if family == "D":
        if k < 3:
            raise UsageError("D_k needs k >= 3")
        chain = k - 2
        edges = _path(chain) + [(chain - 1, chain), (chain - 1, chain + 1)]
        return RootedBipartiteGraph.from_edges(edges, 0, label)
    if family == "At":
        if k < 2 or k % 2:
            raise UsageError("At_2k needs an even index >= 2")
        if k == 2:
            return RootedBipartiteGraph.from_edges([(0, 1), (0, 1)], 0, label)
        return RootedBipartiteGraph.from_edges(_path(k) + [(k - 1, 0)], 0, label)
    if family == "Dt":
        if k < 4:
            raise UsageError("Dt_k needs k >= 4")
        chain = k - 3
        # root 0 and leaf 1 hang on the chain 2..chain+1, whose last vertex carries two more leaves
        last = chain + 1
        edges = [(0, 2), (1, 2)] + _path(chain, 2) + [(last, last + 1), (last, last + 2)]
        return RootedBipartiteGraph.from_edges(edges, 0, label)
    if family == "E":
        if k not in (6, 7, 8):
            raise UsageError("E_k needs k in 6, 7, 8")
        chain = k - 1
        branch = {6: 2, 7: 3, 8: 4}[k]
        return RootedBipartiteGraph.from_edges(_path(chain) + [(branch, chain)], 0, label)
    if family == "Et":
        if k not in (6, 7, 8):
            raise UsageError("Et_k needs k in 6, 7, 8")
        arms = {6: (2, 2, 2), 7: (3, 3, 1), 8: (5, 2, 1)}[k]
        return _star(arms, label)
    if depth is None:
        raise UsageError(f"{name} is infinite: give a truncation depth")
    if depth < 2:
        raise UsageError("truncation depth must be at least 2")
    if family == "Ainf":
        g = RootedBipartiteGraph.from_edges(_path(depth + 1), 0, label)
    else:
        g = RootedBipartiteGraph.from_edges([(0, 2), (1, 2)] + _path(depth, 2), 0, label)
    g.truncation_depth = depth
    return g


def _star(arms: Sequence[int], label: str) -> RootedBipartiteGraph:
    """Arms of the given lengths around a centre; the root ends the first arm."""
    first = arms[0]
    centre = first
    edges = _path(first + 1)
    nxt = centre + 1
    for length in arms[1:]:
        prev = centre
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return RootedBipartiteGraph.from_edges(edges, 0, label)
