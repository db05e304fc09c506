"""Vertex and edge Laplacians, and the spectrum of the canonical edge Laplacian.

Edge Laplacian matrices are indexed by arrows in canonical order. Row ``i``
holds the coefficients of the image of the ``i``-th basis form, so the
column sums vanish and a form with coefficient vector ``c`` is sent to
``M^T c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from .calculus import Bracket, ScalarFunction, Tensor, d, is_second_order, omega
from .geometry import (ConnectionData, Metric, nabla, nabla_tensor2,
                       pairing_is_sigma_invariant)
from .graph import Digraph, cycle_graph, degree, is_bidirected, is_weakly_connected, weak_components
from .linalg import RatMatrix, charpoly, rank, sym_eigensolve
from .poly import RatPolynomial
from .rational import format_fraction


class LaplacianError(ValueError):
    pass


def _require_bidirected(g: Digraph):
    if not is_bidirected(g):
        raise LaplacianError("graph is not bidirected")


def vertex_laplacian(g: Digraph) -> RatMatrix:
    """``(Lf)(x) = sum over neighbours y of f(x) - f(y)``."""
    _require_bidirected(g)
    n = g.n_vertices
    rows = [[0] * n for _ in range(n)]
    for x, y in g.arrows:
        rows[x][x] += 1
        rows[x][y] -= 1
    return RatMatrix(rows, n)


def gamma_weights(conn: ConnectionData, met: Metric) -> Dict[Tuple[int, int], Fraction]:
    """``gamma_{x,y} = g_{y->x} + sum_w g_{w->x} sigma^{x,y,x}_w`` per arrow."""
    return {(x, y): met[(y, x)] + sum((met[(w, x)] * c for w, c in conn.sigma[(x, y, x)].items()), Fraction(0))
            for x, y in conn.graph.arrows}


def weighted_vertex_laplacian(conn: ConnectionData, met: Metric) -> Tuple[RatMatrix, Dict[Tuple[int, int], Fraction]]:
    """Matrix of ``f -> sum_y (f(x) - f(y)) gamma_{x,y}`` and the weights."""
    g = conn.graph
    _require_bidirected(g)
    gam = gamma_weights(conn, met)
    n = g.n_vertices
    rows = [[Fraction(0)] * n for _ in range(n)]
    for (x, y), c in gam.items():
        rows[x][x] += c
        rows[x][y] -= c
    return RatMatrix(rows, n), gam


def laplace_beltrami_0(conn: ConnectionData, met: Metric, f: ScalarFunction) -> ScalarFunction:
    """``( , ) nabla d f``."""
    return met.pair(nabla(conn, d(conn.graph, f)))


def laplace_beltrami_1(conn: ConnectionData, met: Metric, w: Tensor) -> Tensor:
    """``(( , ) (x) id) nabla nabla w`` on a 1-form."""
    return met.pair_first(nabla_tensor2(conn, nabla(conn, w)))


def second_order_check(g: Digraph, laplacian: Callable[[ScalarFunction], ScalarFunction], bracket: Bracket) -> bool:
    return is_second_order(g, laplacian, bracket)


# -- edge Laplacians ------------------------------------------------------------------------


@dataclass(frozen=True)
class EdgeLaplacianMatrix:
    matrix: RatMatrix
    graph: Digraph
    provenance: str = "canonical"

    def apply(self, w: Tensor) -> Tensor:
        """Image of a 1-form."""
        return Tensor.from_vector(self.graph, self.matrix.T.apply(w.to_vector()))

    def __call__(self, w: Tensor) -> Tensor:
        return self.apply(w)

    def operator_matrix(self) -> RatMatrix:
        """Matrix acting on coefficient column vectors (the transpose)."""
        return self.matrix.T


def _matrix_from_images(g: Digraph, images: Dict[Tuple[int, int], Dict[Tuple[int, int], Fraction]]) -> RatMatrix:
    idx = g.arrow_index
    n = g.n_arrows
    rows = [[Fraction(0)] * n for _ in range(n)]
    for a, img in images.items():
        for b, c in img.items():
            rows[idx[a]][idx[b]] += c
    return RatMatrix(rows, n)


def edge_laplacian_canonical(g: Digraph) -> EdgeLaplacianMatrix:
    """``w_{x->y} -> deg(x) w_{x->y} - 2 theta_y + theta_x``."""
    _require_bidirected(g)
    deg = degree(g)
    images = {}
    for x, y in g.arrows:
        img: Dict[Tuple[int, int], Fraction] = {(x, y): Fraction(deg[x])}
        for z in g.out_neighbors(y):
            img[(y, z)] = img.get((y, z), Fraction(0)) - 2
        for z in g.out_neighbors(x):
            img[(x, z)] = img.get((x, z), Fraction(0)) + 1
        images[(x, y)] = img
    return EdgeLaplacianMatrix(_matrix_from_images(g, images), g, "canonical")


def edge_laplacian_general(conn: ConnectionData, met: Metric) -> EdgeLaplacianMatrix:
    """Edge Laplacian for data ``(sigma, 0)`` whose pairing is sigma invariant."""
    g = conn.graph
    _require_bidirected(g)
    if conn.has_alpha():
        raise LaplacianError("edge Laplacian formula needs alpha = 0")
    if not pairing_is_sigma_invariant(conn, met):
        raise LaplacianError("inverse metric is not invariant under sigma")
    images = {}
    for x, y in g.arrows:
        img: Dict[Tuple[int, int], Fraction] = {}

        def add(k, c):
            img[k] = img.get(k, Fraction(0)) + c

        add((x, y), sum((met[(z, x)] for z in g.in_neighbors(x)), Fraction(0)))
        for z in g.out_neighbors(y):
            for w, s in conn.sigma[(x, y, z)].items():
                add((w, z), -2 * met[(x, w)] * s)
                for t in g.out_neighbors(z):
                    s2 = conn.sigma[(w, z, t)].get(x, 0)
                    if s2:
                        add((x, t), met[(w, x)] * s * s2)
        images[(x, y)] = {k: c for k, c in img.items() if c}
    return EdgeLaplacianMatrix(_matrix_from_images(g, images), g, "general")


def edge_laplacian_direct(conn: ConnectionData, met: Metric) -> EdgeLaplacianMatrix:
    """Matrix of :func:`laplace_beltrami_1`, with no hypotheses on the data."""
    g = conn.graph
    images = {a: dict(laplace_beltrami_1(conn, met, omega(g, *a)).items()) for a in g.arrows}
    return EdgeLaplacianMatrix(_matrix_from_images(g, images), g, "direct")


# -- spectrum of the canonical edge Laplacian ---------------------------------------------------

Number = Union[Fraction, float]


def _fmt_number(v: Number):
    if isinstance(v, Fraction):
        return format_fraction(v)
    return float(f"{v:.12g}")


@dataclass
class Certificate:
    charpoly_edge: RatPolynomial
    charpoly_2L: RatPolynomial
    degree_factors: List[Tuple[int, int]]
    holds: bool

    def to_json(self) -> dict:
        return {
            "charpoly_edge": self.charpoly_edge.to_strings(),
            "charpoly_2L": self.charpoly_2L.to_strings(),
            "degree_factors": [[d_, m] for d_, m in self.degree_factors],
            "holds": self.holds,
        }


@dataclass
class SpectrumReport:
    vertex_part: List[Number]
    degree_part: List[int]
    disjoint: bool
    diagonalizable: str
    zero_modes: int
    positive: bool
    certificate: Certificate
    collisions: Dict[int, Tuple[int, int]] = field(default_factory=dict)
    vertices: Optional[List[int]] = None

    def spectrum(self) -> List[float]:
        """Full multiset, ascending, as floats."""
        return sorted([float(v) for v in self.vertex_part] + [float(v) for v in self.degree_part])

    def to_json(self) -> dict:
        out = {
            "vertex_part": [_fmt_number(v) for v in self.vertex_part],
            "degree_part": list(self.degree_part),
            "disjoint": self.disjoint,
            "diagonalizable": self.diagonalizable,
            "zero_modes": self.zero_modes,
            "positive": self.positive,
            "collisions": {str(k): {"algebraic": a, "geometric": gm} for k, (a, gm) in sorted(self.collisions.items())},
            "certificate": self.certificate.to_json(),
        }
        if self.vertices is not None:
            out["vertices"] = list(self.vertices)
        return out

    def to_text(self) -> str:
        lines = []
        if self.vertices is not None:
            lines.append(f"component: {self.vertices}")
        lines.append("spectrum: " + format_multiset(self.spectrum()))
        lines.append("vertex part (2L): " + ", ".join(str(_fmt_number(v)) for v in self.vertex_part))
        lines.append("degree part: " + ", ".join(str(v) for v in self.degree_part))
        lines.append(f"disjoint: {'yes' if self.disjoint else 'no'}")
        lines.append(f"diagonalizable: {self.diagonalizable}")
        lines.append(f"zero modes: {self.zero_modes}; positive otherwise: {'yes' if self.positive else 'no'}")
        lines.append(f"charpoly certificate: {'holds' if self.certificate.holds else 'FAILS'}")
        return "\n".join(lines)


def format_multiset(values: List[float], digits: int = 9) -> str:
    groups: List[List] = []
    for v in sorted(values, reverse=True):
        if groups and abs(groups[-1][0] - v) < 10 ** -digits * max(1.0, abs(v)) * 1e3:
            groups[-1][1] += 1
        else:
            groups.append([v, 1])
    parts = []
    for v, m in groups:
        r = round(v)
        s = str(int(r)) if abs(v - r) < 1e-9 else f"{v:.{digits}g}"
        parts.append(s if m == 1 else f"{s}({m})")
    return "{" + ",".join(parts) + "}"


def _vertex_part(two_l: RatMatrix, p2l: RatPolynomial, tol: float) -> List[Number]:
    numeric = [2 * v for v, _ in sym_eigensolve(two_l.scale(Fraction(1, 2)), tol=min(tol, 1e-12))]
    exact: List[Number] = []
    remaining = list(numeric)
    for k in sorted({int(round(v)) for v in numeric}):
        m = p2l.root_multiplicity(k)
        for _ in range(m):
            j = min(range(len(remaining)), key=lambda i: abs(remaining[i] - k))
            remaining.pop(j)
            exact.append(Fraction(k))
    return sorted(exact + remaining, key=float)


def edge_spectrum_report(g: Digraph, tol: float = 1e-9, exact_limit: Optional[int] = None) -> SpectrumReport:
    """Spectrum of the canonical edge Laplacian of a connected bidirected graph.

    The exact certificate checks
    ``charpoly(edge) = charpoly(2L) * prod_x (t - deg x)^(deg x - 1)``.
    Diagonalizability is decided by exact geometric multiplicities at the
    integer eigenvalues shared by both parts; ``exact_limit`` caps the arrow
    count for those rank computations (beyond it the verdict is ``unknown``).
    """
    _require_bidirected(g)
    if not is_weakly_connected(g):
        raise LaplacianError("graph is disconnected; use spectrum_reports for per-component output")
    deg = degree(g)
    lap = vertex_laplacian(g)
    two_l = lap.scale(2)
    edge = edge_laplacian_canonical(g).matrix
    p_edge = charpoly(edge)
    p2l = charpoly(two_l)
    counts: Dict[int, int] = {}
    for v in range(g.n_vertices):
        counts[deg[v]] = counts.get(deg[v], 0) + deg[v] - 1
    factors = sorted((k, m) for k, m in counts.items() if m > 0)
    product = p2l
    for k, m in factors:
        product = product * (RatPolynomial([-k, 1]) ** m)
    cert = Certificate(p_edge, p2l, factors, product == p_edge)

    vertex_part = _vertex_part(two_l, p2l, tol)
    degree_part = sorted(k for k, m in factors for _ in range(m))

    colliding = [k for k, _ in factors if p2l(Fraction(k)) == 0]
    disjoint = not colliding
    collisions: Dict[int, Tuple[int, int]] = {}
    verdict = "yes"
    for k in colliding:
        if exact_limit is not None and g.n_arrows > exact_limit:
            verdict = "unknown"
            continue
        alg = p_edge.root_multiplicity(k)
        geo = g.n_arrows - rank(edge.shifted(k))
        collisions[k] = (alg, geo)
        if geo < alg:
            verdict = "no"
    if verdict == "unknown" and any(a > gm for a, gm in collisions.values()):
        verdict = "no"

    zero_modes = p_edge.root_multiplicity(0)
    nonzero_vertex = [v for v in vertex_part if not (isinstance(v, Fraction) and v == 0)]
    positive = (zero_modes == 1 and p2l.root_multiplicity(0) == 1 and all(k > 0 for k in degree_part)
                and all(float(v) > tol for v in nonzero_vertex)
                and rank(edge) == g.n_arrows - 1)
    return SpectrumReport(vertex_part, degree_part, disjoint, verdict, zero_modes, positive, cert, collisions)


def spectrum_reports(g: Digraph, tol: float = 1e-9, exact_limit: Optional[int] = None) -> List[SpectrumReport]:
    """One report per weak component (isolated vertices are skipped)."""
    _require_bidirected(g)
    reports = []
    for comp in weak_components(g):
        if len(comp) < 2:
            continue
        sub, labels = g.subgraph(comp)
        rep = edge_spectrum_report(sub, tol, exact_limit)
        rep.vertices = list(labels)
        reports.append(rep)
    return reports


def mgon_eigenvalues(m: int) -> List[float]:
    """``8 sin^2(pi p / m)`` for ``p = 0..m-1`` together with ``2`` repeated ``m`` times."""
    if m < 3:
        raise LaplacianError("an m-gon needs m >= 3")
    return sorted([8 * math.sin(math.pi * p / m) ** 2 for p in range(m)] + [2.0] * m)


def mgon_spectrum(m: int, tol: float = 1e-9) -> SpectrumReport:
    if m < 3:
        raise LaplacianError("an m-gon needs m >= 3")
    return edge_spectrum_report(cycle_graph(m), tol)


def spectrum_matches(computed: List[float], expected: List[float], tol: float) -> bool:
    if len(computed) != len(expected):
        return False
    return all(abs(a - b) <= tol for a, b in zip(sorted(computed), sorted(expected)))


def edge_eigen_residual(lap: EdgeLaplacianMatrix, vec, value) -> float:
    """``max |M^T v - value v|`` for a complex coefficient vector ``v``."""
    m = lap.operator_matrix().to_float()
    v = np.asarray(vec, dtype=complex)
    return float(np.max(np.abs(m @ v - value * v))) if len(v) else 0.0
