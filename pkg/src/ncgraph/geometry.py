"""Metrics, bimodule connections and their curvature data on bidirected graphs.

A connection is given by two bimodule maps. ``sigma`` reroutes a 2-path
``x->y->z`` through other middle vertices ``w``; ``alpha`` sends an arrow
``x->y`` to 2-paths ``x->w->y``. Everything is exact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from .calculus import (Bracket, ScalarFunction, Tensor, apply_local, d, omega, tensor,
                       theta)
from .graph import Digraph, is_bidirected
from .linalg import RatMatrix, rank, rref
from .rational import format_fraction, to_fraction

Path = Tuple[int, ...]


class GeometryError(ValueError):
    pass


# -- metrics ------------------------------------------------------------------------


class Metric:
    """Weights ``g_{x->y}`` on a bidirected graph; none may be zero."""

    def __init__(self, graph: Digraph, weights: Mapping[Tuple[int, int], object]):
        if not is_bidirected(graph):
            raise GeometryError("a metric needs a bidirected graph")
        w = {}
        for a in graph.arrows:
            if a not in weights:
                raise GeometryError(f"arrow {a[0]}->{a[1]} has no weight")
            c = to_fraction(weights[a])
            if c == 0:
                raise GeometryError(f"arrow {a[0]}->{a[1]} has zero weight")
            w[a] = c
        extra = set(weights) - set(graph.arrows)
        if extra:
            raise GeometryError(f"weights given for non-arrows: {sorted(extra)}")
        self.graph = graph
        self.weights: Dict[Tuple[int, int], Fraction] = w

    @classmethod
    def euclidean(cls, graph: Digraph) -> "Metric":
        return cls(graph, {a: 1 for a in graph.arrows})

    def __getitem__(self, arrow) -> Fraction:
        return self.weights[tuple(arrow)]

    def is_euclidean(self) -> bool:
        return all(c == 1 for c in self.weights.values())

    def tensor(self) -> Tensor:
        """The metric element ``sum (1/g_{x->y}) w_{x->y} (x) w_{y->x}``."""
        return Tensor(self.graph, 2, {(x, y, x): 1 / c for (x, y), c in self.weights.items()}, check=False)

    def segment_map(self, seg: Path) -> Dict[Path, Fraction]:
        """Inverse metric on one 2-path, as a segment map to a vertex."""
        x, y, z = seg
        if x != z:
            return {}
        return {(x,): self.weights[(y, x)]}

    def pair(self, t: Tensor) -> ScalarFunction:
        if t.degree != 2:
            raise GeometryError("the inverse metric pairs 2-tensors")
        return apply_local(t, 0, 2, self.segment_map, 0).to_function()

    def pair_first(self, t: Tensor) -> Tensor:
        """``( , )`` on the first two factors."""
        return apply_local(t, 0, 2, self.segment_map, 0)

    def bracket(self) -> Bracket:
        return Bracket.from_callable(self.graph, self.pair)


def metric_pairing(met: Metric, w1: Tensor, w2: Tensor) -> ScalarFunction:
    return met.pair(tensor(w1, w2))


def inverse_metric_law_holds(met: Metric) -> bool:
    """``(id (x) ( , w)) g = w`` for every basis 1-form ``w``."""
    g = met.graph
    gt = met.tensor()
    for a in g.arrows:
        w = omega(g, *a)
        lhs = apply_local(tensor(gt, w), 1, 2, met.segment_map, 0)
        if lhs != w:
            return False
    return True


# -- connections -----------------------------------------------------------------------------


class ConnectionData:
    """Numerical data ``sigma^{x,y,z}_w`` and ``alpha^{x,y}_w`` of a bimodule connection."""

    def __init__(self, graph: Digraph, sigma: Mapping[Tuple[int, int, int, int], object],
                 alpha: Optional[Mapping[Tuple[int, int, int], object]] = None):
        self.graph = graph
        smap: Dict[Path, Dict[int, Fraction]] = {p: {} for p in graph.paths(2)}
        for (x, y, z, w), c in sigma.items():
            c = to_fraction(c)
            if c == 0:
                continue
            if (x, y, z) not in smap:
                raise GeometryError(f"sigma index {x}->{y}->{z} is not a 2-path")
            if not (graph.has_arrow(x, w) and graph.has_arrow(w, z)):
                raise GeometryError(f"sigma reroute {x}->{w}->{z} is not a 2-path")
            smap[(x, y, z)][w] = c
        amap: Dict[Tuple[int, int], Dict[int, Fraction]] = {a: {} for a in graph.arrows}
        for (x, y, w), c in (alpha or {}).items():
            c = to_fraction(c)
            if c == 0:
                continue
            if (x, y) not in amap:
                raise GeometryError(f"alpha index {x}->{y} is not an arrow")
            if not (graph.has_arrow(x, w) and graph.has_arrow(w, y)):
                raise GeometryError(f"alpha midpoint {x}->{w}->{y} is not a 2-path")
            amap[(x, y)][w] = c
        self.sigma = smap
        self.alpha = amap

    @classmethod
    def canonical(cls, graph: Digraph) -> "ConnectionData":
        """``sigma = id`` and ``alpha = 0``."""
        return cls(graph, {(x, y, z, y): 1 for x, y, z in graph.paths(2)})

    @classmethod
    def from_permutations(cls, graph: Digraph, perms: Mapping[Tuple[int, int], Mapping[int, int]]) -> "ConnectionData":
        """Permutation type data from ``(x, z) -> {y: w}`` middle-vertex maps."""
        sigma = {}
        for (x, z), p in perms.items():
            for y, w in p.items():
                sigma[(x, y, z, w)] = 1
        return cls(graph, sigma)

    @classmethod
    def random_permutation(cls, graph: Digraph, seed: Optional[int] = None,
                           rng: Optional[random.Random] = None) -> "ConnectionData":
        rng = rng or random.Random(seed)
        perms = {}
        for (x, z), mids in sorted(middle_vertices(graph).items()):
            shuffled = list(mids)
            rng.shuffle(shuffled)
            perms[(x, z)] = dict(zip(mids, shuffled))
        return cls.from_permutations(graph, perms)

    def __eq__(self, other):
        if not isinstance(other, ConnectionData):
            return NotImplemented
        return self.graph == other.graph and self.sigma == other.sigma and self.alpha == other.alpha

    def sigma_entries(self) -> Dict[Tuple[int, int, int, int], Fraction]:
        return {(x, y, z, w): c for (x, y, z), m in self.sigma.items() for w, c in m.items()}

    def alpha_entries(self) -> Dict[Tuple[int, int, int], Fraction]:
        return {(x, y, w): c for (x, y), m in self.alpha.items() for w, c in m.items()}

    def with_sigma(self, entries: Mapping[Tuple[int, int, int, int], object]) -> "ConnectionData":
        """Copy with some sigma coefficients overwritten."""
        s = self.sigma_entries()
        s.update({k: to_fraction(v) for k, v in entries.items()})
        return ConnectionData(self.graph, s, self.alpha_entries())

    def has_alpha(self) -> bool:
        return any(self.alpha.values())

    def is_permutation_type(self) -> bool:
        for (x, z), mids in middle_vertices(self.graph).items():
            targets = []
            for y in mids:
                m = self.sigma[(x, y, z)]
                if len(m) != 1:
                    return False
                (w, c), = m.items()
                if c != 1:
                    return False
                targets.append(w)
            if sorted(targets) != sorted(mids):
                return False
        return True

    def permutation(self, x: int, z: int) -> Dict[int, int]:
        """Middle vertex map ``y -> w`` for permutation type data."""
        out = {}
        for y in middle_vertices(self.graph).get((x, z), []):
            m = self.sigma[(x, y, z)]
            if len(m) != 1 or next(iter(m.values())) != 1:
                raise GeometryError("connection is not of permutation type")
            out[y] = next(iter(m))
        return out

    # segment maps
    def sigma_segment(self, seg: Path) -> Dict[Path, Fraction]:
        x, y, z = seg
        return {(x, w, z): c for w, c in self.sigma[seg].items()}

    def alpha_segment(self, seg: Path) -> Dict[Path, Fraction]:
        x, y = seg
        return {(x, w, y): c for w, c in self.alpha[seg].items()}

    def apply_sigma(self, t: Tensor, position: int = 0) -> Tensor:
        """``sigma`` on factors ``position, position+1``."""
        return apply_local(t, position, 2, self.sigma_segment)

    def apply_alpha(self, t: Tensor, position: int = 0) -> Tensor:
        return apply_local(t, position, 1, self.alpha_segment, 2)


def middle_vertices(g: Digraph) -> Dict[Tuple[int, int], List[int]]:
    """For each endpoint pair ``(x, z)`` the sorted ``y`` with ``x->y->z``."""
    out: Dict[Tuple[int, int], List[int]] = {}
    for x, y, z in g.paths(2):
        out.setdefault((x, z), []).append(y)
    return out


def is_sigma_bimodule_map(conn: ConnectionData, f: ScalarFunction) -> bool:
    """``sigma(f t) = f sigma(t)`` and ``sigma(t f) = sigma(t) f`` on all basis 2-paths."""
    g = conn.graph
    for p in g.paths(2):
        e = Tensor.basis(g, p)
        if conn.apply_sigma(e.left(f)) != conn.apply_sigma(e).left(f):
            return False
        if conn.apply_sigma(e.right(f)) != conn.apply_sigma(e).right(f):
            return False
    for a in g.arrows:
        e = Tensor.basis(g, a)
        if conn.apply_alpha(e.left(f)) != conn.apply_alpha(e).left(f):
            return False
        if conn.apply_alpha(e.right(f)) != conn.apply_alpha(e).right(f):
            return False
    return True


# -- covariant derivative ------------------------------------------------------------


def nabla(conn: ConnectionData, w: Tensor) -> Tensor:
    """Covariant derivative of a 1-form from the explicit basis formula."""
    g = conn.graph
    out: Dict[Path, Fraction] = {}
    for (x, y), c in w.items():
        for z in g.in_neighbors(x):
            out[(z, x, y)] = out.get((z, x, y), Fraction(0)) + c
        for z in g.out_neighbors(y):
            for v, s in conn.sigma[(x, y, z)].items():
                out[(x, v, z)] = out.get((x, v, z), Fraction(0)) - c * s
        for v, a in conn.alpha[(x, y)].items():
            out[(x, v, y)] = out.get((x, v, y), Fraction(0)) + c * a
    return Tensor(g, 2, out, check=False)


def nabla_inner(conn: ConnectionData, w: Tensor) -> Tensor:
    """``theta (x) w - sigma(w (x) theta) + alpha w``; agrees with :func:`nabla`."""
    th = theta(conn.graph)
    return tensor(th, w) - conn.apply_sigma(tensor(w, th)) + conn.apply_alpha(w)


def nabla_tensor2(conn: ConnectionData, t: Tensor) -> Tensor:
    """``(nabla (x) id) + (sigma (x) id)(id (x) nabla)`` on 2-tensors."""
    g = conn.graph
    out = Tensor.zero(g, 3)
    for (x, y, z), c in t.items():
        a = Tensor.basis(g, (x, y))
        b = Tensor.basis(g, (y, z))
        term = tensor(nabla(conn, a), b) + conn.apply_sigma(tensor(a, nabla(conn, b)), 0)
        out = out + term * c
    return out


def covariant_along(conn: ConnectionData, bracket: Bracket, direction: Tensor, w: Tensor) -> Tensor:
    """``nabla_direction w``."""
    return bracket.contract_first(tensor(direction, nabla(conn, w)))


# -- braid relations -------------------------------------------------------------------


def _braid_sides(conn: ConnectionData, t: Tensor) -> Tuple[Tensor, Tensor]:
    s = conn.apply_sigma
    lhs = s(s(s(t, 1), 0), 1)
    rhs = s(s(s(t, 0), 1), 0)
    return lhs, rhs


def check_braid(conn: ConnectionData) -> Tuple[bool, List[dict]]:
    """Exact test of ``s23 s12 s23 = s12 s23 s12`` on every basis 3-path."""
    g = conn.graph
    violations = []
    for p in g.paths(3):
        lhs, rhs = _braid_sides(conn, Tensor.basis(g, p))
        if lhs != rhs:
            diff = lhs - rhs
            for q, _ in sorted(diff.items()):
                violations.append({"input": list(p), "output": list(q),
                                   "lhs": format_fraction(lhs[q]), "rhs": format_fraction(rhs[q])})
    return not violations, violations


def braid_on_theta_theta(conn: ConnectionData, w: Tensor) -> bool:
    """Braid relations applied to ``w (x) theta (x) theta`` only."""
    th = theta(conn.graph)
    lhs, rhs = _braid_sides(conn, tensor(w, th, th))
    return lhs == rhs


# -- metric compatibility ------------------------------------------------------------------


def nabla_metric(conn: ConnectionData, met: Metric) -> Tensor:
    return nabla_tensor2(conn, met.tensor())


def quadratic_compat_holds(conn: ConnectionData, met: Metric) -> bool:
    """Quadratic form of metric compatibility for ``alpha = 0``.

    For every 3-path ``x->v->w->z``:
    ``sum_y sigma^{y,x,z}_w sigma^{x,y,w}_v g_{z->w} / g_{x->y} = [v == z]``.
    """
    g = conn.graph
    for x, v, w, z in g.paths(3):
        total = Fraction(0)
        for y in g.in_neighbors(x):
            if not g.has_arrow(y, w) or not g.has_arrow(x, z):
                continue
            s1 = conn.sigma[(y, x, z)].get(w, 0)
            if not s1:
                continue
            s2 = conn.sigma.get((x, y, w), {}).get(v, 0)
            if s2:
                total += s1 * s2 * met[(z, w)] / met[(x, y)]
        if total != (1 if v == z else 0):
            return False
    return True


def check_metric_compat(conn: ConnectionData, met: Metric) -> bool:
    """``nabla g = 0`` exactly; with ``alpha = 0`` the quadratic form must agree."""
    if conn.graph != met.graph:
        raise GeometryError("connection and metric live on different graphs")
    ok = nabla_metric(conn, met).is_zero()
    if not conn.has_alpha():
        other = quadratic_compat_holds(conn, met)
        if other != ok:  # pragma: no cover - would be an internal inconsistency
            raise GeometryError("metric compatibility tests disagree")
    return ok


def pairing_is_sigma_invariant(conn: ConnectionData, met: Metric) -> bool:
    """``( , ) sigma = ( , )`` evaluated on every basis 2-path."""
    g = conn.graph
    for p in g.paths(2):
        e = Tensor.basis(g, p)
        if met.pair(conn.apply_sigma(e)) != met.pair(e):
            return False
    return True


def pairing_invariance_criterion(conn: ConnectionData, met: Metric) -> bool:
    """Weight form: ``sum_w g_{w->x} sigma^{x,y,x}_w = g_{y->x}`` for every arrow."""
    for x, y in conn.graph.arrows:
        s = sum((met[(w, x)] * c for w, c in conn.sigma[(x, y, x)].items()), Fraction(0))
        if s != met[(y, x)]:
            return False
    return True


def bivector_bracket(conn: ConnectionData, met: Metric) -> Bracket:
    """``< , > = 1/2 ( , )(id + sigma)``."""
    g = conn.graph
    return Bracket.from_callable(g, lambda t: (met.pair(t) + met.pair(conn.apply_sigma(t))) * Fraction(1, 2))


# -- two-forms ----------------------------------------------------------------------------


class TwoFormSpace:
    """2-tensors modulo ``ker(id - sigma)``.

    Each endpoint block ``(x, z)`` of 2-paths is handled separately. The
    kernel there gets a reduced row echelon basis ``k_i`` with pivot
    coordinates ``p_i``; ``reduce(t) = t - sum t[p_i] k_i`` is zero on the
    kernel and serves as the canonical coset representative.
    """

    def __init__(self, conn: ConnectionData):
        g = conn.graph
        th = theta(g)
        tt = tensor(th, th)
        if conn.apply_sigma(tt) != tt:
            raise GeometryError("sigma does not fix theta (x) theta")
        self.graph = g
        self.conn = conn
        self._kernel: Dict[Tuple[int, int], Tuple[List[int], List[int], List[List[Fraction]]]] = {}
        dim = 0
        for (x, z), mids in middle_vertices(g).items():
            n = len(mids)
            pos = {y: i for i, y in enumerate(mids)}
            # column j of (id - sigma) is the image of the 2-path through mids[j]
            rows = [[Fraction(0)] * n for _ in range(n)]
            for j, y in enumerate(mids):
                rows[j][j] += 1
                for w, c in conn.sigma[(x, y, z)].items():
                    rows[pos[w]][j] -= c
            kern = _kernel_rref(rows, n)
            piv = [next(i for i, a in enumerate(k) if a != 0) for k in kern]
            self._kernel[(x, z)] = (mids, piv, kern)
            dim += n - len(kern)
        self.dimension = dim

    def kernel_dimension(self) -> int:
        return sum(len(v[2]) for v in self._kernel.values())

    def reduce_segment(self, seg: Path) -> Dict[Path, Fraction]:
        x, y, z = seg
        mids, piv, kern = self._kernel[(x, z)]
        j = mids.index(y)
        out = {seg: Fraction(1)}
        for p, k in zip(piv, kern):
            if p == j:
                for i, a in enumerate(k):
                    if a:
                        key = (x, mids[i], z)
                        out[key] = out.get(key, Fraction(0)) - a
        return {k: v for k, v in out.items() if v}

    def wedge(self, t: Tensor, position: int = 0) -> Tensor:
        """Project factors ``position, position+1`` to the quotient."""
        return apply_local(t, position, 2, self.reduce_segment)

    def coordinates(self, t: Tensor) -> List[Fraction]:
        """Coordinates of ``wedge(t)`` on the non-pivot 2-paths, in path order."""
        r = self.wedge(t)
        return [r[p] for p in self.free_paths()]

    def free_paths(self) -> List[Path]:
        out = []
        for (x, z), (mids, piv, _) in sorted(self._kernel.items()):
            for i, y in enumerate(mids):
                if i not in piv:
                    out.append((x, y, z))
        return sorted(out)

    def d1(self, w: Tensor) -> Tensor:
        """``d w = theta ^ w + w ^ theta``."""
        th = theta(self.graph)
        return self.wedge(tensor(th, w) + tensor(w, th))


def _kernel_rref(rows: List[List[Fraction]], n: int) -> List[List[Fraction]]:
    """Kernel basis of a square block, put in reduced row echelon form."""
    if n == 0:
        return []
    reduced, pivots = rref(rows, n)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, p in zip(reduced, pivots):
            v[p] = -r[f]
        basis.append(v)
    if not basis:
        return []
    return rref(basis, n)[0]


def omega2_space(conn: ConnectionData) -> TwoFormSpace:
    return TwoFormSpace(conn)


def wedge(space: TwoFormSpace, t: Tensor) -> Tensor:
    return space.wedge(t)


# -- torsion, curvature, cotorsion ------------------------------------------------------------


def torsion(conn: ConnectionData, space: TwoFormSpace, w: Tensor) -> Tensor:
    """``-wedge (id + sigma)(w (x) theta) + wedge alpha w``."""
    wt = tensor(w, theta(conn.graph))
    return space.wedge(conn.apply_alpha(w) - wt - conn.apply_sigma(wt))


def torsion_from_definition(conn: ConnectionData, space: TwoFormSpace, w: Tensor) -> Tensor:
    """``wedge nabla w - d w``."""
    return space.wedge(nabla(conn, w)) - space.d1(w)


def is_torsion_free(conn: ConnectionData, space: TwoFormSpace) -> bool:
    return all(torsion(conn, space, omega(conn.graph, *a)).is_zero() for a in conn.graph.arrows)


def curvature_lift(conn: ConnectionData, w: Tensor) -> Tensor:
    """The 3-tensor lift of the curvature.

    ``-s23 s12 (w th th) + (s23 (alpha (x) id) + (id (x) alpha) sigma)(w th) - (id (x) alpha) alpha w``
    """
    th = theta(conn.graph)
    s = conn.apply_sigma
    a = conn.apply_alpha
    wt = tensor(w, th)
    out = -s(s(tensor(w, th, th), 0), 1)
    out = out + s(a(wt, 0), 1) + a(s(wt, 0), 1)
    out = out - a(a(w, 0), 1)
    return out


def curvature(conn: ConnectionData, space: TwoFormSpace, w: Tensor) -> Tensor:
    """``(wedge (x) id)`` of the lift."""
    return space.wedge(curvature_lift(conn, w), 0)


def _second_derivative_on_tensor2(conn: ConnectionData, space: TwoFormSpace, t: Tensor) -> Tensor:
    """``(d (x) id - (wedge (x) id)(id (x) nabla)) t``."""
    g = conn.graph
    out = Tensor.zero(g, 3)
    for (x, y, z), c in t.items():
        a = Tensor.basis(g, (x, y))
        b = Tensor.basis(g, (y, z))
        term = tensor(space.d1(a), b) - space.wedge(tensor(a, nabla(conn, b)), 0)
        out = out + term * c
    return out


def curvature_from_definition(conn: ConnectionData, space: TwoFormSpace, w: Tensor) -> Tensor:
    return _second_derivative_on_tensor2(conn, space, nabla(conn, w))


def cotorsion(conn: ConnectionData, space: TwoFormSpace, met: Metric) -> Tensor:
    """``(d (x) id - (wedge (x) id)(id (x) nabla)) g``; zero means cotorsion free."""
    return _second_derivative_on_tensor2(conn, space, met.tensor())


def is_flat(conn: ConnectionData, space: TwoFormSpace) -> bool:
    return all(curvature(conn, space, omega(conn.graph, *a)).is_zero() for a in conn.graph.arrows)


def check_torsion_compatible(conn: ConnectionData, space: TwoFormSpace) -> bool:
    """Image of ``id + sigma`` lies in the kernel of the wedge."""
    g = conn.graph
    for p in g.paths(2):
        e = Tensor.basis(g, p)
        if not space.wedge(e + conn.apply_sigma(e)).is_zero():
            return False
    return True


# -- Ricci --------------------------------------------------------------------------------


def ricci(conn: ConnectionData, met: Metric) -> Tensor:
    """``( , )_12 (id (x) lift) g``: a 2-tensor."""
    g = conn.graph
    out = Tensor.zero(g, 2)
    for (x, y), c in met.weights.items():
        lifted = tensor(omega(g, x, y), curvature_lift(conn, omega(g, y, x)))
        out = out + met.pair_first(lifted) * (1 / c)
    return out


def ricci_scalar(conn: ConnectionData, met: Metric) -> ScalarFunction:
    return met.pair(ricci(conn, met))


def ricci_permutation_euclidean(conn: ConnectionData) -> Tensor:
    """Closed form for permutation type data, ``alpha = 0`` and unit weights.

    Sum over 3-paths ``x->y->z->w`` where ``y`` is fixed by the middle vertex
    permutation of ``(x, z)``, of ``-w_{y->m} (x) w_{m->w}`` with ``m`` the
    image of ``z`` under the permutation of ``(y, w)``.
    """
    if conn.has_alpha():
        raise GeometryError("closed form needs alpha = 0")
    g = conn.graph
    out: Dict[Path, Fraction] = {}
    for x, y, z, w in g.paths(3):
        if conn.permutation(x, z)[y] != y:
            continue
        m = conn.permutation(y, w)[z]
        out[(y, m, w)] = out.get((y, m, w), Fraction(0)) - 1
    return Tensor(g, 2, out, check=False)


# -- cohomology ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cohomology:
    h0: int
    h1: int
    rank_d0: int
    rank_d1: int


def derham_cohomology(conn: ConnectionData, space: TwoFormSpace) -> Cohomology:
    g = conn.graph
    n = g.n_vertices
    d0 = RatMatrix([d(g, ScalarFunction.delta(n, v)).to_vector() for v in range(n)], g.n_arrows)
    r0 = rank(d0)
    free = space.free_paths()
    rows = []
    for a in g.arrows:
        img = space.d1(omega(g, *a))
        rows.append([img[p] for p in free])
    r1 = rank(RatMatrix(rows, len(free))) if free else 0
    return Cohomology(h0=n - r0, h1=g.n_arrows - r1 - r0, rank_d0=r0, rank_d1=r1)


def derham_h1(conn: ConnectionData, space: TwoFormSpace) -> int:
    return derham_cohomology(conn, space).h1
