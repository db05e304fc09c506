"""Finite groups, Cayley graphs and their invariant geometry.

The Cayley graph of ``(G, C)`` has an arrow ``x -> xa`` for every ``a`` in
``C``. The left-invariant forms ``e_a`` (the sum of all arrows labelled
``a``) give a basis of 1-forms over the functions.
"""

from __future__ import annotations

import cmath
import csv
import io
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .calculus import ScalarFunction, Tensor
from .geometry import ConnectionData
from .graph import Digraph
from .laplacian import edge_laplacian_canonical, edge_eigen_residual
from .linalg import RatMatrix
from .poly import root_of_unity_sum_is_zero


class GroupError(ValueError):
    pass


class FiniteGroup:
    """A group given by its multiplication table; the laws are checked on construction."""

    def __init__(self, table: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None):
        n = len(table)
        if n == 0:
            raise GroupError("empty group")
        tab = [list(map(int, r)) for r in table]
        if any(len(r) != n for r in tab):
            raise GroupError("multiplication table is not square")
        if any(not 0 <= v < n for r in tab for v in r):
            raise GroupError("table entry out of range")
        ident = next((e for e in range(n) if all(tab[e][x] == x and tab[x][e] == x for x in range(n))), None)
        if ident is None:
            raise GroupError("no identity element")
        inv = []
        for x in range(n):
            y = next((y for y in range(n) if tab[x][y] == ident and tab[y][x] == ident), None)
            if y is None:
                raise GroupError(f"element {x} has no inverse")
            inv.append(y)
        for a in range(n):
            for b in range(n):
                ab = tab[a][b]
                for c in range(n):
                    if tab[ab][c] != tab[a][tab[b][c]]:
                        raise GroupError(f"associativity fails at ({a},{b},{c})")
        self.table = tab
        self.order = n
        self.identity = ident
        self.inverse = inv
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        if len(self.labels) != n or len(set(self.labels)) != n:
            raise GroupError("labels must be distinct, one per element")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def power(self, a: int, k: int) -> int:
        out = self.identity
        for _ in range(k):
            out = self.table[out][a]
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def conjugate(self, b: int, a: int) -> int:
        """``b^-1 a b``."""
        return self.table[self.table[self.inverse[b]][a]][b]

    def is_abelian(self) -> bool:
        return all(self.table[a][b] == self.table[b][a] for a in range(self.order) for b in range(a))

    def index(self, label: str) -> int:
        """Position of a label; whitespace is ignored, so ``(1 2)`` finds ``(12)``."""
        key = "".join(label.split())
        for i, lab in enumerate(self.labels):
            if "".join(lab.split()) == key:
                return i
        raise GroupError(f"unknown element {label.strip()!r}")

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic group needs n >= 1")
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)])


def _cycle_label(p: Tuple[int, ...]) -> str:
    seen, cycles = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        c, j = [], i
        while j not in seen:
            seen.add(j)
            c.append(j + 1)
            j = p[j]
        cycles.append("(" + "".join(str(v) for v in c) + ")")
    return "".join(cycles) or "e"


def symmetric_group(n: int) -> FiniteGroup:
    """Permutations of ``0..n-1`` in lexicographic order; ``(st)(i) = s(t(i))``."""
    if n < 1:
        raise GroupError("symmetric group needs n >= 1")
    perms = list(itertools.permutations(range(n)))
    pos = {p: i for i, p in enumerate(perms)}
    table = [[pos[tuple(s[t[i]] for i in range(n))] for t in perms] for s in perms]
    labels = [_cycle_label(p) for p in perms]
    if n > 9:
        labels = [str(p) for p in perms]
    return FiniteGroup(table, labels)


def product_group(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    """Direct product; element ``(i, j)`` sits at index ``i * |b| + j``."""
    nb = b.order
    n = a.order * nb
    table = [[a.table[x // nb][y // nb] * nb + b.table[x % nb][y % nb] for y in range(n)] for x in range(n)]
    labels = [f"({la},{lb})" for la in a.labels for lb in b.labels]
    return FiniteGroup(table, labels)


def split_top_level(text: str, sep: str = ",") -> List[str]:
    """Split on ``sep`` outside parentheses."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [s.strip() for s in out if s.strip()]


def _split_product(text: str) -> List[str]:
    # "cyclic:2,cyclic:2" or "cyclic:2,product:cyclic:2,cyclic:3" (the last factor may nest)
    parts = split_top_level(text)
    out = []
    i = 0
    while i < len(parts):
        if parts[i].startswith("product:"):
            out.append(",".join(parts[i:]))
            break
        out.append(parts[i])
        i += 1
    return out


def build_group(spec: str) -> FiniteGroup:
    """Group from ``cyclic:n``, ``sym:n``, ``product:A,B[,...]`` or CSV table text."""
    spec = spec.strip()
    if spec.startswith("cyclic:"):
        return cyclic_group(_parse_count(spec[7:]))
    if spec.startswith("sym:"):
        return symmetric_group(_parse_count(spec[4:]))
    if spec.startswith("product:"):
        factors = _split_product(spec[8:])
        if len(factors) < 2:
            raise GroupError("product needs at least two factors")
        groups = [build_group(f) for f in factors]
        out = groups[0]
        for g in groups[1:]:
            out = product_group(out, g)
        return out
    if "\n" in spec or spec.startswith(","):
        return group_from_csv(spec)
    raise GroupError(f"unknown group spec {spec!r}")


def _parse_count(s: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise GroupError(f"bad group size {s!r}") from None


def group_from_csv(text: str) -> FiniteGroup:
    """Multiplication table; the first row and column carry the element labels."""
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise GroupError("empty table")
    header = [c.strip() for c in rows[0][1:]]
    pos = {lab: i for i, lab in enumerate(header)}
    if len(pos) != len(header):
        raise GroupError("duplicate labels in header")
    if len(rows) - 1 != len(header):
        raise GroupError("table must have one row per element")
    table = []
    for i, r in enumerate(rows[1:]):
        if r[0].strip() != header[i]:
            raise GroupError("row labels must follow the header order")
        try:
            table.append([pos[c.strip()] for c in r[1:]])
        except KeyError as exc:
            raise GroupError(f"unknown element {exc.args[0]!r} in table") from None
    return FiniteGroup(table, header)


# -- generating sets and Cayley graphs -------------------------------------------------------


@dataclass(frozen=True)
class GeneratingSet:
    elements: Tuple[int, ...]
    closed_under_inverse: bool
    ad_stable: bool
    generates: bool


def generating_set(g: FiniteGroup, elements: Sequence[int]) -> GeneratingSet:
    elems = tuple(sorted(set(int(a) for a in elements)))
    if not elems:
        raise GroupError("empty generating set")
    if any(not 0 <= a < g.order for a in elems):
        raise GroupError("generator out of range")
    if g.identity in elems:
        raise GroupError("the identity cannot be a generator")
    s = set(elems)
    inv = all(g.inv(a) in s for a in elems)
    ad = all(g.conjugate(b, a) in s for a in elems for b in range(g.order))
    reach = {g.identity}
    frontier = [g.identity]
    while frontier:
        x = frontier.pop()
        for a in elems:
            y = g.mul(x, a)
            if y not in reach:
                reach.add(y)
                frontier.append(y)
    return GeneratingSet(elems, inv, ad, len(reach) == g.order)


def parse_generators(g: FiniteGroup, text: str) -> GeneratingSet:
    return generating_set(g, [g.index(tok) for tok in split_top_level(text)])


@dataclass(frozen=True)
class CayleyGraph:
    group: FiniteGroup
    generators: GeneratingSet
    graph: Digraph

    def invariant_form(self, a: int) -> Tensor:
        """``e_a``, the sum of the arrows ``x -> xa``."""
        if a not in self.generators.elements:
            raise GroupError("not a generator")
        return Tensor(self.graph, 1, {(x, self.group.mul(x, a)): 1 for x in range(self.group.order)}, check=False)

    def from_invariant(self, coeffs: Dict[int, ScalarFunction]) -> Tensor:
        """``sum_a f_a e_a`` from functions ``f_a``."""
        out = Tensor.zero(self.graph, 1)
        for a, f in coeffs.items():
            out = out + self.invariant_form(a).left(f)
        return out

    def to_invariant(self, w: Tensor) -> Dict[int, ScalarFunction]:
        """Inverse change of basis: ``w_{x->xa} = delta_x e_a``."""
        out = {}
        for a in self.generators.elements:
            out[a] = ScalarFunction(w[(x, self.group.mul(x, a))] for x in range(self.group.order))
        return out

    def label(self, a: int) -> str:
        return self.group.labels[a]


def cayley_graph(g: FiniteGroup, c: GeneratingSet) -> CayleyGraph:
    if not c.closed_under_inverse:
        raise GroupError("generating set is not closed under inverses")
    if not c.generates:
        raise GroupError("generating set does not generate the group")
    arrows = [(x, g.mul(x, a)) for x in range(g.order) for a in c.elements]
    return CayleyGraph(g, c, Digraph(g.order, arrows))


def maurer_cartan(cg: CayleyGraph) -> ConnectionData:
    """``sigma`` sends ``x->y->z`` to ``x -> x y^-1 z -> z``; ``alpha = 0``."""
    g, c = cg.group, cg.generators
    if not c.ad_stable:
        raise GroupError("generating set is not stable under conjugation")
    sigma = {}
    for x, y, z in cg.graph.paths(2):
        w = g.mul(g.mul(x, g.inv(y)), z)
        sigma[(x, y, z, w)] = 1
    return ConnectionData(cg.graph, sigma)


def invariant_form_laplacian(cg: CayleyGraph) -> RatMatrix:
    """``e_a -> 2(|C| e_a - sum_b e_{b^-1 a b})``; row ``a`` holds the image of ``e_a``."""
    g, elems = cg.group, cg.generators.elements
    if not cg.generators.ad_stable:
        raise GroupError("generating set is not stable under conjugation")
    pos = {a: i for i, a in enumerate(elems)}
    k = len(elems)
    rows = [[Fraction(0)] * k for _ in range(k)]
    for a in elems:
        rows[pos[a]][pos[a]] += 2 * k
        for b in elems:
            rows[pos[a]][pos[g.conjugate(b, a)]] -= 2
    return RatMatrix(rows, k)


# -- characters of abelian groups --------------------------------------------------------------


def characters(g: FiniteGroup) -> List[List[Fraction]]:
    """All characters of an abelian group, as turns ``r`` meaning ``exp(2 pi i r)``.

    Built by extending from the trivial subgroup one element at a time:
    if ``x^k`` is the first power of ``x`` in the current subgroup ``H``, a
    character ``chi`` of ``H`` has ``k`` extensions, with
    ``chi'(x) = (chi(x^k) + t) / k`` for ``t = 0..k-1``.
    """
    if not g.is_abelian():
        raise GroupError("characters are only built for abelian groups")
    n = g.order
    members = [g.identity]
    in_h = {g.identity}
    chars: List[Dict[int, Fraction]] = [{g.identity: Fraction(0)}]
    for x in range(n):
        if x in in_h:
            continue
        k, p = 1, x
        while p not in in_h:
            p = g.mul(p, x)
            k += 1
        new_members = []
        powers = [g.identity]
        for _ in range(k - 1):
            powers.append(g.mul(powers[-1], x))
        for j, pj in enumerate(powers):
            for h in members:
                new_members.append((g.mul(pj, h), j, h))
        new_chars = []
        for chi in chars:
            for t in range(k):
                r = (chi[p] + t) / k
                new_chars.append({e: (j * r + chi[h]) % 1 for e, j, h in new_members})
        members = [e for e, _, _ in new_members]
        in_h = set(members)
        chars = new_chars
    return [[c[e] for e in range(n)] for c in chars]


def character_values(turns: Sequence[Fraction]) -> np.ndarray:
    return np.array([cmath.exp(2j * math.pi * float(r)) for r in turns])


@dataclass
class CirculantCandidate:
    kind: int
    character: int
    eigenvalue: complex
    vector: np.ndarray
    residual: float


@dataclass
class CirculantAnalysis:
    candidates: List[CirculantCandidate]
    independent_count: int
    numeric_rank: int
    degenerate_characters: List[int]

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.candidates), default=0.0)


def circulant_eigenvectors(cg: CayleyGraph, tol: float = 1e-9) -> CirculantAnalysis:
    """Character eigenvectors of the canonical edge Laplacian on an abelian Cayley graph.

    Type 1 is ``chi theta`` with eigenvalue ``2 sum_a (1 - chi(a))``. Type 2
    is ``chi sum_a mu^a e_a`` with eigenvalue ``|C|`` whenever
    ``sum_a (2 chi(a^-1) - 1) mu^a = 0``. Within the span of ``chi e_a``
    the two types fill everything unless ``(1, ..., 1)`` satisfies the
    type 2 condition, which happens exactly when ``sum_a chi(a) = |C| / 2``;
    that gives the exact count of independent candidates.
    """
    g, elems = cg.group, cg.generators.elements
    if not g.is_abelian():
        raise GroupError("circulant eigenvectors need an abelian group")
    lap = edge_laplacian_canonical(cg.graph)
    idx = cg.graph.arrow_index
    k = len(elems)
    cands: List[CirculantCandidate] = []
    degenerate = []
    for ci, turns in enumerate(characters(g)):
        chi = character_values(turns)
        val1 = 2 * sum(1 - chi[a] for a in elems)
        v = np.zeros(cg.graph.n_arrows, dtype=complex)
        for x in range(g.order):
            for a in elems:
                v[idx[(x, g.mul(x, a))]] = chi[x]
        cands.append(CirculantCandidate(1, ci, val1, v, edge_eigen_residual(lap, v, val1)))
        r = [2 * chi[g.inv(a)] - 1 for a in elems]
        for j in range(1, k):
            mu = np.zeros(k, dtype=complex)
            mu[j] = 1
            mu[0] = -r[j] / r[0]
            v = np.zeros(cg.graph.n_arrows, dtype=complex)
            for x in range(g.order):
                for i, a in enumerate(elems):
                    v[idx[(x, g.mul(x, a))]] = chi[x] * mu[i]
            cands.append(CirculantCandidate(2, ci, complex(k), v, edge_eigen_residual(lap, v, k)))
        terms: Dict[Fraction, Fraction] = {}
        for a in elems:
            terms[turns[a]] = terms.get(turns[a], Fraction(0)) + 1
        terms[Fraction(0)] = terms.get(Fraction(0), Fraction(0)) - Fraction(k, 2)
        if root_of_unity_sum_is_zero(terms):
            degenerate.append(ci)
    mat = np.array([c.vector for c in cands]).T
    numeric_rank = int(np.linalg.matrix_rank(mat, tol=1e-8)) if len(cands) else 0
    return CirculantAnalysis(cands, g.order * k - len(degenerate), numeric_rank, degenerate)
