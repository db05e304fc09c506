"""Finite digraphs, graph morphisms and 1-difactor colourings.

Vertices are the integers ``0..n-1``. Arrows are kept in lexicographic
order, and every matrix in the package is indexed by that order.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Arrow = Tuple[int, int]


class GraphError(ValueError):
    pass


class GraphParseError(GraphError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class Digraph:
    """Simple digraph: no self-arrows, at most one arrow per direction."""

    __slots__ = ("n_vertices", "arrows", "arrow_index", "_out", "_in")

    def __init__(self, n_vertices: int, arrows: Iterable[Arrow]):
        if n_vertices < 0:
            raise GraphError("vertex count must be nonnegative")
        arrows = [(int(x), int(y)) for x, y in arrows]
        seen = set()
        for x, y in arrows:
            if x == y:
                raise GraphError(f"self-loop at vertex {x}")
            if not (0 <= x < n_vertices and 0 <= y < n_vertices):
                raise GraphError(f"arrow {x}->{y} has an endpoint outside 0..{n_vertices - 1}")
            if (x, y) in seen:
                raise GraphError(f"duplicate arrow {x}->{y}")
            seen.add((x, y))
        self.n_vertices = n_vertices
        self.arrows: Tuple[Arrow, ...] = tuple(sorted(arrows))
        self.arrow_index: Dict[Arrow, int] = {a: i for i, a in enumerate(self.arrows)}
        out: List[List[int]] = [[] for _ in range(n_vertices)]
        inc: List[List[int]] = [[] for _ in range(n_vertices)]
        for x, y in self.arrows:
            out[x].append(y)
            inc[y].append(x)
        self._out = tuple(tuple(v) for v in out)
        self._in = tuple(tuple(sorted(v)) for v in inc)

    @classmethod
    def from_edges(cls, n_vertices: int, edges: Iterable[Tuple[int, int]]) -> "Digraph":
        """Bidirected digraph from undirected edges."""
        arrows = set()
        for x, y in edges:
            arrows.add((x, y))
            arrows.add((y, x))
        return cls(n_vertices, arrows)

    def __repr__(self):
        return f"Digraph(n_vertices={self.n_vertices}, arrows={list(self.arrows)!r})"

    def __eq__(self, other):
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n_vertices == other.n_vertices and self.arrows == other.arrows

    def __hash__(self):
        return hash((self.n_vertices, self.arrows))

    @property
    def n_arrows(self) -> int:
        return len(self.arrows)

    def has_arrow(self, x: int, y: int) -> bool:
        return (x, y) in self.arrow_index

    def out_neighbors(self, x: int) -> Tuple[int, ...]:
        return self._out[x]

    def in_neighbors(self, y: int) -> Tuple[int, ...]:
        return self._in[y]

    def paths(self, length: int) -> List[Tuple[int, ...]]:
        """All composable paths with ``length`` arrows, as vertex tuples."""
        result: List[Tuple[int, ...]] = [(v,) for v in range(self.n_vertices)]
        for _ in range(length):
            result = [p + (z,) for p in result for z in self._out[p[-1]]]
        return result

    def is_path(self, path: Sequence[int]) -> bool:
        return all((path[i], path[i + 1]) in self.arrow_index for i in range(len(path) - 1))

    def undirected_edges(self) -> List[Tuple[int, int]]:
        return sorted({(min(x, y), max(x, y)) for x, y in self.arrows})

    def subgraph(self, vertices: Sequence[int]) -> Tuple["Digraph", List[int]]:
        """Induced subgraph, relabelled to ``0..k-1``; also returns the old labels."""
        old = sorted(vertices)
        new = {v: i for i, v in enumerate(old)}
        arrows = [(new[x], new[y]) for x, y in self.arrows if x in new and y in new]
        return Digraph(len(old), arrows), old


# -- parsing ---------------------------------------------------------------


def parse_digraph(text: str) -> Digraph:
    """Parse the edge-list format.

    ``u v`` is an undirected edge (both arrows), ``u -> v`` a single arrow,
    ``#`` starts a comment. A line holding a single integer declares an
    isolated vertex. The vertex count is one more than the largest index.
    """
    arrows: List[Arrow] = []
    origin: Dict[Arrow, int] = {}
    n = 0

    def add(x: int, y: int, lineno: int):
        if x == y:
            raise GraphParseError(lineno, f"self-loop at vertex {x}")
        if (x, y) in origin:
            raise GraphParseError(lineno, f"duplicate arrow {x}->{y} (first given on line {origin[(x, y)]})")
        origin[(x, y)] = lineno
        arrows.append((x, y))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        directed = "->" in line
        parts = line.replace("->", " ").split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise GraphParseError(lineno, f"cannot read {raw.strip()!r}") from None
        if any(v < 0 for v in nums):
            raise GraphParseError(lineno, "vertex indices must be nonnegative")
        if len(nums) == 1 and not directed:
            n = max(n, nums[0] + 1)
            continue
        if len(nums) != 2:
            raise GraphParseError(lineno, f"expected two vertices, got {raw.strip()!r}")
        x, y = nums
        n = max(n, x + 1, y + 1)
        add(x, y, lineno)
        if not directed:
            add(y, x, lineno)
    return Digraph(n, arrows)


def format_digraph(g: Digraph) -> str:
    """Inverse of :func:`parse_digraph`; bidirected pairs are written once."""
    lines = []
    done = set()
    used = set()
    for x, y in g.arrows:
        if (x, y) in done:
            continue
        if g.has_arrow(y, x):
            lines.append(f"{x} {y}")
            done.add((y, x))
        else:
            lines.append(f"{x} -> {y}")
        used.update((x, y))
    for v in range(g.n_vertices):
        if v not in used:
            lines.append(str(v))
    return "\n".join(lines) + "\n"


# -- predicates -------------------------------------------------------------


def is_bidirected(g: Digraph) -> bool:
    return all(g.has_arrow(y, x) for x, y in g.arrows)


def weak_components(g: Digraph) -> List[List[int]]:
    adj: List[set] = [set() for _ in range(g.n_vertices)]
    for x, y in g.arrows:
        adj[x].add(y)
        adj[y].add(x)
    seen = [False] * g.n_vertices
    comps = []
    for s in range(g.n_vertices):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in adj[v]:
                if not seen[u]:
                    seen[u] = True
                    comp.append(u)
                    queue.append(u)
        comps.append(sorted(comp))
    return comps


def is_weakly_connected(g: Digraph) -> bool:
    return len(weak_components(g)) <= 1


@dataclass(frozen=True)
class Degrees:
    out_degree: Tuple[int, ...]
    in_degree: Tuple[int, ...]
    undirected: Optional[Tuple[int, ...]]


def degrees(g: Digraph, undirected: bool = False) -> Degrees:
    """Out/in degrees; with ``undirected=True`` also the edge degree (bidirected only)."""
    out = tuple(len(g.out_neighbors(v)) for v in range(g.n_vertices))
    inc = tuple(len(g.in_neighbors(v)) for v in range(g.n_vertices))
    und = None
    if undirected:
        if not is_bidirected(g):
            raise GraphError("undirected degree needs a bidirected graph")
        und = out
    return Degrees(out, inc, und)


def degree(g: Digraph) -> Tuple[int, ...]:
    return degrees(g, undirected=True).undirected


# -- morphisms ----------------------------------------------------------------


@dataclass(frozen=True)
class GraphMorphism:
    domain: Digraph
    codomain: Digraph
    psi: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "psi", tuple(int(v) for v in self.psi))
        if len(self.psi) != self.domain.n_vertices:
            raise GraphError("vertex map length does not match the domain")
        if any(not 0 <= v < self.codomain.n_vertices for v in self.psi):
            raise GraphError("vertex map leaves the codomain")

    def compose(self, first: "GraphMorphism") -> "GraphMorphism":
        """``self ∘ first``."""
        if first.codomain != self.domain:
            raise GraphError("morphisms are not composable")
        return GraphMorphism(first.domain, self.codomain, tuple(self.psi[v] for v in first.psi))


def check_morphism(m: GraphMorphism) -> bool:
    psi = m.psi
    return all(psi[w] == psi[z] or m.codomain.has_arrow(psi[w], psi[z]) for w, z in m.domain.arrows)


# -- colourings ---------------------------------------------------------------


@dataclass
class ArcColoring:
    colors: Dict[Arrow, int]
    k: int
    mode: str = "simultaneous"

    def classes(self) -> List[List[Arrow]]:
        out: List[List[Arrow]] = [[] for _ in range(self.k)]
        for a in sorted(self.colors):
            out[self.colors[a]].append(a)
        return out

    def permutation(self, c: int) -> Dict[int, int]:
        """Vertex map following the unique ``c``-coloured out-arrow."""
        return {x: y for (x, y), col in self.colors.items() if col == c}


def is_valid_coloring(g: Digraph, col: ArcColoring) -> bool:
    if set(col.colors) != set(g.arrows):
        return False
    for v in range(g.n_vertices):
        outs = [col.colors[(v, y)] for y in g.out_neighbors(v)]
        if len(set(outs)) != len(outs):
            return False
        if col.mode == "simultaneous":
            ins = [col.colors[(x, v)] for x in g.in_neighbors(v)]
            if sorted(outs) != list(range(col.k)) or sorted(ins) != list(range(col.k)):
                return False
    return True


def _perfect_matching(n: int, adj: List[List[int]]) -> Optional[List[int]]:
    # Kuhn's augmenting paths; match_in[y] = x
    match_in = [-1] * n

    def augment(x: int, seen: List[bool]) -> bool:
        for y in adj[x]:
            if seen[y]:
                continue
            seen[y] = True
            if match_in[y] == -1 or augment(match_in[y], seen):
                match_in[y] = x
                return True
        return False

    for x in range(n):
        if not augment(x, [False] * n):
            return None
    match_out = [-1] * n
    for y, x in enumerate(match_in):
        match_out[x] = y
    return match_out


def difactor_coloring(g: Digraph, mode: str = "simultaneous") -> ArcColoring:
    """Colour arrows so that each colour class is a 1-difactor.

    ``mode="simultaneous"`` needs equal constant in- and out-degree ``n``
    and peels off ``n`` perfect matchings of the out/in bipartite double.
    ``mode="left"`` only needs constant out-degree and numbers the
    out-arrows of each vertex in order.
    """
    deg = degrees(g)
    outs = set(deg.out_degree)
    if len(outs) > 1:
        raise GraphError("out-degree is not constant")
    n = outs.pop() if outs else 0
    if mode == "left":
        colors = {}
        for v in range(g.n_vertices):
            for i, y in enumerate(g.out_neighbors(v)):
                colors[(v, y)] = i
        return ArcColoring(colors, n, mode="left")
    if mode != "simultaneous":
        raise ValueError(f"unknown colouring mode {mode!r}")
    if set(deg.in_degree) - {n}:
        raise GraphError("in- and out-degrees are not equal and constant")
    remaining = {v: list(g.out_neighbors(v)) for v in range(g.n_vertices)}
    colors = {}
    for c in range(n):
        match = _perfect_matching(g.n_vertices, [remaining[v] for v in range(g.n_vertices)])
        if match is None:  # pragma: no cover - excluded by Hall's theorem
            raise GraphError("no perfect matching; graph is not regular")
        for x, y in enumerate(match):
            colors[(x, y)] = c
            remaining[x].remove(y)
    return ArcColoring(colors, n)


# -- constructors ---------------------------------------------------------------


def cycle_graph(m: int) -> Digraph:
    return Digraph.from_edges(m, [(i, (i + 1) % m) for i in range(m)])


def path_graph(m: int) -> Digraph:
    return Digraph.from_edges(m, [(i, i + 1) for i in range(m - 1)])


def complete_graph(m: int) -> Digraph:
    return Digraph.from_edges(m, [(i, j) for i in range(m) for j in range(i + 1, m)])


def star_graph(leaves: int) -> Digraph:
    return Digraph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def prism_graph() -> Digraph:
    """Triangular prism: two triangles joined by a perfect matching."""
    return Digraph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)])


def paw_graph() -> Digraph:
    """Triangle 0-1-2 with a pendant vertex 3 on vertex 0."""
    return Digraph.from_edges(4, [(0, 1), (1, 2), (2, 0), (0, 3)])


def random_connected_graph(n: int, p: float = 0.35, seed: Optional[int] = None,
                           rng: Optional[random.Random] = None) -> Digraph:
    """Random connected bidirected graph: random spanning tree plus extra edges."""
    rng = rng or random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    edges = set()
    for i in range(1, n):
        a, b = order[i], order[rng.randrange(i)]
        edges.add((min(a, b), max(a, b)))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.add((i, j))
    return Digraph.from_edges(n, sorted(edges))
