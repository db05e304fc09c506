import random

import pytest

from ncgraph.graph import (ArcColoring, Digraph, GraphError, GraphMorphism, GraphParseError, check_morphism,
                           complete_graph, cycle_graph, degree, degrees, difactor_coloring, format_digraph,
                           is_bidirected, is_valid_coloring, is_weakly_connected, parse_digraph, paw_graph,
                           prism_graph, random_connected_graph, star_graph, weak_components)

# left regular of out-degree 2, in-degrees 0, 3, 3, 2
LEFT_REGULAR = Digraph(4, [(0, 1), (1, 3), (3, 1), (2, 1), (0, 2), (1, 2), (2, 3), (3, 2)])


def test_parse_undirected_and_directed_lines():
    g = parse_digraph("# a comment\n0 1\n1 -> 2  # trailing\n\n4\n")
    assert g.n_vertices == 5
    assert sorted(g.arrows) == [(0, 1), (1, 0), (1, 2)]
    assert not is_bidirected(g)


def test_format_roundtrip():
    for g in (prism_graph(), paw_graph(), LEFT_REGULAR, parse_digraph("0 1\n5\n")):
        h = parse_digraph(format_digraph(g))
        assert h.n_vertices == g.n_vertices
        assert sorted(h.arrows) == sorted(g.arrows)


@pytest.mark.parametrize("text, lineno", [
    ("0 1\n1 1\n", 2),
    ("0 -> 1\n0 -> 1\n", 2),
    ("0 1 2\n", 1),
    ("a b\n", 1),
    ("0 -1\n", 1),
])
def test_parse_errors_carry_line_numbers(text, lineno):
    with pytest.raises(GraphParseError) as err:
        parse_digraph(text)
    assert err.value.lineno == lineno


def test_duplicate_undirected_edge_rejected():
    with pytest.raises(GraphParseError):
        parse_digraph("0 1\n1 0\n")


def test_paths_are_composable():
    g = cycle_graph(4)
    assert len(g.paths(1)) == g.n_arrows == 8
    # each vertex has 2 neighbours, so 8 * 2 two-step paths
    assert len(g.paths(2)) == 16
    assert all(g.is_path(p) for p in g.paths(3))
    assert not g.is_path((0, 2))


def test_named_constructors():
    assert prism_graph().n_vertices == 6 and prism_graph().n_arrows == 18
    assert star_graph(3).n_arrows == 6
    assert tuple(degree(paw_graph())) == (3, 2, 2, 1)
    assert complete_graph(4).n_arrows == 12
    assert all(is_bidirected(g) for g in (prism_graph(), star_graph(3), paw_graph(), cycle_graph(5)))


def test_random_connected_graph_is_seeded():
    a = random_connected_graph(8, seed=3)
    b = random_connected_graph(8, seed=3)
    assert a == b
    for s in range(20):
        g = random_connected_graph(random.Random(s).randint(2, 9), seed=s)
        assert is_bidirected(g) and is_weakly_connected(g)


def test_weak_components_ignore_direction():
    g = Digraph(5, [(0, 1), (2, 1), (3, 4)])
    assert sorted(map(sorted, weak_components(g))) == [[0, 1, 2], [3, 4]]
    assert not is_weakly_connected(g)
    assert is_weakly_connected(Digraph(3, [(1, 0), (1, 2)]))


def test_degrees():
    deg = degrees(LEFT_REGULAR)
    assert deg.out_degree == (2, 2, 2, 2)
    assert deg.in_degree == (0, 3, 3, 2)
    with pytest.raises(GraphError):
        degrees(LEFT_REGULAR, undirected=True)


def test_left_colouring_of_left_regular_graph():
    col = difactor_coloring(LEFT_REGULAR, mode="left")
    assert is_valid_coloring(LEFT_REGULAR, col)
    for c in range(col.k):
        # one arrow of each colour leaves every vertex
        assert sorted(col.permutation(c)) == [0, 1, 2, 3]
    with pytest.raises(GraphError):
        difactor_coloring(LEFT_REGULAR)


@pytest.mark.parametrize("g", [cycle_graph(5), prism_graph(), complete_graph(4), cycle_graph(6)])
def test_simultaneous_colouring_gives_permutations(g):
    col = difactor_coloring(g)
    assert is_valid_coloring(g, col)
    for c in range(col.k):
        perm = col.permutation(c)
        assert sorted(perm) == sorted(perm.values()) == list(range(g.n_vertices))


def test_invalid_colouring_detected():
    g = cycle_graph(3)
    col = ArcColoring({a: 0 for a in g.arrows}, 2)
    assert not is_valid_coloring(g, col)


def test_morphisms_and_composition():
    c6, c3 = cycle_graph(6), cycle_graph(3)
    m = GraphMorphism(c6, c3, [v % 3 for v in range(6)])
    assert check_morphism(m)
    collapse = GraphMorphism(c3, Digraph(1, []), [0, 0, 0])
    assert check_morphism(collapse)
    comp = collapse.compose(m)
    assert comp.domain == c6 and comp.psi == (0,) * 6
    bad = GraphMorphism(cycle_graph(4), Digraph(4, [(0, 1)]), [0, 1, 2, 3])
    assert not check_morphism(bad)
    with pytest.raises(GraphError):
        GraphMorphism(c3, c6, [0, 1])
    with pytest.raises(GraphError):
        m.compose(m)
