import cmath
import math

import numpy as np
import pytest

from ncgraph.calculus import Tensor, tensor, theta
from ncgraph.cayley import (GroupError, FiniteGroup, build_group, cayley_graph, characters, circulant_eigenvectors,
                            cyclic_group, generating_set, group_from_csv, invariant_form_laplacian, maurer_cartan,
                            parse_generators, product_group, split_top_level, symmetric_group)
from ncgraph.geometry import ConnectionData, Metric, nabla, omega2_space, torsion
from ncgraph.laplacian import edge_laplacian_direct

CASES = [
    ("sym:3", "(12),(13),(23)"),
    ("cyclic:6", "1,3,5"),
    ("cyclic:4", "1,3"),
    ("product:cyclic:2,cyclic:2", "(0,1),(1,0)"),
]


def make(spec, gens):
    grp = build_group(spec)
    return cayley_graph(grp, parse_generators(grp, gens))


def test_symmetric_group_conventions():
    s3 = symmetric_group(3)
    assert s3.order == 6 and not s3.is_abelian()
    a, b = s3.index("(12)"), s3.index("(23)")
    # (st)(i) = s(t(i)): apply (23) first, then (12)
    assert s3.labels[s3.mul(a, b)] == "(123)"
    assert s3.labels[s3.mul(b, a)] == "(132)"
    assert s3.element_order(s3.index("(123)")) == 3
    assert s3.index("( 1 2 )") == a
    assert s3.labels[s3.conjugate(b, a)] == "(13)"


def test_group_laws_checked():
    with pytest.raises(GroupError):
        FiniteGroup([[0, 1], [0, 1]])
    with pytest.raises(GroupError):
        FiniteGroup([[0, 1, 2], [1, 2, 0], [2, 1, 0]])
    with pytest.raises(GroupError):
        FiniteGroup([[0, 1], [1, 0]], ["a", "a"])


def test_product_and_specs():
    g = build_group("product:cyclic:2,cyclic:3")
    assert g.order == 6 and g.is_abelian()
    assert g.labels[:3] == ["(0,0)", "(0,1)", "(0,2)"]
    h = build_group("product:cyclic:2,product:cyclic:2,cyclic:2")
    assert h.order == 8
    assert product_group(cyclic_group(2), cyclic_group(2)).element_order(3) == 2
    for bad in ("cyclic:x", "dihedral:4", "product:cyclic:2"):
        with pytest.raises(GroupError):
            build_group(bad)


def test_split_top_level():
    assert split_top_level("(0,1), (1,0)") == ["(0,1)", "(1,0)"]
    assert split_top_level("1, 3,5") == ["1", "3", "5"]


def test_csv_table_roundtrip():
    s3 = symmetric_group(3)
    lines = ["," + ",".join(s3.labels)]
    for i, lab in enumerate(s3.labels):
        lines.append(lab + "," + ",".join(s3.labels[s3.mul(i, j)] for j in range(6)))
    text = "\n".join(lines) + "\n"
    g = group_from_csv(text)
    assert g.table == s3.table
    assert build_group(text).table == s3.table
    with pytest.raises(GroupError):
        group_from_csv(text.replace("(123),(132)", "(123),(123)", 1))


def test_generating_set_flags():
    z5 = cyclic_group(5)
    c = generating_set(z5, [1])
    assert not c.closed_under_inverse and c.generates
    with pytest.raises(GroupError):
        cayley_graph(z5, c)
    z6 = cyclic_group(6)
    c = generating_set(z6, [3])
    assert c.closed_under_inverse and not c.generates
    with pytest.raises(GroupError):
        cayley_graph(z6, c)
    s3 = symmetric_group(3)
    c = parse_generators(s3, "(12),(123),(132)")
    assert c.closed_under_inverse and c.generates and not c.ad_stable
    with pytest.raises(GroupError):
        maurer_cartan(cayley_graph(s3, c))
    with pytest.raises(GroupError):
        generating_set(z6, [0, 1, 5])


def is_complete_bipartite_33(g):
    if g.n_vertices != 6 or g.n_arrows != 18:
        return False
    side = {0: 0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in g.out_neighbors(x):
            if y not in side:
                side[y] = 1 - side[x]
                stack.append(y)
            elif side[y] == side[x]:
                return False
    return sorted(side.values()) == [0, 0, 0, 1, 1, 1]


def test_two_presentations_of_k33():
    assert is_complete_bipartite_33(make("sym:3", "(12),(13),(23)").graph)
    assert is_complete_bipartite_33(make("cyclic:6", "1,3,5").graph)


@pytest.mark.parametrize("spec, gens", CASES)
def test_invariant_forms(spec, gens):
    cg = make(spec, gens)
    g, grp = cg.graph, cg.group
    e = {a: cg.invariant_form(a) for a in cg.generators.elements}
    assert sum(e.values(), Tensor.zero(g, 1)) == theta(g)
    w = Tensor.from_vector(g, list(range(g.n_arrows)))
    assert cg.from_invariant(cg.to_invariant(w)) == w
    met = Metric.euclidean(g)
    assert met.tensor() == sum((tensor(e[a], e[grp.inv(a)]) for a in e), Tensor.zero(g, 2))


@pytest.mark.parametrize("spec, gens", CASES)
def test_maurer_cartan_on_invariant_forms(spec, gens):
    cg = make(spec, gens)
    grp, g = cg.group, cg.graph
    conn = maurer_cartan(cg)
    e = {a: cg.invariant_form(a) for a in cg.generators.elements}
    th = theta(g)
    space = omega2_space(conn)
    for a in e:
        expected = sum((tensor(e[b], e[a] - e[grp.conjugate(b, a)]) for b in e), Tensor.zero(g, 2))
        assert nabla(conn, e[a]) == expected
        for b in e:
            assert conn.apply_sigma(tensor(e[a], e[b])) == tensor(e[b], e[grp.conjugate(b, a)])
        t = -space.wedge(tensor(e[a], th)) - sum((space.wedge(tensor(e[b], e[grp.conjugate(b, a)])) for b in e),
                                                 Tensor.zero(g, 2))
        assert torsion(conn, space, e[a]) == t


@pytest.mark.parametrize("spec, gens", CASES)
def test_invariant_laplacian_embeds_in_edge_laplacian(spec, gens):
    cg = make(spec, gens)
    conn = maurer_cartan(cg)
    lap = edge_laplacian_direct(conn, Metric.euclidean(cg.graph))
    inv = invariant_form_laplacian(cg)
    elems = cg.generators.elements
    for i, a in enumerate(elems):
        image = sum((cg.invariant_form(b) * inv[i, j] for j, b in enumerate(elems)), Tensor.zero(cg.graph, 1))
        assert lap(cg.invariant_form(a)) == image


def test_s3_invariant_laplacian():
    inv = invariant_form_laplacian(make("sym:3", "(12),(13),(23)"))
    assert inv.rows == ((4, -2, -2), (-2, 4, -2), (-2, -2, 4))


@pytest.mark.parametrize("group", [cyclic_group(6), build_group("product:cyclic:2,cyclic:4"), cyclic_group(1)])
def test_characters_are_homomorphisms(group):
    chars = characters(group)
    assert len(chars) == group.order
    assert len({tuple(c) for c in chars}) == group.order
    for c in chars:
        for x in range(group.order):
            for y in range(group.order):
                assert (c[x] + c[y]) % 1 == c[group.mul(x, y)]
    mat = np.array([[cmath.exp(2j * math.pi * float(r)) for r in c] for c in chars])
    assert np.allclose(mat @ mat.conj().T, group.order * np.eye(group.order))


def test_characters_need_abelian_group():
    with pytest.raises(GroupError):
        characters(symmetric_group(3))


def test_circulant_candidates_on_square():
    ana = circulant_eigenvectors(make("cyclic:4", "1,3"))
    assert len(ana.candidates) == 8
    assert ana.max_residual < 1e-9
    assert ana.independent_count == ana.numeric_rank == 8


def test_circulant_needs_abelian():
    with pytest.raises(GroupError):
        circulant_eigenvectors(make("sym:3", "(12),(13),(23)"))


def test_connection_equality():
    cg = make("cyclic:4", "1,3")
    assert maurer_cartan(cg) == maurer_cartan(cg)
    assert maurer_cartan(cg) != ConnectionData.canonical(cg.graph)
