import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncgraph.calculus import (Bracket, CalculusError, ExtendedCalculus, ExtendedOneForm, ScalarFunction, Tensor,
                              apply_local, commutator, d, is_second_order, kernel_of_d_dimension, matrix_operator,
                              omega, pullback, pushforward, surjectivity_rank, tensor, theta)
from ncgraph.geometry import ConnectionData, Metric, nabla
from ncgraph.graph import Digraph, GraphMorphism, cycle_graph, paw_graph, prism_graph, random_connected_graph
from ncgraph.laplacian import edge_laplacian_canonical, laplace_beltrami_0, vertex_laplacian

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def functions(n):
    return st.lists(fractions, min_size=n, max_size=n).map(ScalarFunction)


def rand_function(rng, n):
    return ScalarFunction(Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(n))


def test_one_form_bimodule_actions():
    g = cycle_graph(3)
    f = ScalarFunction([1, 2, 3])
    w = omega(g, 0, 1)
    assert w.left(f) == w  # value at the source
    assert w.right(f) == w * 2  # value at the target
    assert f * w == w.left(f)
    assert w * f == w.right(f)


@given(st.integers(0, 30), st.data())
@settings(max_examples=40, deadline=None)
def test_leibniz_and_inner(seed, data):
    g = random_connected_graph(5, seed=seed)
    f = data.draw(functions(5))
    h = data.draw(functions(5))
    assert d(g, f * h) == d(g, f).right(h) + d(g, h).left(f)
    assert commutator(theta(g), f) == d(g, f)


def test_d_of_constants_vanishes():
    g = prism_graph()
    assert d(g, ScalarFunction.constant(6, 7)).is_zero()


@pytest.mark.parametrize("arrows, n, expected", [
    ([(0, 1), (2, 1)], 3, 1),
    ([(1, 0), (1, 2)], 3, 1),
    ([(0, 1), (2, 3)], 4, 2),
    ([(1, 0), (3, 2)], 4, 2),
    ([(0, 1)], 3, 2),
])
def test_kernel_of_d_counts_weak_components(arrows, n, expected):
    assert kernel_of_d_dimension(Digraph(n, arrows)) == expected


@pytest.mark.parametrize("g", [cycle_graph(4), paw_graph(), Digraph(3, [(0, 1), (1, 2)])])
def test_one_forms_spanned_by_functions_times_exact_forms(g):
    assert surjectivity_rank(g) == g.n_arrows


def test_tensor_rejects_non_paths():
    g = cycle_graph(4)
    with pytest.raises(CalculusError):
        Tensor(g, 2, {(0, 1, 3): 1})
    with pytest.raises(CalculusError):
        tensor(omega(g, 0, 1), omega(g, 2, 3)) + Tensor(g, 1, {(0, 1): 1})


def test_tensor_product_composes_paths():
    g = cycle_graph(4)
    t = tensor(omega(g, 0, 1), theta(g))
    assert t == Tensor(g, 2, {(0, 1, 2): 1, (0, 1, 0): 1})
    assert tensor(omega(g, 0, 1), omega(g, 2, 3)).is_zero()


def test_apply_local_swaps_and_contracts():
    g = cycle_graph(4)
    t = tensor(omega(g, 0, 1), omega(g, 1, 0), omega(g, 0, 3))
    # contract the first two factors to their start vertex
    out = apply_local(t, 0, 2, lambda seg: {(seg[0],): 1} if seg[0] == seg[2] else {}, image_length=0)
    assert out.degree == 1 and out == omega(g, 0, 3)
    zero = apply_local(Tensor.zero(g, 3), 1, 2, lambda seg: {}, image_length=0)
    assert zero.degree == 1


def test_vector_roundtrip():
    g = paw_graph()
    vec = [Fraction(i, 3) for i in range(g.n_arrows)]
    assert Tensor.from_vector(g, vec).to_vector() == vec


C6, C3 = cycle_graph(6), cycle_graph(3)
FOLD = GraphMorphism(C6, C3, [v % 3 for v in range(6)])


def test_pushforward_preserves_theta():
    assert pushforward(FOLD, theta(C3)) == theta(C6)


@given(functions(3))
def test_pushforward_intertwines_d(f):
    assert pushforward(FOLD, d(C3, f)) == d(C6, pullback(FOLD, f))


def test_pushforward_is_contravariant():
    c12 = cycle_graph(12)
    wrap = GraphMorphism(c12, C6, [v % 6 for v in range(12)])
    both = FOLD.compose(wrap)
    rng = random.Random(4)
    w = Tensor.from_vector(C3, [rng.randint(-3, 3) for _ in range(C3.n_arrows)])
    assert pushforward(both, w) == pushforward(wrap, pushforward(FOLD, w))


def test_pushforward_through_collapsed_arrows():
    # the arrows 0->1 and 1->0 collapse; they pick up nothing
    path = Digraph(3, [(0, 1), (1, 0), (1, 2), (2, 1)])
    edge = Digraph(2, [(0, 1), (1, 0)])
    m = GraphMorphism(path, edge, [0, 0, 1])
    assert pushforward(m, theta(edge)) == Tensor(path, 1, {(1, 2): 1, (2, 1): 1})
    f = ScalarFunction([3, -1])
    assert pushforward(m, d(edge, f)) == d(path, pullback(m, f))


def test_metric_bracket_is_bimodule_map():
    g = paw_graph()
    assert Metric.euclidean(g).bracket().is_bimodule_map()
    # a value on a non-closed 2-path cannot come from a bimodule map
    vals = {p: ScalarFunction.delta(g.n_vertices, p[0]) for p in g.paths(2)}
    assert not Bracket(g, vals).is_bimodule_map()


def test_second_order_needs_the_factor_two():
    g = paw_graph()
    br = Metric.euclidean(g).bracket()
    lap = vertex_laplacian(g)
    assert is_second_order(g, matrix_operator(g, lap.scale(2)), br)
    assert not is_second_order(g, matrix_operator(g, lap), br)
    with pytest.raises(CalculusError):
        ExtendedCalculus(g, matrix_operator(g, lap), br)


@pytest.mark.parametrize("lam", [Fraction(0), Fraction(1), Fraction(1, 2)])
@pytest.mark.parametrize("g", [cycle_graph(4), paw_graph()])
def test_extended_calculus_laws(g, lam):
    conn = ConnectionData.canonical(g)
    met = Metric.euclidean(g)
    ctx = ExtendedCalculus(g, lambda f: laplace_beltrami_0(conn, met, f), met.bracket(), lam)
    rng = random.Random(11)
    n = g.n_vertices
    for _ in range(5):
        f, h = rand_function(rng, n), rand_function(rng, n)
        assert ctx.d_tilde(f * h) == ctx.right(ctx.d_tilde(f), h) + ctx.left(f, ctx.d_tilde(h))
        assert ctx.commutator(ctx.theta(), f) == ctx.d_tilde(f)
        # left and right actions commute
        xi = ExtendedOneForm(Tensor.from_vector(g, [rng.randint(-2, 2) for _ in range(g.n_arrows)]), f)
        assert ctx.right(ctx.left(f, xi), h) == ctx.left(f, ctx.right(xi, h))

    edge = edge_laplacian_canonical(g)
    nab = lambda w: nabla(conn, w)
    for k_map in (None, lambda w: w):
        nt = ctx.extended_connection(nab, edge, k_map)
        for _ in range(3):
            f = rand_function(rng, n)
            w = Tensor.from_vector(g, [rng.randint(-2, 2) for _ in range(g.n_arrows)])
            lhs = nt(w.left(f))
            rhs = ctx.ext_tensor(ctx.d_tilde(f), ExtendedOneForm.embed(w)) + nt(w).left(f)
            assert lhs == rhs


def test_extension_law_rejects_wrong_edge_operator():
    g = cycle_graph(4)
    conn = ConnectionData.canonical(g)
    met = Metric.euclidean(g)
    ctx = ExtendedCalculus(g, lambda f: laplace_beltrami_0(conn, met, f), met.bracket(), 1)
    with pytest.raises(CalculusError):
        ctx.extended_connection(lambda w: nabla(conn, w), lambda w: w * 3)
