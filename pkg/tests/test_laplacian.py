import json
import random
from fractions import Fraction

import numpy as np
import pytest

from ncgraph.calculus import ScalarFunction, Tensor, omega, theta
from ncgraph.geometry import ConnectionData, Metric, middle_vertices, pairing_is_sigma_invariant
from ncgraph.graph import Digraph, cycle_graph, path_graph, paw_graph, prism_graph, random_connected_graph, star_graph
from ncgraph.laplacian import (LaplacianError, edge_eigen_residual, edge_laplacian_canonical, edge_laplacian_direct,
                               edge_laplacian_general, format_multiset, gamma_weights, laplace_beltrami_0,
                               laplace_beltrami_1, mgon_eigenvalues, spectrum_matches, spectrum_reports,
                               edge_spectrum_report, vertex_laplacian, weighted_vertex_laplacian)


def test_star_vertex_spectrum():
    lap = vertex_laplacian(star_graph(3))
    assert np.allclose(sorted(np.linalg.eigvalsh(lap.to_float())), [0, 1, 1, 4])


def test_vertex_laplacian_rows_sum_to_zero():
    lap = vertex_laplacian(prism_graph())
    assert lap.is_symmetric() and all(s == 0 for s in lap.row_sums())


def test_needs_bidirected_graph():
    with pytest.raises(LaplacianError):
        vertex_laplacian(Digraph(2, [(0, 1)]))


@pytest.mark.parametrize("seed", range(5))
def test_laplace_beltrami_on_functions_is_weighted_laplacian(seed):
    rng = random.Random(seed)
    g = random_connected_graph(5, seed=seed)
    sigma = {}
    for (x, z), mids in middle_vertices(g).items():
        for y in mids:
            for w in mids:
                sigma[(x, y, z, w)] = Fraction(rng.randint(-2, 2), rng.randint(1, 2))
    conn = ConnectionData(g, sigma)
    met = Metric(g, {a: rng.randint(1, 4) for a in g.arrows})
    mat, gam = weighted_vertex_laplacian(conn, met)
    assert gam == gamma_weights(conn, met)
    f = ScalarFunction(Fraction(rng.randint(-5, 5)) for _ in range(g.n_vertices))
    assert laplace_beltrami_0(conn, met, f) == ScalarFunction(mat.apply(f.values))


@pytest.mark.parametrize("seed", range(5))
def test_permutation_connections_give_twice_graph_laplacian(seed):
    g = random_connected_graph(6, seed=seed)
    conn = ConnectionData.random_permutation(g, seed=seed)
    mat, _ = weighted_vertex_laplacian(conn, Metric.euclidean(g))
    assert mat == vertex_laplacian(g).scale(2)


@pytest.mark.parametrize("g", [cycle_graph(3), paw_graph(), star_graph(4), prism_graph(), path_graph(4)])
def test_canonical_formula_matches_direct_computation(g):
    conn = ConnectionData.canonical(g)
    met = Metric.euclidean(g)
    canon = edge_laplacian_canonical(g).matrix
    assert edge_laplacian_direct(conn, met).matrix == canon
    assert edge_laplacian_general(conn, met).matrix == canon


@pytest.mark.parametrize("seed", range(6))
def test_general_formula_matches_direct_computation(seed):
    rng = random.Random(seed)
    g = random_connected_graph(5, seed=seed + 3)
    conn = ConnectionData.random_permutation(g, rng=rng)
    for met in (Metric.euclidean(g), Metric(g, {a: rng.randint(1, 3) for a in g.arrows})):
        if not pairing_is_sigma_invariant(conn, met):
            with pytest.raises(LaplacianError):
                edge_laplacian_general(conn, met)
            continue
        assert edge_laplacian_general(conn, met).matrix == edge_laplacian_direct(conn, met).matrix


def test_general_formula_needs_zero_alpha():
    g = cycle_graph(3)
    conn = ConnectionData(g, ConnectionData.canonical(g).sigma_entries(), {(0, 1, 2): 1})
    with pytest.raises(LaplacianError):
        edge_laplacian_general(conn, Metric.euclidean(g))


@pytest.mark.parametrize("g", [paw_graph(), prism_graph()])
def test_edge_laplacian_extends_function_laplacian(g):
    conn = ConnectionData.canonical(g)
    met = Metric.euclidean(g)
    lap = edge_laplacian_canonical(g)
    two_l = vertex_laplacian(g).scale(2)
    assert lap(theta(g)).is_zero()
    f = ScalarFunction(range(g.n_vertices))
    assert lap(theta(g).left(f)) == theta(g).left(ScalarFunction(two_l.apply(f.values)))
    w = Tensor.from_vector(g, list(range(g.n_arrows)))
    assert lap(w) == laplace_beltrami_1(conn, met, w)


def test_edge_matrix_row_is_image_of_arrow():
    g = cycle_graph(4)
    lap = edge_laplacian_canonical(g)
    idx = g.arrow_index
    img = lap(omega(g, 0, 1))
    for b in g.arrows:
        assert lap.matrix[idx[(0, 1)], idx[b]] == img[b]
    assert lap.operator_matrix() == lap.matrix.T


def test_format_multiset():
    assert format_multiset([0, 3, 3, 4, 10, 10]) == "{10(2),4,3(2),0}"
    assert format_multiset([0.5, 2 - 1e-13]) == "{2,0.5}"


def test_triangle_report():
    rep = edge_spectrum_report(cycle_graph(3))
    assert rep.certificate.holds and rep.disjoint and rep.diagonalizable == "yes"
    assert format_multiset(rep.spectrum()) == "{6(2),2(3),0}"
    data = json.loads(json.dumps(rep.to_json()))
    assert data["certificate"]["holds"] is True
    assert "spectrum: {6(2),2(3),0}" in rep.to_text()


def test_mgon_report_against_formula():
    for m in (5, 6, 7):
        rep = edge_spectrum_report(cycle_graph(m))
        assert spectrum_matches(rep.spectrum(), mgon_eigenvalues(m), 1e-9)
    assert np.allclose(mgon_eigenvalues(4), [0, 2, 2, 2, 2, 4, 4, 8])


def test_exact_limit_gives_unknown_verdict():
    rep = edge_spectrum_report(cycle_graph(6), exact_limit=4)
    assert rep.diagonalizable == "unknown"
    assert edge_spectrum_report(cycle_graph(6)).diagonalizable == "no"
    # nothing to decide when the parts are disjoint
    assert edge_spectrum_report(cycle_graph(5), exact_limit=4).diagonalizable == "yes"


def test_disconnected_graphs():
    g = Digraph(6, [(0, 1), (1, 0), (1, 2), (2, 1), (2, 0), (0, 2), (3, 4), (4, 3)])
    with pytest.raises(LaplacianError):
        edge_spectrum_report(g)
    reps = spectrum_reports(g)
    assert [r.vertices for r in reps] == [[0, 1, 2], [3, 4]]
    assert format_multiset(reps[1].spectrum()) == "{4,0}"


def test_eigen_residual():
    g = cycle_graph(4)
    lap = edge_laplacian_canonical(g)
    assert edge_eigen_residual(lap, theta(g).to_vector(), 0) == 0
    assert edge_eigen_residual(lap, omega(g, 0, 1).to_vector(), 0) > 0


def test_jacobi_vertex_part_matches_numpy():
    for seed in range(5):
        g = random_connected_graph(8, seed=seed)
        rep = edge_spectrum_report(g)
        ref = 2 * np.linalg.eigvalsh(vertex_laplacian(g).to_float())
        assert np.allclose(sorted(float(v) for v in rep.vertex_part), sorted(ref), atol=1e-9)
        full = np.linalg.eigvals(edge_laplacian_canonical(g).matrix.to_float())
        assert np.allclose(sorted(full.real), rep.spectrum(), atol=1e-6)
