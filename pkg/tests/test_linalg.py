from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncgraph.linalg import (LinalgError, RatMatrix, charpoly, echelon, kernel_basis, rank, rank_and_kernel,
                            rref, sym_eigensolve)
from ncgraph.poly import RatPolynomial

entries = st.integers(min_value=-4, max_value=4)


def square_matrices(max_n=5):
    return st.integers(min_value=1, max_value=max_n).flatmap(
        lambda n: st.lists(st.lists(entries, min_size=n, max_size=n), min_size=n, max_size=n))


def det_by_elimination(rows):
    # plain Gaussian elimination over Fractions, used as an oracle
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


@given(square_matrices())
@settings(max_examples=80, deadline=None)
def test_charpoly_matches_determinant(rows):
    m = RatMatrix(rows)
    p = charpoly(m)
    n = len(rows)
    assert p.degree == n and p.leading == 1
    for t in (Fraction(0), Fraction(1), Fraction(-2, 3), Fraction(5)):
        shifted = [[(t if i == j else 0) - rows[i][j] for j in range(n)] for i in range(n)]
        assert p(t) == det_by_elimination(shifted)


def test_charpoly_rational_entries():
    m = RatMatrix([[Fraction(1, 2), 1], [0, Fraction(-1, 3)]])
    assert charpoly(m) == RatPolynomial.from_roots([Fraction(1, 2), Fraction(-1, 3)])
    assert charpoly(RatMatrix([])) == RatPolynomial([1])


@given(st.integers(1, 5), st.integers(1, 5), st.data())
@settings(max_examples=60, deadline=None)
def test_rank_and_kernel(n_rows, n_cols, data):
    rows = data.draw(st.lists(st.lists(entries, min_size=n_cols, max_size=n_cols), min_size=n_rows, max_size=n_rows))
    m = RatMatrix(rows)
    r, k = rank_and_kernel(m)
    assert r == np.linalg.matrix_rank(np.array(rows, dtype=float))
    assert k.n_cols == n_cols - r
    for v in kernel_basis(m):
        assert all(x == 0 for x in m.apply(v))
    assert rank(m) == r == len(echelon(m)[1])


def test_rref_is_reduced():
    rows, piv = rref([[2, 4, 2], [1, 2, 3], [3, 6, 5]])
    assert piv == [0, 2]
    assert rows == [[1, 2, 0], [0, 0, 1]]


def test_matrix_algebra():
    a = RatMatrix([[1, 2], [3, 4]])
    b = RatMatrix.identity(2)
    assert a @ b == a
    assert a.T == RatMatrix([[1, 3], [2, 4]])
    assert (a - a) == RatMatrix.zeros(2, 2)
    assert a.shifted(1) == RatMatrix([[0, 2], [3, 3]])
    assert a.apply([1, 1]) == [3, 7]
    assert a.trace() == 5
    with pytest.raises(LinalgError):
        a @ RatMatrix([[1, 2, 3]])
    with pytest.raises(LinalgError):
        RatMatrix([[1, 2], [3]])


def test_rejects_floats():
    with pytest.raises((TypeError, ValueError)):
        RatMatrix([[0.5]])


@given(square_matrices(6))
@settings(max_examples=50, deadline=None)
def test_jacobi_matches_numpy(rows):
    a = np.array(rows, dtype=float)
    s = a + a.T
    pairs = sym_eigensolve(s)
    vals = [v for v, _ in pairs]
    assert np.allclose(vals, np.linalg.eigvalsh(s), atol=1e-9)
    for lam, vec in pairs:
        assert np.linalg.norm(s @ vec - lam * vec) < 1e-8 * max(1.0, np.linalg.norm(s))


def test_jacobi_rejects_nonsymmetric():
    with pytest.raises(LinalgError):
        sym_eigensolve(RatMatrix([[1, 2], [0, 1]]))
