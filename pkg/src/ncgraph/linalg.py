"""Dense exact rational matrices plus two floating point eigen-routines."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .poly import RatPolynomial
from .rational import format_fraction, to_fraction


class LinalgError(ValueError):
    pass


class RatMatrix:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("rows", "n_rows", "n_cols")

    def __init__(self, rows: Iterable[Iterable], n_cols: Optional[int] = None):
        data = tuple(tuple(to_fraction(a) for a in r) for r in rows)
        widths = {len(r) for r in data}
        if len(widths) > 1:
            raise LinalgError("ragged rows")
        self.rows = data
        self.n_rows = len(data)
        self.n_cols = widths.pop() if widths else (n_cols or 0)

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "RatMatrix":
        return cls([[0] * n_cols for _ in range(n_rows)], n_cols)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], n_rows: int) -> "RatMatrix":
        return cls([[c[i] for c in cols] for i in range(n_rows)], len(cols))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.n_rows, self.n_cols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = "; ".join(" ".join(format_fraction(a) for a in r) for r in self.rows)
        return f"RatMatrix({self.n_rows}x{self.n_cols}: {body})"

    def column(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> "RatMatrix":
        return RatMatrix(zip(*self.rows), self.n_rows) if self.n_rows else RatMatrix.zeros(self.n_cols, 0)

    T = property(transpose)

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        self._same_shape(other)
        return RatMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.n_cols)

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        self._same_shape(other)
        return RatMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.n_cols)

    def __neg__(self):
        return RatMatrix([[-a for a in r] for r in self.rows], self.n_cols)

    def scale(self, c) -> "RatMatrix":
        c = to_fraction(c)
        return RatMatrix([[c * a for a in r] for r in self.rows], self.n_cols)

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.n_cols != other.n_rows:
            raise LinalgError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.rows)) if other.n_rows else [()] * other.n_cols
        return RatMatrix([[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self.rows],
                         other.n_cols)

    def apply(self, vec: Sequence) -> List[Fraction]:
        """Matrix times column vector."""
        vec = [to_fraction(v) for v in vec]
        return [sum((a * b for a, b in zip(r, vec)), Fraction(0)) for r in self.rows]

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise LinalgError(f"shape mismatch {self.shape} vs {other.shape}")

    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(self.rows[i][j] == self.rows[j][i]
                                        for i in range(self.n_rows) for j in range(i))

    def trace(self) -> Fraction:
        return sum((self.rows[i][i] for i in range(min(self.shape))), Fraction(0))

    def to_float(self) -> np.ndarray:
        return np.array([[float(a) for a in r] for r in self.rows], dtype=float).reshape(self.shape)

    def is_integer(self) -> bool:
        return all(a.denominator == 1 for r in self.rows for a in r)

    def row_sums(self) -> List[Fraction]:
        return [sum(r, Fraction(0)) for r in self.rows]

    def column_sums(self) -> List[Fraction]:
        return [sum(c, Fraction(0)) for c in zip(*self.rows)] if self.n_rows else [Fraction(0)] * self.n_cols

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RatMatrix":
        return RatMatrix([[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def shifted(self, lam) -> "RatMatrix":
        """``self - lam * I``."""
        lam = to_fraction(lam)
        return RatMatrix([[a - lam if i == j else a for j, a in enumerate(r)] for i, r in enumerate(self.rows)],
                         self.n_cols)


def _integer_scaled(m: RatMatrix) -> Tuple[np.ndarray, int]:
    q = 1
    for r in m.rows:
        for a in r:
            q = q * a.denominator // math.gcd(q, a.denominator)
    arr = np.empty(m.shape, dtype=object)
    for i, r in enumerate(m.rows):
        for j, a in enumerate(r):
            arr[i, j] = int(a * q)
    return arr, q


def charpoly(m: RatMatrix) -> RatPolynomial:
    """``det(t I - m)`` by the Faddeev-LeVerrier recursion in exact arithmetic.

    Denominators are cleared first so the recursion runs over Python ints;
    every trace division is then exact.
    """
    if not m.is_square():
        raise LinalgError("charpoly needs a square matrix")
    n = m.n_rows
    if n == 0:
        return RatPolynomial([1])
    a, q = _integer_scaled(m)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    eye = np.zeros((n, n), dtype=object)
    for i in range(n):
        eye[i, i] = 1
    mk = np.zeros((n, n), dtype=object)
    for k in range(1, n + 1):
        mk = a.dot(mk)
        mk = mk + eye * coeffs[n - k + 1]
        tr = sum(int(x) for x in a.dot(mk).diagonal())
        c, r = divmod(-tr, k)
        if r:  # pragma: no cover - impossible for integer input
            raise LinalgError("inexact trace division")
        coeffs[n - k] = c
    # charpoly of a = q*m evaluated at q*t, rescaled
    return RatPolynomial(Fraction(c, q ** (n - j)) for j, c in enumerate(coeffs))


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> List[List[int]]:
    out = []
    for r in rows:
        q = 1
        for a in r:
            q = q * a.denominator // math.gcd(q, a.denominator)
        out.append([int(a * q) for a in r])
    return out


def echelon(m: RatMatrix) -> Tuple[List[List[int]], List[int]]:
    """Fraction-free row echelon form over the integers.

    Rows are combined as ``p*row - a*pivot_row`` and divided by their
    content, so entries stay integral and small.
    """
    rows = _integer_rows(m.rows)
    n_cols = m.n_cols
    pivots: List[int] = []
    r = 0
    for col in range(n_cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r]
        for i in range(r + 1, len(rows)):
            a = rows[i][col]
            if a == 0:
                continue
            new = [p[col] * x - a * y for x, y in zip(rows[i], p)]
            g = 0
            for x in new:
                g = math.gcd(g, x)
            rows[i] = [x // g for x in new] if g > 1 else new
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(m: RatMatrix) -> int:
    return len(echelon(m)[1])


def rank_and_kernel(m: RatMatrix) -> Tuple[int, RatMatrix]:
    """Exact rank and a kernel basis (as the columns of the returned matrix)."""
    rows, pivots = echelon(m)
    n = m.n_cols
    free = [j for j in range(n) if j not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for i in range(len(pivots) - 1, -1, -1):
            col = pivots[i]
            row = rows[i]
            s = sum((Fraction(row[j]) * x[j] for j in range(col + 1, n) if row[j]), Fraction(0))
            x[col] = -s / row[col]
        basis.append(x)
    return len(pivots), RatMatrix.from_columns(basis, n)


def rref(rows: Sequence[Sequence], n_cols: Optional[int] = None) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form over the rationals; drops zero rows."""
    work = [[to_fraction(a) for a in r] for r in rows]
    if n_cols is None:
        n_cols = len(work[0]) if work else 0
    pivots: List[int] = []
    r = 0
    for col in range(n_cols):
        piv = next((i for i in range(r, len(work)) if work[i][col] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        lead = work[r][col]
        work[r] = [a / lead for a in work[r]]
        for i in range(len(work)):
            if i != r and work[i][col] != 0:
                c = work[i][col]
                work[i] = [a - c * b for a, b in zip(work[i], work[r])]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def kernel_basis(m: RatMatrix) -> List[List[Fraction]]:
    k = rank_and_kernel(m)[1]
    return [list(k.column(j)) for j in range(k.n_cols)]


# -- floating point routines -------------------------------------------------------


def sym_eigensolve(m, tol: float = 1e-12, max_sweeps: int = 100) -> List[Tuple[float, np.ndarray]]:
    """Cyclic Jacobi rotations for a symmetric matrix.

    Sweeps stop once the off-diagonal Frobenius norm drops below
    ``tol * ||m||_F``. Returns ``(eigenvalue, eigenvector)`` pairs in
    ascending order of eigenvalue.
    """
    if isinstance(m, RatMatrix):
        if not m.is_symmetric():
            raise LinalgError("matrix is not symmetric")
        a = m.to_float()
    else:
        a = np.array(m, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or not np.allclose(a, a.T, rtol=0, atol=0):
            raise LinalgError("matrix is not symmetric")
    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a) or 1.0

    def off(x):
        return float(np.linalg.norm(x - np.diag(np.diag(x))))

    for _ in range(max_sweeps):
        if off(a) < tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-30 * scale:
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 1.0 / (2.0 * theta)
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot = np.array([[c, s], [-s, c]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ rot
    else:
        raise LinalgError("Jacobi iteration did not converge")
    vals = np.diag(a).copy()
    order = np.argsort(vals, kind="stable")
    return [(float(vals[i]), v[:, i].copy()) for i in order]
