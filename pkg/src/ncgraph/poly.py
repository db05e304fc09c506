"""Exact rational polynomials and a floating point root finder."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from .rational import format_fraction, to_fraction


class RatPolynomial:
    """Polynomial with Fraction coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [to_fraction(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: Tuple[Fraction, ...] = tuple(c)

    @classmethod
    def monomial(cls, degree: int, coeff=1) -> "RatPolynomial":
        return cls([0] * degree + [coeff])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "RatPolynomial":
        p = cls([1])
        for r in roots:
            p = p * cls([-to_fraction(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __repr__(self):
        return f"RatPolynomial([{', '.join(format_fraction(c) for c in self.coeffs)}])"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if mono and abs(c) == 1:
                s = mono
            else:
                s = format_fraction(abs(c)) + mono
            terms.append(("-" if c < 0 else "+") + s)
        out = " ".join(terms)
        return out[1:] if out.startswith("+") else out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatPolynomial([other])
        if not isinstance(other, RatPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RatPolynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return RatPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return RatPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = RatPolynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - other.degree, 1)
        lead = other.leading
        for k in range(len(rem) - 1, other.degree - 1, -1):
            c = rem[k] / lead
            if c == 0:
                continue
            q[k - other.degree] = c
            for j, b in enumerate(other.coeffs):
                rem[k - other.degree + j] -= c * b
        return RatPolynomial(q), RatPolynomial(rem[: other.degree] if other.degree > 0 else [])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_complex(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + float(c)
        return acc

    def derivative(self) -> "RatPolynomial":
        return RatPolynomial(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def monic(self) -> "RatPolynomial":
        if self.is_zero():
            return self
        lead = self.leading
        return RatPolynomial(c / lead for c in self.coeffs)

    def to_strings(self) -> List[str]:
        return [format_fraction(c) for c in self.coeffs]

    def root_multiplicity(self, r) -> int:
        """Exact multiplicity of the rational root ``r`` (0 if not a root)."""
        if self.is_zero():
            raise ValueError("zero polynomial")
        r = to_fraction(r)
        lin = RatPolynomial([-r, 1])
        p, k = self, 0
        while True:
            q, rem = divmod(p, lin)
            if not rem.is_zero():
                return k
            p, k = q, k + 1


def _as_poly(x) -> RatPolynomial:
    return x if isinstance(x, RatPolynomial) else RatPolynomial([x])


def poly_gcd(a: RatPolynomial, b: RatPolynomial) -> RatPolynomial:
    """Monic gcd (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, (a % b).monic()
    return a.monic()


def squarefree_decomposition(p: RatPolynomial) -> List[Tuple[RatPolynomial, int]]:
    """Yun's algorithm: ``p = lc * prod(f_i ** i)`` with each ``f_i`` squarefree and monic."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    if p.degree == 0:
        return []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        f = poly_gcd(b, d)
        b = b // f
        c = d // f
        d = c - b.derivative()
        if f.degree > 0:
            out.append((f, i))
        i += 1
    return out


# -- root finding ---------------------------------------------------------------


@dataclass(frozen=True)
class Root:
    value: complex
    multiplicity: int


def aberth_ehrlich(coeffs: Sequence[complex], tol: float = 1e-14, max_iter: int = 1000) -> List[complex]:
    """Simultaneous root iteration for a polynomial given lowest degree first."""
    c = [complex(a) for a in coeffs]
    while c and c[-1] == 0:
        c.pop()
    n = len(c) - 1
    if n < 1:
        return []
    lead = c[-1]
    c = [a / lead for a in c]
    if n == 1:
        return [-c[0]]
    dc = [k * c[k] for k in range(1, n + 1)]
    # Fujiwara-type bound for the initial circle
    radius = 2 * max(abs(c[n - k]) ** (1.0 / k) for k in range(1, n + 1)) or 1.0
    z = [radius * 0.5 * cmath.exp(1j * (2 * math.pi * k / n + 0.4)) for k in range(n)]

    def horner(p, x):
        acc = 0j
        for a in reversed(p):
            acc = acc * x + a
        return acc

    for _ in range(max_iter):
        biggest = 0.0
        for i in range(n):
            zi = z[i]
            pv = horner(c, zi)
            if pv == 0:
                continue
            s = sum(1.0 / (zi - z[j]) for j in range(n) if j != i and zi != z[j])
            denom = horner(dc, zi) - pv * s
            if denom == 0:
                denom = 1e-300
            step = pv / denom
            z[i] = zi - step
            biggest = max(biggest, abs(step) / max(1.0, abs(z[i])))
        if biggest < tol:
            break
    return z


def poly_roots(p: RatPolynomial, tol: float = 1e-12, merge_radius: float = 1e-6) -> List[Root]:
    """Complex roots with multiplicities.

    Repeated factors are split off exactly first, so the iteration only sees
    squarefree polynomials; roots closer than ``merge_radius`` are then
    merged and their multiplicities summed.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has no finite root set")
    if p.degree < 1:
        return []
    found: List[Tuple[complex, int]] = []
    for factor, mult in squarefree_decomposition(p):
        f = factor
        # exact zero root
        if f.coeffs[0] == 0:
            found.append((0j, mult))
            f = f // RatPolynomial([0, 1])
        if f.degree < 1:
            continue
        for r in aberth_ehrlich([float(a) for a in f.coeffs], tol=min(tol, 1e-14)):
            found.append((_polish(f, r), mult))
    found.sort(key=lambda t: (t[0].real, t[0].imag))
    merged: List[List] = []
    for z, m in found:
        for slot in merged:
            if abs(slot[0] - z) < merge_radius:
                slot[0] = (slot[0] * slot[1] + z * m) / (slot[1] + m)
                slot[1] += m
                break
        else:
            merged.append([z, m])
    return [Root(_clean(z), m) for z, m in merged]


def _polish(f: RatPolynomial, z: complex, steps: int = 3) -> complex:
    df = f.derivative()
    for _ in range(steps):
        d = df.eval_complex(z)
        if d == 0:
            break
        z = z - f.eval_complex(z) / d
    return z


def _clean(z: complex, eps: float = 1e-13) -> complex:
    re = 0.0 if abs(z.real) < eps else z.real
    im = 0.0 if abs(z.imag) < eps * max(1.0, abs(z)) else z.imag
    return complex(re, im)


def roots_to_multiset(roots: Sequence[Root]) -> List[complex]:
    return [r.value for r in roots for _ in range(r.multiplicity)]


# -- cyclotomic arithmetic ------------------------------------------------------------


def cyclotomic_polynomial(n: int) -> RatPolynomial:
    """The n-th cyclotomic polynomial, by exact division of ``t^n - 1``."""
    if n < 1:
        raise ValueError("n must be positive")
    return _cyclotomic(n, {})


def _cyclotomic(n: int, cache: Dict[int, RatPolynomial]) -> RatPolynomial:
    if n in cache:
        return cache[n]
    p = RatPolynomial.monomial(n) - 1
    for d in range(1, n):
        if n % d == 0:
            p = p // _cyclotomic(d, cache)
    cache[n] = p
    return p


def root_of_unity_sum_is_zero(terms: Dict[Fraction, Fraction]) -> bool:
    """Exact test of ``sum c * exp(2 pi i r) == 0`` for rational turns ``r``."""
    terms = {Fraction(r) % 1: Fraction(c) for r, c in terms.items()}
    if not terms:
        return True
    n = 1
    for r in terms:
        n = n * r.denominator // math.gcd(n, r.denominator)
    coeffs = [Fraction(0)] * n
    for r, c in terms.items():
        coeffs[int(r * n) % n] += c
    return (RatPolynomial(coeffs) % cyclotomic_polynomial(n)).is_zero()
