"""Exact scalars and scalar polynomials with an explicit grade.

``Rat`` is :class:`fractions.Fraction`. An :class:`SPoly` stores
``grade + 1`` coefficients (lowest power first); the grade may exceed the
degree, and ``grade - degree`` is the multiplicity of infinity as a root.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence

Rat = Fraction
NEG_INF = -math.inf  # degree of the zero polynomial / zero vector


def rat(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def _trimmed(coeffs: Sequence[Fraction]) -> tuple:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


class SPoly:
    """Scalar polynomial over Q with a declared grade."""

    __slots__ = ("coeffs", "grade")

    def __init__(self, coeffs: Iterable = (), grade: int | None = None):
        cs = [rat(c) for c in coeffs]
        tr = _trimmed(cs)
        deg = len(tr) - 1
        if grade is None:
            grade = max(deg, 0)
        if grade < 0:
            raise ValueError("grade must be non-negative")
        if deg > grade:
            raise ValueError(f"degree {deg} exceeds grade {grade}")
        padded = tr + (Fraction(0),) * (grade + 1 - len(tr))
        object.__setattr__(self, "coeffs", padded)
        object.__setattr__(self, "grade", grade)

    def __setattr__(self, name, value):
        raise AttributeError("SPoly is immutable")

    # constructors
    @classmethod
    def zero(cls, grade: int = 0) -> "SPoly":
        return cls((), grade)

    @classmethod
    def const(cls, c, grade: int = 0) -> "SPoly":
        return cls((c,), grade)

    @classmethod
    def z(cls) -> "SPoly":
        return cls((0, 1))

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1, grade: int | None = None) -> "SPoly":
        p = cls.const(lead)
        for r in roots:
            p = p * cls((-rat(r), 1))
        return p if grade is None else p.regrade(grade)

    # structure
    @property
    def degree(self):
        t = _trimmed(self.coeffs)
        return len(t) - 1 if t else NEG_INF

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def lead(self) -> Fraction:
        t = _trimmed(self.coeffs)
        return t[-1] if t else Fraction(0)

    def inf_root_multiplicity(self) -> int:
        """Multiplicity of infinity as a root: ``grade - degree``."""
        if self.is_zero():
            raise ValueError("the zero polynomial has no root structure")
        return self.grade - self.degree

    def regrade(self, grade: int) -> "SPoly":
        return SPoly(self.coeffs, grade)

    def trimmed(self) -> "SPoly":
        d = self.degree
        return SPoly(self.coeffs, 0 if d == NEG_INF else d)

    def monic(self) -> "SPoly":
        if self.is_zero():
            raise ZeroDivisionError("zero polynomial has no monic form")
        return self.scale(1 / self.lead)

    def __call__(self, x) -> Fraction:
        x = rat(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # arithmetic
    def scale(self, c) -> "SPoly":
        c = rat(c)
        return SPoly([c * a for a in self.coeffs], self.grade)

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other):
        other = _as_spoly(other)
        g = max(self.grade, other.grade)
        a = self.coeffs + (Fraction(0),) * (g + 1 - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (g + 1 - len(other.coeffs))
        return SPoly([x + y for x, y in zip(a, b)], g)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_as_spoly(other))

    def __rsub__(self, other):
        return _as_spoly(other) - self

    def __mul__(self, other):
        if not isinstance(other, SPoly):
            return self.scale(other)
        out = [Fraction(0)] * (self.grade + other.grade + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
        return SPoly(out, self.grade + other.grade)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = SPoly.const(1)
        for _ in range(e):
            out = out * self
        return out

    def divrem(self, other: "SPoly") -> tuple["SPoly", "SPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        db = other.degree
        lc = other.lead
        r = list(_trimmed(self.coeffs))
        q = [Fraction(0)] * max(len(r) - db, 1)
        while len(r) - 1 >= db and r:
            shift = len(r) - 1 - db
            t = r[-1] / lc
            q[shift] = t
            for i, b in enumerate(other.coeffs[: db + 1]):
                r[shift + i] -= t * b
            r = list(_trimmed(r))
        return SPoly(q), SPoly(r)

    def __floordiv__(self, other):
        return self.divrem(other)[0]

    def __mod__(self, other):
        return self.divrem(other)[1]

    def derivative(self, order: int = 1, normalized: bool = False) -> "SPoly":
        return derivative(self, order, normalized)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SPoly.const(other, self.grade)
        if not isinstance(other, SPoly):
            return NotImplemented
        return self.grade == other.grade and self.coeffs == other.coeffs

    def equal_as_polynomial(self, other: "SPoly") -> bool:
        """Equality ignoring grade."""
        return _trimmed(self.coeffs) == _trimmed(other.coeffs)

    def __hash__(self):
        return hash((self.grade, self.coeffs))

    def __repr__(self):
        return f"SPoly({[str(c) for c in self.coeffs]}, grade={self.grade})"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "z" if i == 1 else f"z^{i}"
                coef = "" if c == 1 else "-" if c == -1 else f"{c}*"
                terms.append(coef + mono)
        return " + ".join(reversed(terms)).replace("+ -", "- ") or "0"


def _as_spoly(x) -> SPoly:
    return x if isinstance(x, SPoly) else SPoly.const(x)


def spoly_arith(a: SPoly, b: SPoly, op: str):
    """Ring operation by name: ``add``, ``sub``, ``mul`` or ``divrem``."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "divrem":
        return a.divrem(b)
    raise ValueError(f"unknown operation {op!r}")


def spoly_gcd(a: SPoly, b: SPoly) -> SPoly:
    """Monic gcd by the Euclidean algorithm."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    a, b = a.trimmed(), b.trimmed()
    while not b.is_zero():
        a, b = b, a.divrem(b)[1]
    return a.monic()


def derivative(a: SPoly, order: int = 1, normalized: bool = False) -> SPoly:
    """``order``-th derivative; divided by ``order!`` when normalized."""
    if order < 0:
        raise ValueError("derivative order must be non-negative")
    cs = a.coeffs
    out = []
    for i in range(order, len(cs)):
        f = math.perm(i, order)
        out.append(cs[i] * f)
    if normalized and order > 1:
        out = [c / factorial(order) for c in out]
    return SPoly(out, max(a.grade - order, 0))


def hermite_basis(nodes: Sequence[tuple]) -> list[SPoly]:
    """Hermite interpolation basis for ``[(mu_j, ell_j), ...]``.

    Returns one polynomial per condition, node-major and derivative-order
    minor; polynomial ``(j, a)`` has ``a``-th derivative 1 at ``mu_j`` and
    every other listed derivative value 0 (derivatives not normalized).
    """
    from .linalg import solve

    pts = [(rat(mu), int(ell)) for mu, ell in nodes]
    if len({mu for mu, _ in pts}) != len(pts):
        raise ValueError("Hermite nodes must be pairwise distinct")
    if any(ell <= 0 for _, ell in pts):
        raise ValueError("node multiplicities must be positive")
    total = sum(ell for _, ell in pts)
    if total == 0:
        return []
    # rows: conditions, cols: monomial coefficients
    rows = []
    for mu, ell in pts:
        for b in range(ell):
            rows.append([
                Fraction(math.perm(e, b)) * mu ** (e - b) if e >= b else Fraction(0)
                for e in range(total)
            ])
    ident = [[Fraction(int(i == j)) for j in range(total)] for i in range(total)]
    sol = solve(rows, ident)
    return [SPoly([sol[e][i] for e in range(total)], total - 1) for i in range(total)]


def complete_homogeneous_deriv(c: int, a: int, b: int, mu) -> Fraction:
    """Normalized mixed partial of ``h_c(x, y) = sum x^(c-h) y^h`` at ``x = y = mu``."""
    if a + b > c:
        return Fraction(0)
    return comb(c + 1, a + b + 1) * rat(mu) ** (c - a - b)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def integer_primitive(a: SPoly) -> list[int]:
    """Integer coefficient list proportional to ``a`` with content 1."""
    cs = _trimmed(a.coeffs)
    den = 1
    for c in cs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in cs]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return [x // g for x in ints] if g > 1 else ints


def rational_roots(a: SPoly) -> list[tuple[Fraction, int]]:
    """Rational roots with multiplicities, ascending; ``a`` must be nonzero."""
    if a.is_zero():
        raise ValueError("the zero polynomial vanishes everywhere")
    p = a.trimmed()
    out = []
    zero_mult = 0
    while p.degree > 0 and p.coeffs[0] == 0:
        p = SPoly(p.coeffs[1:])
        zero_mult += 1
    if zero_mult:
        out.append((Fraction(0), zero_mult))
    if p.degree <= 0:
        return out
    sq = p.divrem(spoly_gcd(p, p.derivative()))[0]
    ints = integer_primitive(sq)
    cands = set()
    for num in _divisors(ints[0]):
        for den in _divisors(ints[-1]):
            cands.add(Fraction(num, den))
            cands.add(Fraction(-num, den))
    for r in sorted(cands):
        if sq(r) == 0:
            mult = 0
            lin = SPoly((-r, 1))
            while True:
                q, rem = p.divrem(lin)
                if not rem.is_zero():
                    break
                p = q
                mult += 1
            out.append((r, mult))
    out.sort()
    return out
