"""Mobius transformations of graded matrix polynomials.

``r(z) = (a z + b) / (c z + d)`` acts by ``M_{g,r}(P) = (cz+d)^g P(r(z))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .dlpencil import Ansatz, build_dl, exclusion_holds
from .eigenstructure import Eigenstructure
from .exactalg import NEG_INF, SPoly, rat
from .polymat import PolyMat, kron, probe_points


@dataclass(frozen=True)
class MobiusMap:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, rat(getattr(self, name)))
        if self.det == 0:
            raise ValueError("Mobius map needs ad - bc != 0")

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    @property
    def num(self) -> SPoly:
        return SPoly((self.b, self.a), 1)

    @property
    def den(self) -> SPoly:
        return SPoly((self.d, self.c), 1)

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def reciprocal(cls) -> "MobiusMap":
        return cls(0, 1, 1, 0)

    @classmethod
    def shift(cls, s) -> "MobiusMap":
        return cls(1, s, 0, 1)

    def inverse(self) -> "MobiusMap":
        """Adjugate map; composing with it scales by ``det``."""
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """``self o other``, i.e. ``z -> self(other(z))``."""
        return MobiusMap(
            self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d,
        )

    def preimage(self, lam):
        """``mu`` with ``r(mu) = lam``; ``None`` encodes infinity."""
        if lam is None:
            return None if self.c == 0 else -self.d / self.c
        lam = rat(lam)
        den = lam * self.c - self.a
        if den == 0:
            return None
        return (self.b - lam * self.d) / den

    def image(self, mu):
        if mu is None:
            return None if self.c == 0 else self.a / self.c
        den = self.c * mu + self.d
        if den == 0:
            return None
        return (self.a * mu + self.b) / den

    def to_json(self) -> dict:
        return {k: str(getattr(self, k)) for k in "abcd"}


def _powers(p: SPoly, g: int) -> list[SPoly]:
    out = [SPoly.const(1)]
    for _ in range(g):
        out.append(out[-1] * p)
    return out


def mobius_spoly(v: SPoly, g: int, r: MobiusMap) -> SPoly:
    if v.degree != NEG_INF and g < v.degree:
        raise ValueError(f"grade {g} below degree {v.degree}")
    npow, dpow = _powers(r.num, g), _powers(r.den, g)
    acc = SPoly.zero(g)
    for i in range(min(g, v.grade) + 1):
        if v.coeffs[i]:
            acc = acc + (npow[i] * dpow[g - i]).scale(v.coeffs[i])
    return acc.regrade(g)


def mobius_transform(P: PolyMat, g: int, r: MobiusMap) -> PolyMat:
    d = P.degree
    if d != NEG_INF and g < d:
        raise ValueError(f"grade {g} below degree {d}")
    npow, dpow = _powers(r.num, g), _powers(r.den, g)
    acc = PolyMat.zero(P.m, P.n, g)
    for i in range(min(g, P.grade) + 1):
        if la.is_zero(P.coeffs[i]):
            continue
        acc = acc + PolyMat.constant(P.coeffs[i], ncols=P.n).spoly_scale(npow[i] * dpow[g - i])
    return acc.regrade(g)


def change_basis_B(r: MobiusMap, k: int) -> la.Matrix:
    """``B V(z) = [n^(k-1), n^(k-2) d, ..., d^(k-1)]^T``."""
    npow, dpow = _powers(r.num, k - 1), _powers(r.den, k - 1)
    rows = []
    for i in range(k):
        p = npow[k - 1 - i] * dpow[i]
        rows.append(tuple(p.coeffs[k - 1 - j] if k - 1 - j < len(p.coeffs) else Fraction(0)
                          for j in range(k)))
    return tuple(rows)


@dataclass(frozen=True)
class DiagramResult:
    ok: bool
    block: tuple | None = None   # first differing block (i, j)
    lhs: PolyMat | None = None
    rhs: PolyMat | None = None

    def __bool__(self):
        return self.ok


def commuting_diagram_check(P: PolyMat, v: Ansatz, r: MobiusMap) -> DiagramResult:
    """``(B^T x I_m) M_{1,r}(L) (B x I_n) == DL(M_{k,r} P, M_{k-1,r} v)``."""
    k, m, n = P.grade, P.m, P.n
    L = build_dl(P, v).L
    B = PolyMat.constant(change_basis_B(r, k))
    lhs = kron(B.transpose(), PolyMat.identity(m)) @ mobius_transform(L, 1, r) @ \
        kron(B, PolyMat.identity(n))
    Q = mobius_transform(P, k, r)
    u = mobius_spoly(v.v, k - 1, r)
    rhs = build_dl(Q, Ansatz.from_poly(u, k)).L
    lhs = lhs.regrade(1) if lhs.degree != NEG_INF and lhs.degree <= 1 else lhs
    if lhs.equal_as_polynomial(rhs):
        return DiagramResult(True, None, lhs, rhs)
    for bi in range(k):
        for bj in range(k):
            if not lhs.block(bi, bj, m, n).equal_as_polynomial(rhs.block(bi, bj, m, n)):
                return DiagramResult(False, (bi, bj), lhs, rhs)
    return DiagramResult(False, None, lhs, rhs)


def transport_eigenstructure(E: Eigenstructure, r: MobiusMap) -> Eigenstructure:
    """Structure of ``M_{g,r}(P)`` from that of ``P``: eigenvalue ``lam`` of
    ``P`` becomes ``mu`` with ``r(mu) = lam``; indices are unchanged."""
    finite: dict = {}
    inf: list = []
    items = [(lam, mults) for lam, mults in E.finite_eigs.items()]
    if E.inf_mults:
        items.append((None, E.inf_mults))
    for lam, mults in items:
        mu = r.preimage(lam)
        if mu is None:
            inf = sorted(mults)
        else:
            finite[mu] = sorted(mults)
    return Eigenstructure(
        dict(sorted(finite.items())), inf, list(E.right_minimal_indices),
        list(E.left_minimal_indices), E.rank, E.grade, E.unresolved_degree,
    )


@dataclass(frozen=True)
class InfinityRemoval:
    Q: PolyMat
    u: Ansatz
    r: MobiusMap
    mu_star: Fraction


def infinity_removal_map(mu_star) -> MobiusMap:
    """``r(z) = mu* + 1/z``: infinity <-> 0 and mu* <-> infinity."""
    return MobiusMap(rat(mu_star), 1, 1, 0)


def remove_infinity(P: PolyMat, v: Ansatz, avoid: Sequence = (), tries: int = 64) -> InfinityRemoval:
    """Pick ``mu*`` from 0, 1, -1, 2, ... that is neither an eigenvalue of P
    nor a root of v, then move infinity to a finite point on both sides."""
    from .eigenstructure import smith_form
    k = P.grade
    facs = smith_form(P).invariant_factors
    last = facs[-1] if facs else SPoly.const(1)
    banned = {rat(x) for x in avoid}
    for mu in probe_points(tries):
        if mu in banned:
            continue
        if (not last.is_zero() and last(mu) == 0) or v.v(mu) == 0:
            continue
        r = infinity_removal_map(mu)
        Q = mobius_transform(P, k, r)
        u = Ansatz.from_poly(mobius_spoly(v.v, k - 1, r), k)
        return InfinityRemoval(Q, u, r, mu)
    raise RuntimeError("no admissible mu* among the probe points")


__all__ = [
    "MobiusMap", "mobius_transform", "mobius_spoly", "change_basis_B",
    "commuting_diagram_check", "DiagramResult", "transport_eigenstructure",
    "InfinityRemoval", "infinity_removal_map", "remove_infinity", "exclusion_holds",
]
