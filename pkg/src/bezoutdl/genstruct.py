"""Seeded generator of matrix polynomials with prescribed structure.

Every one of the ``r`` rank rows of the canonical core spends a budget of
exactly ``k``:

    a (share of a chain's minimal index) + deg f (finite exponents)
      + c (one infinite partial multiplicity, possibly 0) = k

A right chain of ``s`` rows is ``s x (s+1)`` with row ``i`` equal to
``f_i(z) [z^(a_i) e_i - e_(i+1)]`` and minimal index ``sum a_i``; left
chains are transposes and index 0 with no rows is a zero column (row).
Plain rows are ``1 x 1`` entries ``f``. The core is scrambled by constant
transvections, which keep the grade and every structural invariant.

RNG: seeds go through splitmix64, draws come from xorshift64*; both are
tiny and portable (see ``Rng``).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .eigenstructure import Eigenstructure, full_eigenstructure
from .exactalg import SPoly, rat
from .polymat import PolyMat, block_diag

MASK = (1 << 64) - 1
EIG_POOL = (Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(-2),
            Fraction(1, 2), Fraction(3))
ROOT_POOL = tuple(Fraction(x) for x in (1, -1, 2, -2, 3, -3)) + \
    (Fraction(1, 2), Fraction(-1, 2), Fraction(4), Fraction(-4), Fraction(5), Fraction(1, 3))


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


class Rng:
    """xorshift64* seeded through splitmix64."""

    def __init__(self, seed: int):
        self.seed = seed & MASK
        self.state = splitmix64(self.seed) or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & MASK

    def below(self, n: int) -> int:
        """Uniform in ``[0, n)`` by rejection."""
        if n <= 0:
            raise ValueError("empty range")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        return lo + self.below(hi - lo + 1)

    def choice(self, seq: Sequence):
        return seq[self.below(len(seq))]

    def shuffle(self, seq: list) -> list:
        for i in range(len(seq) - 1, 0, -1):
            j = self.below(i + 1)
            seq[i], seq[j] = seq[j], seq[i]
        return seq

    def split(self, tag: int) -> "Rng":
        return Rng(splitmix64(self.seed ^ splitmix64(tag)))


# ------------------------------------------------------------------- spec

class UnrealizableSpec(ValueError):
    pass


@dataclass
class KroneckerSpec:
    m: int
    n: int
    k: int
    r: int
    finite_eigs: dict = field(default_factory=dict)
    inf_mults: list = field(default_factory=list)
    right_indices: list = field(default_factory=list)
    left_indices: list = field(default_factory=list)
    seed: int = 0

    def __post_init__(self):
        self.finite_eigs = {rat(k): sorted(int(x) for x in v)
                            for k, v in sorted(self.finite_eigs.items(), key=lambda kv: rat(kv[0])) if v}
        self.inf_mults = sorted(int(x) for x in self.inf_mults)
        self.right_indices = sorted(int(x) for x in self.right_indices)
        self.left_indices = sorted(int(x) for x in self.left_indices)
        self.validate()

    def validate(self):
        if min(self.m, self.n) < 1 or self.k < 0:
            raise UnrealizableSpec("sizes must be positive and grade non-negative")
        if not 0 <= self.r <= min(self.m, self.n):
            raise UnrealizableSpec("rank out of range")
        if len(self.right_indices) != self.n - self.r:
            raise UnrealizableSpec("need n - r right minimal indices")
        if len(self.left_indices) != self.m - self.r:
            raise UnrealizableSpec("need m - r left minimal indices")
        if any(x <= 0 for v in self.finite_eigs.values() for x in v) or \
                any(x <= 0 for x in self.inf_mults):
            raise UnrealizableSpec("partial multiplicities must be positive")
        if any(x < 0 for x in self.right_indices + self.left_indices):
            raise UnrealizableSpec("minimal indices must be non-negative")
        if any(len(v) > self.r for v in self.finite_eigs.values()) or len(self.inf_mults) > self.r:
            raise UnrealizableSpec("more partial multiplicities than the rank allows")
        if self.index_sum() != self.k * self.r:
            raise UnrealizableSpec(f"index sum {self.index_sum()} != k*r = {self.k * self.r}")

    def index_sum(self) -> int:
        return (sum(sum(v) for v in self.finite_eigs.values()) + sum(self.inf_mults)
                + sum(self.right_indices) + sum(self.left_indices))

    def as_eigenstructure(self) -> Eigenstructure:
        return Eigenstructure(dict(self.finite_eigs), list(self.inf_mults),
                              list(self.right_indices), list(self.left_indices), self.r, self.k)

    def matches(self, E: Eigenstructure) -> bool:
        return self.as_eigenstructure().same_structure(E) and E.rank == self.r and not E.partial

    def to_json(self) -> dict:
        return {
            "m": self.m, "n": self.n, "grade": self.k, "rank": self.r,
            "finite": {str(k): v for k, v in self.finite_eigs.items()},
            "inf": self.inf_mults, "right": self.right_indices, "left": self.left_indices,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, data: dict) -> "KroneckerSpec":
        try:
            return cls(int(data["m"]), int(data["n"]), int(data["grade"]), int(data["rank"]),
                       dict(data.get("finite", {})), list(data.get("inf", [])),
                       list(data.get("right", [])), list(data.get("left", [])),
                       int(data.get("seed", 0)))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, UnrealizableSpec):
                raise
            raise UnrealizableSpec(f"malformed spec: {exc}") from None

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


# ---------------------------------------------------------------- planner

@dataclass
class _Unit:
    chain: int | None          # index into the chain list, None for plain rows
    finite: list = field(default_factory=list)   # (lam, exponent)
    inf: int = 0
    share: int = 0

    def used(self) -> int:
        return sum(e for _, e in self.finite) + self.inf


@dataclass
class Plan:
    k: int
    chains: list               # (side, index, units)
    plain: list                # units
    zero_cols: int
    zero_rows: int


def _chain_row_options(chains: list[tuple[str, int]], r: int, k: int):
    """Row counts per positive chain, smallest totals first."""
    ranges = []
    for _, eps in chains:
        lo = -(-eps // k) if eps else 0
        ranges.append(range(lo, r + 1))
    opts = [s for s in itertools.product(*ranges) if sum(s) <= r]
    opts.sort(key=lambda s: (sum(s), s))
    return opts


def plan_spec(spec: KroneckerSpec, limit: int = 200000) -> Plan:
    """Find a row layout realizing ``spec`` (exhaustive search)."""
    k, r = spec.k, spec.r
    chains = [("right", e) for e in spec.right_indices if e > 0] + \
             [("left", e) for e in spec.left_indices if e > 0]
    zero_cols = sum(1 for e in spec.right_indices if e == 0)
    zero_rows = sum(1 for e in spec.left_indices if e == 0)
    items = [(lam, e) for lam, es in spec.finite_eigs.items() for e in es]
    items.sort(key=lambda it: -it[1])
    infs = sorted(spec.inf_mults, reverse=True)
    budget = [limit]

    for rows in _chain_row_options(chains, r, k):
        units = []
        for ci, s in enumerate(rows):
            units += [_Unit(ci) for _ in range(s)]
        units += [_Unit(None) for _ in range(r - sum(rows))]
        if _assign(units, items, infs, 0, 0, chains, k, budget):
            return _finish(units, chains, k, zero_cols, zero_rows)
        if budget[0] <= 0:
            break
    raise UnrealizableSpec("no row layout realizes this spec with the chain construction")


def _feasible(units, chains, k) -> bool:
    need = [e for _, e in chains]
    room = [0] * len(chains)
    for u in units:
        left = k - u.used()
        if left < 0:
            return False
        if u.chain is not None:
            room[u.chain] += left
    return all(rm >= nd for rm, nd in zip(room, need))


def _done(units, chains, k) -> bool:
    room = [0] * len(chains)
    for u in units:
        left = k - u.used()
        if u.chain is None:
            if left != 0:
                return False
        else:
            room[u.chain] += left
    return all(rm == e for rm, (_, e) in zip(room, chains))


def _assign(units, items, infs, ii, fi, chains, k, budget) -> bool:
    budget[0] -= 1
    if budget[0] <= 0 or not _feasible(units, chains, k):
        return False
    if fi < len(infs):
        c = infs[fi]
        seen = set()
        for u in units:
            sig = (u.chain, u.inf, tuple(sorted(u.finite)))
            if u.inf or sig in seen or u.used() + c > k:
                continue
            seen.add(sig)
            u.inf = c
            if _assign(units, items, infs, ii, fi + 1, chains, k, budget):
                return True
            u.inf = 0
        return False
    if ii < len(items):
        lam, e = items[ii]
        seen = set()
        for u in units:
            sig = (u.chain, u.inf, tuple(sorted(u.finite)))
            if sig in seen or any(l == lam for l, _ in u.finite) or u.used() + e > k:
                continue
            seen.add(sig)
            u.finite.append((lam, e))
            if _assign(units, items, infs, ii + 1, fi, chains, k, budget):
                return True
            u.finite.pop()
        return False
    return _done(units, chains, k)


def _finish(units, chains, k, zero_cols, zero_rows) -> Plan:
    out_chains = []
    for ci, (side, eps) in enumerate(chains):
        mine = [u for u in units if u.chain == ci]
        for u in mine:
            u.share = k - u.used()
        out_chains.append((side, eps, mine))
    plain = [u for u in units if u.chain is None]
    return Plan(k, out_chains, plain, zero_cols, zero_rows)


# ----------------------------------------------------------------- build

def _factor(unit: _Unit) -> SPoly:
    f = SPoly.const(1)
    for lam, e in unit.finite:
        f = f * SPoly((-lam, 1)) ** e
    return f


def core_from_plan(plan: Plan) -> PolyMat:
    k = plan.k
    blocks = []
    for u in plan.plain:
        blocks.append(PolyMat.from_entries([[_factor(u).regrade(k)]]))
    for side, _, units in plan.chains:
        s = len(units)
        ents = [[SPoly.zero(k) for _ in range(s + 1)] for _ in range(s)]
        for i, u in enumerate(units):
            f = _factor(u)
            ents[i][i] = (f * SPoly([0] * u.share + [1])).regrade(k)
            ents[i][i + 1] = (-f).regrade(k)
        B = PolyMat.from_entries(ents, k, s + 1)
        blocks.append(B if side == "right" else B.transpose())
    for _ in range(plan.zero_cols):
        blocks.append(PolyMat.zero(0, 1, k))
    for _ in range(plan.zero_rows):
        blocks.append(PolyMat.zero(1, 0, k))
    return block_diag(blocks).regrade(k)


def random_unimodular_constant(size: int, rng: Rng, steps: int | None = None):
    """Product of transvections ``I + c e_i e_j^T`` with ``|c| <= 3`` and a
    random permutation; determinant is +-1."""
    M = [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]
    if size <= 1:
        if size == 1 and rng.below(2):
            M[0][0] = Fraction(-1)
        return M
    perm = rng.shuffle(list(range(size)))
    M = [M[p] for p in perm]
    for _ in range(steps if steps is not None else 2 * size):
        i, j = rng.below(size), rng.below(size - 1)
        if j >= i:
            j += 1
        c = rng.choice((-3, -2, -1, 1, 2, 3))
        M[i] = [a + c * b for a, b in zip(M[i], M[j])]
    return M


def generate(spec: KroneckerSpec, check: bool = True, scramble: bool = True) -> PolyMat:
    plan = plan_spec(spec)
    core = core_from_plan(plan)
    if core.shape != (spec.m, spec.n):
        raise UnrealizableSpec(f"core has shape {core.shape}, expected {(spec.m, spec.n)}")
    P = core
    if scramble:
        rng = Rng(spec.seed)
        U = PolyMat.constant(random_unimodular_constant(spec.m, rng.split(1)))
        V = PolyMat.constant(random_unimodular_constant(spec.n, rng.split(2)))
        P = (U @ core @ V).regrade(spec.k)
    if check:
        E = full_eigenstructure(P, list(spec.finite_eigs))
        if not spec.matches(E):
            raise AssertionError(f"generated structure {E.to_json()} != spec {spec.to_json()}")
    return P


# ---------------------------------------------------------- random specs

def random_spec(seed: int, max_m: int = 4, max_n: int = 4, ks: Sequence[int] = (2, 3, 4),
                max_cells: int | None = None) -> KroneckerSpec:
    """A random realizable spec, built row by row so a plan always exists.

    ``max_cells`` caps ``k*max(m, n)`` (the size of the DL pencil)."""
    rng = Rng(seed)
    while True:
        k = rng.choice(list(ks))
        m, n = rng.randint(1, max_m), rng.randint(1, max_n)
        if max_cells is None or k * max(m, n) <= max_cells:
            break
    lo = 0 if rng.below(10) == 0 else 1
    r = rng.randint(min(lo, min(m, n)), min(m, n))
    nright, nleft = n - r, m - r
    # how many rank rows each chain takes
    chain_rows = [0] * (nright + nleft)
    free = r
    for c in range(len(chain_rows)):
        if free and rng.below(3):
            s = rng.randint(1, min(free, 2))
            chain_rows[c] = s
            free -= s
    finite: dict = {}
    inf: list = []
    shares = [0] * len(chain_rows)
    pool = list(EIG_POOL)
    rows = [(c, None) for c, s in enumerate(chain_rows) for _ in range(s)] + [(None, None)] * free
    for chain, _ in rows:
        left = k
        if chain is not None:
            a = rng.randint(1, left) if rng.below(4) else rng.randint(0, left)
            shares[chain] += a
            left -= a
        used = set()
        while left > 0 and rng.below(3) != 0:
            lam = rng.choice(pool[:4] if rng.below(2) else pool)
            if lam in used:
                break
            e = rng.randint(1, min(left, 2))
            finite.setdefault(lam, []).append(e)
            used.add(lam)
            left -= e
        if left > 0:
            inf.append(left)
    return KroneckerSpec(m, n, k, r, finite, inf, shares[:nright], shares[nright:], seed)


# --------------------------------------------------------------- ansatz

def admissible_ansatz(P: PolyMat, k: int, want_violation: bool = False, seed: int = 0,
                      eig: Eigenstructure | None = None, repeated: bool | None = None,
                      infinite_root: bool = False):
    """Ansatz of grade ``k-1`` whose roots avoid (or hit) the spectrum of P."""
    from .dlpencil import Ansatz
    rng = Rng(seed)
    E = full_eigenstructure(P) if eig is None else eig
    eigs = set(E.finite_eigs)
    has_inf = bool(E.inf_mults)
    if repeated is None:
        repeated = rng.below(3) == 0
    if want_violation:
        if eigs:
            hit = rng.choice(sorted(eigs))
            others = [x for x in ROOT_POOL if x != hit]
            roots = [hit] + [rng.choice(others) for _ in range(k - 2)]
            return Ansatz.from_roots(roots, k, rng.choice((1, -1, 2)))
        if has_inf and k >= 2:
            roots = [rng.choice(ROOT_POOL) for _ in range(k - 2)]
            return Ansatz.from_roots(roots, k, rng.choice((1, -1, 2)))
        raise ValueError("P has no eigenvalues, so no ansatz can violate exclusion")
    allowed = [x for x in ROOT_POOL if x not in eigs]
    deg = k - 1
    if infinite_root and not has_inf and deg > 0:
        deg -= 1
    roots: list = []
    while len(roots) < deg:
        if roots and repeated and rng.below(2):
            roots.append(roots[-1])
        else:
            cand = rng.choice(allowed)
            if not repeated and cand in roots:
                continue
            roots.append(cand)
    return Ansatz.from_roots(sorted(roots), k, rng.choice((1, -1, 2)))


__all__ = [
    "Rng", "splitmix64", "KroneckerSpec", "UnrealizableSpec", "Plan", "plan_spec",
    "core_from_plan", "generate", "random_spec", "admissible_ansatz",
    "random_unimodular_constant", "EIG_POOL",
]
