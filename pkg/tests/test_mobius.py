from fractions import Fraction as Fr

import pytest
from hypothesis import assume, given, settings, strategies as st

from bezoutdl import linalg as la
from bezoutdl.dlpencil import Ansatz
from bezoutdl.eigenstructure import full_eigenstructure
from bezoutdl.exactalg import SPoly
from bezoutdl.genstruct import generate
from bezoutdl.mobius import (MobiusMap, change_basis_B, commuting_diagram_check,
                             infinity_removal_map, mobius_spoly, mobius_transform,
                             remove_infinity, transport_eigenstructure)
from bezoutdl.polymat import eval_at, vandermonde_vector

from strategies import pm, polymats, specs, v_of

P12 = pm([[[1], [0, 0, 1]]])
RECIP = MobiusMap.reciprocal()


def test_reciprocal_reverses_coefficients():
    assert mobius_transform(P12, 2, RECIP) == pm([[[0, 0, 1], [1]]], 2)


def test_identity_is_noop():
    assert mobius_transform(P12, 2, MobiusMap.identity()) == P12


def test_shift_moves_root():
    got = mobius_spoly(SPoly((-1, 1)), 1, MobiusMap.shift(1))
    assert got.equal_as_polynomial(SPoly((0, 1)))


def test_singular_map_rejected():
    with pytest.raises(ValueError):
        MobiusMap(1, 2, 2, 4)


def test_grade_below_degree_rejected():
    with pytest.raises(ValueError):
        mobius_transform(P12, 1, RECIP)


def test_B_examples():
    assert change_basis_B(MobiusMap.identity(), 3) == la.identity(3)
    assert change_basis_B(RECIP, 2) == ((0, 1), (1, 0))
    assert change_basis_B(MobiusMap.shift(1), 3) == ((1, 2, 1), (0, 1, 1), (0, 0, 1))


def test_diagram_worked_pair():
    res = commuting_diagram_check(P12, v_of(-1, 1), RECIP)
    assert res and res.block is None


def test_transport_infinite_to_zero():
    P = pm([[[1], [0]], [[0], [0]]], 2)  # constant rank-1 matrix at grade 2: infinite eigenvalue of order 2
    E = full_eigenstructure(P)
    assert E.inf_mults == [2]
    T = transport_eigenstructure(E, RECIP)
    assert T.finite_eigs == {Fr(0): [2]} and T.inf_mults == []
    assert full_eigenstructure(mobius_transform(P, 2, RECIP)).same_structure(T)


def test_infinity_removal_map_swaps_points():
    r = infinity_removal_map(3)
    assert r.image(None) == 3 and r.image(0) is None and r.preimage(None) == 0


def test_remove_infinity_clears_infinite_part():
    P = pm([[[1], [0, 1]]], 2)
    out = remove_infinity(P, v_of(-1, 1, k=2))
    assert full_eigenstructure(out.Q).inf_mults == []
    assert out.u.inf_root_multiplicity == 0


# properties

maps = st.tuples(*[st.integers(-3, 3)] * 4).filter(lambda t: t[0] * t[3] - t[1] * t[2] != 0) \
    .map(lambda t: MobiusMap(*t))


@given(polymats(max_grade=3), maps, st.integers(0, 1))
def test_round_trip_scales_by_det_power(P, r, extra):
    g = P.grade + extra
    back = mobius_transform(mobius_transform(P, g, r), g, r.inverse())
    assert back == P.regrade(g).scale(r.det ** g)


@given(st.integers(1, 6), maps, st.sampled_from([Fr(0), Fr(2), Fr(-1, 3)]))
def test_B_changes_vandermonde_basis(k, r, z):
    lhs = la.matmul(change_basis_B(r, k), eval_at(vandermonde_vector(k), z), k, 1)
    n, d = r.num(z), r.den(z)
    assert lhs == tuple((n ** (k - 1 - i) * d ** i,) for i in range(k))


@settings(max_examples=30)
@given(st.lists(st.integers(-3, 3), min_size=2, max_size=4).filter(any), st.data(), maps)
def test_diagram_commutes(omega, data, r):
    k = len(omega)
    P = data.draw(polymats(max_m=2, max_n=2, min_grade=k, max_grade=k))
    assert commuting_diagram_check(P, Ansatz.from_omega(omega), r)


@settings(max_examples=20)
@given(specs(max_m=2, max_n=3, ks=(2, 3)), maps)
def test_transport_matches_recomputation(s, r):
    P = generate(s)
    E = s.as_eigenstructure()
    T = transport_eigenstructure(E, r)
    Q = mobius_transform(P, s.k, r)
    got = full_eigenstructure(Q, list(T.finite_eigs))
    assume(not got.partial)
    assert got.same_structure(T)
