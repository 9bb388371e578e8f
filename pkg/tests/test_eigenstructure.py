import warnings
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from bezoutdl.eigenstructure import (INDEX_SUM_AUDIT, Eigenstructure, IrrationalEigenvaluesPresent,
                                     det_poly, full_eigenstructure, infinite_multiplicities,
                                     is_minimal_basis, minimal_basis, minor_gcd_invariant_factors,
                                     partial_multiplicities_at, rank_profile_multiplicities,
                                     regrade_infinite_multiplicities, smith_form)
from bezoutdl.exactalg import SPoly
from bezoutdl.genstruct import generate
from bezoutdl.polymat import PolyMat, hstack, kron, normal_rank, vandermonde_vector

from strategies import col, pm, polymats, specs

P12 = pm([[[1], [0, 0, 1]]])
Z2 = pm([[[0, 0, 1], [0]], [[0], [0]]], 2)  # [[z^2, 0], [0, 0]]
D01 = pm([[[1], [0]], [[0], [0, -1, 1]]])    # diag(1, z(z-1))


def facs(P):
    return [tuple(f.coeffs) for f in smith_form(P).invariant_factors]


def test_smith_examples():
    assert facs(D01) == [(1,), (0, -1, 1)]
    assert facs(P12) == [(1,)]
    assert facs(pm([[[0, 1], [0]], [[0], [0, 1]]])) == [(0, 1), (0, 1)]
    assert smith_form(PolyMat.zero(2, 2, 1)).rank == 0


@pytest.mark.parametrize("P", [D01, P12, Z2, pm([[[1, 1], [0, 1]], [[2], [0, 0, 1]]])])
def test_smith_tracking_remultiplies(P):
    S = smith_form(P, track=True)
    assert (S.U @ P @ S.V).equal_as_polynomial(S.diagonal(P.m, P.n))
    for X in (S.U, S.V):
        d = det_poly(X)
        assert d.degree == 0


def test_partial_multiplicity_examples():
    assert partial_multiplicities_at(D01, 0) == [1]
    assert partial_multiplicities_at(Z2, 0) == [2]
    for lam in (0, 1, Fr(-3, 2)):
        assert partial_multiplicities_at(P12, lam) == []


def test_infinite_examples():
    assert infinite_multiplicities(P12) == []
    assert infinite_multiplicities(pm([[[1], [0, 1]]], 2)) == [1]
    assert infinite_multiplicities(pm([[[0, 1]]], 1)) == []


def test_regrade_law_matches_direct_computation():
    P = pm([[[0, 1], [0]], [[0], [1, 1]]], 1)  # diag(z, z+1), invertible leading coefficient
    assert infinite_multiplicities(P) == []
    Q = pm([[[1], [0]], [[0], [0, 1]]], 1)     # diag(1, z): one infinite eigenvalue
    assert infinite_multiplicities(Q) == [1]
    for shift in (1, 2):
        assert infinite_multiplicities(P.regrade(1 + shift)) == \
            regrade_infinite_multiplicities([], 2, shift) == [shift, shift]
        assert infinite_multiplicities(Q.regrade(1 + shift)) == \
            regrade_infinite_multiplicities([1], 2, shift) == [shift, 1 + shift]


def test_minimal_basis_examples():
    M = minimal_basis(P12)
    assert M.indices == (2,)
    b = M.basis
    assert (P12 @ b).is_zero()
    # [z^2; -1] up to a scalar
    assert b.entry(0, 0).coeffs[2] == -b.entry(1, 0).coeffs[0]
    M2 = minimal_basis(Z2)
    assert M2.indices == (0,) and M2.basis.equal_as_polynomial(col([0], [1]))
    assert minimal_basis(D01).p == 0


def test_forney_examples():
    assert is_minimal_basis(col([0, 0, 1], [-1]))
    bad = is_minimal_basis(col([0, 1], [0]))
    assert not bad and not bad.full_rank_everywhere
    C = PolyMat.constant(((1,), (-1,), (1,), (-1,)))
    G = hstack([C, kron(vandermonde_vector(2), col([0, 0, 1], [-1]))])
    assert not is_minimal_basis(G)


def test_full_eigenstructure_examples():
    E = full_eigenstructure(Z2)
    assert (E.finite_eigs, E.inf_mults, E.right_minimal_indices, E.left_minimal_indices) == \
        ({Fr(0): [2]}, [], [0], [0])
    assert E.index_sum() == 2 * 1
    E = full_eigenstructure(P12)
    assert (E.finite_eigs, E.inf_mults, E.right_minimal_indices, E.left_minimal_indices) == \
        ({}, [], [2], [])
    E = full_eigenstructure(pm([[[-1, 1], [0]], [[0], [-1, 1]]]))
    assert E.finite_eigs == {Fr(1): [1, 1]} and not E.right_minimal_indices


def test_irrational_spectrum_warns():
    P = pm([[[-2, 0, 1]]])
    with pytest.warns(IrrationalEigenvaluesPresent):
        E = full_eigenstructure(P)
    assert E.partial and E.to_json()["warning"]
    assert E.index_sum() == 2


def test_json_round_trip():
    E = full_eigenstructure(Z2)
    back = Eigenstructure.from_json(E.to_json())
    assert back.same_structure(E) and back.rank == E.rank


# properties

@settings(max_examples=25)
@given(polymats(max_m=3, max_n=3, max_grade=2, density=0.6))
def test_smith_matches_minor_gcd_oracle(P):
    got = smith_form(P).invariant_factors
    want = minor_gcd_invariant_factors(P)
    assert [f.trimmed() for f in got] == [f.trimmed() for f in want]
    for a, b in zip(got, got[1:]):
        assert b.divrem(a)[1].is_zero()


@settings(max_examples=25)
@given(polymats(max_m=3, max_n=3, max_grade=2), st.sampled_from([0, 1, -1, 2]))
def test_rank_profile_oracle(P, lam):
    assert partial_multiplicities_at(P, lam) == rank_profile_multiplicities(P, lam)


@settings(max_examples=25)
@given(polymats(max_m=3, max_n=4, max_grade=2))
def test_minimal_basis_is_forney_and_kills_P(P):
    M = minimal_basis(P)
    assert M.p == P.n - normal_rank(P)
    if M.p:
        assert (P @ M.basis).is_zero()
        assert is_minimal_basis(M.basis)


@settings(max_examples=20)
@given(polymats(max_m=3, max_n=4, max_grade=2), st.randoms())
def test_minimal_indices_invariant_under_column_permutation(P, rnd):
    perm = list(range(P.n))
    rnd.shuffle(perm)
    a = minimal_basis(P).indices
    b = minimal_basis(P.select_columns(perm)).indices
    assert a == b == minimal_basis(P).indices


@settings(max_examples=25)
@given(polymats(max_m=3, max_n=3, max_grade=2))
def test_index_sum_always_holds(P):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IrrationalEigenvaluesPresent)
        E = full_eigenstructure(P)
    assert E.index_sum() == E.grade * E.rank
    assert len(E.right_minimal_indices) == P.n - E.rank
    assert len(E.left_minimal_indices) == P.m - E.rank


@settings(max_examples=20)
@given(specs())
def test_generated_structure_recovered(spec):
    E = full_eigenstructure(generate(spec), list(spec.finite_eigs))
    assert spec.matches(E)


def test_audit_has_no_failures():
    full_eigenstructure(Z2)
    assert INDEX_SUM_AUDIT["failed"] == 0
    assert INDEX_SUM_AUDIT["checked"] > 0


def test_det_poly_of_identity_scaled():
    I = PolyMat.identity(2).spoly_scale(SPoly((1, 1)))
    assert det_poly(I).equal_as_polynomial(SPoly((1, 2, 1)))
