from fractions import Fraction as Fr

import pytest
from hypothesis import assume, given, settings, strategies as st

from bezoutdl import linalg as la
from bezoutdl.dlpencil import (Ansatz, ExclusionViolation, arrowhead_pencil,
                               block_evaluation, build_dl, confluent_vandermonde_W,
                               exclusion_holds, reconstruct_from_blocks, structured_minimal_basis)
from bezoutdl.eigenstructure import full_eigenstructure, minimal_basis
from bezoutdl.exactalg import SPoly
from bezoutdl.genstruct import admissible_ansatz, generate
from bezoutdl.polymat import PolyMat, block_to_bivariate, eval_at, vandermonde_vector
from bezoutdl.verify import express_columns, first_free_point

from strategies import col, pm, polymats, specs, v_of

P12 = pm([[[1], [0, 0, 1]]])
V1 = v_of(-1, 1)  # z - 1


def test_worked_pencil():
    L = build_dl(P12, V1).L
    want = pm([[[0], [1, 1], [1], [0, -1]], [[1], [0, -1], [-1, -1], [0]]], 1)
    assert L == want


def test_zero_ansatz_rejected():
    with pytest.raises(ValueError):
        Ansatz.from_omega([0, 0])


def test_grade_mismatch_rejected():
    with pytest.raises(ValueError):
        build_dl(P12, v_of(1, 0, 1))
    with pytest.raises(ValueError):
        build_dl(pm([[[1, 1]]]), Ansatz.from_omega([1]))


def test_transpose_law_example():
    assert build_dl(P12, V1).L.transpose() == build_dl(P12.transpose(), V1).L


def test_W_examples():
    assert confluent_vandermonde_W(SPoly((0, -1, 1)), 2) == ((0, 1), (1, 1))
    assert confluent_vandermonde_W(SPoly((0, 0, 1)), 2) == ((0, 1), (1, 0))


def test_block_evaluation_worked():
    LP = build_dl(P12, V1)
    be = block_evaluation(LP, P12, 0)
    assert be.W == ((0, 1), (1, 1))
    assert be.Q == (((-1, 0),), ((1, 1),))
    assert be.c == (-1, 1)
    assert reconstruct_from_blocks(be, 1, 2) == eval_at(LP.L, 0)


def test_block_evaluation_rejects_root_as_mu0():
    with pytest.raises(ValueError):
        block_evaluation(build_dl(P12, V1), P12, 1)


def test_structured_worked():
    LP = build_dl(P12, V1)
    M = minimal_basis(P12)
    # fix the scale so the hand computation applies verbatim
    s = M.basis.entry(0, 0).coeffs[2]
    M = type(M)(M.basis.scale(1 / s), M.indices)
    sb = structured_minimal_basis(LP, P12, M)
    assert sb.C == ((1,), (-1,), (1,), (-1,))
    assert [h.trimmed().coeffs for h in sb.hermite] == [(1,)]
    assert sb.Ez.equal_as_polynomial(col([-1, 0, 0, 1], [1, -1], [-1, 0, 1], [0]))
    Ev = sb.F.select_columns([1])
    assert Ev.equal_as_polynomial(col([1, 1, 1], [-1], [1, 1], [0]))
    assert sb.F.column_degrees() == [0, 2]


def test_structured_empty_for_full_column_rank():
    P = pm([[[0, 1]], [[1]]], 2)  # [z; 1] has full column rank
    LP = build_dl(P, V1)
    sb = structured_minimal_basis(LP, P, minimal_basis(P))
    assert sb.p == 0 and sb.F.n == 0


def test_structured_requires_exclusion():
    P = pm([[[0, 0, 1], [0]], [[0], [0]]], 2)
    v = v_of(0, 1)  # v = z hits the eigenvalue 0
    with pytest.raises(ExclusionViolation):
        structured_minimal_basis(build_dl(P, v), P, minimal_basis(P))


def _arrow_expected(P, mu0=0):
    P0, P1, Pm = (eval_at(P, x) for x in (0, 1, -1))
    dP0 = eval_at(P.derivative(), 0)
    m, n = P.m, P.n
    Z = la.zeros(m, n)
    c0 = [[la.scale(P0, -1), Z, Z], [Z, la.scale(P1, 2), Z], [Z, Z, la.scale(Pm, 2)]]
    c1 = [[la.scale(dP0, -1), la.scale(P1, -1), Pm], [la.scale(P1, -1), la.scale(P1, -2), Z],
          [Pm, Z, la.scale(Pm, 2)]]
    rows = lambda blocks: tuple(r for br in blocks for r in la.hstack(br, m))
    return PolyMat(3 * m, 3 * n, 1, [rows(c0), rows(c1)])


def test_arrowhead_k3_displayed_form():
    P = pm([[[1, 2, 0, 1], [0, 1]], [[3], [-1, 0, 2, 1]]], 3)
    A = arrowhead_pencil(P, [1, -1], 0)
    assert A == _arrow_expected(P)


def test_arrowhead_k2():
    P = pm([[[1, 0, 1], [2, 1]]], 2)
    A = arrowhead_pencil(P, [3], 0)
    assert A.shape == (2, 4)
    # one off-diagonal pair in the z-coefficient, none in the constant part;
    # the border is v(0) P(3) / 3 = -P(3) for v = z - 3
    const = eval_at(A, 0)
    assert la.submatrix(const, [0], [2, 3]) == ((0, 0),)
    border = la.scale(eval_at(P, 3), -1)
    assert la.submatrix(A.coeffs[1], [0], [2, 3]) == border
    assert la.submatrix(A.coeffs[1], [1], [0, 1]) == border


def test_arrowhead_rejects_collisions():
    P = pm([[[1, 0, 0, 1]]], 3)
    with pytest.raises(ValueError):
        arrowhead_pencil(P, [1, 1], 0)
    with pytest.raises(ValueError):
        arrowhead_pencil(P, [1, 2], 2)


# properties

ansatz_omegas = st.lists(st.integers(-3, 3), min_size=2, max_size=4).filter(any)


@st.composite
def pairs(draw, max_m=2, max_n=2):
    omega = draw(ansatz_omegas)
    k = len(omega)
    P = draw(polymats(max_m=max_m, max_n=max_n, min_grade=k, max_grade=k))
    return P, Ansatz.from_omega(omega)


def _bezoutian_value(P, v, x, y, z):
    Px, Py = eval_at(P, x), eval_at(P, y)
    num = la.sub(la.scale(Py, (x - z) * v.v(x)), la.scale(Px, (y - z) * v.v(y)))
    return la.scale(num, 1 / (x - y))


@settings(max_examples=30)
@given(pairs(), st.fractions(-3, 3, max_denominator=3), st.fractions(-3, 3, max_denominator=3),
       st.fractions(-3, 3, max_denominator=3))
def test_pencil_matches_bezoutian_formula(pv, x, y, z):
    P, v = pv
    assume(x != y)
    L = build_dl(P, v).L
    F = block_to_bivariate(eval_at(L, z), v.k, L.n)
    assert F.evaluate(x, y) == _bezoutian_value(P, v, x, y, z)


@settings(max_examples=30)
@given(pairs(), st.sampled_from([Fr(0), Fr(1), Fr(-2), Fr(1, 2)]))
def test_contractions_at_probe_points(pv, z):
    P, v = pv
    L = build_dl(P, v).L
    k = v.k
    Vz = eval_at(vandermonde_vector(k), z)
    VI_m = la.kron(la.transpose(Vz), la.identity(P.m), P.m)
    VI_n = la.kron(Vz, la.identity(P.n), P.n)
    Lz = eval_at(L, z)
    om = (tuple(v.omega),)
    assert la.matmul(VI_m, Lz) == la.kron(om, eval_at(P, z), P.n)
    assert la.matmul(Lz, VI_n) == la.kron(la.transpose(om), eval_at(P, z), P.n)


@settings(max_examples=30)
@given(pairs())
def test_bezoutian_symmetry_and_transpose(pv):
    P, v = pv
    L = build_dl(P, v).L
    for c in L.coeffs:
        F = block_to_bivariate(c, v.k, L.n)
        assert F.swapped() == F
    assert L.transpose() == build_dl(P.transpose(), v).L


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(1, 3)), min_size=1, max_size=3,
                unique_by=lambda t: t[0]))
def test_W_invertible(nodes):
    k = sum(e for _, e in nodes)
    assert la.det(confluent_vandermonde_W(nodes, k)) != 0


@st.composite
def rooted_pairs(draw):
    s = draw(specs(max_m=2, max_n=3, ks=(2, 3, 4)))
    P = generate(s)
    E = s.as_eigenstructure()
    seed = draw(st.integers(0, 10 ** 6))
    v = admissible_ansatz(P, s.k, False, seed, E, repeated=draw(st.booleans()))
    return P, v, E


@settings(max_examples=25)
@given(rooted_pairs(), st.sampled_from([Fr(5), Fr(-5, 2), Fr(7, 3)]))
def test_block_evaluation_properties(pve, mu0):
    P, v, _ = pve
    assume(v.inf_root_multiplicity == 0 and all(mu != mu0 for mu, _ in v.finite_roots()))
    LP = build_dl(P, v)
    be = block_evaluation(LP, P, mu0)  # asserts antitriangular shape and c*P(mu) blocks
    assert all(c != 0 for c in be.c)
    assert reconstruct_from_blocks(be, P.m, P.n) == eval_at(LP.L, mu0)
    bound = sum(ell * la.rank(eval_at(P, mu), P.n) for mu, ell in be.nodes)
    assert la.rank(eval_at(LP.L, mu0), LP.L.n) >= bound


@settings(max_examples=25)
@given(rooted_pairs())
def test_structured_basis_spans_kernel(pve):
    P, v, E = pve
    assume(v.inf_root_multiplicity == 0 and not E.inf_mults)
    LP = build_dl(P, v)
    M = minimal_basis(P)
    sb = structured_minimal_basis(LP, P, M)
    assert sb.F.column_degrees() == [0] * ((v.k - 1) * M.p) + list(M.basis.column_degrees())
    if sb.p:
        for h, Ei in ((v.v, sb.Ez),):
            for i in range(Ei.m):
                for j in range(Ei.n):
                    assert Ei.entry(i, j).divrem(h)[1].is_zero()
        N = minimal_basis(LP.L)
        assert express_columns(sb.F, N.basis) and express_columns(N.basis, sb.F)


@settings(max_examples=15)
@given(rooted_pairs())
def test_arrowhead_same_structure_as_pencil(pve):
    P, v, E = pve
    roots = [mu for mu, e in v.finite_roots()]
    assume(len(roots) == v.k - 1 and len(set(roots)) == len(roots))
    A = arrowhead_pencil(P, roots, first_free_point(set(roots)))
    L = build_dl(P, Ansatz.from_poly(SPoly.from_roots(roots), v.k)).L
    cands = list(E.finite_eigs)
    assert full_eigenstructure(A, cands).same_structure(full_eigenstructure(L, cands))


def test_exclusion_detects_infinite_collision():
    P = pm([[[1], [0, 1]]], 2)  # [1, z] at grade 2 has an infinite eigenvalue
    assert not exclusion_holds(P, v_of(1, k=2))  # constant v: root at infinity
    assert exclusion_holds(P, v_of(-1, 1))

