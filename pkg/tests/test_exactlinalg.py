from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from isogeo.exactlinalg import (
    DEFAULT_PRIME,
    GF,
    QQ,
    SECOND_PRIME,
    DegenerateFamily,
    DimensionMismatch,
    Field,
    PolyMatrix,
    Subspace,
    annihilator,
    det,
    echelon,
    flat_limit,
    intersect,
    inverse,
    join,
    left_kernel,
    matmul,
    rank,
    rref,
    solve,
)

small_ints = st.integers(min_value=-5, max_value=5)


def int_matrices(max_rows=6, max_cols=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def sympy_rank_mod(m, p):
    M = sympy.Matrix(m).applyfunc(lambda x: x % p)
    from sympy.polys.matrices import DomainMatrix
    from sympy.polys.domains import GF as SGF

    return DomainMatrix.from_Matrix(M).convert_to(SGF(p)).rank()


def test_field_parse():
    assert Field.parse("qq") == QQ
    assert Field.parse("fp:7") == Field(7)
    assert Field.parse(None) == GF
    assert str(Field(SECOND_PRIME)) == f"fp:{SECOND_PRIME}"
    with pytest.raises(ValueError):
        Field.parse("fp:8")
    with pytest.raises(ValueError):
        Field.parse("reals")


@pytest.mark.parametrize("field", [QQ, GF])
def test_rank_examples(field):
    assert rank(np.eye(3, dtype=np.int64), field) == 3
    assert rank(np.zeros((4, 7), dtype=np.int64), field) == 0
    assert rank([[1, 2], [2, 4], [0, 1]], field) == 2


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_rank_matches_sympy(m):
    assert rank(m, QQ) == sympy.Matrix(m).rank()
    assert rank(m, GF) == sympy_rank_mod(m, DEFAULT_PRIME)


def test_rank_depends_on_characteristic():
    m = [[1, 1], [1, 4]]  # det 3
    assert rank(m, QQ) == 2
    assert rank(m, Field(3)) == 1


def test_large_entries_do_not_overflow():
    rng = np.random.default_rng(1)
    A = GF.random_elements(rng, (8, 8), bound=DEFAULT_PRIME - 1)
    # products of two residues exceed int64 unless reduced first
    assert rank(A, GF) == sympy_rank_mod(A.tolist(), DEFAULT_PRIME)
    B = matmul(A, inverse(A, GF), GF)
    assert np.array_equal(B, GF.identity(8))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_sympy(m):
    assert det(m, QQ) == sympy.Matrix(m).det()
    assert det(m, GF) == int(sympy.Matrix(m).det()) % DEFAULT_PRIME


def test_inverse_and_solve():
    m = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    inv = inverse(m, QQ)
    assert np.array_equal(matmul(m, inv, QQ), QQ.identity(3))
    oracle = sympy.Matrix(m).inv()
    assert all(Fraction(int(oracle[i, j].p), int(oracle[i, j].q)) == inv[i, j] for i in range(3) for j in range(3))
    x = solve(m, [1, 2, 3], QQ)
    assert list(matmul(m, x.reshape(3, 1), QQ).ravel()) == [1, 2, 3]
    with pytest.raises(ValueError):
        solve([[1, 1], [2, 2]], [1, 3], QQ)
    with pytest.raises(ZeroDivisionError):
        inverse([[1, 2], [2, 4]], QQ)


def test_left_kernel():
    m = [[1, 2], [2, 4], [0, 1]]
    K = left_kernel(m, QQ)
    assert K.shape == (1, 3)
    assert not np.any(matmul(K, QQ.array(m), QQ))


def test_rref_is_reduced():
    R, piv = rref([[2, 4, 1], [1, 2, 0]], QQ)
    assert piv == [0, 2]
    assert R.tolist() == [[1, 2, 0], [0, 0, 1]]


def test_echelon_examples():
    assert echelon([[2, 4]], QQ).basis.tolist() == [[1, 2]]
    z = echelon([[0, 0]], QQ)
    assert z.dim == 0 and z.ambient_dim == 2
    assert echelon([[1, 1], [1, 0]], QQ).basis.tolist() == [[1, 0], [0, 1]]


@pytest.mark.parametrize("field", [QQ, GF])
def test_join_and_intersect_examples(field):
    e = lambda *idx: Subspace.coordinate(3, idx, field)  # noqa: E731
    assert join(e(0), e(1)) == e(0, 1)
    A = Subspace.span([[1, 2, 3]], 3, field)
    assert join(A, A) == A
    plus_minus = Subspace.span([[1, 1, 0]], 3, field), Subspace.span([[1, -1, 0]], 3, field)
    assert join(*plus_minus) == e(0, 1)
    assert intersect(e(0, 1), e(1, 2)) == e(1)
    assert intersect(A, Subspace.full(3, field)) == A
    assert intersect(e(0), e(1)).dim == 0


def test_join_in_characteristic_two():
    F = Field(2)
    a = Subspace.span([[1, 1, 0]], 3, F)
    b = Subspace.span([[1, -1, 0]], 3, F)
    assert join(a, b).dim == 1


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        join(Subspace.zero(2, QQ), Subspace.zero(3, QQ))
    with pytest.raises(DimensionMismatch):
        intersect(Subspace.zero(2, QQ), Subspace.zero(2, GF))


@settings(max_examples=40, deadline=None)
@given(int_matrices(4, 6), int_matrices(4, 6))
def test_grassmann_identity(a, b):
    n = min(len(a[0]), len(b[0]))
    A = Subspace.span([r[:n] for r in a], n, QQ)
    B = Subspace.span([r[:n] for r in b], n, QQ)
    J, I = join(A, B), intersect(A, B)
    assert J.dim + I.dim == A.dim + B.dim
    assert I <= A and I <= B and A <= J and B <= J


@settings(max_examples=40, deadline=None)
@given(int_matrices(4, 6))
def test_annihilator_is_an_involution(a):
    A = Subspace.span(a, len(a[0]), QQ)
    Z = annihilator(A)
    assert Z.dim == A.ambient_dim - A.dim
    assert annihilator(Z) == A
    if A.dim and Z.dim:
        assert not np.any(matmul(A.basis, Z.basis.T, QQ))


# -- flat limits


@pytest.mark.parametrize("field", [QQ, GF])
def test_flat_limit_examples(field):
    one_row = PolyMatrix.from_rows([[[1], [0, 1]]], field)
    assert flat_limit(one_row) == Subspace.span([[1, 0]], 2, field)
    two_rows = PolyMatrix.from_rows([[[1], [0, 1], [0]], [[1], [0, 1], [0, 0, 1]]], field)
    assert flat_limit(two_rows) == Subspace.span([[1, 0, 0], [0, 0, 1]], 3, field)
    const = PolyMatrix.constant(field.array([[0, 1, 0]]), field)
    assert flat_limit(const) == Subspace.span([[0, 1, 0]], 3, field)


def _plucker_2x3(rows):
    M = sympy.Matrix(rows)
    return [M[:, [i, j]].det() for i, j in ((0, 1), (0, 2), (1, 2))]


def test_flat_limit_matches_plucker_limit():
    # oracle: Plücker coordinates of the 2-plane along t -> 0, made projective
    t = sympy.symbols("t")
    rows = [[1, t, 0], [1, t, t**2]]
    pl = _plucker_2x3(rows)
    lead = min(sympy.Poly(c, t).monoms()[-1][0] for c in pl if c != 0)
    limit = [sympy.limit(c / t**lead, t, 0) for c in pl]
    got = flat_limit(PolyMatrix.from_rows([[[1], [0, 1], [0]], [[1], [0, 1], [0, 0, 1]]], QQ))
    assert [int(x) for x in limit] == [int(x) for x in _plucker_2x3(got.basis.tolist())]
    # and sampled t = 1/k approaches it
    for k in range(10, 21):
        sample = [[sympy.sympify(x).subs(t, sympy.Rational(1, k)) for x in r] for r in rows]
        vals = _plucker_2x3(sample)
        scaled = [v / vals[1] for v in vals]
        assert scaled[0] == 0 and abs(scaled[2]) <= sympy.Rational(1, k)


def test_flat_limit_degenerate_family():
    fam = PolyMatrix.from_rows([[[0], [0]]], QQ)
    assert flat_limit(fam).dim == 0
    with pytest.raises(DegenerateFamily):
        flat_limit(fam, expected_rank=1)


def test_flat_limit_rank_is_preserved():
    rng = np.random.default_rng(5)
    coeffs = QQ.array(rng.integers(-3, 4, size=(3, 6, 3)).tolist())
    coeffs[:, :, 0] = 0  # whole family vanishes at t = 0
    fam = PolyMatrix(coeffs, QQ)
    r, _ = fam.generic_rank(rng)
    assert flat_limit(fam).dim == r


def test_limit_of_sections_lies_in_section_of_limit():
    """The limit of ``H_t ∩ H`` lies in ``H_0 ∩ H``, with ``H_t`` given by equations.

    A space cut out by equation rows ``E`` is ``annihilator(rowspace E)``,
    and the flat limit commutes with taking annihilators.
    """
    rng = np.random.default_rng(11)
    n, k = 6, 2
    for trial in range(10):
        E = rng.integers(-3, 4, size=(k, n, 3))
        E[:, : n // 2, 0] = 0  # forces extra t-divisibility on the first columns
        E[0, :, 0] = 0
        E = QQ.array(E.tolist())
        H_eqs = QQ.zeros((2, n, 3))
        H_eqs[0, 0, 0] = H_eqs[1, 1, 0] = Fraction(1)
        H = annihilator(Subspace.span(H_eqs[:, :, 0], n, QQ))
        fam_eq = PolyMatrix(E, QQ)
        section_eq = PolyMatrix.stack([fam_eq, PolyMatrix(H_eqs, QQ)])
        lim_section = annihilator(flat_limit(section_eq, seed=trial))
        lim_Ht = annihilator(flat_limit(fam_eq, seed=trial))
        assert intersect(lim_Ht, H).contains(lim_section)
