from __future__ import annotations

from math import comb

import numpy as np
import pytest

from isogeo.embed import GR, LG, SPIN_MIN, SPIN_PL, ChartPoint, grass_plucker, lg_plucker, polymap, spinor_minimal
from isogeo.exactlinalg import GF, QQ, Subspace
from isogeo.osculate import (
    check_well_behaved,
    full_threshold,
    grass_osc_basis,
    jet_space,
    osc_basis,
    osc_basis_lg,
    osc_basis_spinor_min,
    osc_basis_spinor_pl,
    osc_dim_formula,
    osc_filtration,
    osc_space_jets,
    scroll_example,
    well_behaved_at,
)
from isogeo.secant import tangent_space_at


def symmetric_minor_span(n: int, k: int) -> int:
    """Dimension of the span of the ``k x k`` minors of a generic symmetric ``n x n`` matrix.

    For ``k = 2`` this is the Schur module of shape ``(2, 2)``, of
    dimension ``n^2 (n^2 - 1) / 12`` by the hook content formula.
    """
    assert k == 2
    return n * n * (n * n - 1) // 12


@pytest.mark.parametrize("tag", [GR, LG, SPIN_PL, SPIN_MIN])
def test_zeroth_osculating_space_is_the_point(tag):
    f = polymap(tag, 4)
    T0 = osc_space_jets(f, 0, QQ)
    assert T0 == Subspace.coordinate(f.n_coords, [0], QQ)


def test_jet_examples():
    assert osc_space_jets(lg_plucker(3), 1).dim == 7
    assert osc_space_jets(spinor_minimal(6), 2).projective_dim == 30


def test_closed_form_basis_examples():
    assert osc_basis_lg(3, 2).projective_dim == 12
    assert osc_basis_lg(3, 3).projective_dim == 13
    assert osc_basis_lg(4, 1).projective_dim == 10
    assert osc_basis_lg(5, 2).projective_dim == 70
    assert osc_basis_spinor_pl(4, 1).projective_dim == 6
    assert osc_basis_spinor_pl(5, 2).projective_dim == 65
    assert osc_basis_spinor_pl(4, 4).projective_dim == 34
    assert osc_basis_spinor_min(6, 1).projective_dim == 15
    assert osc_basis_spinor_min(7, 2).projective_dim == 56
    assert osc_basis_spinor_min(5, 2).projective_dim == 15


def test_grassmann_basis_examples():
    assert grass_osc_basis(3, 1).projective_dim == 9
    assert grass_osc_basis(3, 3).projective_dim == 19
    assert grass_osc_basis(4, 2).projective_dim == 52
    assert osc_space_jets(grass_plucker(4), 2).projective_dim == 52


def test_formula_examples():
    assert osc_dim_formula(LG, 4, 2) == 31
    assert osc_dim_formula(SPIN_PL, 6, 3) == 325
    assert osc_dim_formula(SPIN_MIN, 8, 3) == 126
    with pytest.raises(ValueError):
        osc_dim_formula(LG, 3, -1)


@pytest.mark.parametrize("tag,ns", [(GR, range(1, 5)), (LG, range(1, 4)), (SPIN_PL, range(2, 7)),
                                    (SPIN_MIN, range(2, 10))])
def test_jets_basis_and_formula_agree(tag, ns):
    for n in ns:
        f = polymap(tag, n)
        for s in range(full_threshold(tag, n) + 2):
            jets = osc_space_jets(f, s)
            assert jets == osc_basis(tag, n, s)
            assert jets.projective_dim == osc_dim_formula(tag, n, s)


@pytest.mark.parametrize("n", [4, 5])
def test_lagrangian_second_osculating_space_is_smaller_than_the_pair_count(n):
    # 2x2 minors of a symmetric matrix satisfy linear relations once n >= 4
    f = lg_plucker(n)
    F = QQ if n == 4 else GF
    T1, T2 = osc_space_jets(f, 1, F), osc_space_jets(f, 2, F)
    assert T2.dim - T1.dim == symmetric_minor_span(n, 2)
    assert symmetric_minor_span(n, 2) < comb(n, 2) * (comb(n, 2) + 1) // 2
    assert osc_basis_lg(n, 2, F).contains(T2)
    assert osc_space_jets(f, n).projective_dim == comb(2 * n, n) - comb(2 * n, n - 2) - 1


def test_symmetric_minor_relation():
    # the three minors on rows/columns split from {1,2,3,4} are dependent for symmetric A
    rng = np.random.default_rng(0)
    for _ in range(20):
        a = rng.integers(-9, 10, size=(4, 4))
        a = a + a.T
        m = lambda r, c: a[r[0], c[0]] * a[r[1], c[1]] - a[r[0], c[1]] * a[r[1], c[0]]  # noqa: E731
        assert m((0, 1), (2, 3)) - m((0, 2), (1, 3)) + m((0, 3), (1, 2)) == 0


@pytest.mark.parametrize("tag,n", [(LG, 3), (SPIN_PL, 4), (SPIN_MIN, 6)])
def test_osculating_dimension_is_homogeneous(tag, n):
    f = polymap(tag, n)
    rng = np.random.default_rng(1)
    p = ChartPoint.random(n, f.shape, GF, rng)
    for s in range(full_threshold(tag, n) + 1):
        assert osc_space_jets(f, s, GF, p).dim == osc_space_jets(f, s, GF).dim


def test_tangent_space_at_point():
    f = lg_plucker(3)
    origin = ChartPoint.origin(3, "symmetric", GF)
    assert tangent_space_at(f, origin) == osc_space_jets(f, 1)
    rng = np.random.default_rng(2)
    p = ChartPoint.random(3, "symmetric", GF, rng)
    T = tangent_space_at(f, p)
    assert T.dim == 7 and T == osc_space_jets(f, 1, GF, p)
    q = ChartPoint.random(5, "skew", GF, rng)
    assert tangent_space_at(spinor_minimal(5), q).dim == 11


def test_filtration_is_increasing():
    spaces = osc_filtration(lg_plucker(3))
    assert all(a <= b for a, b in zip(spaces, spaces[1:]))
    assert spaces[-1].dim == 14


def test_jet_space_rejects_negative_order():
    with pytest.raises(ValueError):
        osc_space_jets(lg_plucker(2), -1)
    assert jet_space([], 1).dim == 0


@pytest.mark.parametrize("tag,n", [(LG, 3), (LG, 4), (SPIN_PL, 3), (SPIN_PL, 4), (SPIN_PL, 5)])
def test_well_behaved(tag, n):
    rows = check_well_behaved(tag, n)
    assert [r.s for r in rows] == list(range(n + 1))
    assert all(r.equal for r in rows)


def test_well_behaved_lift():
    assert well_behaved_at(LG, 3)
    assert well_behaved_at(SPIN_PL, 4)
    # the paired basis overcounts once the symmetric minors become dependent
    rows = check_well_behaved(LG, 4)
    assert [r.lift_agrees for r in rows] == [True, True, False, False, False]
    with pytest.raises(ValueError):
        check_well_behaved(SPIN_MIN, 4)


def test_scroll_example():
    assert not scroll_example(1).strict
    assert not scroll_example(2).strict
    rep = scroll_example(3)
    assert rep.strict and (rep.dim_scroll_osc, rep.dim_section) == (4, 5)
    assert scroll_example(4).strict
    with pytest.raises(ValueError):
        scroll_example(0)
