"""Osculating spaces: jets of the chart maps, closed-form bases and dimension formulas.

Jets at a point are read off as monomial coefficients of the recentred
chart map, which is exact and factorial-free.  At the chart origin every
coordinate is homogeneous of degree equal to its grade, so the jet space
of order ``s`` always lies inside the coordinate subspace of grades
``<= s``.  An F_p rank equal to the size of that coordinate subspace is
therefore also the rank over QQ.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence

import numpy as np

from .combinat import lambda_sets, minor_support, perm_sign
from .embed import (
    GR,
    LG,
    SPIN_MIN,
    SPIN_PL,
    ChartPoint,
    PolyMap,
    grass_plucker,
    lg_plucker,
    polymap,
    spinor_minimal,
    spinor_plucker,
    symbolic_matrix,
    symbolic_minor,
)
from .exactlinalg import GF, QQ, Field, Subspace, annihilator, intersect
from .multipoly import MultiPoly


@dataclass(frozen=True, eq=False)
class OsculatingSpace:
    tag: str
    n: int
    s: int
    base: ChartPoint | None
    space: Subspace

    @property
    def dim(self) -> int:
        return self.space.projective_dim


def jet_space(coords: Sequence[MultiPoly], s: int, field: Field = GF, center: Sequence | None = None) -> Subspace:
    """Span of the order-``<= s`` Taylor coefficient vectors of ``coords``.

    With ``center`` the maps are recentred there first.
    """
    ncoords = len(coords)
    rows: dict[tuple, dict[int, object]] = {}
    for c, f in enumerate(coords):
        g = f if center is None else f.shift(center, s, field.p)
        for e, v in g.terms.items():
            if sum(e) <= s:
                rows.setdefault(e, {})[c] = v
    if not rows:
        return Subspace.zero(ncoords, field)
    M = field.zeros((len(rows), ncoords))
    for r, e in enumerate(sorted(rows)):
        for c, v in rows[e].items():
            M[r, c] = field.scalar(v)
    return Subspace.span(M, ncoords, field)


def osc_space_jets(f: PolyMap, s: int, field: Field = GF, point: ChartPoint | None = None) -> Subspace:
    """Affine cone over ``T^s`` of ``f`` at the origin (or at ``point``)."""
    if s < 0:
        raise ValueError("s must be non-negative")
    center = None if point is None else point.vars()
    if point is not None and point.field != field:
        raise ValueError("point and field disagree")
    return jet_space(f.coords, s, field, center)


def osc_filtration(f: PolyMap, field: Field = GF, smax: int | None = None) -> list[Subspace]:
    top = max(f.grades) if smax is None else smax
    return [osc_space_jets(f, s, field) for s in range(top + 1)]


def _graded(f: PolyMap, s: int, field: Field) -> Subspace:
    return Subspace.coordinate(f.n_coords, [i for i, g in enumerate(f.grades) if g <= s], field)


def osc_basis_lg(n: int, s: int, field: Field = GF) -> Subspace:
    """Pair coordinates at distance ``<= s``."""
    return _graded(lg_plucker(n), s, field)


def osc_basis_spinor_pl(n: int, s: int, field: Field = GF) -> Subspace:
    """Surviving pair and singleton coordinates at distance ``<= s``."""
    return _graded(spinor_plucker(n), s, field)


def osc_basis_spinor_min(n: int, s: int, field: Field = GF) -> Subspace:
    """Pfaffian coordinates of subsets of size ``<= 2s``."""
    return _graded(spinor_minimal(n), s, field)


def grass_osc_basis(n: int, s: int, field: Field = GF) -> Subspace:
    """Plücker coordinates ``e_J`` with ``d(I0, J) <= s``."""
    return _graded(grass_plucker(n), s, field)


def osc_basis(tag: str, n: int, s: int, field: Field = GF) -> Subspace:
    return _graded(polymap(tag, n), s, field)


def full_threshold(tag: str, n: int) -> int:
    """Smallest ``s`` with ``T^s`` the whole ambient space."""
    if tag in (GR, LG):
        return n
    if tag == SPIN_PL:
        return 2 * (n // 2)
    return n // 2


def osc_dim_formula(tag: str, n: int, s: int) -> int:
    """Closed-form projective dimension of ``T^s`` at a point."""
    if s < 0:
        raise ValueError("s must be non-negative")
    s = min(s, n)
    if tag == GR:
        val = sum(comb(n, k) ** 2 for k in range(s + 1)) - 1
        amb = comb(2 * n, n) - 1
    elif tag == LG:
        val = sum(comb(n, k) * (comb(n, k) + 1) for k in range(1, s + 1)) // 2
        amb = polymap(LG, n).ambient_dim if n <= 10 else _lg_ambient(n)
    elif tag == SPIN_PL:
        val = sum(comb(n, k) * (comb(n, k) + 1) for k in range(1, s + 1)) // 2
        val -= sum(comb(n, 2 * k - 1) for k in range(1, (s + 1) // 2 + 1))
        amb = comb(2 * n, n) // 2 - 1
    elif tag == SPIN_MIN:
        val = sum(comb(n, 2 * k) for k in range(1, s + 1))
        amb = 2 ** (n - 1) - 1
    else:
        raise ValueError(f"unknown variety {tag!r}")
    return min(val, amb)


def _lg_ambient(n: int) -> int:
    return sum(comb(n, k) * (comb(n, k) + 1) for k in range(n + 1)) // 2 - 1


def variety_dim(tag: str, n: int) -> int:
    if tag == GR:
        return n * n
    if tag == LG:
        return n * (n + 1) // 2
    return n * (n - 1) // 2


def ambient_dim(tag: str, n: int) -> int:
    if tag == GR:
        return comb(2 * n, n) - 1
    if tag == LG:
        return _lg_ambient(n)
    if tag == SPIN_PL:
        return comb(2 * n, n) // 2 - 1
    return 2 ** (n - 1) - 1


# ---------------------------------------------------------------- well-behavedness


def restricted_plucker_coords(n: int, shape: str) -> list[MultiPoly]:
    """All ``C(2n, n)`` Plücker coordinates ``det M_J`` with ``A`` of the given shape."""
    M = symbolic_matrix(n, shape)
    out = []
    for J in lambda_sets(n):
        R, C = minor_support(J, n)
        m = symbolic_minor(M, tuple(r - 1 for r in R), tuple(c - 1 for c in C))
        out.append(m if perm_sign(J, n) == 1 else -m)
    return out


@dataclass(frozen=True)
class WellBehavedRow:
    s: int
    dim_sub: int
    dim_ambient_section: int
    equal: bool
    lift_agrees: bool


def check_well_behaved(tag: str, n: int, field: Field = GF) -> list[WellBehavedRow]:
    """Compare ``T^s Y`` with ``T^s G ∩ <Y>`` in full Plücker coordinates, every ``s``.

    ``T^s Y`` comes from jets of the Plücker map restricted to the
    symmetric or skew chart, and ``<Y>`` is its top jet space, so neither
    side uses the intrinsic pair coordinates.  ``lift_agrees`` separately
    records that lifting the closed-form intrinsic basis gives the same
    space.
    """
    if tag not in (LG, SPIN_PL):
        raise ValueError("well-behavedness is defined here for LG and SPIN_PL")
    shape = "symmetric" if tag == LG else "skew"
    coords = restricted_plucker_coords(n, shape)
    N = len(coords)
    span = jet_space(coords, n, field)
    f = polymap(tag, n)
    L = field.array(f.lift_matrix())
    rows = []
    for s in range(n + 1):
        sub = jet_space(coords, s, field)
        section = intersect(grass_osc_basis(n, s, field), span)
        basis = _graded(f, s, field).basis
        lifted = Subspace.span(basis @ L if field.p is None else (basis @ L) % field.p, N, field)
        rows.append(WellBehavedRow(s, sub.projective_dim, section.projective_dim, sub == section, lifted == sub))
    return rows


def well_behaved_at(tag: str, n: int, field: Field = GF) -> bool:
    return all(r.equal and r.lift_agrees for r in check_well_behaved(tag, n, field))


# ---------------------------------------------------------------- scroll example


@dataclass(frozen=True)
class ScrollReport:
    k: int
    point: tuple[int, int]
    dim_scroll_osc: int
    dim_section: int
    strict: bool


def scroll_example(k: int, u0: int = 2, v0: int = 3, s: int = 2) -> ScrollReport:
    """Second osculating spaces of a rational normal scroll inside a Segre variety.

    The Segre ``P^1 x P^k`` has chart
    ``(u, a_1..a_k) -> (u, a_1 u, .., a_k u, 1, a_1, .., a_k)`` and the
    scroll ``(u, v) -> (u, v u, .., v u^k, 1, v, v u, .., v u^(k-1))`` is
    cut out by ``H = {Z_j = Z_(k+j+2)}, j = 1..k-1`` (0-based ``Z``).  The
    comparison is made at the point with ``u = u0``, ``a_j = v0 u0^(j-1)``.
    """
    if k < 1:
        raise ValueError("k must be positive")
    nseg = k + 1
    u = MultiPoly.var(nseg, 0)
    a = [MultiPoly.var(nseg, j) for j in range(1, nseg)]
    one = MultiPoly.constant(nseg, 1)
    segre = [u] + [aj * u for aj in a] + [one] + a
    U = MultiPoly.var(2, 0)
    V = MultiPoly.var(2, 1)
    scroll = [U] + [V * U ** j for j in range(1, k + 1)] + [MultiPoly.constant(2, 1)] + [V * U ** j for j in range(k)]
    N = 2 * k + 2
    seg_center = [u0] + [v0 * u0 ** (j - 1) for j in range(1, k + 1)]
    TX = jet_space(segre, s, QQ, seg_center)
    TY = jet_space(scroll, s, QQ, [u0, v0])
    eqs = np.zeros((max(k - 1, 0), N), dtype=np.int64)
    for j in range(1, k):
        eqs[j - 1, j] = 1
        eqs[j - 1, k + j + 2] = -1
    if k > 1:
        H = annihilator(Subspace.span(eqs, N, QQ))
    else:
        H = Subspace.full(N, QQ)
    section = intersect(TX, H)
    if not section.contains(TY):
        raise ArithmeticError("scroll osculating space escapes the section")
    return ScrollReport(k, (u0, v0), TY.projective_dim, section.projective_dim, TY.dim < section.dim)
