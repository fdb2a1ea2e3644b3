"""Strong 2-osculating regularity: osculating families along ``M_t = (I | tA)`` and their flat limits.

For the half-spin embedding the containment is also certified by an
explicit hyperplane per coordinate, whose coefficients solve a small
binomial system.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb
from typing import Sequence

import numpy as np

from .combinat import GammaFamily
from .embed import SPIN_MIN, ChartPoint, PolyMap, polymap
from .exactlinalg import GF, QQ, DegenerateFamily, Field, PolyMatrix, flat_limit, solve
from .osculate import osc_space_jets

DEFAULT_SEED = 0xC0FFEE


@dataclass(frozen=True, eq=False)
class CurveFamily:
    """The curve ``t -> (I | tA)`` from the chart origin towards ``A``."""

    tag: str
    n: int
    A: ChartPoint

    def point_at(self, t) -> ChartPoint:
        F = self.A.field
        return ChartPoint(self.n, self.A.shape, F.reduce(self.A.A * F.scalar(t)), F)


def osc_family(f: PolyMap, curve: CurveFamily, s: int) -> PolyMatrix:
    """Rows spanning the cone over ``T^s`` at ``curve(t)``, polynomial in ``t``.

    Row ``beta`` holds the coefficient of ``x^beta`` in ``f(tA + x)``.
    """
    F = curve.A.field
    a = [int(v) if F.p is not None else v for v in curve.A.vars()]
    top = max(f.grades)
    rows: dict[tuple, dict[tuple[int, int], object]] = {}
    for c, g in enumerate(f.coords):
        for alpha, coeff in g.terms.items():
            deg = sum(alpha)
            for beta in product(*(range(k + 1) for k in alpha)):
                b = sum(beta)
                if b > s:
                    continue
                v = coeff
                for av, al, be in zip(a, alpha, beta):
                    if al:
                        v = v * comb(al, be)
                        if al > be:
                            v = v * (av ** (al - be) if F.p is None else pow(av, al - be, F.p))
                if F.p is not None:
                    v = v % F.p
                key = (c, deg - b)
                cell = rows.setdefault(beta, {})
                cell[key] = cell.get(key, 0) + v
    cube = F.zeros((len(rows), f.n_coords, top + 1))
    for r, beta in enumerate(sorted(rows)):
        for (c, d), v in rows[beta].items():
            cube[r, c, d] = F.scalar(v)
    nonzero = np.any(cube.reshape(len(rows), -1) != 0, axis=1)
    return PolyMatrix(cube[nonzero], F)


def family_T(f: PolyMap, curve: CurveFamily, s1: int, s2: int) -> PolyMatrix:
    """``T_t = <T^{s1} at the origin, T^{s2} at curve(t)>`` as one polynomial matrix."""
    F = curve.A.field
    base = osc_space_jets(f, s1, F)
    return PolyMatrix.stack([PolyMatrix.constant(base.basis, F), osc_family(f, curve, s2)])


@dataclass(frozen=True)
class Strong2Trial:
    generic_rank: int
    limit_dim: int
    contained: bool


@dataclass(frozen=True)
class Strong2Report:
    tag: str
    n: int
    s1: int
    s2: int
    target_dim: int
    trials: list[Strong2Trial]
    resampled: int
    field: str
    seed: int

    @property
    def verdict(self) -> str:
        ok = self.trials and all(t.contained and t.limit_dim == t.generic_rank for t in self.trials)
        return "pass" if ok else "fail"

    def to_dict(self) -> dict:
        return {
            "variety": self.tag,
            "n": self.n,
            "s1": self.s1,
            "s2": self.s2,
            "target_dim": self.target_dim,
            "trials": [t.__dict__ for t in self.trials],
            "resampled": self.resampled,
            "field": self.field,
            "seed": self.seed,
            "verdict": self.verdict,
        }


def strong2_check(tag: str, n: int, s1: int, s2: int, trials: int = 5, seed: int = DEFAULT_SEED,
                  field: Field = GF, max_resample: int = 10) -> Strong2Report:
    """Flat limit of ``T_t`` versus ``T^{s1+s2+1}`` at the origin, for random directions."""
    if s1 < 0 or s2 < 0:
        raise ValueError("s1, s2 must be non-negative")
    f = polymap(tag, n)
    target = osc_space_jets(f, s1 + s2 + 1, field)
    out: list[Strong2Trial] = []
    resampled = 0
    for t in range(trials):
        for attempt in range(max_resample + 1):
            rng = np.random.default_rng([seed, n, s1, s2, t, attempt, field.p or 0])
            A = ChartPoint.random(n, f.shape, field, rng)
            fam = family_T(f, CurveFamily(tag, n, A), s1, s2)
            r, _ = fam.generic_rank(np.random.default_rng([seed, t, attempt]))
            try:
                T0 = flat_limit(fam, seed=seed + t, expected_rank=r)
            except DegenerateFamily:
                resampled += 1
                continue
            out.append(Strong2Trial(r, T0.dim, target.contains(T0)))
            break
        else:
            raise DegenerateFamily(f"no usable direction after {max_resample} resamples")
    return Strong2Report(tag, n, s1, s2, target.projective_dim, out, resampled, str(field), seed)


# ---------------------------------------------------------------- binomial certificate


def binomial_matrix(alpha: int, d1: int | None, d2: int) -> np.ndarray:
    """The square matrix ``M'``: rows ``q = alpha .. d2``, columns ``C(q, alpha-d2+1) .. C(q, 1)``."""
    if not 1 <= d2 <= alpha:
        raise ValueError(f"need 1 <= d2 <= alpha, got d2={d2}, alpha={alpha}")
    if d1 is not None and d2 > d1 - 1:
        raise ValueError(f"need d2 <= d1 - 1, got d1={d1}, d2={d2}")
    m = alpha - d2 + 1
    out = np.empty((m, m), dtype=object)
    for r, q in enumerate(range(alpha, d2 - 1, -1)):
        for c, j in enumerate(range(m, 0, -1)):
            out[r, c] = comb(q, j)
    return out


@dataclass(frozen=True)
class BinomialSystem:
    I: tuple[int, ...]
    n: int
    s1: int
    s2: int
    alpha_I: int
    d1: int
    d2: int
    coefficients: tuple[Fraction, ...]  # c_0 .. c_alpha
    annihilates: bool = False
    checked_t: tuple[int, ...] = ()
    counts_match: bool = True
    extra: dict = dc_field(default_factory=dict)

    def residuals(self) -> list[Fraction]:
        """Left-hand sides of all equations (all zero for a solution)."""
        c = self.coefficients
        res = [c[j] for j in range(self.d1, self.alpha_I + 1)]
        for q in range(self.d2, self.alpha_I + 1):
            res.append(sum(comb(q, j) * c[j] for j in range(q + 1)))
        return res


def block_standard(n: int, field: Field = QQ) -> ChartPoint:
    """Skew matrix with entry 1 on each basic pair of the spinor index family."""
    g = GammaFamily(n)
    A = field.zeros((n, n))
    for i, j in g.blocks:
        A[i - 1, j - 1] = field.scalar(1)
        A[j - 1, i - 1] = field.scalar(-1)
    return ChartPoint(n, "skew", A, field)


def hyperplane_vector(system: BinomialSystem, t, field: Field = QQ) -> np.ndarray:
    """Coefficients of ``F_I = sum_J t^j c_j P_J`` over ``J in Γ⁻_I``, ``j = (|I|-|J|)/2``."""
    f = polymap(SPIN_MIN, system.n)
    g = GammaFamily(system.n)
    v = field.zeros(f.n_coords)
    t = field.scalar(t)
    for J in g.minus(system.I):
        j = (len(system.I) - len(J)) // 2
        v[g.index(J)] = field.scalar(system.coefficients[j]) * t ** j if field.p is None else \
            field.scalar(system.coefficients[j]) * pow(int(t), j, field.p) % field.p
    return v


def _count_check(g: GammaFamily, I: tuple[int, ...], s2: int) -> bool:
    """``|Γ⁻_I ∩ Γ⁺_{K,l}| = C(q, l)`` for every ``K`` in ``Γ⁻_I ∩ Γ_{s2}``."""
    minus = set(g.minus(I))
    for K in minus:
        if len(K) > 2 * s2:
            continue
        q = (len(I) - len(K)) // 2
        plus = g.plus(K)
        for l in range(q + 1):
            cnt = sum(1 for J in plus if len(J) == len(K) + 2 * l and J in minus)
            if cnt != comb(q, l):
                return False
    return True


def solve_hyperplane_system(I: Sequence[int], s1: int, s2: int, n: int,
                            check_t: Sequence[int] = (1, 2, 3, 5, 7)) -> BinomialSystem:
    """Solve the binomial system with ``c_0 = 1`` and verify the hyperplane.

    Verification substitutes each ``t`` in ``check_t`` and checks that
    ``F_I`` vanishes on ``T^{s1}`` at the origin and on ``T^{s2}`` at
    ``tA0`` for the block-standard ``A0``, computed from the chart map.
    """
    I = tuple(sorted(I))
    if len(I) % 2 or (I and (I[0] < 1 or I[-1] > n)):
        raise ValueError(f"{I} is not an even subset of 1..{n}")
    if len(I) <= 2 * s1 + 2 * s2 + 2:
        raise ValueError(f"|I| = {len(I)} must exceed 2*s1 + 2*s2 + 2 = {2 * s1 + 2 * s2 + 2}")
    g = GammaFamily(n)
    alpha = g.alpha(I)
    half = len(I) // 2
    d1, d2 = half - s1, half - s2
    c = [Fraction(0)] * (alpha + 1)
    c[0] = Fraction(1)
    if d2 <= alpha:
        M = binomial_matrix(alpha, None, d2)
        m = M.shape[0]
        if m > d1 - 1:
            raise ArithmeticError("more equations than free coefficients")
        rhs = [-Fraction(1)] * m  # the c_0 column, C(q, 0) = 1
        x = solve(M, rhs, QQ)
        for k, j in enumerate(range(m, 0, -1)):
            c[j] = Fraction(x[k])
    system = BinomialSystem(I, n, s1, s2, alpha, d1, d2, tuple(c), counts_match=_count_check(g, I, s2))
    if any(r != 0 for r in system.residuals()):
        raise ArithmeticError(f"binomial system unsolved for I={I}")
    if c[0] == 0:
        raise ArithmeticError(f"no solution with c_0 != 0 for I={I}")
    ok = _annihilates(system, check_t)
    return BinomialSystem(**{**system.__dict__, "annihilates": ok, "checked_t": tuple(check_t)})


@lru_cache(maxsize=256)
def _standard_rows(n: int, s1: int, s2: int, t: int) -> np.ndarray:
    f = polymap(SPIN_MIN, n)
    curve = CurveFamily(SPIN_MIN, n, block_standard(n, QQ))
    return family_T(f, curve, s1, s2).evaluate(t)


def _annihilates(system: BinomialSystem, ts: Sequence[int]) -> bool:
    for t in ts:
        rows = _standard_rows(system.n, system.s1, system.s2, t)
        v = hyperplane_vector(system, t, QQ)
        if np.any(np.dot(rows, v) != 0):
            return False
    return True


def valid_hyperplane_instances(n: int):
    """All ``(I, s1, s2)`` with ``|I| > 2 s1 + 2 s2 + 2`` for the spinor map of ``n``."""
    g = GammaFamily(n)
    for I in g.gamma:
        for s1 in range(len(I) // 2):
            for s2 in range(len(I) // 2):
                if len(I) > 2 * s1 + 2 * s2 + 2:
                    yield I, s1, s2
