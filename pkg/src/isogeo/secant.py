"""Secant dimensions by Terracini's lemma, osculating projections and their inverses."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from .combinat import minor_support, perm_sign, sigma_pairs
from .embed import GR, LG, SPIN_MIN, SPIN_PL, ChartPoint, PolyMap, polymap
from .exactlinalg import DEFAULT_PRIME, GF, QQ, SECOND_PRIME, Field, Subspace, inverse, rank
from .osculate import ambient_dim, full_threshold, osc_basis, osc_space_jets, variety_dim

DEFAULT_SEED = 0xC0FFEE
TAG_CODE = {GR: 1, LG: 2, SPIN_PL: 3, SPIN_MIN: 4}

CERTIFIED = "certified-nondefective"
DEFECTIVE = "defective-evidence"
INCONCLUSIVE = "inconclusive"

CSV_COLUMNS = ["variety", "n", "h", "N", "dimX", "expected", "rank", "verdict", "field", "seed", "trials"]


@dataclass(frozen=True)
class TerraciniReport:
    """One secant experiment.

    ``rank`` is the largest rank of the stacked tangent cones over all
    trials, so ``rank - 1`` is a lower bound for ``dim Sec_h``.
    """

    variety: str
    n: int
    h: int
    ambient_N: int
    dim_X: int
    expected: int
    rank: int
    trials: int
    field: str
    seed: int
    verdict: str
    ranks: tuple[int, ...] = ()

    @property
    def computed_dim(self) -> int:
        return self.rank - 1

    @property
    def deficit(self) -> int:
        return self.expected - self.computed_dim

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ranks"] = list(self.ranks)
        d["computed_dim"] = self.computed_dim
        d["deficit"] = self.deficit
        return d

    def csv_row(self) -> list:
        return [self.variety, self.n, self.h, self.ambient_N, self.dim_X, self.expected,
                self.rank, self.verdict, self.field, self.seed, self.trials]


def reports_to_json(reports: Sequence[TerraciniReport]) -> str:
    return json.dumps({"schema": "isogeo/1", "reports": [r.to_dict() for r in reports]}, sort_keys=True, indent=2)


def reports_to_csv(reports: Sequence[TerraciniReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        w.writerow(r.csv_row())
    return buf.getvalue()


def expected_secant_dim(N: int, dimX: int, h: int) -> int:
    if h < 1:
        raise ValueError("h must be at least 1")
    return min(h * dimX + h - 1, N)


def tangent_space_at(f: PolyMap, p: ChartPoint) -> Subspace:
    """Affine cone over the embedded tangent space at ``p``."""
    rows = np.concatenate([f.evaluate(p)[None, :], f.jacobian(p)])
    T = Subspace.span(rows, f.n_coords, p.field)
    if T.dim != f.n_vars + 1:
        raise ArithmeticError(f"tangent cone has dim {T.dim} < {f.n_vars + 1}: point is not generic")
    return T


def _rng(seed: int, tag: str, n: int, h: int, trial: int, field: Field) -> np.random.Generator:
    return np.random.default_rng([seed, TAG_CODE[tag], n, h, trial, field.p or 0])


def terracini_matrix(f: PolyMap, points: Iterable[ChartPoint]) -> np.ndarray:
    blocks = []
    for p in points:
        blocks.append(f.evaluate(p)[None, :])
        blocks.append(f.jacobian(p))
    return np.concatenate(blocks)


def terracini_rank(tag: str, n: int, h: int, field: Field = GF, trials: int = 5,
                   seed: int = DEFAULT_SEED) -> TerraciniReport:
    """Max rank of ``h`` stacked tangent cones at random chart points.

    A single field can only certify non-defectivity; otherwise the verdict
    is inconclusive (see :func:`secant_evidence`).
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    f = polymap(tag, n)
    N = ambient_dim(tag, n)
    dimX = variety_dim(tag, n)
    exp = expected_secant_dim(N, dimX, h)
    ranks = []
    for t in range(trials):
        rng = _rng(seed, tag, n, h, t, field)
        pts = [ChartPoint.random(n, f.shape, field, rng) for _ in range(h)]
        r = rank(terracini_matrix(f, pts), field)
        if r - 1 > exp:
            raise ArithmeticError(f"rank {r} exceeds expected cone dimension {exp + 1}")
        ranks.append(r)
    best = max(ranks)
    verdict = CERTIFIED if best - 1 == exp else INCONCLUSIVE
    return TerraciniReport(tag, n, h, N, dimX, exp, best, trials, str(field), seed, verdict, tuple(ranks))


def secant_evidence(tag: str, n: int, h: int, trials: int = 20, seed: int = DEFAULT_SEED,
                    primes: tuple[int, int] = (DEFAULT_PRIME, SECOND_PRIME), qq_trials: int = 1) -> list[TerraciniReport]:
    """Reports over two primes and QQ with a combined verdict.

    The combined verdict is attached to every report: certified if any
    field reaches the expected dimension, defective-evidence if all stay
    below it with at least 20 trials per prime and one over QQ.
    """
    fields = [Field(primes[0]), Field(primes[1])]
    reps = [terracini_rank(tag, n, h, F, trials, seed) for F in fields]
    reps.append(terracini_rank(tag, n, h, QQ, qq_trials, seed))
    if any(r.verdict == CERTIFIED for r in reps):
        verdict = CERTIFIED
    elif trials >= 20 and qq_trials >= 1:
        verdict = DEFECTIVE
    else:
        verdict = INCONCLUSIVE
    return [TerraciniReport(**{**asdict(r), "verdict": verdict}) for r in reps]


def theorem_bound(tag: str, n: int) -> int:
    """Largest ``h`` for which non-defectivity is asserted."""
    if tag == LG:
        return (n + 1) // 2
    if tag == SPIN_PL:
        return n // 2
    if tag == SPIN_MIN:
        return (n + 2) // 4
    raise ValueError(f"no secant bound for {tag}")


def defect_table(tag: str, n_range: Iterable[int], h_rule="auto", field: Field = GF, trials: int = 5,
                 seed: int = DEFAULT_SEED) -> list[TerraciniReport]:
    """One report per ``(n, h)``; ``h_rule`` is ``"auto"``, an int, or a callable of ``n``."""
    out = []
    for n in n_range:
        if h_rule == "auto":
            hs = range(1, theorem_bound(tag, n) + 1)
        elif callable(h_rule):
            hs = h_rule(n)
        else:
            hs = [int(h_rule)]
        for h in hs:
            out.append(terracini_rank(tag, n, h, field, trials, seed))
    return out


# ---------------------------------------------------------------- projections


@dataclass(frozen=True, eq=False)
class ProjectionSetup:
    tag: str
    n: int
    s: int
    center: Subspace
    surviving: list[int]
    labels: list[tuple[int, ...]]
    projected: PolyMap

    @property
    def target_dim(self) -> int:
        return len(self.surviving) - 1


def osculating_projection(tag: str, n: int, s: int, field: Field = GF, check: bool = True) -> ProjectionSetup:
    """Projection from the osculating space ``T^s`` at the chart origin.

    The center is the coordinate subspace of grades ``<= s``; the
    surviving coordinates are those of grade ``> s``.  With ``check`` the
    jet space of order ``s`` is verified to vanish on them.
    """
    if s < 0:
        raise ValueError("s must be non-negative")
    if s >= full_threshold(tag, n):
        raise ValueError(f"T^{s} is the whole space for {tag} n={n}: empty target")
    f = polymap(tag, n)
    keep = [i for i, g in enumerate(f.grades) if g > s]
    center = osc_basis(tag, n, s, field)
    if check:
        jets = osc_space_jets(f, s, field)
        if jets.dim and np.any(jets.basis[:, keep] != 0):
            raise ArithmeticError("osculating space does not lie in the projection center")
    g = f.restrict(keep)
    return ProjectionSetup(tag, n, s, center, keep, g.labels, g)


@dataclass(frozen=True)
class FinitenessReport:
    verdict: str  # "finite" or "contracts"
    image_rank: int
    dim_X: int
    fiber_dim: int
    samples: int


def image_rank_at(g: PolyMap, p: ChartPoint) -> int:
    """Dimension of the projective image near ``p``: rank of ``[g(p); dg(p)]`` minus one."""
    M = np.concatenate([g.evaluate(p)[None, :], g.jacobian(p)])
    return rank(M, p.field) - 1


def generic_finiteness(setup: ProjectionSetup, trials: int = 10, seed: int = DEFAULT_SEED,
                       field: Field = GF) -> FinitenessReport:
    """Generic rank of the projected map, maximised over ``trials`` random points."""
    g = setup.projected
    rng = np.random.default_rng([seed, TAG_CODE[setup.tag], setup.n, setup.s, field.p or 0])
    best = max(image_rank_at(g, ChartPoint.random(setup.n, g.shape, field, rng)) for _ in range(trials))
    dimX = g.n_vars
    return FinitenessReport("finite" if best == dimX else "contracts", best, dimX, dimX - best, trials)


# ---------------------------------------------------------------- inverse


class NonGenericPoint(ValueError):
    pass


def _minor_values(setup: ProjectionSetup, coords, field: Field) -> dict:
    """Map ``(R, C)`` (0-based) to ``det A[R, C]``, all up to one common scale.

    A pair coordinate ``v`` stands for ``P_J = v`` and ``P_J' = delta v``,
    and ``det A[R_J, C_J] = eps(J) P_J``.
    """
    g = setup.projected
    n = setup.n
    out = {}
    for lab, part, delta, v in zip(g.labels, g.partners, g.pair_signs, coords):
        for J, scale in ((lab, 1), (part, delta)):
            R, C = minor_support(J, n)
            val = v * scale * perm_sign(J, n)
            out[(tuple(r - 1 for r in R), tuple(c - 1 for c in C))] = val % field.p if field.p else val
    if setup.tag == SPIN_PL:
        # dropped coordinates vanish identically
        for P in sigma_pairs(n):
            if P.is_singleton and P.dist % 2:
                R, C = minor_support(P.J, n)
                out[(tuple(r - 1 for r in R), tuple(c - 1 for c in C))] = field.scalar(0)
    return out


def _adjugate_inverse(minors: dict, idx: Sequence[int], field: Field) -> np.ndarray:
    """Recover ``A[idx, idx]`` from its scaled complementary minors and determinant."""
    k = len(idx)
    full = tuple(idx)
    d = minors.get((full, full))
    if d is None:
        raise KeyError("determinant coordinate missing")
    if d == 0:
        raise NonGenericPoint("vanishing determinant")
    inv = field.zeros((k, k))
    dinv = field.inv(d)
    for a in range(k):
        for b in range(k):
            R = full[:b] + full[b + 1:]
            C = full[:a] + full[a + 1:]
            m = minors[(R, C)]
            v = m * dinv
            if (a + b) % 2:
                v = -v
            inv[a, b] = v % field.p if field.p else v
    return inverse(inv, field)


def _field_of(coords) -> Field:
    return QQ if np.asarray(coords).dtype == object else GF


def reconstruct_inverse(tag: str, n: int, s: int, image_coords, field: Field | None = None) -> ChartPoint:
    """Recover the chart point from its projected image (any nonzero scale)."""
    F = field or _field_of(image_coords)
    setup = osculating_projection(tag, n, s, F, check=False)
    coords = list(F.array(list(image_coords)))
    if len(coords) != len(setup.surviving):
        raise ValueError(f"expected {len(setup.surviving)} coordinates, got {len(coords)}")
    if tag == LG and s <= n - 2:
        minors = _minor_values(setup, coords, F)
        A = _adjugate_inverse(minors, tuple(range(n)), F)
        return ChartPoint(n, "symmetric", A, F)
    if tag == SPIN_PL and s <= 2 * (n // 2) - 2:
        minors = _minor_values(setup, coords, F)
        if n % 2 == 0:
            return ChartPoint(n, "skew", _adjugate_inverse(minors, tuple(range(n)), F), F)
        return ChartPoint(n, "skew", _glue(n, lambda idx: _adjugate_inverse(minors, idx, F), F), F)
    if tag == SPIN_MIN and s <= n // 2 - 2:
        pf = {tuple(i - 1 for i in lab): v for lab, v in zip(setup.labels, coords)}
        if n % 2 == 0:
            return ChartPoint(n, "skew", _pfaffian_inverse(pf, tuple(range(n)), F), F)
        return ChartPoint(n, "skew", _glue(n, lambda idx: _pfaffian_inverse(pf, idx, F), F), F)
    raise ValueError(f"no inverse for {tag} n={n} s={s}: outside the birational range")


def _pfaffian_inverse(pf: dict, idx: Sequence[int], field: Field) -> np.ndarray:
    full = tuple(idx)
    k = len(full)
    total = pf[full]
    if total == 0:
        raise NonGenericPoint("vanishing Pfaffian")
    tinv = field.inv(total)
    inv = field.zeros((k, k))
    for a in range(k):
        for b in range(a + 1, k):
            rest = tuple(x for x in full if x != full[a] and x != full[b])
            v = pf[rest] * tinv
            if (a + b) % 2:
                v = -v
            if field.p:
                v = v % field.p
            inv[a, b] = v
            inv[b, a] = -v if field.p is None else (-v) % field.p
    return inverse(inv, field)


def _glue(n: int, block, field: Field) -> np.ndarray:
    """Assemble ``A`` from the blocks obtained by deleting index 0, 1 or 2.

    Every pair of indices avoids at least one of the three.
    """
    A = field.zeros((n, n))
    for drop in (0, 1, 2):
        idx = tuple(i for i in range(n) if i != drop)
        B = block(idx)
        for a, i in enumerate(idx):
            for b, j in enumerate(idx):
                A[i, j] = B[a, b]
    return A
