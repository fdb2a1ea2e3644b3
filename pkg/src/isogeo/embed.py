"""Chart parametrizations of Grassmannians, Lagrangian Grassmannians and spinor varieties.

Every map sends a chart matrix ``A`` to the coordinate vector of the row
space of ``M = (I_n | A)``.  Coordinates are ordered by grade (distance
from the base point for Plücker-type maps, half the subset size for the
spinor map) and lexicographically within a grade, so the first coordinate
is the constant 1 and every coordinate is homogeneous of degree equal to
its grade.

Two independent evaluation routes exist: a vectorised recursion over
minor and Pfaffian tables (used for values and Jacobians at points) and
symbolic :class:`MultiPoly` coordinates (used for jets and identities).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Sequence

import numpy as np

from .combinat import (
    distance,
    even_subsets,
    lambda_sets,
    minor_support,
    perm_sign,
    sigma_pairs,
)
from .exactlinalg import GF, QQ, Field, solve
from .multipoly import MultiPoly, det_poly

GR, LG, SPIN_PL, SPIN_MIN = "GR", "LG", "SPIN_PL", "SPIN_MIN"
TAGS = (GR, LG, SPIN_PL, SPIN_MIN)
SHAPE_OF = {GR: "general", LG: "symmetric", SPIN_PL: "skew", SPIN_MIN: "skew"}
CACHE_FORMAT = 1


class ShapeMismatch(ValueError):
    pass


def variables(n: int, shape: str) -> list[tuple[int, int]]:
    """Chart variables as 0-based matrix positions."""
    if shape == "general":
        return [(i, j) for i in range(n) for j in range(n)]
    if shape == "symmetric":
        return [(i, j) for i in range(n) for j in range(i, n)]
    if shape == "skew":
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    raise ValueError(f"unknown shape {shape!r}")


def _entry_map(n: int, shape: str) -> tuple[np.ndarray, np.ndarray]:
    """For each matrix entry, the variable it reads and its sign (0 if none)."""
    var = np.full((n, n), -1, dtype=np.int64)
    sign = np.zeros((n, n), dtype=np.int64)
    for v, (i, j) in enumerate(variables(n, shape)):
        var[i, j], sign[i, j] = v, 1
        if shape == "symmetric":
            var[j, i], sign[j, i] = v, 1
        elif shape == "skew":
            var[j, i], sign[j, i] = v, -1
    return var, sign


@dataclass(frozen=True, eq=False)
class ChartPoint:
    """A chart matrix ``A`` together with its shape and field."""

    n: int
    shape: str
    A: np.ndarray
    field: Field = GF

    def __post_init__(self):
        A = self.A
        if A.shape != (self.n, self.n):
            raise ShapeMismatch(f"A has shape {A.shape}, expected {(self.n, self.n)}")
        if self.shape == "symmetric" and np.any(A != A.T):
            raise ShapeMismatch("A is not symmetric")
        if self.shape == "skew":
            neg = self.field.reduce(-A.T) if self.field.p is not None else -A.T
            if np.any(A != neg) or np.any(np.diag(A) != 0):
                raise ShapeMismatch("A is not skew-symmetric")

    @classmethod
    def from_vars(cls, n: int, shape: str, values: Sequence, field: Field = GF) -> ChartPoint:
        vals = field.array(list(values)) if len(values) else field.zeros(0)
        A = field.zeros((n, n))
        for v, (i, j) in enumerate(variables(n, shape)):
            A[i, j] = vals[v]
            if shape == "symmetric":
                A[j, i] = vals[v]
            elif shape == "skew":
                A[j, i] = -vals[v] if field.p is None else (-int(vals[v])) % field.p
        return cls(n, shape, A, field)

    @classmethod
    def random(cls, n: int, shape: str, field: Field, rng: np.random.Generator, bound: int = 99) -> ChartPoint:
        """Entries drawn uniformly, in ``[-bound, bound]`` over QQ."""
        k = len(variables(n, shape))
        return cls.from_vars(n, shape, list(field.random_elements(rng, k, bound)), field)

    @classmethod
    def origin(cls, n: int, shape: str, field: Field = GF) -> ChartPoint:
        return cls(n, shape, field.zeros((n, n)), field)

    def vars(self) -> list:
        return [self.A[i, j] for i, j in variables(self.n, self.shape)]


# ---------------------------------------------------------------- tables


class MinorTable:
    """All square minors ``A[R, C]`` of an ``n x n`` matrix, level by level.

    Minor ``(R, C)`` (0-based sorted tuples) is expanded along its first
    row, so each level is a fixed gather-multiply-sum.
    """

    def __init__(self, n: int):
        self.n = n
        self.keys: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
        self.index: dict = {}
        self.levels: list[tuple] = []
        for k in range(n + 1):
            start = len(self.keys)
            rows_k = list(combinations(range(n), k))
            for R in rows_k:
                for C in rows_k:
                    self.index[(R, C)] = len(self.keys)
                    self.keys.append((R, C))
            if k == 0:
                continue
            m = len(self.keys) - start
            src = np.empty((m, k), dtype=np.int64)
            ar = np.empty((m, k), dtype=np.int64)
            ac = np.empty((m, k), dtype=np.int64)
            sg = np.empty((m, k), dtype=np.int64)
            for t, (R, C) in enumerate(self.keys[start:]):
                for q, c in enumerate(C):
                    src[t, q] = self.index[(R[1:], C[:q] + C[q + 1:])]
                    ar[t, q], ac[t, q] = R[0], c
                    sg[t, q] = -1 if q % 2 else 1
            self.levels.append((start, src, ar, ac, sg))

    def evaluate(self, A: np.ndarray, field: Field) -> np.ndarray:
        vals = field.zeros(len(self.keys))
        vals[0] = field.scalar(1)
        p = field.p
        for start, src, ar, ac, sg in self.levels:
            prod = A[ar, ac] * vals[src]
            if p is None:
                vals[start:start + len(src)] = (prod * sg).sum(axis=1)
            else:
                vals[start:start + len(src)] = ((prod % p) * sg).sum(axis=1) % p
        return vals


class PfaffianTable:
    """Pfaffians ``pf(A_I)`` for all even ``I ⊆ {0..n-1}``, by size."""

    def __init__(self, n: int):
        self.n = n
        self.keys = [tuple(i - 1 for i in I) for I in even_subsets(n)]
        self.index = {I: t for t, I in enumerate(self.keys)}
        self.levels = []
        t = 1
        for k in range(2, n + 1, 2):
            block = [I for I in self.keys if len(I) == k]
            m = len(block)
            src = np.empty((m, k - 1), dtype=np.int64)
            ar = np.empty((m, k - 1), dtype=np.int64)
            ac = np.empty((m, k - 1), dtype=np.int64)
            sg = np.empty((m, k - 1), dtype=np.int64)
            for u, I in enumerate(block):
                for q in range(1, k):
                    rest = I[1:q] + I[q + 1:]
                    src[u, q - 1] = self.index[rest]
                    ar[u, q - 1], ac[u, q - 1] = I[0], I[q]
                    sg[u, q - 1] = 1 if q % 2 else -1
            self.levels.append((t, src, ar, ac, sg))
            t += m

    def evaluate(self, A: np.ndarray, field: Field) -> np.ndarray:
        vals = field.zeros(len(self.keys))
        vals[0] = field.scalar(1)
        p = field.p
        for start, src, ar, ac, sg in self.levels:
            prod = A[ar, ac] * vals[src]
            if p is None:
                vals[start:start + len(src)] = (prod * sg).sum(axis=1)
            else:
                vals[start:start + len(src)] = ((prod % p) * sg).sum(axis=1) % p
        return vals


@lru_cache(maxsize=None)
def minor_table(n: int) -> MinorTable:
    return MinorTable(n)


@lru_cache(maxsize=None)
def pfaffian_table(n: int) -> PfaffianTable:
    return PfaffianTable(n)


# ---------------------------------------------------------------- maps


@dataclass(eq=False)
class PolyMap:
    """A chart parametrization with labelled, graded coordinates."""

    tag: str
    n: int
    labels: list[tuple[int, ...]]
    grades: list[int]
    # per coordinate: (source table index, sign) into the minor/Pfaffian table
    sources: np.ndarray
    signs: np.ndarray
    partners: list[tuple[int, ...] | None] = dc_field(default_factory=list)
    pair_signs: list[int] = dc_field(default_factory=list)
    _coords: list[MultiPoly] | None = None
    parent: PolyMap | None = None
    kept: np.ndarray | None = None

    @property
    def shape(self) -> str:
        return SHAPE_OF[self.tag]

    @property
    def var_positions(self) -> list[tuple[int, int]]:
        return variables(self.n, self.shape)

    @property
    def n_vars(self) -> int:
        return len(self.var_positions)

    @property
    def n_coords(self) -> int:
        return len(self.labels)

    @property
    def ambient_dim(self) -> int:
        """Projective dimension of the target space."""
        return self.n_coords - 1

    @property
    def dim(self) -> int:
        """Dimension of the parametrized variety."""
        return self.n_vars

    # -- numeric route
    def _table(self):
        root = self.parent or self
        return pfaffian_table(root.n) if root.tag == SPIN_MIN else minor_table(root.n)

    def _check(self, point: ChartPoint) -> None:
        if point.n != self.n or point.shape != self.shape:
            raise ShapeMismatch(f"{self.tag} needs a {self.shape} {self.n}x{self.n} point, got {point.shape} {point.n}x{point.n}")

    def _table_values(self, point: ChartPoint) -> np.ndarray:
        self._check(point)
        return self._table().evaluate(point.A, point.field)

    def evaluate(self, point: ChartPoint) -> np.ndarray:
        """Coordinate vector at ``point`` (first entry 1 unless restricted)."""
        if self.parent is not None:
            return self.parent.evaluate(point)[self.kept]
        F = point.field
        vals = self._table_values(point)[self.sources] * self.signs
        return F.reduce(vals)

    def jacobian(self, point: ChartPoint) -> np.ndarray:
        """Matrix of partial derivatives, one row per chart variable."""
        if self.parent is not None:
            return self.parent.jacobian(point)[:, self.kept]
        F = point.field
        vals = self._table_values(point)
        tgt, src, coef = _jacobian_plan(self.tag, self.n)
        contrib = vals[src] * coef
        contrib = F.reduce(contrib)
        out = F.zeros(self.n_vars * self.n_coords)
        np.add.at(out, tgt, contrib)
        return F.reduce(out).reshape(self.n_vars, self.n_coords)

    # -- symbolic route
    @property
    def coords(self) -> list[MultiPoly]:
        if self._coords is None:
            if self.parent is not None:
                full = self.parent.coords
                self._coords = [full[i] for i in self.kept]
            else:
                self._coords = _symbolic_coords(self)
        return self._coords

    def evaluate_symbolic(self, point: ChartPoint) -> np.ndarray:
        vals = point.vars()
        p = point.field.p
        return point.field.array([f.evaluate(vals, p) for f in self.coords])

    def restrict(self, keep: Sequence[int]) -> PolyMap:
        """The map followed by the coordinate projection onto ``keep``."""
        keep = np.asarray(sorted(keep), dtype=np.int64)
        root = self.parent or self
        kept = keep if self.parent is None else self.kept[keep]
        return PolyMap(
            self.tag,
            self.n,
            [self.labels[i] for i in keep],
            [self.grades[i] for i in keep],
            self.sources[keep],
            self.signs[keep],
            [self.partners[i] for i in keep] if self.partners else [],
            [self.pair_signs[i] for i in keep] if self.pair_signs else [],
            parent=root,
            kept=kept,
        )

    def lift_matrix(self) -> np.ndarray:
        """Integer matrix sending intrinsic coordinates to full Plücker coordinates.

        Row ``i`` is ``e_J + delta e_J'`` for the pair ``(J, J')`` of
        coordinate ``i`` (``e_J`` alone for a self-mirror set).
        """
        if self.tag not in (LG, SPIN_PL):
            raise ValueError("lift only exists for LG and SPIN_PL")
        full = {J: k for k, J in enumerate(lambda_sets(self.n))}
        L = np.zeros((self.n_coords, len(full)), dtype=np.int64)
        for i, (J, Jp, d) in enumerate(zip(self.labels, self.partners, self.pair_signs)):
            L[i, full[J]] = 1
            if Jp != J:
                L[i, full[Jp]] = d
        return L

    # -- serialization
    def to_json(self) -> dict:
        return {
            "variety": self.tag,
            "n": self.n,
            "format": CACHE_FORMAT,
            "vars": [f"a{i + 1}{j + 1}" for i, j in self.var_positions],
            "coords": [
                {"index": list(lab), "grade": g, "terms": f.to_json()}
                for lab, g, f in zip(self.labels, self.grades, self.coords)
            ],
        }


@lru_cache(maxsize=None)
def _jacobian_plan(tag: str, n: int):
    f = _build(tag, n)
    shape = SHAPE_OF[tag]
    var, vsign = _entry_map(n, shape)
    nc = f.n_coords
    tgt, src, coef = [], [], []
    if tag == SPIN_MIN:
        table = pfaffian_table(n)
        for c, (t, s) in enumerate(zip(f.sources, f.signs)):
            I = table.keys[t]
            for a, b in combinations(range(len(I)), 2):
                i, j = I[a], I[b]
                rest = tuple(x for x in I if x != i and x != j)
                tgt.append(var[i, j] * nc + c)
                src.append(table.index[rest])
                coef.append(int(s) * (-1 if (a + b) % 2 == 0 else 1))
    else:
        table = minor_table(n)
        for c, (t, s) in enumerate(zip(f.sources, f.signs)):
            R, C = table.keys[t]
            for a, i in enumerate(R):
                for b, j in enumerate(C):
                    if vsign[i, j] == 0:
                        continue
                    sub = table.index[(R[:a] + R[a + 1:], C[:b] + C[b + 1:])]
                    tgt.append(var[i, j] * nc + c)
                    src.append(sub)
                    coef.append(int(s) * int(vsign[i, j]) * (-1 if (a + b) % 2 else 1))
    return np.asarray(tgt, dtype=np.int64), np.asarray(src, dtype=np.int64), np.asarray(coef, dtype=np.int64)


def _minor_source(J, n):
    R, C = minor_support(J, n)
    t = minor_table(n).index[(tuple(r - 1 for r in R), tuple(c - 1 for c in C))]
    return t, perm_sign(J, n)


def _pair_sign(tag: str, J, Jp, n: int) -> int:
    """``delta`` with ``det M_J' = delta * det M_J`` on the subvariety."""
    d = perm_sign(J, n) * perm_sign(Jp, n)
    if tag == SPIN_PL and distance(J, n) % 2:
        d = -d
    return d


@lru_cache(maxsize=None)
def _build(tag: str, n: int) -> PolyMap:
    if n < 1 or (tag == SPIN_MIN and n < 2):
        raise ValueError(f"{tag} needs a larger n, got {n}")
    if tag == SPIN_MIN:
        table = pfaffian_table(n)
        labels = list(even_subsets(n))
        src = np.asarray([table.index[tuple(i - 1 for i in I)] for I in labels], dtype=np.int64)
        return PolyMap(tag, n, labels, [len(I) // 2 for I in labels], src, np.ones(len(labels), dtype=np.int64))
    if tag == GR:
        labels = list(lambda_sets(n))
        pairs = [_minor_source(J, n) for J in labels]
        return PolyMap(
            tag, n, labels, [distance(J, n) for J in labels],
            np.asarray([t for t, _ in pairs], dtype=np.int64),
            np.asarray([s for _, s in pairs], dtype=np.int64),
        )
    labels, partners, deltas = [], [], []
    for P in sigma_pairs(n):
        if tag == SPIN_PL and P.is_singleton and P.dist % 2:
            continue
        labels.append(P.J)
        partners.append(P.Jp)
        deltas.append(_pair_sign(tag, P.J, P.Jp, n))
    pairs = [_minor_source(J, n) for J in labels]
    return PolyMap(
        tag, n, labels, [distance(J, n) for J in labels],
        np.asarray([t for t, _ in pairs], dtype=np.int64),
        np.asarray([s for _, s in pairs], dtype=np.int64),
        partners, deltas,
    )


def _fresh(tag: str, n: int) -> PolyMap:
    b = _build(tag, n)
    return PolyMap(b.tag, b.n, b.labels, b.grades, b.sources, b.signs, b.partners, b.pair_signs, b._coords)


def grass_plucker(n: int) -> PolyMap:
    """Plücker coordinates ``det M_J`` of ``G(n, 2n)`` in the standard chart."""
    return _fresh(GR, n)


def lg_plucker(n: int) -> PolyMap:
    """Lagrangian Grassmannian, one coordinate per mirror pair."""
    return _fresh(LG, n)


def spinor_plucker(n: int) -> PolyMap:
    """Spinor variety in its Plücker embedding, identically-zero coordinates dropped."""
    return _fresh(SPIN_PL, n)


def spinor_minimal(n: int) -> PolyMap:
    """Spinor variety in the half-spin embedding: principal Pfaffians."""
    return _fresh(SPIN_MIN, n)


def polymap(tag: str, n: int) -> PolyMap:
    return {GR: grass_plucker, LG: lg_plucker, SPIN_PL: spinor_plucker, SPIN_MIN: spinor_minimal}[tag](n)


# ---------------------------------------------------------------- symbolic


def symbolic_matrix(n: int, shape: str) -> list[list[MultiPoly]]:
    vs = variables(n, shape)
    k = len(vs)
    M = [[MultiPoly(k) for _ in range(n)] for _ in range(n)]
    for v, (i, j) in enumerate(vs):
        x = MultiPoly.var(k, v)
        M[i][j] = x
        if shape == "symmetric":
            M[j][i] = x
        elif shape == "skew":
            M[j][i] = -x
    return M


def symbolic_minor(M: list[list[MultiPoly]], R: Sequence[int], C: Sequence[int]) -> MultiPoly:
    """``det M[R, C]`` for 0-based row/column tuples."""
    nv = M[0][0].nvars
    if not R:
        return MultiPoly.constant(nv, 1)
    return det_poly([[M[r][c] for c in C] for r in R])


def symbolic_pfaffians(M: list[list[MultiPoly]], subsets: Sequence[Sequence[int]]) -> dict:
    """``pf(M_I)`` for 0-based even index tuples, by first-row expansion."""
    nv = M[0][0].nvars
    memo: dict[tuple[int, ...], MultiPoly] = {(): MultiPoly.constant(nv, 1)}

    def pf(I: tuple[int, ...]) -> MultiPoly:
        if I in memo:
            return memo[I]
        if len(I) % 2:
            raise ValueError("Pfaffian of an odd-size matrix")
        acc = MultiPoly(nv)
        for q in range(1, len(I)):
            e = M[I[0]][I[q]]
            if e:
                term = e * pf(I[1:q] + I[q + 1:])
                acc = acc + (term if q % 2 else -term)
        memo[I] = acc
        return acc

    return {tuple(I): pf(tuple(I)) for I in subsets}


def _symbolic_coords(f: PolyMap) -> list[MultiPoly]:
    cached = _cache_load(f.tag, f.n)
    if cached is not None:
        return cached
    M = symbolic_matrix(f.n, f.shape)
    out: list[MultiPoly] = []
    if f.tag == SPIN_MIN:
        pfs = symbolic_pfaffians(M, [tuple(i - 1 for i in I) for I in f.labels])
        out = [pfs[tuple(i - 1 for i in I)] for I in f.labels]
    else:
        table = minor_table(f.n)
        for t, s in zip(f.sources, f.signs):
            R, C = table.keys[t]
            m = symbolic_minor(M, R, C)
            out.append(m if s == 1 else -m)
    _cache_store(f, out)
    return out


# ---------------------------------------------------------------- cache


def cache_dir() -> Path | None:
    env = os.environ.get("ISOGEO_CACHE_DIR")
    if env is None:
        return None
    return Path(env) if env else None


def _cache_path(tag: str, n: int) -> Path | None:
    d = cache_dir()
    return None if d is None else d / f"{tag.lower()}_{n}.json"


def _cache_load(tag: str, n: int) -> list[MultiPoly] | None:
    path = _cache_path(tag, n)
    if path is None or not path.exists():
        return None
    try:
        doc = json.loads(path.read_text())
    except (OSError, ValueError):
        return None
    if doc.get("format") != CACHE_FORMAT or doc.get("variety") != tag or doc.get("n") != n:
        return None
    nv = len(doc["vars"])
    return [MultiPoly.from_json(nv, c["terms"]) for c in doc["coords"]]


def _cache_store(f: PolyMap, coords: list[MultiPoly]) -> None:
    path = _cache_path(f.tag, f.n)
    if path is None:
        return
    f._coords = coords
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(f.to_json(), sort_keys=True))
    tmp.replace(path)


def polymap_from_json(doc: dict) -> PolyMap:
    if doc.get("format") != CACHE_FORMAT:
        raise ValueError(f"unsupported PolyMap format {doc.get('format')!r}")
    f = polymap(doc["variety"], doc["n"])
    labels = [tuple(c["index"]) for c in doc["coords"]]
    if labels != f.labels:
        raise ValueError("coordinate labels do not match this build")
    nv = len(doc["vars"])
    f._coords = [MultiPoly.from_json(nv, c["terms"]) for c in doc["coords"]]
    return f


# ---------------------------------------------------------------- Pfaffians


def pfaffian(A, I: Sequence[int] | None = None, field: Field | None = None):
    """Pfaffian of the principal submatrix ``A_I`` (1-based ``I``).

    ``A`` may be a numeric array or a nested list of :class:`MultiPoly`.
    """
    if isinstance(A, list) and A and isinstance(A[0][0], MultiPoly):
        n = len(A)
        idx = tuple(range(n)) if I is None else tuple(i - 1 for i in I)
        if len(idx) % 2:
            raise ValueError("Pfaffian of an odd-size matrix")
        return symbolic_pfaffians(A, [idx])[idx]
    A = np.asarray(A)
    n = A.shape[0]
    idx = list(range(n)) if I is None else [i - 1 for i in I]
    if len(idx) % 2:
        raise ValueError("Pfaffian of an odd-size matrix")
    F = field or (QQ if A.dtype == object else GF)
    sub = F.array(A[np.ix_(idx, idx)]) if idx else F.zeros((0, 0))
    k = len(idx)
    if k == 0:
        return F.scalar(1)
    return pfaffian_table(k).evaluate(sub, F)[-1]


def skew_inverse_via_pfaffians(A, field: Field = QQ) -> np.ndarray:
    """Inverse of an even skew matrix from its Pfaffian minors.

    ``(A^-1)_{ij} = (-1)^(i+j) pf(A with rows/cols i, j removed) / pf(A)``
    for ``i < j``, and the result is skew.
    """
    A = field.array(A)
    n = A.shape[0]
    if n % 2:
        raise ValueError("odd skew matrices are singular")
    table = pfaffian_table(n)
    vals = table.evaluate(A, field)
    total = vals[-1]
    if total == 0:
        raise ZeroDivisionError("pf(A) = 0")
    inv_total = field.inv(total)
    out = field.zeros((n, n))
    full = tuple(range(n))
    for i in range(n):
        for j in range(i + 1, n):
            rest = tuple(x for x in full if x != i and x != j)
            v = vals[table.index[rest]] * inv_total
            if (i + j) % 2:
                v = -v
            if field.p is not None:
                v = int(v) % field.p
            out[i, j] = v
            out[j, i] = -v if field.p is None else (-v) % field.p
    return out


# ---------------------------------------------------------------- Veronese


DATA_DIR = Path(__file__).parent / "data"


def veronese_products(n: int) -> list[tuple[int, int]]:
    """Index pairs ``(a, b)``, ``a <= b``, of spinor coordinates."""
    m = 1 << (n - 1)
    return [(a, b) for a in range(m) for b in range(a, m)]


def veronese(z: np.ndarray, field: Field) -> np.ndarray:
    pairs = veronese_products(int(np.log2(len(z))) + 1)
    a = np.asarray([p for p, _ in pairs])
    b = np.asarray([q for _, q in pairs])
    return field.reduce(z[a] * z[b])


def discover_veronese_table(n: int) -> dict:
    """Express each spinor-Plücker coordinate as a combination of Pfaffian products.

    Solved exactly over QQ from the symbolic coordinates; free unknowns are
    set to zero, so the table is canonical.
    """
    pl = spinor_plucker(n)
    sm = spinor_minimal(n)
    pairs = veronese_products(n)
    prods = [sm.coords[a] * sm.coords[b] for a, b in pairs]
    monos = sorted({e for f in prods + pl.coords for e in f.terms})
    row = {e: k for k, e in enumerate(monos)}
    A = QQ.zeros((len(monos), len(prods)))
    for c, f in enumerate(prods):
        for e, v in f.terms.items():
            A[row[e], c] = Fraction(v)
    B = QQ.zeros((len(monos), pl.n_coords))
    for c, f in enumerate(pl.coords):
        for e, v in f.terms.items():
            B[row[e], c] = Fraction(v)
    X = solve(A, B, QQ)
    entries = []
    for c in range(pl.n_coords):
        terms = [[pairs[r][0], pairs[r][1], str(X[r, c])] for r in range(len(pairs)) if X[r, c] != 0]
        entries.append({"index": list(pl.labels[c]), "terms": terms})
    return {
        "n": n,
        "format": CACHE_FORMAT,
        "spinor_labels": [list(I) for I in sm.labels],
        "coords": entries,
    }


def load_veronese_table(n: int) -> dict:
    path = DATA_DIR / f"veronese_{n}.json"
    if not path.exists():
        raise FileNotFoundError(f"no frozen Veronese table for n = {n}")
    return json.loads(path.read_text())


def veronese_matrix(table: dict, field: Field) -> np.ndarray:
    """Matrix ``V`` with ``plucker = veronese(spinor) @ V``."""
    n = table["n"]
    pairs = {p: k for k, p in enumerate(veronese_products(n))}
    V = field.zeros((len(pairs), len(table["coords"])))
    for c, entry in enumerate(table["coords"]):
        for a, b, coeff in entry["terms"]:
            V[pairs[(a, b)], c] = field.scalar(Fraction(coeff))
    return V
