"""Exact linear algebra over QQ and prime fields.

Matrices are plain numpy arrays: ``int64`` with entries in ``[0, p)`` for
F_p, ``object`` arrays of :class:`fractions.Fraction` (or Python ints) for
QQ.  Products of two reduced F_p entries stay below 2**62, so every F_p
update fits in int64 without intermediate overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

DEFAULT_PRIME = 2147483647  # 2**31 - 1
SECOND_PRIME = 2147483629


class DimensionMismatch(ValueError):
    pass


class DegenerateFamily(ValueError):
    """A polynomial family whose rank stays below the requested value."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Field:
    """QQ when ``p`` is None, otherwise F_p."""

    p: int | None = None

    @classmethod
    def parse(cls, text: str | Field | None) -> Field:
        if text is None:
            return cls(DEFAULT_PRIME)
        if isinstance(text, Field):
            return text
        text = text.strip().lower()
        if text in ("qq", "q"):
            return cls(None)
        if text.startswith("fp:"):
            p = int(text[3:])
            if not _is_prime(p) or p < 3 or p > DEFAULT_PRIME:
                raise ValueError(f"not an odd prime below 2**31: {p}")
            return cls(p)
        if text == "fp":
            return cls(DEFAULT_PRIME)
        raise ValueError(f"unknown field {text!r} (use 'qq' or 'fp:<prime>')")

    @property
    def is_qq(self) -> bool:
        return self.p is None

    @property
    def dtype(self):
        return object if self.p is None else np.int64

    def __str__(self) -> str:
        return "qq" if self.p is None else f"fp:{self.p}"

    def scalar(self, x):
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            return x.numerator % self.p * pow(x.denominator % self.p, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / Fraction(x)
        return pow(int(x), -1, self.p)

    def array(self, data) -> np.ndarray:
        """Coerce nested data (ints, Fractions, arrays) into this field."""
        a = np.asarray(data, dtype=object)
        if self.p is None:
            out = np.empty(a.shape, dtype=object)
            flat = out.reshape(-1)
            for i, x in enumerate(a.reshape(-1)):
                flat[i] = x if isinstance(x, Fraction) else Fraction(int(x))
            return out
        out = np.empty(a.shape, dtype=np.int64)
        flat = out.reshape(-1)
        for i, x in enumerate(a.reshape(-1)):
            flat[i] = self.scalar(x)
        return out

    def zeros(self, shape) -> np.ndarray:
        if self.p is None:
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros(shape, dtype=np.int64)

    def identity(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = 1 if self.p is not None else Fraction(1)
        return out

    def reduce(self, a: np.ndarray) -> np.ndarray:
        return a if self.p is None else a % self.p

    def random_elements(self, rng: np.random.Generator, size, bound: int = 99) -> np.ndarray:
        """Uniform in F_p, or integers in [-bound, bound] for QQ."""
        if self.p is None:
            vals = rng.integers(-bound, bound + 1, size=size)
            return self.array(vals)
        return rng.integers(0, self.p, size=size, dtype=np.int64)


QQ = Field(None)
GF = Field(DEFAULT_PRIME)


def _prepare(m, field: Field) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    if field.p is None:
        if m.dtype != object or not all(type(x) is Fraction for x in m.flat):
            return field.array(m)
        return m.copy()
    if m.dtype == object:
        return field.array(m)
    return m.astype(np.int64) % field.p


def rref(m, field: Field = GF, pivot_limit: int | None = None):
    """Reduced row-echelon form of ``m``.

    Only the first ``pivot_limit`` columns may carry pivots; row operations
    still act on the whole width.  Returns ``(R, pivots)`` with the zero
    rows dropped from ``R``.
    """
    M = _prepare(m, field)
    rows, cols = M.shape
    limit = cols if pivot_limit is None else pivot_limit
    p = field.p
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c] != 0)
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            M[[r, i]] = M[[i, r]]
        piv = M[r, c]
        if p is None:
            if piv != 1:
                M[r, c:] = M[r, c:] / piv
        elif piv != 1:
            M[r, c:] = M[r, c:] * pow(int(piv), p - 2, p) % p
        others = np.flatnonzero(M[:, c] != 0)
        others = others[others != r]
        if others.size:
            f = M[others, c][:, None]
            if p is None:
                M[others, c:] = M[others, c:] - f * M[r, c:]
            else:
                M[others, c:] = (M[others, c:] - f * M[r, c:]) % p
        pivots.append(c)
        r += 1
    return M[:r], pivots


def _bareiss_rank(M: np.ndarray) -> int:
    # fraction-free elimination on an integer object matrix
    rows, cols = M.shape
    prev = 1
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c] != 0)
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            M[[r, i]] = M[[i, r]]
        piv = M[r, c]
        if r + 1 < rows and c + 1 < cols:
            below = M[r + 1:, c:c + 1]
            M[r + 1:, c + 1:] = (piv * M[r + 1:, c + 1:] - below * M[r, c + 1:]) // prev
        M[r + 1:, c] = 0
        prev = piv
        r += 1
    return r


def _integer_rows(m) -> np.ndarray:
    a = np.asarray(m, dtype=object)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    out = np.empty(a.shape, dtype=object)
    for i, row in enumerate(a):
        den = 1
        for x in row:
            if isinstance(x, Fraction) and x.denominator != 1:
                den = den * x.denominator // np.gcd(den, x.denominator)
        for j, x in enumerate(row):
            out[i, j] = int(Fraction(x) * den)
    return out


def rank(m, field: Field = GF) -> int:
    """Dimension of the row space of ``m``."""
    a = np.asarray(m)
    if a.size == 0:
        return 0
    if field.p is None:
        return _bareiss_rank(_integer_rows(a))
    M = _prepare(a, field)
    if M.shape[0] > M.shape[1]:
        M = np.ascontiguousarray(M.T)
    p = field.p
    rows, cols = M.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            M[[r, i]] = M[[i, r]]
        inv = pow(int(M[r, c]), p - 2, p)
        M[r, c:] = M[r, c:] * inv % p
        below = r + 1 + np.flatnonzero(M[r + 1:, c])
        if below.size:
            f = M[below, c][:, None]
            M[below, c:] = (M[below, c:] - f * M[r, c:]) % p
        r += 1
    return r


def det(m, field: Field = QQ):
    """Determinant; exact integer/Fraction over QQ, residue over F_p."""
    a = np.asarray(m, dtype=object)
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionMismatch("det of a non-square matrix")
    if n == 0:
        return field.scalar(1)
    if field.p is None:
        dens = [x.denominator for x in a.reshape(-1) if isinstance(x, Fraction)]
        if any(d != 1 for d in dens):
            R = a.astype(object).copy()
            out = Fraction(1)
            for c in range(n):
                nz = [i for i in range(c, n) if R[i, c] != 0]
                if not nz:
                    return Fraction(0)
                i = nz[0]
                if i != c:
                    R[[c, i]] = R[[i, c]]
                    out = -out
                out *= R[c, c]
                R[c + 1:, c:] = R[c + 1:, c:] - (R[c + 1:, c:c + 1] / R[c, c]) * R[c, c:]
            return out
        M = np.array([[int(x) for x in row] for row in a], dtype=object)
        sign = 1
        prev = 1
        for c in range(n):
            nz = np.flatnonzero(M[c:, c] != 0)
            if nz.size == 0:
                return Fraction(0)
            i = c + int(nz[0])
            if i != c:
                M[[c, i]] = M[[i, c]]
                sign = -sign
            piv = M[c, c]
            if c + 1 < n:
                M[c + 1:, c + 1:] = (piv * M[c + 1:, c + 1:] - M[c + 1:, c:c + 1] * M[c, c + 1:]) // prev
            prev = piv
        return Fraction(sign * M[n - 1, n - 1])
    p = field.p
    M = _prepare(a, field)
    out = 1
    for c in range(n):
        nz = np.flatnonzero(M[c:, c])
        if nz.size == 0:
            return 0
        i = c + int(nz[0])
        if i != c:
            M[[c, i]] = M[[i, c]]
            out = -out
        piv = int(M[c, c])
        out = out * piv % p
        inv = pow(piv, p - 2, p)
        f = M[c + 1:, c] * inv % p
        M[c + 1:, c:] = (M[c + 1:, c:] - f[:, None] * M[c, c:]) % p
    return out % p


def inverse(m, field: Field = QQ) -> np.ndarray:
    M = _prepare(m, field)
    n = M.shape[0]
    if M.shape != (n, n):
        raise DimensionMismatch("inverse of a non-square matrix")
    R, piv = rref(np.concatenate([M, field.identity(n)], axis=1), field, pivot_limit=n)
    if len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    return R[:, n:]


def matmul(a, b, field: Field = QQ) -> np.ndarray:
    a = _prepare(a, field) if np.asarray(a).ndim == 2 else np.asarray(a)
    b = np.asarray(b)
    if field.p is None:
        return np.dot(a.astype(object), b.astype(object))
    p = field.p
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    # split to keep int64 partial sums exact
    lo = b & 0xFFFF
    hi = b >> 16
    return ((a @ lo) % p + ((a @ hi) % p) * 65536) % p


def left_kernel(m, field: Field = GF) -> np.ndarray:
    """Basis (rows) of ``{c : c @ m = 0}`` in reduced form."""
    M = _prepare(m, field)
    rows, cols = M.shape
    full, piv = rref(np.concatenate([M, field.identity(rows)], axis=1), field)
    ker = [row[cols:] for row, c in zip(full, piv) if c >= cols]
    if not ker:
        return field.zeros((0, rows))
    return np.array(ker, dtype=field.dtype)


def solve(a, b, field: Field = QQ) -> np.ndarray:
    """A particular solution ``x`` of ``a @ x = b`` (free variables zero).

    ``b`` may be a vector or a matrix of right-hand sides.
    """
    A = _prepare(a, field)
    B = np.asarray(b)
    vec = B.ndim == 1
    B = _prepare(B.reshape(-1, 1) if vec else B, field)
    n = A.shape[1]
    R, piv = rref(np.concatenate([A, B], axis=1), field)
    if piv and piv[-1] >= n:
        raise ValueError("inconsistent linear system")
    X = field.zeros((n, B.shape[1]))
    for row, c in zip(R, piv):
        X[c] = row[n:]
    return X[:, 0] if vec else X


@dataclass(frozen=True, eq=False)
class Subspace:
    """Row space of a matrix, stored in reduced row-echelon form."""

    field: Field
    ambient_dim: int
    basis: np.ndarray
    pivots: tuple[int, ...]

    @classmethod
    def span(cls, rows, ambient_dim: int | None = None, field: Field = GF) -> Subspace:
        a = np.asarray(rows)
        if a.size == 0:
            if ambient_dim is None:
                raise ValueError("ambient_dim needed for an empty span")
            return cls.zero(ambient_dim, field)
        if a.ndim == 1:
            a = a.reshape(1, -1)
        if ambient_dim is not None and a.shape[1] != ambient_dim:
            raise DimensionMismatch(f"rows have width {a.shape[1]}, ambient is {ambient_dim}")
        R, piv = rref(a, field)
        return cls(field, a.shape[1], R, tuple(piv))

    @classmethod
    def zero(cls, ambient_dim: int, field: Field = GF) -> Subspace:
        return cls(field, ambient_dim, field.zeros((0, ambient_dim)), ())

    @classmethod
    def full(cls, ambient_dim: int, field: Field = GF) -> Subspace:
        return cls(field, ambient_dim, field.identity(ambient_dim), tuple(range(ambient_dim)))

    @classmethod
    def coordinate(cls, ambient_dim: int, indices: Iterable[int], field: Field = GF) -> Subspace:
        idx = sorted(set(indices))
        B = field.zeros((len(idx), ambient_dim))
        for r, c in enumerate(idx):
            B[r, c] = 1 if field.p is not None else Fraction(1)
        return cls(field, ambient_dim, B, tuple(idx))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def projective_dim(self) -> int:
        return self.dim - 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and bool(np.all(self.basis == other.basis))
        )

    __hash__ = None  # type: ignore[assignment]

    def __le__(self, other: Subspace) -> bool:
        return other.contains(self)

    def contains(self, other: Subspace) -> bool:
        _check(self, other)
        if other.dim == 0:
            return True
        return join(self, other).dim == self.dim

    def contains_vector(self, v) -> bool:
        return self.contains(Subspace.span(np.asarray(v).reshape(1, -1), self.ambient_dim, self.field))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, field={self.field})"


def echelon(m, field: Field = GF, ambient_dim: int | None = None) -> Subspace:
    return Subspace.span(m, ambient_dim, field)


def _check(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(f"ambient {a.ambient_dim} vs {b.ambient_dim}")
    if a.field != b.field:
        raise DimensionMismatch(f"field {a.field} vs {b.field}")


def join(a: Subspace, b: Subspace) -> Subspace:
    _check(a, b)
    if b.dim == 0:
        return a
    if a.dim == 0:
        return b
    return Subspace.span(np.concatenate([a.basis, b.basis]), a.ambient_dim, a.field)


def join_all(spaces: Sequence[Subspace]) -> Subspace:
    first = spaces[0]
    rows = [s.basis for s in spaces if s.dim]
    if not rows:
        return first
    return Subspace.span(np.concatenate(rows), first.ambient_dim, first.field)


def annihilator(a: Subspace) -> Subspace:
    """``{v : basis @ v = 0}`` under the standard pairing."""
    n, F = a.ambient_dim, a.field
    free = [c for c in range(n) if c not in set(a.pivots)]
    K = F.zeros((len(free), n))
    one = 1 if F.p is not None else Fraction(1)
    for r, c in enumerate(free):
        K[r, c] = one
        for row, pc in zip(a.basis, a.pivots):
            K[r, pc] = -row[c] if F.p is None else (-int(row[c])) % F.p
    return Subspace.span(K, n, F) if len(free) else Subspace.zero(n, F)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    _check(a, b)
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim, a.field)
    return annihilator(join(annihilator(a), annihilator(b)))


class PolyMatrix:
    """Matrix with entries in K[t], stored as a coefficient cube.

    ``coeffs[i, j, d]`` is the coefficient of ``t**d`` in entry ``(i, j)``.
    """

    def __init__(self, coeffs, field: Field = GF):
        c = np.asarray(coeffs)
        if c.ndim != 3:
            raise ValueError("coefficient cube must have shape (rows, cols, degree+1)")
        self.field = field
        self.coeffs = _prepare(c.reshape(c.shape[0], -1), field).reshape(c.shape) if c.size else field.zeros(c.shape)

    @classmethod
    def constant(cls, m, field: Field = GF) -> PolyMatrix:
        a = np.asarray(m)
        return cls(a.reshape(a.shape[0], a.shape[1], 1), field)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Sequence]], field: Field = GF) -> PolyMatrix:
        """Entries given as coefficient lists ``[c0, c1, ...]``."""
        r = len(rows)
        c = len(rows[0]) if r else 0
        d = max((len(e) for row in rows for e in row), default=1)
        cube = field.zeros((r, c, max(d, 1)))
        for i, row in enumerate(rows):
            for j, e in enumerate(row):
                for k, x in enumerate(e):
                    cube[i, j, k] = field.scalar(x)
        return cls(cube, field)

    @classmethod
    def stack(cls, parts: Sequence[PolyMatrix]) -> PolyMatrix:
        F = parts[0].field
        d = max(p.coeffs.shape[2] for p in parts)
        cubes = []
        for p in parts:
            pad = d - p.coeffs.shape[2]
            c = p.coeffs
            if pad:
                c = np.concatenate([c, F.zeros((c.shape[0], c.shape[1], pad))], axis=2)
            cubes.append(c)
        return cls(np.concatenate(cubes, axis=0), F)

    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs.shape[0], self.coeffs.shape[1]

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(np.any(self.coeffs.reshape(-1, self.coeffs.shape[2]) != 0, axis=0))
        return int(nz[-1]) if nz.size else 0

    def evaluate(self, t) -> np.ndarray:
        F = self.field
        t = F.scalar(t)
        out = self.coeffs[:, :, -1].copy()
        for d in range(self.coeffs.shape[2] - 2, -1, -1):
            out = F.reduce(out * t + self.coeffs[:, :, d])
        return out

    def generic_rank(self, rng: np.random.Generator, samples: int = 3) -> tuple[int, object]:
        best, best_t = -1, None
        for _ in range(samples):
            t = _sample_t(self.field, rng)
            r = rank(self.evaluate(t), self.field)
            if r > best:
                best, best_t = r, t
        return best, best_t


def _sample_t(field: Field, rng: np.random.Generator):
    if field.p is None:
        return Fraction(int(rng.integers(2, 10**6)))
    return int(rng.integers(2, field.p))


def flat_limit(f: PolyMatrix, seed: int = 0, samples: int = 3, expected_rank: int | None = None) -> Subspace:
    """Limit at ``t = 0`` of the row spaces of ``f``.

    Rows independent over K(t) are selected at a random sample of ``t``;
    then, while their values at ``t = 0`` are dependent, every dependency
    ``c`` replaces one row by ``(c @ rows) / t``.  Each replacement lowers
    the t-adic valuation of the maximal minors, so the loop ends with a
    basis whose constant terms span the limit.
    """
    F = f.field
    rng = np.random.default_rng(seed)
    r, t0 = f.generic_rank(rng, samples)
    if expected_rank is not None and r < expected_rank:
        raise DegenerateFamily(f"family rank {r} < expected {expected_rank} at all sampled t")
    ncols = f.shape[1]
    if r == 0:
        return Subspace.zero(ncols, F)
    _, rows = rref(f.evaluate(t0).T, F)
    P = f.coeffs[np.asarray(rows)].copy()
    while True:
        P0 = P[:, :, 0]
        ker = left_kernel(P0, F)
        if ker.shape[0] == 0:
            return Subspace.span(P0, ncols, F)
        # each kernel row has a unit at a distinct leading index
        lead = [int(np.flatnonzero(k != 0)[0]) for k in ker]
        flat = P.reshape(P.shape[0], -1)
        if F.p is None:
            combo = np.dot(ker, flat)
        else:
            combo = matmul(ker, flat, F)
        combo = combo.reshape(len(ker), P.shape[1], P.shape[2])
        if np.any(combo[:, :, 0] != 0):
            raise ArithmeticError("kernel combination does not vanish at t = 0")
        shifted = F.zeros(combo.shape)
        shifted[:, :, :-1] = combo[:, :, 1:]
        P[lead] = shifted
        if P.shape[2] > 1 and not np.any(P[:, :, -1] != 0):
            P = P[:, :, :-1]
