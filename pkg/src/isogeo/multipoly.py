"""Sparse multivariate polynomials with exact integer or rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

Exps = tuple  # exponent vector, one entry per variable


class MultiPoly:
    """Polynomial as a map from exponent tuples to nonzero coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exps, int | Fraction] | None = None):
        self.nvars = nvars
        self.terms: dict[Exps, int | Fraction] = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
                if c:
                    self.terms[tuple(e)] = _normal(c)

    @classmethod
    def constant(cls, nvars: int, c) -> MultiPoly:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> MultiPoly:
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    def copy(self) -> MultiPoly:
        out = MultiPoly(self.nvars)
        out.terms = dict(self.terms)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.constant(self.nvars, other)
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def _coerce(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials live in different rings")
            return other
        return MultiPoly.constant(self.nvars, other)

    def __add__(self, other) -> MultiPoly:
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        res = MultiPoly(self.nvars)
        res.terms = out
        return res

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        res = MultiPoly(self.nvars)
        res.terms = {e: -c for e, c in self.terms.items()}
        return res

    def __sub__(self, other) -> MultiPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> MultiPoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> MultiPoly:
        if not isinstance(other, MultiPoly):
            if not other:
                return MultiPoly(self.nvars)
            res = MultiPoly(self.nvars)
            res.terms = {e: _normal(c * other) for e, c in self.terms.items()}
            return res
        other = self._coerce(other)
        out: dict[Exps, int | Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> MultiPoly:
        out = MultiPoly.constant(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def var_degree(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def coefficient(self, e: Sequence[int]):
        return self.terms.get(tuple(e), 0)

    def items(self) -> Iterator[tuple[Exps, int | Fraction]]:
        return iter(sorted(self.terms.items()))

    def evaluate(self, point: Sequence, p: int | None = None):
        """Value at ``point``; reduced mod ``p`` when given."""
        point = _plain(point)
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * (x ** k if p is None else pow(int(x), k, p))
            total += term
            if p is not None:
                total %= p
        if p is not None:
            return _mod(total, p)
        return total

    def shift(self, center: Sequence, max_degree: int | None = None, p: int | None = None) -> MultiPoly:
        """The polynomial ``x -> f(center + x)``, truncated to ``max_degree``."""
        center = _plain(center)
        out: dict[Exps, int | Fraction] = {}
        for e, c in self.terms.items():
            ranges = [range(k + 1) for k in e]
            for beta in product(*ranges):
                if max_degree is not None and sum(beta) > max_degree:
                    continue
                term = c
                for x, a, b in zip(center, e, beta):
                    if a:
                        term = term * comb(a, b)
                        if a > b:
                            term = term * (x ** (a - b) if p is None else pow(x, a - b, p))
                if p is not None:
                    term = _mod(term, p)
                out[beta] = out.get(beta, 0) + term
        if p is not None:
            out = {e: v % p for e, v in out.items()}
        return MultiPoly(self.nvars, out)

    def substitute_linear(self, images: Sequence[MultiPoly]) -> MultiPoly:
        """Compose with the substitution ``x_i -> images[i]``."""
        m = images[0].nvars
        out = MultiPoly(m)
        for e, c in self.terms.items():
            term = MultiPoly.constant(m, c)
            for i, k in enumerate(e):
                if k:
                    term = term * images[i] ** k
            out = out + term
        return out

    def to_json(self) -> list[dict]:
        return [{"exps": list(e), "coeff": str(c)} for e, c in self.items()]

    @classmethod
    def from_json(cls, nvars: int, terms: Iterable[Mapping]) -> MultiPoly:
        return cls(nvars, {tuple(t["exps"]): Fraction(t["coeff"]) for t in terms})

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.items():
            mono = "*".join(f"x{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)


def _plain(values: Sequence) -> list:
    return [int(x) if isinstance(x, np.integer) else x for x in values]


def _normal(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


def _mod(x, p: int) -> int:
    if isinstance(x, Fraction):
        return x.numerator % p * pow(x.denominator % p, -1, p) % p
    return int(x) % p


def det_poly(entries: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Determinant by Laplace expansion along the first row, memoised on columns."""
    k = len(entries)
    if k == 0:
        raise ValueError("empty matrix; use the constant 1 explicitly")
    nvars = entries[0][0].nvars
    memo: dict[tuple[int, tuple[int, ...]], MultiPoly] = {}

    def rec(r: int, cols: tuple[int, ...]) -> MultiPoly:
        if r == k:
            return MultiPoly.constant(nvars, 1)
        key = (r, cols)
        if key in memo:
            return memo[key]
        acc = MultiPoly(nvars)
        for q, c in enumerate(cols):
            if entries[r][c]:
                sub = rec(r + 1, cols[:q] + cols[q + 1:])
                term = entries[r][c] * sub
                acc = acc + (term if q % 2 == 0 else -term)
        memo[key] = acc
        return acc

    return rec(0, tuple(range(k)))
