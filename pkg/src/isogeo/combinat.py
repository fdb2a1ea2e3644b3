"""Index-set calculus for Plücker and spinor coordinates.

Index sets are 1-based sorted tuples.  ``I0 = (1, ..., n)`` is the base
point of the standard chart ``M = (I_n | A)`` in ``{1, ..., 2n}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

IndexSet = tuple  # sorted tuple of 1-based integers


def index_set(elems: Iterable[int], n: int | None = None) -> IndexSet:
    """Validate and normalise an index set (``2n`` bounds it when given)."""
    t = tuple(sorted(elems))
    if len(set(t)) != len(t):
        raise ValueError(f"repeated index in {t}")
    if t and t[0] < 1:
        raise ValueError(f"indices are 1-based: {t}")
    if n is not None and t and t[-1] > 2 * n:
        raise ValueError(f"index {t[-1]} exceeds 2n = {2 * n}")
    return t


def base_set(n: int) -> IndexSet:
    return tuple(range(1, n + 1))


def hamming(I: Sequence[int], J: Sequence[int]) -> int:
    """``|I| - |I ∩ J|`` for sets of equal size."""
    if len(I) != len(J):
        raise ValueError(f"size mismatch: {len(I)} vs {len(J)}")
    return len(I) - len(set(I) & set(J))


def distance(J: Sequence[int], n: int) -> int:
    """Hamming distance from ``I0``: the number of elements above ``n``."""
    return sum(1 for j in J if j > n)


def mirror(J: Sequence[int], n: int) -> IndexSet:
    """``J' = ((I0 \\ J) + n) ∪ ((I0^c \\ J) - n)``."""
    if len(J) != n:
        raise ValueError(f"|J| = {len(J)}, expected {n}")
    Js = set(J)
    low = [i + n for i in range(1, n + 1) if i not in Js]
    high = [i - n for i in range(n + 1, 2 * n + 1) if i not in Js]
    return tuple(sorted(low + high))


def parity(seq: Sequence[int]) -> int:
    """Sign of the permutation that sorts ``seq`` (distinct entries)."""
    inv = 0
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                inv += 1
    return -1 if inv & 1 else 1


def perm_sign(J: Sequence[int], n: int) -> int:
    """Sign of the row reordering that puts ``M_J`` in block form.

    Rows indexed by ``I0 ∩ J`` come first, then rows ``I0 \\ J``, each in
    increasing order.
    """
    Js = set(J)
    inside = [i for i in range(1, n + 1) if i in Js]
    outside = [i for i in range(1, n + 1) if i not in Js]
    return parity(inside + outside)


def minor_support(J: Sequence[int], n: int) -> tuple[IndexSet, IndexSet]:
    """Rows and columns of ``A`` whose minor gives the chart coordinate ``J``.

    ``det M_J = perm_sign(J) * det A[R, C]`` with ``R = I0 \\ J`` and
    ``C = (J \\ I0) - n`` (1-based row/column labels).
    """
    Js = set(J)
    R = tuple(i for i in range(1, n + 1) if i not in Js)
    C = tuple(j - n for j in J if j > n)
    return R, C


def support_to_index(R: Sequence[int], C: Sequence[int], n: int) -> IndexSet:
    """Inverse of :func:`minor_support`."""
    Rs = set(R)
    return tuple(i for i in range(1, n + 1) if i not in Rs) + tuple(c + n for c in sorted(C))


@dataclass(frozen=True)
class SigmaPair:
    J: IndexSet
    Jp: IndexSet
    signJ: int
    signJp: int
    dist: int

    @property
    def is_singleton(self) -> bool:
        return self.J == self.Jp


@lru_cache(maxsize=None)
def lambda_sets(n: int) -> tuple[IndexSet, ...]:
    """All n-subsets of ``{1..2n}`` ordered by distance from ``I0``, then lex."""
    all_sets = list(combinations(range(1, 2 * n + 1), n))
    return tuple(sorted(all_sets, key=lambda J: (distance(J, n), J)))


@lru_cache(maxsize=None)
def _all_pairs(n: int) -> tuple[SigmaPair, ...]:
    out = []
    for J in lambda_sets(n):
        Jp = mirror(J, n)
        if Jp < J:
            continue
        out.append(SigmaPair(J, Jp, perm_sign(J, n), perm_sign(Jp, n), distance(J, n)))
    return tuple(out)


def sigma_pairs(n: int, s: int | None = None) -> list[SigmaPair]:
    """Mirror pairs with distance ``<= s``, lexicographically smaller member first."""
    if s is not None and s < 0:
        return []
    if s is not None and s > n:
        raise ValueError(f"s = {s} exceeds n = {n}")
    return [P for P in _all_pairs(n) if s is None or P.dist <= s]


def lg_coordinate_count(n: int, k: int) -> int:
    """Paired coordinates at distance ``k``: ``C(n,k)(C(n,k)+1)/2``."""
    c = comb(n, k)
    return c * (c + 1) // 2


def even_subsets(n: int) -> tuple[IndexSet, ...]:
    """Even subsets of ``{1..n}`` by size, then lex; ``()`` first."""
    return _even_subsets(n)


@lru_cache(maxsize=None)
def _even_subsets(n: int) -> tuple[IndexSet, ...]:
    out: list[IndexSet] = []
    for k in range(0, n + 1, 2):
        out.extend(combinations(range(1, n + 1), k))
    return tuple(out)


class GammaFamily:
    """The even subsets of ``{1..n}`` with the pair structure ``Λ``.

    The basic pairs are ``{1,2},{3,4},...`` when ``n`` is even and
    ``{2,3},{4,5},...`` when ``n`` is odd; ``Λ`` is the set of their
    unions, ``∅`` included.
    """

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        start = 1 if n % 2 == 0 else 2
        self.blocks: tuple[IndexSet, ...] = tuple((i, i + 1) for i in range(start, n, 2))
        self.gamma: tuple[IndexSet, ...] = even_subsets(n)
        self._pos = {I: k for k, I in enumerate(self.gamma)}

    def index(self, I: Sequence[int]) -> int:
        return self._pos[tuple(I)]

    def gamma_k(self, k: int) -> list[IndexSet]:
        """``Γ_k``: members of size at most ``2k``."""
        return [J for J in self.gamma if len(J) <= 2 * k]

    def lam(self) -> list[IndexSet]:
        """``Λ``: unions of basic pairs, graded-lex order."""
        out = []
        for k in range(len(self.blocks) + 1):
            for chosen in combinations(self.blocks, k):
                out.append(tuple(sorted(x for b in chosen for x in b)))
        return sorted(out, key=lambda J: (len(J), J))

    def blocks_in(self, I: Sequence[int]) -> list[IndexSet]:
        s = set(I)
        return [b for b in self.blocks if b[0] in s and b[1] in s]

    def alpha(self, I: Sequence[int]) -> int:
        """Number of basic pairs contained in ``I``."""
        return len(self.blocks_in(I))

    def minus(self, I: Sequence[int]) -> list[IndexSet]:
        """``Γ⁻_I``: ``I`` minus a union of basic pairs lying in ``I``."""
        inside = self.blocks_in(I)
        out = []
        for k in range(len(inside) + 1):
            for chosen in combinations(inside, k):
                drop = {x for b in chosen for x in b}
                out.append(tuple(x for x in I if x not in drop))
        return sorted(out, key=lambda J: (len(J), J))

    def plus(self, J: Sequence[int]) -> list[IndexSet]:
        """``Γ⁺_J``: ``J`` plus a union of basic pairs disjoint from ``J``."""
        s = set(J)
        free = [b for b in self.blocks if b[0] not in s and b[1] not in s]
        out = []
        for k in range(len(free) + 1):
            for chosen in combinations(free, k):
                out.append(tuple(sorted(s.union(x for b in chosen for x in b))))
        return sorted(out, key=lambda K: (len(K), K))


def gamma_family(n: int) -> GammaFamily:
    return GammaFamily(n)
