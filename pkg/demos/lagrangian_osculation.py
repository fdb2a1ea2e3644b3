"""Osculating spaces of the Lagrangian Grassmannian, computed three ways.

For n <= 3 the jets, the paired basis and the counting formula agree.
From n = 4 on the 2x2 minors of a symmetric matrix become linearly
dependent, and the jets fall short of the pair count.
"""
from __future__ import annotations

from math import comb

from isogeo.embed import LG, lg_plucker
from isogeo.exactlinalg import GF
from isogeo.osculate import osc_basis, osc_dim_formula, osc_space_jets


def main() -> None:
    for n in (2, 3, 4):
        f = lg_plucker(n)
        print(f"LG({n},{2 * n}) in P^{f.ambient_dim}")
        print("  s  jets  basis  formula")
        for s in range(n + 1):
            jets = osc_space_jets(f, s, GF).projective_dim
            basis = osc_basis(LG, n, s, GF).projective_dim
            print(f"  {s}  {jets:4d}  {basis:5d}  {osc_dim_formula(LG, n, s):7d}")
        span = comb(2 * n, n) - comb(2 * n, n - 2) - 1
        print(f"  linear span of the variety: P^{span}")


if __name__ == "__main__":
    main()
