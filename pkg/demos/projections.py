"""Projecting from an osculating space and inverting the projection.

A generic point of the Lagrangian Grassmannian is recovered exactly
from the coordinates that survive the projection. The spinor variety
S_3 is the Veronese threefold, and projecting it from a tangent space
contracts lines.
"""
from __future__ import annotations

import numpy as np

from isogeo.embed import LG, SPIN_PL, ChartPoint
from isogeo.exactlinalg import QQ
from isogeo.secant import generic_finiteness, osculating_projection, reconstruct_inverse


def main() -> None:
    setup = osculating_projection(LG, 4, 2, QQ)
    p = ChartPoint.random(4, setup.projected.shape, QQ, np.random.default_rng(5), bound=10**6)
    image = setup.projected.evaluate(p)
    q = reconstruct_inverse(LG, 4, 2, image, QQ)
    print(f"LG(4,8) from T^2: {len(image)} surviving coordinates")
    for row in p.A:
        print("  ", [int(x) for x in row])
    print("recovered exactly:", np.array_equal(p.A, q.A))

    rep = generic_finiteness(osculating_projection(SPIN_PL, 3, 1))
    print(f"S_3 from T^1: {rep.verdict}, fiber dimension {rep.fiber_dim}, image rank {rep.image_rank}")


if __name__ == "__main__":
    main()
