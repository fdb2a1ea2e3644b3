"""Terracini ranks for a few secant varieties.

Rows inside the proven range come out at the expected dimension. The
last rows are the classical defective cases, where the rank stays below
the expected value on every trial.
"""
from __future__ import annotations

from isogeo.embed import LG, SPIN_MIN, SPIN_PL
from isogeo.secant import secant_evidence, terracini_rank

ROWS = [(LG, 5, 3), (SPIN_PL, 6, 3), (SPIN_MIN, 10, 3)]
DEFECTIVE = [(LG, 4, 3), (SPIN_MIN, 7, 3)]


def main() -> None:
    for tag, n, h in ROWS:
        r = terracini_rank(tag, n, h, trials=5)
        print(f"{tag:8s} n={n:2d} h={h}  dim {r.computed_dim:3d}  expected {r.expected:3d}  {r.verdict}")
    for tag, n, h in DEFECTIVE:
        for r in secant_evidence(tag, n, h, trials=20):
            print(f"{tag:8s} n={n:2d} h={h}  dim {r.computed_dim:3d}  expected {r.expected:3d}  "
                  f"{r.verdict} over {r.field}")


if __name__ == "__main__":
    main()
