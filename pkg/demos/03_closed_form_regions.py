"""Closed-form tropical eigenvectors for four items.

On the additive scale every 4x4 comparison matrix falls into one of a
finite catalog of cones, and inside each cone the tropical eigenpair is
a fixed linear formula of three cycle coordinates.  This script
classifies a few matrices, prints the formula output next to the
general solver's answer, then measures how often each region type shows
up for random inputs.
"""

import numpy as np

from pairrank import (
    ComparisonMatrix,
    Scale,
    classify_region4,
    f_products4,
    tropical_closed_form4,
    tropical_solve,
)
from pairrank.errors import BoundaryCase


def from_cycle_coords(f1, f2, f3):
    """A 4x4 additive matrix with prescribed cycle coordinates and no
    transitive part."""
    from pairrank.geometry import f_basis4
    from pairrank.core import matrix_from_upper_triangle

    b1, b2, b3 = f_basis4()
    coords = (f1 * b1.coords.coords + f2 * b2.coords.coords
              + f3 * b3.coords.coords) / 4.0
    return matrix_from_upper_triangle(coords, 4)


def inspect(label, m):
    print(f"{label}:")
    try:
        match = classify_region4(m)
    except BoundaryCase as exc:
        print(f"  on a region boundary ({exc}); no single formula applies")
        print()
        return
    region = match.region
    print(f"  region {region.name} ({region.facet} facet), "
          f"relabeling tau = {match.tau}")
    print(f"  cycle coordinates F = {np.round(match.f_original, 4)}")

    closed = tropical_closed_form4(m)
    direct = tropical_solve(m)
    gap = np.max(np.abs(
        (closed.eigenvector.values - np.mean(closed.eigenvector.values))
        - (direct.eigenvector.values - np.mean(direct.eigenvector.values))
    ))
    print(f"  eigenvalue: formula {closed.eigenvalue:.6f}, "
          f"solver {direct.eigenvalue:.6f}")
    print(f"  eigenvector gap (sum-zero): {gap:.2e}")
    print()


def census(trials=10000, seed=11):
    rng = np.random.default_rng(seed)
    names = {}
    boundary = 0
    for _ in range(trials):
        g = np.triu(rng.normal(0.0, 1.0, size=(4, 4)), 1)
        m = ComparisonMatrix(g - g.T, Scale.ADDITIVE)
        try:
            match = classify_region4(m)
        except BoundaryCase:
            boundary += 1
            continue
        key = (match.region.name, match.region.facet)
        names[key] = names.get(key, 0) + 1
    print(f"region census over {trials} random draws (seed {seed}):")
    for (name, facet), count in sorted(names.items(), key=lambda kv: -kv[1]):
        print(f"  {name:<6} {facet:<8} {count:6d}  ({count / trials:.1%})")
    if boundary:
        print(f"  within numerical margin of a boundary: {boundary}")


def main():
    inspect("hexagon-facet point F = (5, 2, 1)", from_cycle_coords(5, 2, 1))
    inspect("square-facet point F = (10, 2, 1)", from_cycle_coords(10, 2, 1))
    inspect("relabeled interior point F = (2, 5, 1)", from_cycle_coords(2, 5, 1))
    inspect("boundary point F = (6, 2, 1)", from_cycle_coords(6, 2, 1))

    m = from_cycle_coords(5, 2, 1)
    print(f"cycle products for the first point: "
          f"{np.round(f_products4(m), 4)}")
    print()

    census()


if __name__ == "__main__":
    main()
