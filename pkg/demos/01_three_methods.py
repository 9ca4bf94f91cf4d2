"""Three ways to score one comparison matrix.

Loads a stored 4x4 multiplicative matrix whose entries were measured
coarsely enough that the three scoring methods no longer agree, then
prints each method's scores and ranking side by side.
"""

from pathlib import Path

import numpy as np

from pairrank import (
    consistency_index,
    hodge_scores,
    kendall_tau,
    load_matrix,
    principal_scores,
    rank_of,
    to_additive,
    tropical_solve,
)

DATA = Path(__file__).parent / "data" / "disagree_4x4.csv"


def main():
    # The stored entries are rounded to two decimals, so exact reciprocity
    # is lost; a loose tolerance lets the loader repair X[j,i] = 1/X[i,j].
    x = load_matrix(DATA, reciprocity_tol=0.05)
    print(f"matrix ({x.n} items, {x.scale.value} scale):")
    print(np.array_str(x.entries, precision=4))
    print()

    perron = principal_scores(x)
    v = perron.eigenvector.first_unit()
    h = hodge_scores(x).first_unit()
    trop = tropical_solve(to_additive(x))
    m = trop.eigenvector.as_multiplicative().first_unit()

    print("scores, normalized so item 1 gets 1.0:")
    for name, scores in (("principal", v), ("hodge", h), ("tropical", m)):
        ranking = rank_of(scores)
        row = "  ".join(f"{value:7.4f}" for value in scores.values)
        print(f"  {name:<10} {row}   ranking {ranking}")
    print()

    print(f"Perron eigenvalue      {perron.eigenvalue:.6f}")
    print(f"consistency index      {consistency_index(x):.6f}")
    print(f"max mean cycle weight  {trop.eigenvalue:.6f}")
    print(f"critical cycle edges   {sorted(trop.critical_edges)}")
    print()

    # The two spectral methods each see a different winner structure:
    # principal and hodge agree here, tropical promotes item 1 because
    # the heaviest cycle runs through items 2, 3, 4 and drags them down.
    r_v = rank_of(v)
    r_m = rank_of(m)
    flips = kendall_tau(r_v, r_m)
    print(f"principal vs tropical: {flips} discordant pairs ({r_v} vs {r_m})")


if __name__ == "__main__":
    main()
