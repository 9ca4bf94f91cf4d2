"""Watching the principal ranking slide toward the tropical one.

Raising every entry of a multiplicative matrix to the power k and
re-solving for the principal eigenvector traces a path: at k near 0 the
ranking matches the row-geometric-mean (hodge) ranking, and as k grows
it settles on the tropical ranking.  The stored example flips from
3>4>1>2 to 1>3>2>4 along the way.
"""

from pathlib import Path

import numpy as np

from pairrank import (
    hadamard_trajectory,
    load_matrix,
    rank_of,
    to_additive,
    tropical_solve,
)

DATA = Path(__file__).parent / "data" / "disagree_4x4.csv"


def main():
    x = load_matrix(DATA, reciprocity_tol=0.05)
    trop = tropical_solve(to_additive(x))
    m = np.asarray(trop.eigenvector.values)
    m_centered = m - m.mean()
    print(f"tropical ranking (the k -> infinity limit): "
          f"{rank_of(trop.eigenvector)}")
    print()

    ks = [0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 31.0, 45.0, 60.0,
          100.0, 1000.0]
    print(f"{'k':>8}  {'v (first item = 1)':<38} {'ranking':<10} "
          f"{'gap to tropical':>15}")
    last = None
    for point in hadamard_trajectory(x, k_grid=ks):
        if not point.converged:
            print(f"{point.k:8.2f}  power iteration did not converge")
            continue
        logs = point.log_v / point.k
        gap = np.max(np.abs((logs - logs.mean()) - m_centered))
        vec = "  ".join(f"{value:7.4f}" for value in point.v_normalized)
        mark = ""
        if last is not None and point.ranking != last:
            mark = "  <- ranking changed"
        print(f"{point.k:8.2f}  {vec:<38} {str(point.ranking):<10} "
              f"{gap:15.6f}{mark}")
        last = point.ranking

    print()
    print("The normalized log scores (1/k) log v(X^(k)) converge to the")
    print("centered tropical eigenvector, so the final column shrinks and")
    print("the ranking column stabilizes on the tropical order.")


if __name__ == "__main__":
    main()
