"""Build a matrix that makes two methods disagree on purpose.

Given any pair of methods and any two strict rankings of four or more
items, the witness generator produces a comparison matrix on which the
first method returns the first ranking and the second method returns
the second.  This script requests a few such matrices and re-derives
both rankings from scratch to show the certificates hold.
"""

import numpy as np

from pairrank import (
    Pair,
    Ranking,
    WitnessRequest,
    generate_witness,
    hodge_scores,
    principal_scores,
    rank_of,
    to_additive,
    to_multiplicative,
    tropical_solve,
)


def recompute(method, matrix):
    if method == "hodge":
        return rank_of(hodge_scores(matrix))
    if method == "tropical":
        return rank_of(tropical_solve(to_additive(matrix)).eigenvector)
    return rank_of(principal_scores(to_multiplicative(matrix)).eigenvector)


def show(pair, sigma1, sigma2):
    req = WitnessRequest(
        n=len(sigma1.order),
        pair=pair,
        sigma1=sigma1,
        sigma2=sigma2,
    )
    result = generate_witness(req)
    first, second = pair.methods

    print(f"{pair.value}: want {first} -> {sigma1}, {second} -> {sigma2}")
    print(np.array_str(result.matrix.entries, precision=4))
    got1 = recompute(first, result.matrix)
    got2 = recompute(second, result.matrix)
    ok1 = "ok" if got1 == sigma1 else "MISMATCH"
    ok2 = "ok" if got2 == sigma2 else "MISMATCH"
    print(f"  {first:<10} recomputed {got1}  [{ok1}]")
    print(f"  {second:<10} recomputed {got2}  [{ok2}]")
    params = result.parameters
    knobs = [f"{k}={v}" for k, v in (
        ("k", params.k), ("epsilon", params.epsilon),
        ("L", params.L), ("delta", params.delta),
    ) if v is not None]
    print(f"  construction knobs: {', '.join(knobs)}")
    print()


def main():
    # Fully reversed rankings are the hardest request: every single pair
    # of items must be ordered differently by the two methods.
    forward = Ranking.from_string("1>2>3>4")
    backward = Ranking.from_string("4>3>2>1")
    show(Pair.HODGE_TROPICAL, forward, backward)
    show(Pair.HODGE_PRINCIPAL, forward, backward)
    show(Pair.TROPICAL_PRINCIPAL, Ranking.from_string("2>1>4>3"),
         Ranking.from_string("3>4>1>2"))

    # A five-item request with two unrelated rankings.
    show(Pair.HODGE_TROPICAL, Ranking.from_string("5>1>4>2>3"),
         Ranking.from_string("2>4>1>5>3"))


if __name__ == "__main__":
    main()
