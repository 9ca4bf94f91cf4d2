import itertools
import time
from fractions import Fraction

import numpy as np

from pairrank.core import (Ranking, Scale, ScoreVector, rank_of, to_additive)
from pairrank.methods import hodge_scores, principal_scores, tropical_solve
from pairrank.witness import (
    Pair, PerturbationSpec, WitnessRequest, base_hodge_zero_tropical_generic,
    default_perturbation, generate_witness, perturbed_closed_form,
    perturbed_entries, perturbed_matrix, witness_hodge_principal,
    witness_hodge_tropical, witness_tropical_principal)

# 1. closed form vs dense eigensolver across parameter sets
print("== closed form ==")
specs = [default_perturbation(4), default_perturbation(5), default_perturbation(6),
         default_perturbation(4, Fraction(3)), default_perturbation(7, Fraction(5, 2)),
         PerturbationSpec(5, Fraction(2), (Fraction(6, 5), Fraction(7, 4), Fraction(2), Fraction(1, 4)))]
for spec in specs:
    eig = perturbed_closed_form(spec)
    x = perturbed_matrix(spec)
    ew, ev = np.linalg.eig(x.entries)
    i = np.argmax(ew.real)
    lam = ew[i].real
    v_true = np.abs(ev[:, i].real)
    gap_l = abs(eig.r - lam)
    gap_v = np.max(np.abs(eig.v.values / eig.v.values[0] - v_true / v_true[0]))
    print(f"  n={spec.n} L={spec.L}: |r-lam|={gap_l:.2e}  |v-v_true|={gap_v:.2e}")
    assert gap_l < 1e-10 and gap_v < 1e-10

# rational reciprocity of the exact entries
ex = perturbed_entries(default_perturbation(5))
assert all(ex[i][j] * ex[j][i] == 1 for i in range(5) for j in range(5) if i != j)
print("  rational reciprocity exact: ok")

# example pinned numbers for n=4 default
spec4 = default_perturbation(4)
a = sum(x - 1 for x in spec4.delta); b = sum((x - 1) * (1 / x - 1) for x in spec4.delta)
c = sum(1 / x - 1 for x in spec4.delta)
print(f"  n=4 default: a={a} b={b} c={c}")
assert (a, b, c) == (Fraction(3, 4), Fraction(-35, 12), Fraction(13, 6))
eig4 = perturbed_closed_form(spec4)
print(f"  r={eig4.r!r}  v1=(r-n+1)r={eig4.r * (eig4.r - 3):.12g} vs {eig4.v.values[0]:.12g}")
assert abs(eig4.v.values[0] - (eig4.r - 3) * eig4.r) < 1e-12

# 2. base construction properties, n = 4..8
print("== base matrices ==")
for n in range(4, 9):
    t0 = time.perf_counter()
    base = base_hodge_zero_tropical_generic(n)
    dt = time.perf_counter() - t0
    h = hodge_scores(base)
    sol = tropical_solve(base)
    r = rank_of(sol.eigenvector)
    assert np.max(np.abs(h.values)) < 1e-12, (n, h.values)
    assert sol.unique
    print(f"  n={n}: h_max={np.max(np.abs(h.values)):.1e} unique={sol.unique} "
          f"rank={r} lam={sol.eigenvalue:.6g}  ({dt*1e3:.1f} ms)")
    if n >= 5:
        # row maxima on the cycle, cycle critical, values decreasing
        e = base.entries
        cyc = [(i, i + 1) for i in range(1, n)] + [(n, 1)]
        vals = [e[i - 1, j - 1] for i, j in cyc]
        assert all(vals[t] > vals[t + 1] for t in range(n - 2)) and vals[-1] > 0
        mu = np.mean(vals)
        assert np.min(np.abs(np.array(vals) - mu)) > 1e-9
        assert abs(sol.eigenvalue - mu) < 1e-9
        for i in range(1, n + 1):
            row = e[i - 1]
            assert np.sum(row >= row.max() - 1e-9) == 1
        # two-chain pattern from the critical-cycle equations:
        # descending m_1 > ... > m_j, ascending m_j < ... < m_n, m_n < m_1
        m = sol.eigenvector.values
        lam = sol.eigenvalue
        above = [t for t in range(n - 1) if vals[t] > lam]
        j = len(above) + 1
        assert above == list(range(j - 1)), (above, j)
        assert all(m[t] > m[t + 1] for t in range(j - 1))
        assert all(m[t] < m[t + 1] for t in range(j - 1, n - 1))
        assert m[n - 1] < m[0]
        print(f"    two-chain pattern ok, j={j}, order={r.order}")

# 3. witnesses across random ranking pairs
print("== witnesses ==")
rng = np.random.default_rng(0)
def rand_ranking(n):
    return Ranking(tuple(int(v) for v in rng.permutation(n) + 1))

for pair in Pair:
    t0 = time.perf_counter()
    count = 0
    for n in (4, 5):
        for _ in range(25):
            s1, s2 = rand_ranking(n), rand_ranking(n)
            req = WitnessRequest(n, pair, s1, s2)
            res = generate_witness(req)
            assert res.verification.ranking1 == s1
            assert res.verification.ranking2 == s2
            count += 1
        # equal-rankings shortcut
        s = rand_ranking(n)
        res = generate_witness(WitnessRequest(n, pair, s, s))
        assert res.verification.ranking1 == s and res.verification.ranking2 == s
        count += 1
    print(f"  {pair.value}: {count} witnesses in {time.perf_counter()-t0:.2f}s")

# all 24x24 pairs at n=4 for hodge-tropical (the hardest cartesian product)
t0 = time.perf_counter()
perms = [Ranking(p) for p in itertools.permutations((1, 2, 3, 4))]
cnt = 0
for s1 in perms:
    for s2 in perms:
        res = witness_hodge_tropical(WitnessRequest(4, Pair.HODGE_TROPICAL, s1, s2))
        cnt += 1
print(f"  hodge-tropical full 24x24 grid: {cnt} in {time.perf_counter()-t0:.2f}s")

# 4. determinism: same request twice gives byte-identical matrices
for pair in Pair:
    req = WitnessRequest(5, pair, Ranking((2, 4, 1, 5, 3)), Ranking((3, 1, 5, 4, 2)))
    r1, r2 = generate_witness(req), generate_witness(req)
    assert np.array_equal(r1.matrix.entries, r2.matrix.entries)
print("  determinism ok")

# 5. request validation
try:
    WitnessRequest(3, Pair.HODGE_TROPICAL, Ranking((1, 2, 3)), Ranking((3, 2, 1)))
    raise AssertionError("n=3 accepted")
except ValueError as e:
    assert "n >= 4" in str(e)
print("  n>=4 validation ok")
print("ALL WITNESS CHECKS PASSED")
