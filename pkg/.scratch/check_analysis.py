"""Smoke checks for analysis.py and the shifted log power iteration."""
import time

import numpy as np

from pairrank.analysis import (
    DisagreementReport,
    GaussianUpperTriangle,
    SimulationConfig,
    TrajectoryPoint,
    UniformSTperp,
    consistency_index,
    hadamard_trajectory,
    kendall_tau,
    monte_carlo_disagreement,
)
from pairrank.core import (
    ComparisonMatrix,
    Ranking,
    Scale,
    ScoreVector,
    to_multiplicative,
)
from pairrank.methods import tropical_solve

# 1. kendall_tau on pinned examples
r_a = Ranking((3, 4, 1, 2))
r_b = Ranking((1, 3, 2, 4))
assert kendall_tau(r_a, r_b) == 3, kendall_tau(r_a, r_b)
r_rev = Ranking((4, 3, 2, 1))
r_fwd = Ranking((1, 2, 3, 4))
assert kendall_tau(r_fwd, r_rev) == 6
assert kendall_tau(r_fwd, r_fwd) == 0

# 2. criterion-6 contract at scale: random 4x4 and 5x5 MPCMs with unique m,
#    err(k=1000) < 1e-2 and err(1000) < err(100) in >= 95% of cases
rng = np.random.default_rng(42)
t0 = time.time()
wins = total = 0
worst = 0.0
for trial in range(40):
    n = 4 if trial % 2 == 0 else 5
    g = np.triu(rng.normal(0.0, 1.0, size=(n, n)), 1)
    a = ComparisonMatrix(g - g.T, Scale.ADDITIVE)
    sol = tropical_solve(a)
    if not sol.unique:
        continue
    m = sol.eigenvector.values
    m_c = m - m.mean()
    x = to_multiplicative(a)
    errs = {}
    pts = hadamard_trajectory(x, k_grid=[100.0, 1000.0])
    for pt in pts:
        assert pt.converged, f"trial {trial}: no convergence at k={pt.k}"
        log_v = pt.log_v
        est = log_v / pt.k
        est_c = est - est.mean()
        errs[pt.k] = float(np.max(np.abs(est_c - m_c)))
    assert errs[1000.0] < 1e-2, (trial, errs)
    worst = max(worst, errs[1000.0])
    total += 1
    if errs[1000.0] < errs[100.0]:
        wins += 1
print(f"criterion-6 sample: {total} matrices, worst err(k=1000) = {worst:.3e}, "
      f"1000 beats 100 in {wins}/{total}  [{time.time()-t0:.1f}s]")
assert wins / total >= 0.95

# 3. example-2 matrix trajectory: 3>4>1>2 at k=1, 1>3>2>4 across [31, 60]
entries = np.ones((4, 4))
vals = {

    (1, 2): 1.57862709, (1, 3): 0.72231512, (1, 4): 0.69480833,
    (2, 3): 1.52920291, (2, 4): 0.65393545, (3, 4): 1.57862709,
}
for (i, j), v in vals.items():
    entries[i - 1, j - 1] = v
    entries[j - 1, i - 1] = 1.0 / v
x2 = ComparisonMatrix(entries, Scale.MULTIPLICATIVE)
pts = hadamard_trajectory(x2, k_grid=[1.0, 31.0, 40.0, 50.0, 60.0])
assert pts[0].ranking == Ranking((3, 4, 1, 2)), pts[0].ranking
for pt in pts[1:]:
    assert pt.ranking == Ranking((1, 3, 2, 4)), (pt.k, pt.ranking)
print("example-2 trajectory endpoints ok")

# consistency index of the example matrix (honest-red pin: 0.07636915804...)
ci = consistency_index(x2)
print(f"consistency index = {ci:.12f}")
assert abs(ci - 0.07636915804128049) < 1e-9

# default grid runs end to end
t0 = time.time()
pts = hadamard_trajectory(x2)
assert len(pts) == 60
assert all(p.converged for p in pts)
assert all(p.v_normalized[0] == 1.0 for p in pts)
print(f"default 60-point grid ok  [{time.time()-t0:.1f}s]")

# 4. monte carlo: serial == parallel, (seed, t) keying, n=3 zero disagreements
cfg = SimulationConfig(n=4, trials=400, noise=GaussianUpperTriangle(1.0), seed=7)
t0 = time.time()
rep1 = monte_carlo_disagreement(cfg, jobs=1)
t1 = time.time()
rep2 = monte_carlo_disagreement(cfg, jobs=4)
t2 = time.time()
assert rep1 == rep2, (rep1, rep2)
assert rep1.counts["hodge-tropical"] > 0
print(f"serial {t1-t0:.1f}s vs parallel {t2-t1:.1f}s; counts {rep1.counts}, "
      f"degenerate {rep1.degenerate}, failures {rep1.failures}")

cfg3 = SimulationConfig(n=3, trials=400, noise=GaussianUpperTriangle(1.0), seed=7)
rep3 = monte_carlo_disagreement(cfg3)
assert all(c == 0 for c in rep3.counts.values()), rep3.counts
print("n=3 zero disagreements ok")

# ST perp noise model draws valid skew patterns
cfgp = SimulationConfig(n=5, trials=50, noise=UniformSTperp(2.0), seed=3)
repp = monte_carlo_disagreement(cfgp)
print(f"STperp run ok: counts {repp.counts}")

# determinism of single draws under (seed, t) keying
d1 = GaussianUpperTriangle(1.0).draw(np.random.default_rng((7, 123)), 4)
d2 = GaussianUpperTriangle(1.0).draw(np.random.default_rng((7, 123)), 4)
assert np.array_equal(d1, d2)
assert np.allclose(d1, -d1.T)
print("all analysis checks passed")
