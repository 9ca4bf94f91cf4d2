"""Validate geometry.py against the general solver before freezing tests."""
import time

import numpy as np

from pairrank.core import (ComparisonMatrix, Scale, ScoreVector, additive_matrix,
                           matrix_from_upper_triangle, multiplicative_matrix,
                           perm_inverse, permute_scores, relabel, rank_of,
                           strongly_transitive_from_scores, to_additive, upper_triangle)
from pairrank.errors import BoundaryCase
from pairrank.geometry import (CANONICAL_GREEN, CANONICAL_R1, classify_region4,
                               cycle_vector, f_basis4, f_products4,
                               m_minus_h_reduction, permutahedron_check4,
                               project_components, t_basis, threecycle_basis,
                               tropical_closed_form4, _MSTACK, _PERMS4)
from pairrank.methods import hodge_scores, tropical_solve

def rand_add(r, n):
    g = np.triu(r.normal(size=(n, n)), 1)
    return ComparisonMatrix(g - g.T, Scale.ADDITIVE)


rng = np.random.default_rng(11)

# f-basis constants
f1, f2, f3 = f_basis4()
print("f1", f1.coords.coords, "f2", f2.coords.coords, "f3", f3.coords.coords)

# M_tau are signed permutations forming a group of order 24
assert _MSTACK.shape == (24, 3, 3)
for M in _MSTACK:
    assert np.array_equal(np.abs(M).sum(axis=0), np.ones(3))
    assert np.array_equal(np.abs(M).sum(axis=1), np.ones(3))
# relabel action correctness on random A
for _ in range(50):
    a = rand_add(rng, 4)
    f = f_products4(a)
    t_idx = rng.integers(24)
    tau = _PERMS4[t_idx]
    fr = f_products4(relabel(a, tau))
    assert np.allclose(fr, _MSTACK[t_idx] @ f, atol=1e-12), (tau, fr, _MSTACK[t_idx] @ f)
print("M_tau action OK")

# build matrix in cycle space with prescribed f-products
def from_f(F):
    u = (F[0] * f1.coords.coords + F[1] * f2.coords.coords + F[2] * f3.coords.coords) / 4.0
    return matrix_from_upper_triangle(u, 4)

# (5,2,1) interior r1, tau identity
m = from_f(np.array([5.0, 2.0, 1.0]))
match = classify_region4(m)
print("classify (5,2,1):", match.region.name, match.tau)
assert match.region.name == "r1" and match.tau == (1, 2, 3, 4)
cf = tropical_closed_form4(m)
gen = tropical_solve(m)
print("closed vs general lambda:", cf.eigenvalue, gen.eigenvalue)
print("closed m:", cf.eigenvector.values, "general m:", gen.eigenvector.values)
assert abs(cf.eigenvalue - gen.eigenvalue) < 1e-12
assert np.allclose(cf.eigenvector.values, gen.eigenvector.values, atol=1e-12)
assert cf.critical_edges == gen.critical_edges, (cf.critical_edges, gen.critical_edges)

# (6,2,1) sits on the hexagon/square wall -> BoundaryCase
try:
    classify_region4(from_f(np.array([6.0, 2.0, 1.0])))
    print("ERROR: (6,2,1) classified")
except BoundaryCase as b:
    print("(6,2,1) -> BoundaryCase", b)

# (10,2,1) green
m = from_f(np.array([10.0, 2.0, 1.0]))
match = classify_region4(m)
assert match.region.name == "green" and match.tau == (1, 2, 3, 4), match
cf, gen = tropical_closed_form4(m), tropical_solve(m)
assert abs(cf.eigenvalue - gen.eigenvalue) < 1e-12
assert np.allclose(cf.eigenvector.values, gen.eigenvector.values, atol=1e-12)
assert cf.critical_edges == gen.critical_edges, (cf.critical_edges, gen.critical_edges)
print("green OK; lambda =", cf.eigenvalue, "= F1/4?", 10 / 4)

# relabeled classify: sigma = cycle (4 2 3): tau maps 4->2,2->3,3->4
# spec example: same A relabeled by sigma -> r1 with tau = sigma^{-1}
sigma = (1, 3, 4, 2)   # 1->1, 2->3, 3->4, 4->2
m = from_f(np.array([5.0, 2.0, 1.0]))
mr = relabel(m, sigma)
match = classify_region4(mr)
print("relabeled classify:", match.region.name, match.tau, "sigma^{-1} =", perm_inverse(sigma))
assert match.tau == perm_inverse(sigma)

# random batch: closed form vs general solver, plus reduction + equivariance
t0 = time.time()
checked = skipped = 0
for i in range(2000):
    a = rand_add(np.random.default_rng(1000 + i), 4)
    try:
        cf = tropical_closed_form4(a)
    except BoundaryCase:
        skipped += 1
        continue
    gen = tropical_solve(a)
    assert abs(cf.eigenvalue - gen.eigenvalue) < 1e-9, i
    assert np.allclose(cf.eigenvector.values, gen.eigenvector.values, atol=1e-9), i
    if gen.unique:
        assert cf.critical_edges == gen.critical_edges, (i, cf.critical_edges, gen.critical_edges)
    checked += 1
print(f"random 4x4 closed-form agreement: {checked} checked, {skipped} boundary-skipped, "
      f"{time.time() - t0:.2f}s")

# exact-once coverage: count clean (tau, region) matches per random generic point
hits_hist = {}
for i in range(4000):
    F = np.random.default_rng(31337 + i).normal(size=3)
    g_all = _MSTACK @ F
    hits = 0
    for t in range(24):
        for reg in (CANONICAL_R1, CANONICAL_GREEN):
            vals = np.asarray(reg.inequalities) @ g_all[t]
            if vals.min() > 0:
                hits += 1
    hits_hist[hits] = hits_hist.get(hits, 0) + 1
print("coverage histogram (should be all 1):", hits_hist)

# t-basis and 3-cycle basis
for n in (3, 4, 5, 6):
    ts = t_basis(n)
    a = rand_add(rng, n)
    u = upper_triangle(a).coords
    for i, t in enumerate(ts):
        assert abs(t.coords @ u - a.entries[i].sum()) < 1e-12
    assert np.allclose(sum(t.coords for t in ts), 0.0)
    cyc = threecycle_basis(n)
    B = np.array([c.coords.coords for c in cyc])
    assert B.shape[0] == (n - 1) * (n - 2) // 2
    assert np.linalg.matrix_rank(B) == B.shape[0]
    T = np.array([t.coords for t in ts])
    assert np.max(np.abs(T @ B.T)) == 0.0
    assert np.linalg.matrix_rank(np.vstack([T, B])) == n * (n - 1) // 2
print("bases OK")

# triangulation identity: s((1,2,3,4)) = s((1,2,3)) + s((1,3,4))
lhs = cycle_vector((1, 2, 3, 4), 4).coords.coords
rhs = cycle_vector((1, 2, 3), 4).coords.coords + cycle_vector((1, 3, 4), 4).coords.coords
assert np.array_equal(lhs, rhs)

# projection: Pythagoras + reduction on random matrices
for i in range(200):
    n = 4 + i % 3
    a = rand_add(np.random.default_rng(7000 + i), n)
    p, r = project_components(a)
    assert np.allclose(a.entries, p.entries + r.entries, atol=1e-12)
    assert abs(np.sum(a.entries**2) - np.sum(p.entries**2) - np.sum(r.entries**2)) < 1e-9
    rep = m_minus_h_reduction(a)
    assert rep.eigenvalue_residual < 1e-9 and rep.eigenvector_residual < 1e-9
print("projection + reduction OK")

# ST matrix -> closed form shortcut
st = strongly_transitive_from_scores(ScoreVector(np.array([0.9, -0.3, 0.1, -0.7]), Scale.ADDITIVE))
cf = tropical_closed_form4(st)
assert cf.eigenvalue == 0.0 and np.allclose(cf.eigenvector.values, hodge_scores(st).values)
try:
    classify_region4(st)
    print("ERROR: ST classified")
except BoundaryCase:
    print("ST -> BoundaryCase for classify, shortcut for closed form OK")

# permutahedron check on A=0, random, ST
for label, a in [("zero", ComparisonMatrix(np.zeros((4, 4)), Scale.ADDITIVE)),
                 ("random", rand_add(rng, 4)),
                 ("st", st)]:
    rep = permutahedron_check4(a)
    print(f"permutahedron[{label}]: attained={rep.vertices_attained} "
          f"distinct={rep.distinct_count} outside={rep.max_outside:.2e}")

# equivariance of closed form under relabeling
for i in range(300):
    a = rand_add(np.random.default_rng(555 + i), 4)
    tau = _PERMS4[np.random.default_rng(999 + i).integers(24)]
    try:
        v1 = tropical_closed_form4(a).eigenvector
        v2 = tropical_closed_form4(relabel(a, tau)).eigenvector
    except BoundaryCase:
        continue
    assert np.allclose(permute_scores(v1, tau).values, v2.values, atol=1e-9), i
print("equivariance OK")

# timing for the 100k acceptance batch
t0 = time.time()
rng2 = np.random.default_rng(2024)
mats = rng2.normal(size=(3000, 4, 4))
for i in range(3000):
    raw = mats[i]
    a = ComparisonMatrix(np.triu(raw, 1) - np.triu(raw, 1).T, Scale.ADDITIVE)
    try:
        tropical_closed_form4(a)
    except BoundaryCase:
        pass
dt = time.time() - t0
print(f"closed form alone: {dt / 3000 * 1e6:.0f} us/matrix -> 100k in {dt / 3000 * 1e5:.1f}s")
