"""The three ranking methods.

* hodge_scores: normalized row sums (additive) or geometric row means
  (multiplicative); the orthogonal projection of the matrix onto the
  strongly transitive subspace, read off as a score vector.
* principal_scores: the Perron eigenpair of a positive reciprocal matrix by
  power iteration.
* tropical_solve: the max-plus eigenproblem. The eigenvalue is the maximum
  mean weight over directed cycles (Karp's recurrence); the eigenvector is a
  column of the Kleene star of the eigenvalue-shifted matrix, together with
  the critical-cycle structure that controls its uniqueness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    ComparisonMatrix,
    Normalization,
    Scale,
    ScoreVector,
    to_additive,
    _mirror_multiplicative,
)
from .errors import InvalidMatrix, NoConvergence

__all__ = [
    "PerronSolution",
    "TropicalSolution",
    "hodge_scores",
    "principal_scores",
    "tropical_eigenvalue",
    "tropical_solve",
    "tropical_scores_multiplicative",
    "hadamard_product",
    "hadamard_power",
]


def hodge_scores(m: ComparisonMatrix) -> ScoreVector:
    """Least-squares scores: row sums over n, or geometric row means.

    Additive output is sum-zero normalized; multiplicative output is
    normalized to a unit first component.
    """
    if m.scale is Scale.ADDITIVE:
        h = m.entries.sum(axis=1) / m.n
        return ScoreVector(h - h.mean(), Scale.ADDITIVE, Normalization.SUM_ZERO)
    logs = np.log(m.entries).sum(axis=1) / m.n
    return ScoreVector(np.exp(logs - logs[0]), Scale.MULTIPLICATIVE, Normalization.FIRST_UNIT)


@dataclass(frozen=True)
class PerronSolution:
    """Dominant eigenpair of a positive matrix."""

    eigenvalue: float
    eigenvector: ScoreVector
    iterations: int
    residual: float


def _power_iteration(x: np.ndarray, tol: float, max_iter: int) -> tuple[float, np.ndarray, int]:
    """Power iteration on a positive matrix with unit-sum normalization."""
    n = x.shape[0]
    v = np.full(n, 1.0 / n)
    for it in range(1, max_iter + 1):
        w = x @ v
        w /= w.sum()
        delta = float(np.max(np.abs(w - v)))
        v = w
        if delta < tol:
            lam = float(v @ (x @ v) / (v @ v))
            return lam, v, it
    raise NoConvergence(max_iter, delta)


def principal_scores(x: ComparisonMatrix, tol: float = 1e-12, max_iter: int = 100000) -> PerronSolution:
    """Perron eigenpair of a multiplicative comparison matrix.

    Starts from the uniform vector and stops when the unit-sum iterate moves
    by less than tol in max norm. The eigenvalue is the Rayleigh quotient of
    the final iterate.
    """
    if x.scale is not Scale.MULTIPLICATIVE:
        raise InvalidMatrix("principal_scores expects a multiplicative matrix")
    lam, v, iters = _power_iteration(x.entries, tol, max_iter)
    residual = float(np.max(np.abs(x.entries @ v - lam * v)))
    vec = ScoreVector(v, Scale.MULTIPLICATIVE, Normalization.UNIT_SUM)
    return PerronSolution(lam, vec, iters, residual)


def _log_power_iteration(log_x: np.ndarray, tol: float = 1e-12,
                         max_iter: int = 100000,
                         log_diag_shift: float | None = None) -> tuple[float, np.ndarray, int]:
    """Power iteration carried out entirely in the log domain.

    log_x holds the elementwise logs of a positive matrix. Returns
    (log eigenvalue, log eigenvector centered to sum zero, iterations).
    Immune to overflow and underflow, which matters for extreme Hadamard
    powers whose linear-domain eigenvector components leave float range.

    log_diag_shift, when given, iterates with X + c*I for c = e^shift.
    The eigenvectors are unchanged, but a shift near the top eigenvalue
    separates the leading modulus from the rotational near-ties that almost
    cyclic matrices (extreme Hadamard powers again) otherwise exhibit.
    The returned log eigenvalue is still that of X itself.
    """
    n = log_x.shape[0]
    u = np.zeros(n)

    def step(u):
        t = log_x + u[None, :]
        peak = t.max(axis=1)
        w = peak + np.log(np.exp(t - peak[:, None]).sum(axis=1))
        if log_diag_shift is not None:
            w = np.logaddexp(w, log_diag_shift + u)
        return w

    for it in range(1, max_iter + 1):
        w = step(u)
        w -= w.mean()
        delta = float(np.max(np.abs(w - u)))
        u = w
        if delta < tol:
            log_lam = float(np.mean(step(u) - u))
            if log_diag_shift is not None:
                if log_lam - log_diag_shift < 700.0:
                    log_lam += math.log1p(-math.exp(log_diag_shift - log_lam))
            return log_lam, u, it
    raise NoConvergence(max_iter, delta)


# -- tropical (max-plus) eigenproblem ----------------------------------------


def tropical_eigenvalue(m: ComparisonMatrix) -> float:
    """Maximum mean weight over directed cycles, by Karp's recurrence.

    Multiplicative input is moved to the additive scale (natural log) first.
    Runs in O(n^3): D[k][v] is the best weight of a length-k walk from a
    fixed source, and the answer is max_v min_k (D[n][v] - D[k][v]) / (n - k).
    """
    a = to_additive(m).entries
    n = a.shape[0]
    d = np.full((n + 1, n), -np.inf)
    d[0, 0] = 0.0
    for k in range(1, n + 1):
        d[k] = np.max(d[k - 1][:, None] + a, axis=0)
    lengths = n - np.arange(n)
    # d[n] is finite everywhere (complete graph); d[k] may hold -inf for k=0,
    # which makes the quotient +inf and drops out of the inner minimum.
    with np.errstate(invalid="ignore"):
        quotients = (d[n][None, :] - d[:n]) / lengths[:, None]
    return float(np.max(np.min(quotients, axis=0)))


@dataclass(frozen=True)
class TropicalSolution:
    """Solution of the max-plus eigenproblem on the additive scale."""

    eigenvalue: float
    eigenvector: ScoreVector
    critical_vertices: frozenset[int]
    critical_edges: frozenset[tuple[int, int]]
    critical_class_count: int
    unique: bool


def _kleene_star(b: np.ndarray) -> np.ndarray:
    """Max-plus Kleene star: best path weight for every ordered pair.

    Requires no positive-mean cycle (true once the eigenvalue is subtracted).
    Floyd-Warshall over the max-plus semiring, then zero diagonal for the
    empty path.
    """
    d = b.copy()
    n = d.shape[0]
    for k in range(n):
        d = np.maximum(d, d[:, k:k + 1] + d[k:k + 1, :])
    np.fill_diagonal(d, np.maximum(np.diagonal(d), 0.0))
    return d


def _scc_count_with_edges(n: int, edges: list[tuple[int, int]]) -> int:
    """Strongly connected components of an edge list that contain an edge."""
    adj: list[list[int]] = [[] for _ in range(n)]
    radj: list[list[int]] = [[] for _ in range(n)]
    for i, j in edges:
        adj[i].append(j)
        radj[j].append(i)
    seen = [False] * n
    order: list[int] = []
    for start in range(n):
        if seen[start]:
            continue
        stack = [(start, iter(adj[start]))]
        seen[start] = True
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if not seen[nxt]:
                    seen[nxt] = True
                    stack.append((nxt, iter(adj[nxt])))
                    advanced = True
                    break
            if not advanced:
                order.append(node)
                stack.pop()
    comp = [-1] * n
    label = 0
    for start in reversed(order):
        if comp[start] >= 0:
            continue
        stack = [start]
        comp[start] = label
        while stack:
            node = stack.pop()
            for nxt in radj[node]:
                if comp[nxt] < 0:
                    comp[nxt] = label
                    stack.append(nxt)
        label += 1
    with_edges = {comp[i] for i, j in edges if comp[i] == comp[j]}
    return len(with_edges)


def tropical_solve(m: ComparisonMatrix, edge_tol: float = 1e-9) -> TropicalSolution:
    """Solve the max-plus eigenproblem A (x) v = lambda (x) v.

    Computes the eigenvalue with Karp's recurrence, shifts it out, and takes
    the Kleene star B* of the shifted matrix. An edge (i, j) is critical when
    B[i][j] + B*[j][i] vanishes (within edge_tol); critical edges decompose
    into strongly connected classes, and the eigenvector is unique up to an
    additive constant exactly when there is a single class. The returned
    eigenvector is the B* column at the smallest critical vertex, sum-zero
    normalized. Vertices and edges are reported 1-based.
    """
    a = to_additive(m).entries
    n = a.shape[0]
    lam = tropical_eigenvalue(m)
    b = a - lam
    star = _kleene_star(b)
    closed = b + star.T  # closed[i, j]: best closed-walk weight through edge (i, j)
    crit = closed >= -edge_tol
    np.fill_diagonal(crit, False)
    edges0 = [(int(i), int(j)) for i, j in zip(*np.nonzero(crit))]
    vertices0 = sorted({i for e in edges0 for i in e})
    if not vertices0:
        # cannot happen for a skew-symmetric matrix (every 2-cycle has mean
        # zero when lambda is zero), but keep the failure loud
        raise InvalidMatrix("no critical cycle found; eigenvalue shift is inconsistent")
    classes = _scc_count_with_edges(n, edges0)
    anchor = vertices0[0]
    vec = star[:, anchor]
    vec = vec - vec.mean()
    return TropicalSolution(
        eigenvalue=lam,
        eigenvector=ScoreVector(vec, Scale.ADDITIVE, Normalization.SUM_ZERO),
        critical_vertices=frozenset(v + 1 for v in vertices0),
        critical_edges=frozenset((i + 1, j + 1) for i, j in edges0),
        critical_class_count=classes,
        unique=classes == 1,
    )


def _tropical_batch(a: np.ndarray, edge_tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalue and sum-zero eigenvector for a stack of additive matrices.

    Same algorithm as tropical_solve (Karp, then the Kleene star column at
    the smallest critical vertex) vectorized over the leading axis, without
    the critical-class bookkeeping. Intended for large agreement sweeps.
    """
    a = np.asarray(a, dtype=float)
    b, n = a.shape[0], a.shape[1]
    d = np.full((b, n + 1, n), -np.inf)
    d[:, 0, 0] = 0.0
    for k in range(1, n + 1):
        d[:, k] = np.max(d[:, k - 1][:, :, None] + a, axis=1)
    lengths = (n - np.arange(n)).astype(float)
    quotients = (d[:, n][:, None, :] - d[:, :n]) / lengths[None, :, None]
    lam = np.max(np.min(quotients, axis=1), axis=1)

    shifted = a - lam[:, None, None]
    star = shifted.copy()
    for k in range(n):
        star = np.maximum(star, star[:, :, k, None] + star[:, k, None, :])
    idx = np.arange(n)
    star[:, idx, idx] = np.maximum(star[:, idx, idx], 0.0)

    closed = shifted + star.transpose(0, 2, 1)
    crit = closed >= -edge_tol
    crit[:, idx, idx] = False
    on_cycle = crit.any(axis=2) | crit.any(axis=1)
    anchor = np.argmax(on_cycle, axis=1)
    vec = star[np.arange(b)[:, None], idx[None, :], anchor[:, None]]
    return lam, vec - vec.mean(axis=1, keepdims=True)


def tropical_scores_multiplicative(x: ComparisonMatrix, base: float = math.e) -> ScoreVector:
    """Tropical scores of a multiplicative matrix, reported multiplicatively.

    The matrix is moved to the additive scale with log_base, solved there,
    and the sum-zero eigenvector is mapped back through base**score, so the
    result has geometric mean one. The induced ranking does not depend on
    base (for any base greater than one).
    """
    if x.scale is not Scale.MULTIPLICATIVE:
        raise InvalidMatrix("tropical_scores_multiplicative expects a multiplicative matrix")
    sol = tropical_solve(to_additive(x, base))
    return ScoreVector(np.power(base, sol.eigenvector.values), Scale.MULTIPLICATIVE,
                       Normalization.SUM_ZERO)


# -- Hadamard operations ------------------------------------------------------


def hadamard_product(x: ComparisonMatrix, y: ComparisonMatrix) -> ComparisonMatrix:
    """Entrywise product of two multiplicative matrices."""
    if x.scale is not Scale.MULTIPLICATIVE or y.scale is not Scale.MULTIPLICATIVE:
        raise InvalidMatrix("hadamard_product expects multiplicative matrices")
    if x.n != y.n:
        raise InvalidMatrix("size mismatch")
    return ComparisonMatrix(_mirror_multiplicative(x.entries * y.entries), Scale.MULTIPLICATIVE)


def hadamard_power(x: ComparisonMatrix, k: float) -> ComparisonMatrix:
    """Entrywise power X^(k) of a multiplicative matrix."""
    if x.scale is not Scale.MULTIPLICATIVE:
        raise InvalidMatrix("hadamard_power expects a multiplicative matrix")
    powered = np.power(x.entries, k)
    if not np.all(np.isfinite(powered)) or np.any(powered <= 0.0):
        raise InvalidMatrix(f"Hadamard power k={k:g} leaves float range; work in the log domain")
    return ComparisonMatrix(_mirror_multiplicative(powered), Scale.MULTIPLICATIVE)
