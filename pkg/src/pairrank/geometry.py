"""Cycle-space geometry of additive comparison matrices.

The space of n-by-n additive comparison matrices splits orthogonally into
the strongly transitive matrices (score differences) and the cycle space
spanned by 3-cycle indicator vectors.  This module provides the two bases,
the L2 projection onto each part, and, for n = 4, exact rational formulas
for the tropical eigenvalue and eigenvector by region of the cycle space,
together with a classifier that reduces any generic 4-by-4 matrix to one of
two canonical regions by relabeling items.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import (
    ComparisonMatrix,
    Normalization,
    Scale,
    ScoreVector,
    UpperTriangleVector,
    matrix_from_upper_triangle,
    pair_index,
    perm_identity,
    perm_inverse,
    permute_scores,
    relabel,
    strongly_transitive_from_scores,
    upper_triangle,
)
from .errors import BoundaryCase, CheckFailed, InvalidMatrix, RegionNotFound, ReductionViolated
from .methods import TropicalSolution, hodge_scores, tropical_solve

__all__ = [
    "CycleVector",
    "cycle_vector",
    "t_basis",
    "threecycle_basis",
    "f_basis4",
    "f_products4",
    "project_components",
    "ReductionReport",
    "m_minus_h_reduction",
    "Facet",
    "Region4",
    "CANONICAL_R1",
    "CANONICAL_GREEN",
    "RegionMatch",
    "classify_region4",
    "tropical_closed_form4",
    "PermutahedronReport",
    "permutahedron_check4",
]


# -- cycle vectors and bases --------------------------------------------------


@dataclass(frozen=True)
class CycleVector:
    """Upper-triangle indicator of a directed simple cycle.

    Pairing coords with the upper triangle of an additive matrix gives the
    cycle value: the sum of A[i, j] along the cycle's directed edges.
    """

    coords: UpperTriangleVector
    cycle: tuple[int, ...]

    def value(self, m: ComparisonMatrix) -> float:
        return float(self.coords.coords @ upper_triangle(m).coords)


def cycle_vector(cycle: tuple[int, ...], n: int) -> CycleVector:
    """Indicator vector of the directed cycle through the given vertices."""
    if len(set(cycle)) != len(cycle) or len(cycle) < 3:
        raise InvalidMatrix(f"{cycle} is not a simple cycle on three or more vertices")
    coords = np.zeros(n * (n - 1) // 2)
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        if a < b:
            coords[pair_index(n, a, b)] += 1.0
        else:
            coords[pair_index(n, b, a)] -= 1.0
    return CycleVector(UpperTriangleVector(coords, n), tuple(cycle))


def t_basis(n: int) -> list[UpperTriangleVector]:
    """Row-sum functionals t_1..t_n: pairing t_i with upper(A) gives row i's sum.

    Any n - 1 of them are linearly independent and together they span the
    orthogonal complement of the cycle space; their total is zero.
    """
    if n < 2:
        raise InvalidMatrix("need at least two items")
    out = []
    for i in range(1, n + 1):
        coords = np.zeros(n * (n - 1) // 2)
        for j in range(1, n + 1):
            if j > i:
                coords[pair_index(n, i, j)] = 1.0
            elif j < i:
                coords[pair_index(n, j, i)] = -1.0
        out.append(UpperTriangleVector(coords, n))
    return out


def threecycle_basis(n: int, v: int = 1) -> list[CycleVector]:
    """A cycle-space basis: one 3-cycle (v, a, b) per pair a < b avoiding v."""
    if n < 3:
        raise InvalidMatrix("3-cycles need at least three items")
    if not 1 <= v <= n:
        raise InvalidMatrix(f"item {v} out of range for n={n}")
    rest = [i for i in range(1, n + 1) if i != v]
    return [cycle_vector((v, a, b), n) for a, b in itertools.combinations(rest, 2)]


def f_basis4() -> tuple[CycleVector, CycleVector, CycleVector]:
    """The three orthogonal 4-cycle vectors spanning the cycle space for n = 4."""
    return (
        cycle_vector((1, 2, 3, 4), 4),
        cycle_vector((1, 3, 4, 2), 4),
        cycle_vector((1, 4, 2, 3), 4),
    )


def f_products4(m: ComparisonMatrix) -> np.ndarray:
    """The pairings (<f1, A>, <f2, A>, <f3, A>) for a 4-by-4 additive matrix."""
    if m.n != 4:
        raise InvalidMatrix("f-products are defined for n=4")
    u = upper_triangle(m).coords
    return np.array([f.coords.coords @ u for f in f_basis4()])


# -- projection and the eigenvector reduction ---------------------------------


def project_components(m: ComparisonMatrix) -> tuple[ComparisonMatrix, ComparisonMatrix]:
    """Split A = P + R with P strongly transitive and R in the cycle space."""
    if m.scale is not Scale.ADDITIVE:
        raise InvalidMatrix("projection is defined on the additive scale")
    p = strongly_transitive_from_scores(hodge_scores(m))
    r = ComparisonMatrix(m.entries - p.entries, Scale.ADDITIVE)
    return p, r


@dataclass(frozen=True)
class ReductionReport:
    """Residuals from checking the cycle-part reduction of the tropical pair."""

    eigenvalue: float
    eigenvalue_residual: float
    eigenvector_residual: float
    unique: bool


def m_minus_h_reduction(m: ComparisonMatrix, tol: float = 1e-9) -> ReductionReport:
    """Verify that dropping the transitive part shifts the tropical pair as expected.

    The cycle part R = A - P keeps the tropical eigenvalue of A, and its
    tropical eigenvector is m(A) - h(A) up to an additive constant.  Returns
    the observed residuals; raises ReductionViolated when either exceeds tol,
    which signals a solver bug rather than a property of the input.
    """
    full = tropical_solve(m)
    _, r = project_components(m)
    reduced = tropical_solve(r)
    lam_res = abs(full.eigenvalue - reduced.eigenvalue)

    h = hodge_scores(m).values
    want = full.eigenvector.values - h
    got = reduced.eigenvector.values
    vec_res = float(np.max(np.abs((got - got.mean()) - (want - want.mean()))))

    if lam_res > tol or vec_res > tol:
        raise ReductionViolated(max(lam_res, vec_res))
    return ReductionReport(full.eigenvalue, lam_res, vec_res, full.unique)


# -- the n = 4 region catalog --------------------------------------------------


class Facet:
    """Which face of the tropical eigenvalue's max-form is active."""

    HEXAGON = "hexagon"   # critical 3-cycle
    SQUARE = "square"     # critical 4-cycle


@dataclass(frozen=True)
class Region4:
    """One canonical open region of the n = 4 cycle space.

    ``inequalities`` are integer coefficient triples c with c @ F > 0 on the
    region, F being the f-products.  ``coeff_num`` holds the integer
    numerators of the eigenvector formula m(A) = h(A) + coeff_num @ F / 12,
    and ``lam_num`` those of the eigenvalue formula lam = lam_num @ F / 12.
    ``critical_cycle`` lists the critical cycle's vertices in canonical labels.
    """

    name: str
    facet: str
    critical_cycle: tuple[int, ...]
    inequalities: tuple[tuple[int, int, int], ...]
    coeff_num: tuple[tuple[int, int, int], ...]
    lam_num: tuple[int, int, int]

    def contains(self, f: np.ndarray, margin: float = 0.0) -> bool:
        return bool(np.all(np.asarray(self.inequalities) @ f > margin))

    def eigenvalue(self, f: np.ndarray) -> float:
        return float(np.asarray(self.lam_num) @ f) / 12.0

    def eigenvector_offset(self, f: np.ndarray) -> np.ndarray:
        return np.asarray(self.coeff_num) @ f / 12.0


CANONICAL_R1 = Region4(
    name="r1",
    facet=Facet.HEXAGON,
    critical_cycle=(2, 3, 4),
    inequalities=(
        (0, 1, 0),     # F2 > 0
        (0, 0, 1),     # F3 > 0
        (-1, 2, 2),    # hexagon side of the facet split
        (2, -1, -1),   # sector wall shared with the r2-type region
        (1, -2, 1),    # sector wall shared with the r3-type region
    ),
    coeff_num=((0, 0, 0), (-1, 5, 2), (-2, 7, 1), (-3, 6, 3)),
    lam_num=(2, 2, 2),
)

CANONICAL_GREEN = Region4(
    name="green",
    facet=Facet.SQUARE,
    critical_cycle=(1, 2, 3, 4),
    inequalities=(
        (0, 1, 0),     # F2 > 0
        (0, 0, 1),     # F3 > 0
        (1, -2, -2),   # square side of the facet split
    ),
    coeff_num=((0, 0, 0), (0, 3, 0), (0, 3, -3), (0, 0, -3)),
    lam_num=(3, 0, 0),
)

_CANONICAL_REGIONS = (CANONICAL_R1, CANONICAL_GREEN)

# Below this fraction of the matrix's own magnitude, the cycle part is treated
# as numerically zero: the matrix is strongly transitive and has no region.
_ST_REL_TOL = 1e-11


def _relabel_action() -> tuple[tuple[tuple[int, ...], ...], np.ndarray]:
    """All 24 relabelings with their induced linear maps on f-products.

    Relabeling items by tau transforms the f-products linearly:
    f_products4(relabel(A, tau)) = M_tau @ f_products4(A).  Each M_tau is a
    signed permutation matrix, computed here by expressing the pulled-back
    basis vectors in the f-basis (exact, since the f's are orthogonal with
    squared norm 4).
    """
    fs = f_basis4()
    mats = [matrix_from_upper_triangle(f.coords) for f in fs]
    perms = tuple(itertools.permutations(range(1, 5)))
    stack = np.empty((24, 3, 3))
    for t_idx, tau in enumerate(perms):
        inv = perm_inverse(tau)
        for k in range(3):
            pulled = upper_triangle(relabel(mats[k], inv)).coords
            for l in range(3):
                stack[t_idx, k, l] = (fs[l].coords.coords @ pulled) / 4.0
    if not np.array_equal(stack, np.round(stack)):
        raise RuntimeError("relabel action on f-products is not integral")
    return perms, stack


_PERMS4, _MSTACK = _relabel_action()


@dataclass(frozen=True)
class RegionMatch:
    """Classification outcome: relabel by tau to land in the canonical region."""

    region: Region4
    tau: tuple[int, ...]
    f_original: np.ndarray
    f_canonical: np.ndarray


def classify_region4(m: ComparisonMatrix, margin: float = 1e-7) -> RegionMatch:
    """Find the canonical region and relabeling for a generic 4-by-4 matrix.

    The margin is relative to the max-norm of the cycle part; inputs within
    margin of a region wall raise BoundaryCase instead of picking a side.
    """
    if m.scale is not Scale.ADDITIVE:
        raise InvalidMatrix("classification is defined on the additive scale")
    if m.n != 4:
        raise InvalidMatrix("the region catalog covers n=4 only")
    _, r = project_components(m)
    scale = float(np.max(np.abs(r.entries)))
    if scale <= _ST_REL_TOL * float(np.max(np.abs(m.entries))):
        # numerically strongly transitive: every wall passes through the origin
        raise BoundaryCase(0.0)
    cut = margin * scale

    f = f_products4(m)
    g_all = _MSTACK @ f
    best_near = -np.inf
    for t_idx, tau in enumerate(_PERMS4):
        g = g_all[t_idx]
        for region in _CANONICAL_REGIONS:
            vals = np.asarray(region.inequalities) @ g
            lo = float(vals.min())
            if lo > cut:
                return RegionMatch(region, tau, f, g)
            if lo > -cut:
                best_near = max(best_near, lo)
    if best_near > -np.inf:
        raise BoundaryCase(best_near / scale)
    raise RegionNotFound(
        "no canonical region matched; the catalog should cover all generic matrices")


def tropical_closed_form4(m: ComparisonMatrix, margin: float = 1e-7) -> TropicalSolution:
    """Exact-formula tropical eigenpair for a generic 4-by-4 additive matrix.

    Strongly transitive input (cycle part numerically zero) short-circuits to
    eigenvalue 0 with eigenvector h(A), where the critical graph is complete.
    Otherwise the matrix is classified, the canonical region's rational
    formula evaluated, and the result mapped back through the relabeling.
    """
    if m.scale is not Scale.ADDITIVE:
        raise InvalidMatrix("the closed form is stated on the additive scale")
    if m.n != 4:
        raise InvalidMatrix("the closed form covers n=4 only")
    _, r = project_components(m)
    scale = float(np.max(np.abs(m.entries)))
    if float(np.max(np.abs(r.entries))) <= _ST_REL_TOL * scale:
        h = hodge_scores(m)
        edges = frozenset((i, j) for i in range(1, 5) for j in range(1, 5) if i != j)
        return TropicalSolution(0.0, h, frozenset(range(1, 5)), edges, 1, True)

    match = classify_region4(m, margin=margin)
    region, tau, g = match.region, match.tau, match.f_canonical
    y = relabel(m, tau)
    m_y = hodge_scores(y).values + region.eigenvector_offset(g)
    vec = permute_scores(
        ScoreVector(m_y - m_y.mean(), Scale.ADDITIVE, Normalization.SUM_ZERO),
        perm_inverse(tau))

    inv = perm_inverse(tau)
    cycle = tuple(inv[v - 1] for v in region.critical_cycle)
    edges = frozenset(zip(cycle, cycle[1:] + cycle[:1]))
    return TropicalSolution(region.eigenvalue(g), vec, frozenset(cycle), edges, 1, True)


_FROWS = np.array([f.coords.coords for f in f_basis4()])
_PERM_IDX = np.array(_PERMS4, dtype=int) - 1
_INEQS = tuple(np.asarray(r.inequalities, dtype=float) for r in _CANONICAL_REGIONS)
_COEFFS = tuple(np.asarray(r.coeff_num, dtype=float) for r in _CANONICAL_REGIONS)
_LAMS = tuple(np.asarray(r.lam_num, dtype=float) for r in _CANONICAL_REGIONS)


def _closed_form_batch(a: np.ndarray, margin: float = 1e-7) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Closed-form eigenpairs for a stack of 4-by-4 additive matrices.

    Returns (eigenvalues, sum-zero eigenvectors, skipped): rows flagged in
    ``skipped`` fell within the boundary margin (or were numerically strongly
    transitive) and carry NaN results. Vectorized twin of
    tropical_closed_form4 for large agreement sweeps.
    """
    a = np.asarray(a, dtype=float)
    b = a.shape[0]
    h = a.sum(axis=2) / 4.0
    r = a - (h[:, :, None] - h[:, None, :])
    r_scale = np.max(np.abs(r), axis=(1, 2))
    a_scale = np.max(np.abs(a), axis=(1, 2))
    cut = margin * r_scale

    iu, ju = np.triu_indices(4, k=1)
    f = a[:, iu, ju] @ _FROWS.T
    g = np.einsum("tkl,bl->btk", _MSTACK, f)

    # worst inequality slack per (matrix, relabeling, region), region-minor order
    lo = np.stack([np.min(g @ q.T, axis=2) for q in _INEQS], axis=2).reshape(b, 48)
    clean = lo > cut[:, None]
    found = clean.any(axis=1)
    skipped = ~found | (r_scale <= _ST_REL_TOL * a_scale)

    choice = np.argmax(clean, axis=1)
    tau_idx, region_idx = choice // 2, choice % 2
    g_hit = np.take_along_axis(g, tau_idx[:, None, None], axis=1)[:, 0, :]

    offs = np.stack([g_hit @ c.T / 12.0 for c in _COEFFS], axis=1)
    off = np.take_along_axis(offs, region_idx[:, None, None], axis=1)[:, 0, :]
    lams = np.stack([g_hit @ l / 12.0 for l in _LAMS], axis=1)
    lam = np.take_along_axis(lams, region_idx[:, None], axis=1)[:, 0]

    vec = h + np.take_along_axis(off, _PERM_IDX[tau_idx], axis=1)
    vec = vec - vec.mean(axis=1, keepdims=True)
    lam = np.where(skipped, np.nan, lam)
    vec = np.where(skipped[:, None], np.nan, vec)
    return lam, vec, skipped


# -- the projected cube --------------------------------------------------------


@dataclass(frozen=True)
class PermutahedronReport:
    """What the 64 sign-pattern projections look like for one matrix."""

    vertices_attained: int
    distinct_count: int
    max_outside: float
    shift: np.ndarray


def permutahedron_check4(m: ComparisonMatrix, tol: float = 1e-9) -> PermutahedronReport:
    """Project all 64 sign patterns centered at A and compare to the permutahedron.

    Every pattern epsilon in {-1, +1}^6, read as an upper triangle and added
    to A, projects to a score vector h(A) + h(E).  The projections fill the
    permutahedron of (3, 1, -1, -3)/4 shifted by h(A): all 24 of its vertices
    are attained, and every projection lies inside (checked by majorization).
    Raises CheckFailed if a vertex is missed or a projection falls outside.
    """
    if m.scale is not Scale.ADDITIVE or m.n != 4:
        raise InvalidMatrix("the projected-cube check is defined for 4-by-4 additive matrices")
    h = hodge_scores(m).values

    signs = np.array(list(itertools.product((-1.0, 1.0), repeat=6)))
    iu, ju = np.triu_indices(4, k=1)
    e = np.zeros((64, 4, 4))
    e[:, iu, ju] = signs
    e[:, ju, iu] = -signs
    projections = e.sum(axis=2) / 4.0      # h(E) for each sign pattern

    vertex = np.array([3.0, 1.0, -1.0, -3.0]) / 4.0
    attained = 0
    for perm in itertools.permutations(range(4)):
        target = vertex[list(perm)]
        if np.min(np.max(np.abs(projections - target), axis=1)) <= tol:
            attained += 1

    # Majorization against the vertex profile decides membership in the hull.
    sorted_desc = -np.sort(-projections, axis=1)
    prefix = np.cumsum(sorted_desc, axis=1)
    bound = np.cumsum(vertex)
    max_outside = float(np.max(prefix - bound))
    sums_ok = bool(np.max(np.abs(prefix[:, -1] - bound[-1])) <= tol)

    distinct = 0
    seen: list[np.ndarray] = []
    for p in projections:
        if not any(np.max(np.abs(p - q)) <= tol for q in seen):
            seen.append(p)
            distinct += 1

    if attained != 24 or max_outside > tol or not sums_ok:
        raise CheckFailed(
            f"projected cube mismatch: {attained}/24 vertices, "
            f"outside by {max_outside:.3e}")
    return PermutahedronReport(attained, distinct, max_outside, h)
