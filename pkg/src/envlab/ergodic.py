"""Mean-ergodic projections for certified contractions.

The Cesaro averages A_N = (1/N) sum_{k<N} T^k of a power-bounded operator
converge to the projection onto Fix(T) along range(I - T).  Convergence is
detected on the doubling residual ||A_2N - A_N|| in the reference operator
norm, which needs no spectral assumptions; an exact spectral oracle
(eigenvalue-1 eigenspace, projected along range(I - T)) is computed alongside
and recorded for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConvergenceError,
    DimensionError,
    DomainError,
    NotContractionError,
    NotProjectionError,
    NotStrictlyConvexError,
)
from .isometry import (
    SignedPermutation,
    close_group,
    fixed_space_of,
    group_average_projection,
    matrix,
)
from .space import Space, duality_map, norm
from .subspace import Subspace, _canonicalize, contains, equal, intersect

__all__ = [
    "ContractionOperator",
    "ErgodicReport",
    "JdlgReport",
    "certify",
    "from_convex_combination",
    "from_projection_matrix",
    "ref_op_norm",
    "cesaro_projection",
    "spectral_projection",
    "intersection_projection",
    "mean_ergodic_value",
    "jdlg_check",
]

CERT_TOL = 1e-9


def ref_op_norm(space: Space, m: np.ndarray) -> float:
    """Operator norm in the reference (weighted Euclidean) metric."""
    s = space.sqrt_mu
    sim = (m * (s[:, None] / s[None, :]))
    return float(np.linalg.norm(sim, 2))


@dataclass(frozen=True)
class ContractionOperator:
    """An n x n operator with a contractivity certificate for the ambient p."""

    ambient: Space
    entries: np.ndarray = field(repr=False)
    certified: bool
    certificate: str
    norm_bound: float | None = None

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=float)
        if e.shape != (self.ambient.n, self.ambient.n):
            raise DimensionError(f"operator of shape {e.shape} on n={self.ambient.n}")
        object.__setattr__(self, "entries", e)
        e.setflags(write=False)

    def to_json(self) -> dict:
        return {
            "entries": [list(map(float, row)) for row in self.entries],
            "certified": self.certified,
            "certificate": self.certificate,
        }


def certify(space: Space, entries, tol: float = CERT_TOL) -> ContractionOperator:
    """Certify a raw matrix as a contraction on the ambient space.

    Exact operator-norm check for p in {1, 2, inf}; for other exponents only
    a sampled lower bound is available, so the operator is accepted when the
    bound stays below 1 + tol but flagged with the ``sampled`` certificate.
    """
    from .complement import op_norm

    a = np.asarray(entries, dtype=float)
    p = space.p
    if p in (1.0, 2.0) or math.isinf(p):
        value, _ = op_norm(space, a, p)
        if value > 1.0 + tol:
            raise NotContractionError(f"operator norm {value:.6g} exceeds 1")
        return ContractionOperator(space, a, True, f"exact-p{p:g}", value)
    value, _ = op_norm(space, a, p)
    if value > 1.0 + tol:
        raise NotContractionError(f"sampled lower bound {value:.6g} exceeds 1")
    return ContractionOperator(space, a, True, "sampled", value)


def from_convex_combination(
    space: Space, perms: list[SignedPermutation], weights
) -> ContractionOperator:
    """Convex combination of signed permutations: contractive in every p-norm."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (len(perms),) or np.any(w < 0):
        raise DimensionError("weights must be nonnegative, one per permutation")
    if abs(float(np.sum(w)) - 1.0) > 1e-12:
        raise DomainError("weights must sum to one")
    entries = np.zeros((space.n, space.n))
    for g, lam in zip(perms, w):
        entries += lam * matrix(g)
    return ContractionOperator(space, entries, True, "convex-combination", 1.0)


def from_projection_matrix(
    space: Space, entries, certificate: str = "contractive-projection"
) -> ContractionOperator:
    """Wrap a projection known to be contractive by construction."""
    a = np.asarray(entries, dtype=float)
    if ref_op_norm(space, a @ a - a) > 1e-8:
        raise NotProjectionError("matrix is not idempotent")
    return ContractionOperator(space, a, True, certificate, 1.0)


@dataclass(frozen=True)
class ErgodicReport:
    """Computed mean-ergodic projection with its convergence diagnostics."""

    projection: np.ndarray = field(repr=False)
    iterations: int
    residual: float
    fixed_space: Subspace
    method: str
    oracle_residual: float | None = None
    range_matches: bool | None = None

    def to_json(self) -> dict:
        return {
            "projection": [list(map(float, row)) for row in self.projection],
            "iterations": self.iterations,
            "residual": self.residual,
            "fixed_space_basis": [list(map(float, b)) for b in self.fixed_space.basis],
            "oracle_used": self.method,
            "oracle_residual": self.oracle_residual,
        }


def _range_subspace(space: Space, proj: np.ndarray) -> Subspace:
    """Range of a near-projection: singular values of an idempotent are 0 or >= 1."""
    u, svals, _ = np.linalg.svd(proj)
    r = int(np.sum(svals > 0.5))
    return _canonicalize(space, u[:, :r].T, 1e-12)


def spectral_projection(t: ContractionOperator) -> np.ndarray:
    """Exact mean-ergodic projection: onto null(T - I) along range(T - I)."""
    a = t.entries
    n = a.shape[0]
    u, svals, vt = np.linalg.svd(a - np.eye(n))
    cutoff = 1e-9 * max(1.0, svals[0] if svals.size else 1.0)
    rank = int(np.sum(svals > cutoff))
    fix = vt[rank:].T  # n x d
    rng = u[:, :rank]  # n x (n-d)
    basis = np.hstack([fix, rng])
    coeffs = np.linalg.solve(basis, np.eye(n))
    return fix @ coeffs[: fix.shape[1]]


def cesaro_projection(
    t: ContractionOperator, tol: float = 1e-6, max_iter: int = 100_000
) -> ErgodicReport:
    """Incremental Cesaro averages with doubling, stopped on ||A_2N - A_N||.

    ``iterations`` counts doubling steps, so the returned average holds
    2^iterations powers of T.  The exact spectral oracle is evaluated and its
    distance to the returned projection recorded in ``oracle_residual``.
    """
    if not t.certified:
        raise NotContractionError("operator lacks a contraction certificate")
    space = t.ambient
    a = t.entries
    n = space.n
    partial_sum = np.eye(n)
    power = a.copy()
    terms, steps = 1, 0
    residual = math.inf
    while True:
        next_sum = partial_sum + power @ partial_sum
        residual = ref_op_norm(space, next_sum / (2 * terms) - partial_sum / terms)
        partial_sum = next_sum
        power = power @ power
        terms *= 2
        steps += 1
        if residual <= tol:
            break
        if terms >= max_iter:
            avg = partial_sum / terms
            report = ErgodicReport(
                avg,
                steps,
                max(residual, ref_op_norm(space, avg @ avg - avg)),
                _range_subspace(space, avg),
                "cesaro",
            )
            raise ConvergenceError(
                f"doubling residual {residual:.3g} > tol after {terms} terms", report
            )
    avg = partial_sum / terms
    oracle = spectral_projection(t)
    return ErgodicReport(
        avg,
        steps,
        max(residual, ref_op_norm(space, avg @ avg - avg)),
        _range_subspace(space, avg),
        "cesaro",
        oracle_residual=ref_op_norm(space, avg - oracle),
    )


def intersection_projection(
    projs: list[ContractionOperator], tol: float = 1e-6, max_iter: int = 100_000
) -> ErgodicReport:
    """Contractive projection onto the intersection of projection ranges.

    Averages the input projections and runs the Cesaro iteration; the range
    of the limit is compared (exactly, by rank after thresholding) with the
    intersection of the input ranges computed by subspace linear algebra.
    """
    if not projs:
        raise NotProjectionError("empty family")
    space = projs[0].ambient
    for p in projs:
        if not p.certified:
            raise NotProjectionError("inputs must be certified contractions")
        if ref_op_norm(space, p.entries @ p.entries - p.entries) > CERT_TOL:
            raise NotProjectionError("input operator is not idempotent")
    mean = sum(p.entries for p in projs) / len(projs)
    t = ContractionOperator(space, mean, True, "average-of-projections", 1.0)
    report = cesaro_projection(t, tol, max_iter)
    expected = _range_subspace(space, projs[0].entries)
    for p in projs[1:]:
        expected = intersect(expected, _range_subspace(space, p.entries), 1e-9)
    # rank comparison is exact; basis containment inherits the iteration noise
    matches = report.fixed_space.dim == expected.dim and equal(
        report.fixed_space, expected, max(1e-7, 20.0 * report.residual)
    )
    return ErgodicReport(
        report.projection,
        report.iterations,
        report.residual,
        report.fixed_space,
        report.method,
        report.oracle_residual,
        range_matches=matches,
    )


def mean_ergodic_value(
    t: ContractionOperator, x, tol: float = 1e-6, max_iter: int = 100_000
) -> np.ndarray:
    """Limit of the Cesaro averages A_N x: the fixed point in conv(orbit of x).

    The value is verified to be fixed by T within tol and to lie within tol
    of the convex hull of a computed orbit segment.
    """
    if not t.certified:
        raise NotContractionError("operator lacks a contraction certificate")
    space = t.ambient
    v = space.check_vector(x)
    a = t.entries
    s = v.copy()
    power = a.copy()
    terms = 1
    while True:
        s_next = s + power @ s
        residual = float(np.linalg.norm(s_next / (2 * terms) - s / terms))
        s = s_next
        power = power @ power
        terms *= 2
        if residual <= 0.1 * tol or terms >= max_iter:
            break
    value = s / terms
    fix_resid = norm(space, a @ value - value)
    if fix_resid > tol * max(1.0, norm(space, value)):
        raise ConvergenceError(f"limit moved by T: residual {fix_resid:.3g}")
    _check_hull_membership(t, v, value, tol)
    return value


def _check_hull_membership(t: ContractionOperator, x: np.ndarray, value, tol: float):
    from scipy.optimize import nnls

    k = 64
    pts = [x]
    for _ in range(k - 1):
        pts.append(t.entries @ pts[-1])
    pts = np.array(pts).T  # n x k
    scale = max(1.0, float(np.linalg.norm(x)))
    # moderate weight on the sum-to-one row: large enough to pin the convex
    # combination, small enough not to amplify roundoff into the residual
    big = 1e4 * scale
    a = np.vstack([pts, big * np.ones((1, pts.shape[1]))])
    b = np.concatenate([value, [big]])
    _, resid = nnls(a, b)
    if resid > 3.0 * tol * scale + 1e-9 * big:
        raise ConvergenceError(
            f"ergodic value is {resid:.3g} away from the orbit convex hull"
        )


@dataclass(frozen=True)
class JdlgReport:
    """Fixed-space splitting X = Fix(S) (+) J(Fix(S))-preannihilator."""

    fix: Subspace
    complement: Subspace
    group_order: int
    rank_identity: bool
    complement_is_preannihilator: bool
    duality_residual: float
    summands_invariant: bool
    projection: np.ndarray = field(repr=False)


def jdlg_check(
    space: Space,
    gens: list[SignedPermutation],
    tol: float = 1e-8,
    cap: int = 10_000,
) -> JdlgReport:
    """Verify the ergodic splitting generated by a finite isometry group.

    Closes the generators (capped), averages the group into the contractive
    projection P onto Fix(S), and verifies: ker P equals the weighted
    preannihilator of Fix(S*) (the adjoint group under the mu-pairing, which
    for signed permutations is the group of inverses), the two summands give
    an exact direct sum, J maps sampled sphere points of Fix(S) into Fix(S*)
    within tol, and both summands are invariant under the group.
    """
    p = space.p
    if p == 1 or math.isinf(p):
        raise NotStrictlyConvexError("splitting requires p in (1, inf)")
    group = close_group(gens, cap)
    proj = group_average_projection(space, group)
    fix = fixed_space_of(space, group)

    # ker P via SVD; P is the group average, so ker P = range(I - P).
    u, svals, vt = np.linalg.svd(proj)
    rank = int(np.sum(svals > 0.5))
    kernel = _canonicalize(space, vt[rank:], 1e-12)

    # Fix(S*) = Fix(S) coordinate-wise (adjoints are the inverses); its
    # preannihilator is the weighted orthogonal complement of Fix(S).
    pairing_rows = fix.basis * space.mu
    _, sv2, vt2 = np.linalg.svd(pairing_rows) if fix.dim else (None, np.array([]), np.eye(space.n))
    if fix.dim:
        null_rank = int(np.sum(sv2 > 1e-12 * max(1.0, sv2[0])))
        preann = _canonicalize(space, vt2[null_rank:], 1e-12)
    else:
        preann = _canonicalize(space, np.eye(space.n), 1e-12)

    rank_identity = fix.dim + kernel.dim == space.n
    stacked = np.vstack([fix.basis, kernel.basis])
    rank_identity &= np.linalg.matrix_rank(stacked, tol=1e-9) == space.n
    complement_ok = kernel.dim == preann.dim and equal(kernel, preann, 1e-8)

    rng = np.random.default_rng(11)
    duality_residual = 0.0
    if fix.dim and p != 2:
        for _ in range(max(8, 4 * fix.dim)):
            y = rng.standard_normal(fix.dim) @ fix.basis
            y = y / norm(space, y)
            jy = duality_map(space, y)
            r = jy - fix.project(jy)
            duality_residual = max(
                duality_residual, norm(space.with_p(2.0), r) / max(1.0, norm(space, jy))
            )

    invariant = True
    step = max(1, len(group) // 16)
    for g in group[::step]:
        m = matrix(g)
        for b in fix.basis:
            invariant &= contains(fix, m @ b, 1e-9)
        for b in kernel.basis:
            invariant &= contains(kernel, m @ b, 1e-9)

    return JdlgReport(
        fix,
        kernel,
        len(group),
        bool(rank_identity),
        bool(complement_ok),
        float(duality_residual),
        bool(invariant),
        proj,
    )
