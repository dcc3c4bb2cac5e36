"""Linear subspaces of a weighted space, with tolerance-based linear algebra.

All rank decisions use the mu-weighted Euclidean inner product as a fixed
reference, never the ambient p-norm: a subspace is stored through a basis
that is orthonormal with respect to ``<f, g>_ref = sum_i mu_i f_i g_i``.
Computations happen in "hat" coordinates ``f -> sqrt(mu) * f``, where the
reference inner product becomes the standard dot product.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, FullSupportError, ZeroSubspaceError
from .space import Space

__all__ = [
    "Subspace",
    "from_vectors",
    "whole_space",
    "zero_subspace",
    "contains",
    "equal",
    "add",
    "intersect",
    "lattice_closure",
    "is_unital",
    "divide_by",
]

DEFAULT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace given by a reference-orthonormal basis (rows of ``basis``)."""

    ambient: Space
    basis: np.ndarray = field(repr=False)
    dim: int

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.ndim != 2 or b.shape[1] != self.ambient.n or b.shape[0] != self.dim:
            raise DimensionError(
                f"basis of shape {b.shape} for dim={self.dim}, n={self.ambient.n}"
            )
        object.__setattr__(self, "basis", b)
        b.setflags(write=False)

    @property
    def hat_basis(self) -> np.ndarray:
        """Basis in hat coordinates; rows are Euclidean-orthonormal."""
        return self.basis * self.ambient.sqrt_mu

    def project(self, f) -> np.ndarray:
        """Reference-orthogonal projection of f onto this subspace."""
        v = self.ambient.check_vector(f)
        bh = self.hat_basis
        coeff = bh @ (v * self.ambient.sqrt_mu)
        return (coeff @ bh) / self.ambient.sqrt_mu

    def coefficients(self, f) -> np.ndarray:
        """Coordinates of (the projection of) f in the canonical basis."""
        v = self.ambient.check_vector(f)
        return self.hat_basis @ (v * self.ambient.sqrt_mu)

    def to_json(self) -> dict:
        return {"basis": [list(map(float, row)) for row in self.basis]}

    @staticmethod
    def from_json(space: Space, obj: dict | str, tol: float = DEFAULT_TOL) -> "Subspace":
        from .serialize import parse_subspace

        if isinstance(obj, str):
            obj = json.loads(obj)
        return parse_subspace(space, obj, tol=tol)


def _fix_signs(rows: np.ndarray) -> np.ndarray:
    """Deterministic sign convention: largest-|entry| coordinate positive."""
    if rows.size == 0:
        return rows
    lead = np.argmax(np.abs(rows), axis=1)
    signs = np.sign(rows[np.arange(rows.shape[0]), lead])
    signs[signs == 0] = 1.0
    return rows * signs[:, None]


def _canonicalize(space: Space, gens: np.ndarray, tol: float) -> Subspace:
    """Orthonormalize generator rows in hat coordinates; dim 0 allowed."""
    g = np.atleast_2d(np.asarray(gens, dtype=float))
    if g.size == 0:
        return Subspace(space, np.zeros((0, space.n)), 0)
    if g.shape[1] != space.n:
        raise DimensionError(f"generators of shape {g.shape} in n={space.n}")
    ghat = g * space.sqrt_mu
    _, svals, vt = np.linalg.svd(ghat, full_matrices=False)
    if svals.size == 0 or svals[0] == 0.0:
        rank = 0
    else:
        rank = int(np.sum(svals > tol * svals[0]))
    rows = _fix_signs(vt[:rank])
    return Subspace(space, rows / space.sqrt_mu, rank)


def from_vectors(space: Space, gens, tol: float = DEFAULT_TOL) -> Subspace:
    """Canonical subspace spanned by the generators.

    Singular directions below ``tol`` (relative to the largest singular
    value) are discarded; if nothing survives a ZeroSubspaceError is raised.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    g = np.atleast_2d(np.asarray(gens, dtype=float))
    if g.size == 0:
        raise ZeroSubspaceError("no generators given")
    sub = _canonicalize(space, g, tol)
    if sub.dim == 0:
        raise ZeroSubspaceError("all generators vanish below tolerance")
    return sub


def whole_space(space: Space) -> Subspace:
    return _canonicalize(space, np.eye(space.n), DEFAULT_TOL)


def zero_subspace(space: Space) -> Subspace:
    return Subspace(space, np.zeros((0, space.n)), 0)


def _check_same_ambient(y: Subspace, z: Subspace):
    if y.ambient.n != z.ambient.n or y.ambient.weights != z.ambient.weights:
        raise DimensionError("subspaces live in different ambient spaces")


def contains(y: Subspace, f, tol: float = DEFAULT_TOL) -> bool:
    """Whether f lies in y: relative projection residual at most tol."""
    v = y.ambient.check_vector(f)
    vhat = v * y.ambient.sqrt_mu
    nf = float(np.linalg.norm(vhat))
    if nf == 0.0:
        return True
    resid = vhat - (y.hat_basis @ vhat) @ y.hat_basis
    return float(np.linalg.norm(resid)) <= tol * nf


def equal(y: Subspace, z: Subspace, tol: float = DEFAULT_TOL) -> bool:
    """Subspace equality via mutual containment of canonical bases."""
    _check_same_ambient(y, z)
    if y.dim != z.dim:
        return False
    return all(contains(y, b, tol) for b in z.basis) and all(
        contains(z, b, tol) for b in y.basis
    )


def add(y: Subspace, z: Subspace, tol: float = DEFAULT_TOL) -> Subspace:
    """Span of the union."""
    _check_same_ambient(y, z)
    return _canonicalize(y.ambient, np.vstack([y.basis, z.basis]), tol)


def intersect(y: Subspace, z: Subspace, tol: float = DEFAULT_TOL) -> Subspace:
    """Intersection, as the null space of the stacked complement conditions."""
    _check_same_ambient(y, z)
    n = y.ambient.n
    eye = np.eye(n)
    cy = eye - y.hat_basis.T @ y.hat_basis
    cz = eye - z.hat_basis.T @ z.hat_basis
    stacked = np.vstack([cy, cz])
    _, svals, vt = np.linalg.svd(stacked)
    null_mask = svals <= tol * max(1.0, svals[0] if svals.size else 1.0)
    rows = _fix_signs(vt[null_mask])
    return Subspace(y.ambient, rows / y.ambient.sqrt_mu, rows.shape[0])


def is_unital(y: Subspace, tol: float = DEFAULT_TOL) -> bool:
    """Whether the constant-one vector belongs to y."""
    return contains(y, np.ones(y.ambient.n), tol)


def divide_by(y: Subspace, g, tol: float = DEFAULT_TOL) -> Subspace:
    """Span of {f/g : f in basis of y}, coordinate-wise; g must have full support."""
    v = y.ambient.check_vector(g)
    if np.min(np.abs(v)) <= 1e-12 * np.max(np.abs(v)):
        raise FullSupportError("divisor has a (numerically) zero coordinate")
    return from_vectors(y.ambient, y.basis / v, tol)


def lattice_closure(space: Space, y: Subspace, tol: float = 1e-8) -> Subspace:
    """Smallest subspace containing y and closed under coordinate-wise min/max.

    Every vector sublattice of R^n is spanned by nonnegative vectors with
    pairwise disjoint supports.  The closure is therefore computed directly:
    h = sum of |b_k| over the canonical basis is a positive element of the
    closure on the support S of y, the quotients b_k/h generate a unital
    subspace on S, and the closure equals h times the block-constant vectors
    of the partition of S generated by those quotients.  Iterating pairwise
    max/min of basis vectors converges to the same space but can stall on
    sign-indefinite bases (it never sees |f|), so the direct form is used.
    """
    from .partition import common_refinement_of_rows

    if y.dim == 0:
        return y
    b = y.basis
    col_max = np.max(np.abs(b), axis=0)
    support = col_max > 1e-11 * np.max(col_max)
    h = np.sum(np.abs(b), axis=0)
    ratios = b[:, support] / h[support]
    blocks = common_refinement_of_rows(ratios, tol)
    support_idx = np.flatnonzero(support)
    gens = np.zeros((len(blocks), space.n))
    for k, blk in enumerate(blocks):
        atoms = support_idx[list(blk)]
        gens[k, atoms] = h[atoms]
    return _canonicalize(space, gens, DEFAULT_TOL)
