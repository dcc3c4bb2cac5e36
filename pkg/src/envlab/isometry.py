"""Signed permutations: the isometry group of l_p^n(mu) for p != 2.

Every surjective isometry of a weighted discrete Lebesgue space with p != 2
is a weight-compatible permutation of the atoms composed with coordinate
sign changes, acting by ``(gf)_i = eps_i f_{sigma^{-1}(i)}``.  This module
enumerates the (finite) group, computes stabilizers and their fixed spaces,
and from them the algebraic and isometric envelopes.  For p = 2 the
orthogonal group is infinite and the envelope collapses to the subspace
itself; that case is answered analytically instead of enumerated.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionError,
    HilbertCaseError,
    NotAGroupError,
    NotExtendableError,
    NotIsometryError,
    TooLargeError,
)
from .partition import Partition
from .space import Space, norm
from .subspace import Subspace, _canonicalize

__all__ = [
    "SignedPermutation",
    "identity",
    "apply",
    "matrix",
    "compose",
    "weight_compatible",
    "enumerate_group",
    "group_order",
    "close_group",
    "stabilizer",
    "fixed_space_of",
    "algebraic_envelope",
    "isometric_envelope",
    "EnvelopeReport",
    "extend_partial_isometry",
    "UniquenessReport",
    "group_average_projection",
    "cycle_partition",
]

GROUP_CAP = 8
CLOSURE_CAP = 10_000
WEIGHT_RTOL = 1e-12

DISCRETE_NOTE = (
    "finite signed-permutation model: with non-uniform weights the discrete "
    "isometry group can be smaller than its continuum analogue, so computed "
    "envelopes may be strictly larger than continuum ones; uniform weights "
    "give the exact collapse"
)


@dataclass(frozen=True)
class SignedPermutation:
    """Permutation sigma (0-based images) plus a sign vector in {-1,+1}^n."""

    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        n = len(self.perm)
        if sorted(self.perm) != list(range(n)) or len(self.signs) != n:
            raise DimensionError("invalid permutation/sign data")
        if any(s not in (-1, 1) for s in self.signs):
            raise DimensionError("signs must be +1 or -1")

    @property
    def n(self) -> int:
        return len(self.perm)

    def inverse(self) -> "SignedPermutation":
        inv = _invert(self.perm)
        return SignedPermutation(inv, tuple(self.signs[j] for j in self.perm))

    def is_identity(self) -> bool:
        return all(self.perm[i] == i for i in range(self.n)) and all(
            s == 1 for s in self.signs
        )

    def to_json(self) -> dict:
        return {"perm": [i + 1 for i in self.perm], "signs": list(self.signs)}

    @staticmethod
    def from_json(obj: dict | str) -> "SignedPermutation":
        from .serialize import parse_signed_permutation

        if isinstance(obj, str):
            obj = json.loads(obj)
        return parse_signed_permutation(obj)


def _invert(perm: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, j in enumerate(perm):
        inv[j] = i
    return tuple(inv)


def identity(n: int) -> SignedPermutation:
    return SignedPermutation(tuple(range(n)), (1,) * n)


def compose(g: SignedPermutation, h: SignedPermutation) -> SignedPermutation:
    """g after h: the action of the product matrix M_g M_h."""
    if g.n != h.n:
        raise DimensionError("size mismatch")
    ginv = _invert(g.perm)
    perm = tuple(g.perm[h.perm[j]] for j in range(g.n))
    signs = tuple(g.signs[i] * h.signs[ginv[i]] for i in range(g.n))
    return SignedPermutation(perm, signs)


def weight_compatible(space: Space, g: SignedPermutation, rtol: float = WEIGHT_RTOL) -> bool:
    mu = space.mu
    moved = mu[list(g.perm)]
    return bool(np.all(np.abs(moved - mu) <= rtol * mu))


def apply(space: Space, g: SignedPermutation, f) -> np.ndarray:
    """Action (gf)_i = eps_i f_{sigma^{-1}(i)}; a p-isometry for every p."""
    if g.n != space.n:
        raise DimensionError("size mismatch")
    if not weight_compatible(space, g):
        raise NotIsometryError("permutation does not preserve the weights")
    v = space.check_vector(f)
    out = np.empty_like(v)
    out[list(g.perm)] = v
    return out * np.asarray(g.signs, dtype=float)


def matrix(g: SignedPermutation) -> np.ndarray:
    """Matrix of the action; one +-1 entry per row, standard-orthogonal."""
    n = g.n
    m = np.zeros((n, n))
    inv = _invert(g.perm)
    m[np.arange(n), list(inv)] = g.signs
    return m


def cycle_partition(g: SignedPermutation) -> Partition:
    """Partition of the atoms into orbits of the underlying permutation."""
    seen, blocks = set(), []
    for start in range(g.n):
        if start in seen:
            continue
        blk, a = [], start
        while a not in seen:
            seen.add(a)
            blk.append(a)
            a = g.perm[a]
        blocks.append(tuple(sorted(blk)))
    return Partition(g.n, tuple(blocks))


# -- group enumeration -----------------------------------------------------


def _weight_classes(mu: np.ndarray, rtol: float = WEIGHT_RTOL) -> list[list[int]]:
    order = sorted(range(len(mu)), key=lambda i: (mu[i], i))
    classes: list[list[int]] = [[order[0]]]
    for i in order[1:]:
        if abs(mu[i] - mu[classes[-1][0]]) <= rtol * mu[classes[-1][0]]:
            classes[-1].append(i)
        else:
            classes.append([i])
    return classes


def group_order(space: Space) -> int:
    """2^n times the product of factorials of the equal-weight class sizes."""
    import math as _math

    total = 2**space.n
    for cls in _weight_classes(space.mu):
        total *= _math.factorial(len(cls))
    return total


def _weight_preserving_perms(space: Space) -> list[tuple[int, ...]]:
    classes = _weight_classes(space.mu)
    perms = [tuple(range(space.n))]
    sigma = [0] * space.n
    out = []
    for assignment in itertools.product(*(itertools.permutations(c) for c in classes)):
        for cls, images in zip(classes, assignment):
            for src, dst in zip(cls, images):
                sigma[src] = dst
        out.append(tuple(sigma))
    out.sort()
    return out


def _check_enumerable(space: Space, cap: int):
    if space.p == 2:
        raise HilbertCaseError(
            "p=2: the orthogonal group is not enumerable; use the analytic path"
        )
    if space.n > cap:
        raise TooLargeError(f"group enumeration capped at n={cap}, got n={space.n}")


_GROUP_CACHE: dict = {}


def _group_arrays(space: Space, cap: int = GROUP_CAP):
    """(perms, invperms, signs) arrays for the full group, cached per weights."""
    _check_enumerable(space, cap)
    key = (space.n, space.weights)
    hit = _GROUP_CACHE.get(key)
    if hit is not None:
        return hit
    n = space.n
    # int16 keeps the n = 8 group (~10^7 elements) inside desk-scale memory
    perms = np.array(_weight_preserving_perms(space), dtype=np.int16)
    signs = np.array(list(itertools.product((1, -1), repeat=n)), dtype=np.int16)
    nperm, nsign = perms.shape[0], signs.shape[0]
    all_perms = np.repeat(perms, nsign, axis=0)
    all_signs = np.tile(signs, (nperm, 1))
    inv = np.empty_like(all_perms)
    rows = np.arange(all_perms.shape[0])[:, None]
    inv[rows, all_perms] = np.arange(n, dtype=np.int16)[None, :]
    out = (all_perms, inv, all_signs)
    _GROUP_CACHE[key] = out
    return out


def enumerate_group(space: Space, cap: int = GROUP_CAP) -> list[SignedPermutation]:
    """All weight-compatible signed permutations, p != 2, deterministic order."""
    perms, _, signs = _group_arrays(space, cap)
    return [
        SignedPermutation(tuple(int(x) for x in p), tuple(int(s) for s in e))
        for p, e in zip(perms, signs)
    ]


def close_group(
    gens: list[SignedPermutation], cap: int = CLOSURE_CAP
) -> list[SignedPermutation]:
    """Closure of the generators under composition; TooLargeError above cap."""
    if not gens:
        raise NotAGroupError("no generators")
    n = gens[0].n
    seen = {(g.perm, g.signs) for g in gens}
    e = identity(n)
    seen.add((e.perm, e.signs))
    frontier = list(seen)
    elements = dict.fromkeys(frontier)
    gen_keys = [(g.perm, g.signs) for g in gens]
    while frontier:
        new = []
        for key in frontier:
            h = SignedPermutation(*key)
            for gk in gen_keys:
                prod = compose(SignedPermutation(*gk), h)
                pk = (prod.perm, prod.signs)
                if pk not in elements:
                    elements[pk] = None
                    new.append(pk)
                    if len(elements) > cap:
                        raise TooLargeError(f"group closure exceeds cap {cap}")
        frontier = new
    return [SignedPermutation(*k) for k in sorted(elements)]


# -- stabilizers, fixed spaces, envelopes ------------------------------------


_CHUNK = 1 << 20


def _stabilizer_mask(space: Space, y: Subspace, tol: float, cap: int) -> np.ndarray:
    _, inv, signs = _group_arrays(space, cap)
    m = inv.shape[0]
    mask = np.ones(m, dtype=bool)
    for start in range(0, m, _CHUNK):
        sl = slice(start, min(start + _CHUNK, m))
        for b in y.basis:
            images = signs[sl] * b[inv[sl]]
            resid = np.sqrt(np.sum(space.mu * (images - b) ** 2, axis=1))
            mask[sl] &= resid <= tol
    return mask


def stabilizer(
    space: Space, y: Subspace, tol: float = 1e-9, cap: int = GROUP_CAP
) -> list[SignedPermutation]:
    """Group elements acting as the identity on y (within tol per basis vector)."""
    perms, _, signs = _group_arrays(space, cap)
    mask = _stabilizer_mask(space, y, tol, cap)
    return [
        SignedPermutation(tuple(int(x) for x in p), tuple(int(s) for s in e))
        for p, e in zip(perms[mask], signs[mask])
    ]


def _fixed_space_from_arrays(space: Space, inv: np.ndarray, signs: np.ndarray) -> Subspace:
    """Common fixed space of the maps given by (invperm, signs) rows.

    Null space of sum_g (M_g - I)^T (M_g - I) = 2mI - S - S^T with
    S = sum_g M_g; computed through the symmetric average Q = (S+S^T)/(2m),
    whose eigenvalue-1 eigenvectors are exactly the common fixed vectors.
    """
    m, n = inv.shape
    s = np.zeros((n, n))
    for start in range(0, m, _CHUNK):
        sl = slice(start, min(start + _CHUNK, m))
        k = inv[sl].shape[0]
        rows = np.broadcast_to(np.arange(n), (k, n))
        np.add.at(s, (rows.ravel(), inv[sl].ravel()), signs[sl].ravel().astype(float))
    q = (s + s.T) / (2.0 * m)
    evals, evecs = np.linalg.eigh(q)
    fixed = evecs[:, evals > 1.0 - 1e-9].T
    return _canonicalize(space, fixed, 1e-12)


def fixed_space_of(space: Space, gens: list[SignedPermutation]) -> Subspace:
    """Exact common fixed subspace of the given signed permutations."""
    if not gens:
        raise NotAGroupError("need at least one generator")
    n = gens[0].n
    if n != space.n:
        raise DimensionError("size mismatch")
    inv = np.array([_invert(g.perm) for g in gens], dtype=np.int64)
    signs = np.array([g.signs for g in gens], dtype=np.int64)
    return _fixed_space_from_arrays(space, inv, signs)


def algebraic_envelope(
    space: Space, y: Subspace, tol: float = 1e-9, cap: int = GROUP_CAP
) -> Subspace:
    """Fixed space of the stabilizer of y in the isometry group.

    For p = 2 every subspace equals its envelope, so y itself is returned
    without enumerating anything.
    """
    if space.p == 2:
        return y
    _check_enumerable(space, cap)
    _, inv, signs = _group_arrays(space, cap)
    mask = _stabilizer_mask(space, y, tol, cap)
    return _fixed_space_from_arrays(space, inv[mask], signs[mask])


@dataclass(frozen=True)
class EnvelopeReport:
    """Isometric envelope plus the discrete-collapse bookkeeping."""

    subspace: Subspace
    equals_algebraic: bool
    note: str = DISCRETE_NOTE


def isometric_envelope(
    space: Space, y: Subspace, tol: float = 1e-9, cap: int = GROUP_CAP
) -> EnvelopeReport:
    """Korovkin-style envelope for the isometry group.

    The signed-permutation group is finite, hence weakly closed, so this
    envelope coincides with the algebraic one and is computed as such; the
    report records that collapse.  For p = 2 the envelope is y itself.
    """
    return EnvelopeReport(algebraic_envelope(space, y, tol, cap), True)


@dataclass(frozen=True)
class UniquenessReport:
    """Outcome of an extension search with non-unique envelope restrictions."""

    agreeing: int
    restrictions: list[SignedPermutation]
    envelope: Subspace


def extend_partial_isometry(
    space: Space,
    y: Subspace,
    images,
    tol: float = 1e-9,
    cap: int = GROUP_CAP,
) -> SignedPermutation | UniquenessReport:
    """Extend the map basis_k -> images_k on y to a global isometry.

    The prescribed map must be a p-isometry of y into the space (checked on
    the basis and on seeded random combinations).  All group elements
    agreeing with it on y are collected and restricted to the isometric
    envelope of y; the witness is returned when that restriction is unique,
    otherwise a report lists representatives of the distinct restrictions.
    """
    imgs = np.array([space.check_vector(v) for v in images], dtype=float)
    if imgs.shape[0] != y.dim:
        raise DimensionError("need exactly one image per basis vector")
    rng = np.random.default_rng(7)
    coeffs = np.vstack([np.eye(y.dim), rng.standard_normal((8 * y.dim, y.dim))])
    for a in coeffs:
        src = a @ y.basis
        dst = a @ imgs
        ns, nd = norm(space, src), norm(space, dst)
        if abs(ns - nd) > tol * max(1.0, ns):
            raise NotIsometryError("prescribed images do not define a p-isometry on y")

    perms, inv, signs = _group_arrays(space, cap)
    mask = np.ones(inv.shape[0], dtype=bool)
    for b, target in zip(y.basis, imgs):
        moved = signs * b[inv]
        resid = np.sqrt(np.sum(space.mu * (moved - target) ** 2, axis=1))
        mask &= resid <= tol
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        raise NotExtendableError("no group element agrees with the prescribed map on y")

    env = algebraic_envelope(space, y, tol, cap)
    reps: list[int] = []
    rep_actions: list[np.ndarray] = []
    for g in idx:
        action = signs[g] * env.basis[:, inv[g]]
        if not any(
            float(np.max(np.abs(action - known))) <= tol for known in rep_actions
        ):
            reps.append(int(g))
            rep_actions.append(action)
    witnesses = [
        SignedPermutation(
            tuple(int(x) for x in perms[g]), tuple(int(s) for s in signs[g])
        )
        for g in reps
    ]
    if len(witnesses) == 1:
        return witnesses[0]
    return UniquenessReport(int(idx.size), witnesses, env)


def group_average_projection(space: Space, group: list[SignedPermutation]) -> np.ndarray:
    """The projection (1/|H|) sum_h M_h onto the fixed space of the group H.

    H must be a group: identity, inverses and products are verified (left
    products with every element for up to 128 factors, deterministically
    sampled beyond that).  The average of a finite group of isometries is a
    projection onto Fix(H), contractive in every p-norm.
    """
    if not group:
        raise NotAGroupError("empty family")
    n = group[0].n
    if n != space.n:
        raise DimensionError("size mismatch")
    m = len(group)
    perms = np.array([g.perm for g in group], dtype=np.int64)
    signs = np.array([g.signs for g in group], dtype=np.int64)
    keys = {p.tobytes() + s.tobytes() for p, s in zip(perms, signs)}
    if len(keys) != m:
        raise NotAGroupError("repeated elements")
    ident = identity(n)
    ikey = np.array(ident.perm, dtype=np.int64).tobytes() + np.array(
        ident.signs, dtype=np.int64
    ).tobytes()
    if ikey not in keys:
        raise NotAGroupError("identity missing")
    inv = np.empty_like(perms)
    rows = np.arange(m)[:, None]
    inv[rows, perms] = np.arange(n)[None, :]
    inv_signs = np.take_along_axis(signs, perms, axis=1)
    for p, s in zip(inv, inv_signs):
        if p.tobytes() + s.tobytes() not in keys:
            raise NotAGroupError("not closed under inverse")
    factor_idx = range(m) if m <= 128 else range(0, m, max(1, m // 128))
    for gi in factor_idx:
        # vectorized left product g*h over all h: sigma = sigma_g o sigma_h,
        # sign_i = eps^g_i * eps^h_{sigma_g^{-1}(i)}
        prod_perms = perms[gi][perms]
        prod_signs = signs[gi][None, :] * signs[:, inv[gi]]
        for p, s in zip(prod_perms, prod_signs):
            if p.tobytes() + s.tobytes() not in keys:
                raise NotAGroupError("not closed under composition")

    proj = np.zeros((n, n))
    cols = inv
    np.add.at(
        proj,
        (np.broadcast_to(np.arange(n), (m, n)).ravel(), cols.ravel()),
        signs.ravel().astype(float),
    )
    return proj / m
