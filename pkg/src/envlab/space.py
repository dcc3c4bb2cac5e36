"""Weighted finite-dimensional Lebesgue spaces.

A ``Space`` is the discrete measure space ({1..n}, mu) together with an
exponent p, carrying the norm ``(sum_i mu_i |f_i|^p)^(1/p)``.  Vectors are
plain 1-d numpy arrays of length n.  The dual pairing carries the weights,
``<g, f> = sum_i mu_i g_i f_i``, so the dual of a space is the same weighted
space with the conjugate exponent and adjoints of weight-compatible signed
permutations are again signed permutations.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, DomainError, NotStrictlyConvexError

__all__ = [
    "Space",
    "dual_exponent",
    "dual",
    "norm",
    "pairing",
    "duality_map",
    "mazur_map",
    "as_vector",
]


def dual_exponent(p: float) -> float:
    """Conjugate exponent p/(p-1), with 1 <-> inf and 2 -> 2."""
    if p < 1:
        raise DomainError(f"exponent must satisfy p >= 1, got {p}")
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


@dataclass(frozen=True)
class Space:
    """The ambient space: atom count n, exponent p, strictly positive weights."""

    n: int
    p: float
    weights: tuple[float, ...]
    _mu: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"need at least one atom, got n={self.n}")
        if self.p < 1:
            raise DomainError(f"exponent must satisfy p >= 1, got {self.p}")
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (self.n,):
            raise DimensionError(f"expected {self.n} weights, got shape {w.shape}")
        if not np.all(w > 0):
            raise DomainError("all weights must be strictly positive")
        object.__setattr__(self, "weights", tuple(float(x) for x in w))
        object.__setattr__(self, "_mu", w)
        self._mu.setflags(write=False)

    @property
    def mu(self) -> np.ndarray:
        """Weight vector as a read-only array."""
        return self._mu

    @property
    def sqrt_mu(self) -> np.ndarray:
        return np.sqrt(self._mu)

    def check_vector(self, f) -> np.ndarray:
        v = np.asarray(f, dtype=float)
        if v.shape != (self.n,):
            raise DimensionError(f"vector of shape {v.shape} in a space with n={self.n}")
        return v

    def with_p(self, p: float) -> "Space":
        return Space(self.n, p, self.weights)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        p = "inf" if math.isinf(self.p) else self.p
        return {"n": self.n, "p": p, "weights": list(self.weights)}

    @staticmethod
    def from_json(obj: dict | str) -> "Space":
        from .serialize import parse_space

        if isinstance(obj, str):
            obj = json.loads(obj)
        return parse_space(obj)


def uniform(n: int, p: float) -> Space:
    """Space on n atoms with unit weights."""
    return Space(n, p, (1.0,) * n)


def as_vector(space: Space, f) -> np.ndarray:
    return space.check_vector(f)


def norm(space: Space, f, p: float | None = None) -> float:
    """Weighted p-norm of f; p defaults to the space exponent, inf allowed."""
    v = space.check_vector(f)
    q = space.p if p is None else p
    if q < 1:
        raise DomainError(f"exponent must satisfy p >= 1, got {q}")
    if math.isinf(q):
        return float(np.max(np.abs(v))) if v.size else 0.0
    return float(np.sum(space.mu * np.abs(v) ** q) ** (1.0 / q))


def pairing(space: Space, g, f) -> float:
    """Weighted dual pairing <g, f> = sum_i mu_i g_i f_i."""
    return float(np.sum(space.mu * space.check_vector(g) * space.check_vector(f)))


def dual(space: Space) -> Space:
    """The dual space: same atoms and weights, conjugate exponent."""
    return Space(space.n, dual_exponent(space.p), space.weights)


def duality_map(space: Space, f) -> np.ndarray:
    """The duality mapping J into the dual space, p in (1, inf) only.

    On the unit sphere J f has coordinates sign(f_i)|f_i|^(p-1); it is
    extended to all of X by positive homogeneity of degree one, which gives
    ``(Jf)_i = ||f||^(2-p) sign(f_i) |f_i|^(p-1)``.  Then ||Jf||_{p'} = ||f||_p
    and <Jf, f> = ||f||_p^2, and J(0) = 0.
    """
    p = space.p
    if p == 1 or math.isinf(p):
        raise NotStrictlyConvexError(
            f"duality map needs strictly convex norm and dual, got p={p}"
        )
    v = space.check_vector(f)
    nf = norm(space, v)
    if nf == 0.0:
        return np.zeros_like(v)
    return nf ** (2.0 - p) * np.sign(v) * np.abs(v) ** (p - 1.0)


def mazur_map(space: Space, target_p: float, f) -> np.ndarray:
    """Mazur map from the sphere of l_p(mu) onto the sphere of l_q(mu).

    For unit f the image is sign(f_i)|f_i|^(p/q); general f are handled by
    positive homogeneity of degree one.  Exponents must be finite.
    """
    p, q = space.p, target_p
    if q < 1:
        raise DomainError(f"target exponent must satisfy q >= 1, got {q}")
    if math.isinf(p) or math.isinf(q):
        raise DomainError("mazur map is defined for finite exponents only")
    v = space.check_vector(f)
    nf = norm(space, v)
    if nf == 0.0:
        return np.zeros_like(v)
    unit = v / nf
    return nf * np.sign(unit) * np.abs(unit) ** (p / q)
