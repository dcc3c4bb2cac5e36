"""Seeded random instances for the verification suites and tests.

Everything is driven by a numpy Generator so that a (seed, trial) pair fully
determines the instance; suites derive per-trial seeds as seed + index.
"""

from __future__ import annotations

import numpy as np

from .ergodic import ContractionOperator, from_convex_combination
from .isometry import SignedPermutation, _weight_classes
from .partition import Partition
from .space import Space
from .subspace import Subspace, from_vectors

__all__ = [
    "rng_for",
    "random_space",
    "random_partition",
    "random_subspace",
    "random_unital_subspace",
    "random_signed_permutation",
    "random_convex_combination",
    "nested_unital_chain",
]


def rng_for(seed: int, trial: int = 0) -> np.random.Generator:
    return np.random.default_rng(int(seed) + int(trial))


def random_space(
    rng: np.random.Generator, n: int, p: float, weights: str = "uniform"
) -> Space:
    if weights == "uniform":
        w = (1.0,) * n
    elif weights == "random":
        w = tuple(float(x) for x in rng.uniform(0.5, 2.0, size=n))
    elif weights == "clustered":
        # a few repeated weight values, so the isometry group stays nontrivial
        values = rng.uniform(0.5, 2.0, size=max(1, n // 2))
        w = tuple(float(values[rng.integers(0, len(values))]) for _ in range(n))
    else:
        raise ValueError(f"unknown weight style {weights!r}")
    return Space(n, p, w)


def random_partition(rng: np.random.Generator, n: int, nblocks: int | None = None) -> Partition:
    k = int(nblocks) if nblocks else int(rng.integers(1, n + 1))
    labels = rng.integers(0, k, size=n)
    labels[rng.permutation(n)[:k]] = np.arange(k)  # keep every block nonempty
    blocks: dict[int, list[int]] = {}
    for atom, lab in enumerate(labels):
        blocks.setdefault(int(lab), []).append(atom)
    return Partition(n, tuple(tuple(b) for b in blocks.values()))


def random_subspace(rng: np.random.Generator, space: Space, dim: int | None = None) -> Subspace:
    d = int(dim) if dim else int(rng.integers(1, space.n))
    return from_vectors(space, rng.standard_normal((d, space.n)))


def random_unital_subspace(
    rng: np.random.Generator,
    space: Space,
    dim: int | None = None,
    block_structured: bool = True,
) -> Subspace:
    """A subspace containing the constants, optionally with repeated values.

    Block-structured generators produce nontrivial generated partitions; the
    generic branch almost surely generates the discrete partition.
    """
    n = space.n
    target = int(dim) if dim else int(rng.integers(1, n + 1))
    gens = [np.ones(n)]
    if block_structured and target > 1:
        part = random_partition(rng, n, nblocks=int(rng.integers(2, n + 1)))
        for _ in range(target - 1):
            values = rng.standard_normal(len(part.blocks))
            vec = np.empty(n)
            for k, blk in enumerate(part.blocks):
                vec[list(blk)] = values[k]
            gens.append(vec)
    else:
        for _ in range(target - 1):
            gens.append(rng.standard_normal(n))
    return from_vectors(space, np.array(gens))


def random_signed_permutation(rng: np.random.Generator, space: Space) -> SignedPermutation:
    """Uniformly random weight-compatible signed permutation."""
    sigma = np.empty(space.n, dtype=int)
    for cls in _weight_classes(space.mu):
        images = rng.permutation(len(cls))
        for src, img in zip(cls, images):
            sigma[src] = cls[int(img)]
    signs = tuple(int(s) for s in rng.choice((-1, 1), size=space.n))
    return SignedPermutation(tuple(int(x) for x in sigma), signs)


def random_convex_combination(
    rng: np.random.Generator, space: Space, k: int = 3, floor: float = 0.05
) -> ContractionOperator:
    """Convex combination with weights floored away from zero.

    A vanishing weight creates a near-unit eigenvalue whose Cesaro constant
    blows up like 1/weight; the floor keeps seeded instances well inside the
    doubling budgets used by the suites.
    """
    perms = [random_signed_permutation(rng, space) for _ in range(k)]
    weights = rng.dirichlet(np.ones(k)) * (1.0 - k * floor) + floor
    return from_convex_combination(space, perms, weights)


def nested_unital_chain(
    rng: np.random.Generator, space: Space, length: int = 5
) -> list[Subspace]:
    """Increasing chain Y_1 <= ... <= Y_length of unital subspaces."""
    n = space.n
    part = random_partition(rng, n, nblocks=int(rng.integers(2, n + 1)))
    gens = [np.ones(n)]
    chain = [from_vectors(space, np.array(gens))]
    while len(chain) < length:
        values = rng.standard_normal(len(part.blocks))
        vec = np.empty(n)
        for k, blk in enumerate(part.blocks):
            vec[list(blk)] = values[k]
        gens.append(vec)
        chain.append(from_vectors(space, np.array(gens)))
    return chain
