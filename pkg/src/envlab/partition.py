"""Set partitions of the atoms, conditional expectations, conditional envelope.

A partition stands in for a sigma-algebra on the n atoms: measurable
functions are the block-constant vectors, and the conditional expectation is
weighted block averaging.  The partition generated by a subspace is the
common refinement of the level sets of its canonical basis vectors, with a
relative gap threshold so that nearly-equal values merge (keeping the
generated sigma-algebra minimal under noise).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .space import Space
from .subspace import Subspace, _canonicalize, intersect

__all__ = [
    "Partition",
    "discrete",
    "one_block",
    "generated_partition",
    "conditional_expectation",
    "fixed_space",
    "meet",
    "join",
    "is_refinement",
    "conditional_envelope",
    "common_refinement_of_rows",
]

GAP_TOL = 1e-8


@dataclass(frozen=True)
class Partition:
    """Disjoint cover of {0..n-1}; blocks ordered by smallest member."""

    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = sorted(a for blk in self.blocks for a in blk)
        if seen != list(range(self.n)) or any(len(b) == 0 for b in self.blocks):
            raise DimensionError("blocks must disjointly cover the atoms")
        canon = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[0]))
        object.__setattr__(self, "blocks", canon)

    def block_of(self) -> np.ndarray:
        """Array mapping atom index -> block index."""
        out = np.empty(self.n, dtype=int)
        for k, blk in enumerate(self.blocks):
            out[list(blk)] = k
        return out

    def __len__(self) -> int:
        return len(self.blocks)

    def to_json(self) -> dict:
        return {"blocks": [[a + 1 for a in blk] for blk in self.blocks]}

    @staticmethod
    def from_json(obj: dict | str, n: int | None = None) -> "Partition":
        from .serialize import parse_partition

        if isinstance(obj, str):
            obj = json.loads(obj)
        return parse_partition(obj, n=n)


def discrete(n: int) -> Partition:
    return Partition(n, tuple((i,) for i in range(n)))


def one_block(n: int) -> Partition:
    return Partition(n, (tuple(range(n)),))


def _level_blocks(values: np.ndarray, tol: float) -> list[list[int]]:
    """Level sets of one vector: sort, split at gaps above tol * range."""
    m = values.shape[0]
    vrange = float(np.max(values) - np.min(values))
    scale = max(1.0, float(np.max(np.abs(values))))
    if vrange <= tol * scale:
        return [list(range(m))]
    order = np.argsort(values, kind="stable")
    svals = values[order]
    blocks, current = [], [int(order[0])]
    for k in range(1, m):
        if svals[k] - svals[k - 1] > tol * vrange:
            blocks.append(current)
            current = []
        current.append(int(order[k]))
    blocks.append(current)
    return blocks


def common_refinement_of_rows(rows: np.ndarray, tol: float = GAP_TOL) -> list[list[int]]:
    """Blocks on which every row of ``rows`` is constant (within tolerance)."""
    m = rows.shape[1]
    labels = np.zeros(m, dtype=int)
    for row in rows:
        sub = np.zeros(m, dtype=int)
        for k, blk in enumerate(_level_blocks(row, tol)):
            sub[blk] = k
        labels = labels * (np.max(sub) + 1) + sub
        _, labels = np.unique(labels, return_inverse=True)
    blocks: dict[int, list[int]] = {}
    for atom, lab in enumerate(labels):
        blocks.setdefault(int(lab), []).append(atom)
    return sorted(blocks.values(), key=lambda b: b[0])


def generated_partition(y: Subspace, tol: float = GAP_TOL) -> Partition:
    """Smallest partition making every vector of y block-constant."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = y.ambient.n
    if y.dim == 0:
        return one_block(n)
    blocks = common_refinement_of_rows(y.basis, tol)
    return Partition(n, tuple(tuple(b) for b in blocks))


def conditional_expectation(space: Space, part: Partition) -> np.ndarray:
    """Weighted block-averaging projection attached to the partition.

    ``(Ef)_i = sum_{j in B(i)} mu_j f_j / sum_{j in B(i)} mu_j``; E is
    idempotent, fixes the constants and is contractive in every p-norm on
    the same weighted space.
    """
    if part.n != space.n:
        raise DimensionError(f"partition on {part.n} atoms, space has n={space.n}")
    e = np.zeros((space.n, space.n))
    for blk in part.blocks:
        idx = list(blk)
        w = space.mu[idx]
        e[np.ix_(idx, idx)] = np.tile(w / np.sum(w), (len(idx), 1))
    return e


def fixed_space(space: Space, part: Partition) -> Subspace:
    """Block-constant vectors; dimension equals the number of blocks."""
    if part.n != space.n:
        raise DimensionError(f"partition on {part.n} atoms, space has n={space.n}")
    gens = np.zeros((len(part.blocks), space.n))
    for k, blk in enumerate(part.blocks):
        gens[k, list(blk)] = 1.0
    return _canonicalize(space, gens, 1e-12)


def meet(p: Partition, q: Partition) -> Partition:
    """Common refinement (the finer partition below both)."""
    if p.n != q.n:
        raise DimensionError("partitions of different atom counts")
    pb, qb = p.block_of(), q.block_of()
    pairs = pb * (np.max(qb) + 1) + qb
    blocks: dict[int, list[int]] = {}
    for atom, lab in enumerate(pairs):
        blocks.setdefault(int(lab), []).append(atom)
    return Partition(p.n, tuple(tuple(b) for b in blocks.values()))


def join(p: Partition, q: Partition) -> Partition:
    """Finest common coarsening: transitive closure of the two block relations."""
    if p.n != q.n:
        raise DimensionError("partitions of different atom counts")
    parent = list(range(p.n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for part in (p, q):
        for blk in part.blocks:
            for a in blk[1:]:
                union(blk[0], a)
    blocks: dict[int, list[int]] = {}
    for atom in range(p.n):
        blocks.setdefault(find(atom), []).append(atom)
    return Partition(p.n, tuple(tuple(b) for b in blocks.values()))


def is_refinement(p: Partition, q: Partition) -> bool:
    """Whether p refines q (every block of p sits inside a block of q)."""
    if p.n != q.n:
        raise DimensionError("partitions of different atom counts")
    qb = q.block_of()
    return all(len({int(qb[a]) for a in blk}) == 1 for blk in p.blocks)


def conditional_envelope(y: Subspace, tol: float = GAP_TOL) -> Subspace:
    """Block-constant vectors of the partition generated by y.

    Always unital and contains y; this is the smallest range of a weighted
    block-averaging projection containing y.
    """
    return fixed_space(y.ambient, generated_partition(y, tol))


def intersection_oracle(space: Space, p: Partition, q: Partition) -> bool:
    """Brute-force identity fixed(join(P,Q)) == fixed(P) & fixed(Q), exactly."""
    lhs = fixed_space(space, join(p, q))
    rhs = intersect(fixed_space(space, p), fixed_space(space, q))
    from .subspace import equal

    return equal(lhs, rhs, 1e-9)
