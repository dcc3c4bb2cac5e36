"""JSON parsing for the wire formats, with located errors.

Formats:
  Space              {"n": int, "p": number|"inf", "weights": [number, ...]}
  Vector             [number, ...]
  Subspace           {"basis": [[number, ...], ...]}   (canonicalized on load)
  Partition          {"blocks": [[int, ...], ...]}     (1-based atoms)
  SignedPermutation  {"perm": [int, ...], "signs": [1|-1, ...]}  (1-based images)
  Operator           {"entries": [[number, ...], ...]} (row-major)
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ParseError


def _need(obj: dict, key: str, where: str):
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object, got {type(obj).__name__}")
    if key not in obj:
        raise ParseError(f"{where}: missing key '{key}'")
    return obj[key]


def _number_list(value, where: str) -> list[float]:
    if not isinstance(value, list):
        raise ParseError(f"{where}: expected an array")
    out = []
    for i, x in enumerate(value):
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise ParseError(f"{where}[{i}]: expected a number, got {x!r}")
        out.append(float(x))
    return out


def parse_space(obj) -> "Space":
    from .space import Space

    n = _need(obj, "n", "space")
    if not isinstance(n, int) or n < 1:
        raise ParseError(f"space.n: expected a positive integer, got {n!r}")
    p = _need(obj, "p", "space")
    if p == "inf":
        p = math.inf
    if isinstance(p, bool) or not isinstance(p, (int, float)):
        raise ParseError(f"space.p: expected a number or 'inf', got {p!r}")
    weights = _number_list(_need(obj, "weights", "space"), "space.weights")
    if len(weights) != n:
        raise ParseError(f"space.weights: expected {n} entries, got {len(weights)}")
    if any(w <= 0 for w in weights):
        raise ParseError("space.weights: all weights must be strictly positive")
    return Space(n, float(p), tuple(weights))


def parse_vector(space, value) -> np.ndarray:
    coords = _number_list(value, "vector")
    if len(coords) != space.n:
        raise ParseError(f"vector: expected {space.n} coords, got {len(coords)}")
    return np.array(coords)


def parse_subspace(space, obj, tol: float = 1e-9):
    from .subspace import from_vectors

    basis = _need(obj, "basis", "subspace")
    if not isinstance(basis, list) or not basis:
        raise ParseError("subspace.basis: expected a nonempty array of vectors")
    rows = [
        _number_list(row, f"subspace.basis[{i}]") for i, row in enumerate(basis)
    ]
    for i, row in enumerate(rows):
        if len(row) != space.n:
            raise ParseError(
                f"subspace.basis[{i}]: expected {space.n} coords, got {len(row)}"
            )
    return from_vectors(space, np.array(rows), tol)


def parse_partition(obj, n: int | None = None):
    from .partition import Partition

    blocks = _need(obj, "blocks", "partition")
    if not isinstance(blocks, list) or not blocks:
        raise ParseError("partition.blocks: expected a nonempty array of blocks")
    parsed = []
    seen = set()
    for i, blk in enumerate(blocks):
        if not isinstance(blk, list) or not blk:
            raise ParseError(f"partition.blocks[{i}]: expected a nonempty array")
        atoms = []
        for j, a in enumerate(blk):
            if isinstance(a, bool) or not isinstance(a, int) or a < 1:
                raise ParseError(
                    f"partition.blocks[{i}][{j}]: expected a 1-based atom index"
                )
            if a in seen:
                raise ParseError(f"partition.blocks[{i}][{j}]: atom {a} repeated")
            seen.add(a)
            atoms.append(a - 1)
        parsed.append(tuple(atoms))
    total = n if n is not None else len(seen)
    if seen != set(range(1, total + 1)):
        raise ParseError("partition.blocks: blocks must cover atoms 1..n exactly")
    return Partition(total, tuple(parsed))


def parse_signed_permutation(obj):
    from .isometry import SignedPermutation

    perm = _need(obj, "perm", "signed_permutation")
    signs = _need(obj, "signs", "signed_permutation")
    if not isinstance(perm, list) or not isinstance(signs, list):
        raise ParseError("signed_permutation: perm and signs must be arrays")
    n = len(perm)
    if len(signs) != n:
        raise ParseError("signed_permutation: perm and signs lengths differ")
    images = []
    for i, v in enumerate(perm):
        if isinstance(v, bool) or not isinstance(v, int) or not 1 <= v <= n:
            raise ParseError(f"signed_permutation.perm[{i}]: bad image {v!r}")
        images.append(v - 1)
    eps = []
    for i, s in enumerate(signs):
        if s not in (1, -1):
            raise ParseError(f"signed_permutation.signs[{i}]: expected +-1, got {s!r}")
        eps.append(int(s))
    if sorted(images) != list(range(n)):
        raise ParseError("signed_permutation.perm: not a permutation")
    return SignedPermutation(tuple(images), tuple(eps))


def parse_operator(space, obj) -> np.ndarray:
    entries = _need(obj, "entries", "operator")
    if not isinstance(entries, list) or len(entries) != space.n:
        raise ParseError(f"operator.entries: expected {space.n} rows")
    rows = []
    for i, row in enumerate(entries):
        vals = _number_list(row, f"operator.entries[{i}]")
        if len(vals) != space.n:
            raise ParseError(
                f"operator.entries[{i}]: expected {space.n} columns, got {len(vals)}"
            )
        rows.append(vals)
    return np.array(rows)
