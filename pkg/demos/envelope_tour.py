#!/usr/bin/env python3
"""A walking tour of the four envelope maps on a small weighted space.

Runs through: the conditional envelope (block-constant vectors of the
generated partition), the lattice closure, the algebraic envelope (fixed
vectors of the stabilizer in the signed-permutation group), the isometric
envelope, and how they collapse to one space for unital subspaces over
uniform weights -- then how non-uniform weights starve the group and split
the chain.
"""

import numpy as np

from envlab.isometry import (
    algebraic_envelope,
    apply,
    enumerate_group,
    extend_partial_isometry,
    isometric_envelope,
    stabilizer,
)
from envlab.partition import conditional_envelope, generated_partition
from envlab.space import Space
from envlab.subspace import equal, from_vectors, lattice_closure


def show(name, sub):
    rows = ", ".join("(" + ", ".join(f"{x:+.3f}" for x in b) + ")" for b in sub.basis)
    print(f"  {name:<12} dim {sub.dim}:  {rows}")


print("=" * 72)
print("1. A unital subspace of l_3^3 with uniform weights")
print("=" * 72)
space = Space(3, 3.0, (1.0, 1.0, 1.0))
y = from_vectors(space, [[1, 1, 1], [1, 1, 2]])
print(f"Y = span{{1, (1,1,2)}},  generated partition: "
      f"{[tuple(a + 1 for a in b) for b in generated_partition(y).blocks]}")

cond = conditional_envelope(y)
lat = lattice_closure(space, y)
alg = algebraic_envelope(space, y)
iso = isometric_envelope(space, y).subspace
show("conditional", cond)
show("lattice", lat)
show("algebraic", alg)
show("isometric", iso)
print(f"all four coincide: {equal(cond, lat) and equal(cond, alg) and equal(cond, iso)}")
print(f"isometry group size: {len(enumerate_group(space))}, "
      f"stabilizer of Y: {len(stabilizer(space, y))} elements")

print()
print("=" * 72)
print("2. Starving the group: weights (1, 2, 4) admit no atom swaps")
print("=" * 72)
space2 = Space(3, 3.0, (1.0, 2.0, 4.0))
y2 = from_vectors(space2, [[1, 1, 1], [1, 1, 2]])
cond2 = conditional_envelope(y2)
alg2 = algebraic_envelope(space2, y2)
show("conditional", cond2)
show("algebraic", alg2)
print(f"group size: {len(enumerate_group(space2))} (signs only)")
print("the conditional envelope stays 2-dimensional while the stabilizer is")
print("trivial, so the algebraic/isometric envelope fills the whole space:")
print(f"  strict inclusion: {cond2.dim} < {alg2.dim}")

print()
print("=" * 72)
print("3. Korovkin pair: constants plus a separating vector span everything")
print("=" * 72)
space4 = Space(4, 3.0, (1.0,) * 4)
pair = from_vectors(space4, [[1, 1, 1, 1], [0, 1, 2, 3]])
print(f"env of span{{1, t}} with t=(0,1,2,3): dim {conditional_envelope(pair).dim} "
      f"(whole space), lattice closure dim {lattice_closure(space4, pair).dim}")

print()
print("=" * 72)
print("4. Extending a partial isometry through the envelope")
print("=" * 72)
gens = np.array([[1.0, 1, 1], [1, 1, 2]])
images = np.array([[1.0, 1, 1], [2, 1, 1]])
coeff = y.basis @ np.linalg.pinv(gens)
witness = extend_partial_isometry(space, y, coeff @ images)
print("prescribe 1 -> 1 and (1,1,2) -> (2,1,1); the unique envelope restriction")
print(f"is carried by the signed permutation {witness.to_json()}")
print(f"  check: g(1,1,2) = {apply(space, witness, [1, 1, 2])}")
print(f"  action on the envelope: (a,a,b) -> (b,a,a), e.g. "
      f"g(1,1,0) = {apply(space, witness, [1, 1, 0])}")
