#!/usr/bin/env python3
"""Why minimal 1-complemented superspaces can fail to exist without convexity.

Glue two copies of l_1^3 along a badly complemented plane: both copies stay
1-complemented in the quotient, but their intersection (the glued plane)
keeps a projection constant bounded away from one.  So two 1-complemented
subspaces intersect in one that is not, and the plane has no smallest
1-complemented superspace in the glued space.
"""

import numpy as np

from envlab.complement import (
    _lambda_in_quotient,
    find_pushout_counterexample,
    min_projection_norm,
    pushout,
)
from envlab.space import Space, norm
from envlab.subspace import from_vectors

print("=" * 72)
print("1. Hand-built witness: the mean-zero plane in l_1^3")
print("=" * 72)
l1 = Space(3, 1.0, (1.0, 1.0, 1.0))
plane = from_vectors(l1, [[1, -1, 0], [0, 1, -1]])
lam = min_projection_norm(l1, plane, 1.0).upper_bound
print(f"lambda(plane, l_1^3) = {lam:.6f}  (exact LP; classical value 4/3)")

glued = pushout(l1, plane)
print(f"glued space dimension: {glued.dim} (= 2n - dim Y)")
kernel_norm = max(glued.quotient_norm(np.concatenate([b, -b])) for b in plane.basis)
print(f"kernel classes have quotient norm {kernel_norm:.1e}")
x = np.array([1.0, 2.0, -0.5])
w = np.concatenate([x, np.zeros(3)])
print(f"the copies embed isometrically: |q((x,0)) - ||x||| = "
      f"{abs(glued.quotient_norm(w) - norm(l1, x)):.1e}")

for copy in (0, 1):
    t = glued.copy_projection(copy)
    print(f"copy {copy + 1}: projection norm on the glued space = "
          f"{glued.op_norm_polyhedral(t):.9f}  (contractive)")

lam_w = _lambda_in_quotient(glued)
print(f"lambda(glued plane, W) = {lam_w:.6f}  (still far from 1)")
print("=> the intersection of two 1-complemented copies is not 1-complemented")

print()
print("=" * 72)
print("2. Seeded screening search (as run by `envlab pushout`)")
print("=" * 72)
witness = find_pushout_counterexample(seed=42, tries=200)
print(f"found at n = {witness.n} after {witness.tries} tries"
      f"{' (escalated)' if witness.escalated else ''}")
print(f"lambda in the base space:  {witness.lambda_in_base:.6f}  (>= 1.01)")
print(f"copy norms in the quotient: {witness.copy_norms[0]:.9f}, "
      f"{witness.copy_norms[1]:.9f}")
print(f"lambda of the glued plane: {witness.lambda_in_quotient:.6f}  (>= 1.005)")
