"""envlab: envelopes, contractive projections and projection constants in
finite-dimensional weighted Lebesgue spaces.

The library is organized around a small set of immutable values: ``Space``
(atoms, exponent, weights), ``Subspace`` (canonical reference-orthonormal
basis), ``Partition`` (sigma-algebra on the atoms) and ``SignedPermutation``
(isometry for p != 2).  On top of them sit four envelope maps (conditional,
lattice, algebraic, isometric), mean-ergodic projection machinery, minimal
projection searches and the pushout gluing, all with seeded, reproducible
verification suites (see ``envlab.suites`` and the ``envlab`` CLI).
"""

__version__ = "0.1.0"

from .errors import EnvlabError
from .space import Space, dual, dual_exponent, duality_map, mazur_map, norm, pairing
from .subspace import (
    Subspace,
    add,
    contains,
    divide_by,
    equal,
    from_vectors,
    intersect,
    is_unital,
    lattice_closure,
    whole_space,
    zero_subspace,
)
from .partition import (
    Partition,
    conditional_envelope,
    conditional_expectation,
    fixed_space,
    generated_partition,
    is_refinement,
    join,
    meet,
)
from .isometry import (
    EnvelopeReport,
    SignedPermutation,
    algebraic_envelope,
    apply,
    close_group,
    enumerate_group,
    extend_partial_isometry,
    fixed_space_of,
    group_average_projection,
    isometric_envelope,
    stabilizer,
)
from .ergodic import (
    ContractionOperator,
    ErgodicReport,
    cesaro_projection,
    intersection_projection,
    jdlg_check,
    mean_ergodic_value,
    spectral_projection,
)
from .complement import (
    ProjectionSearchResult,
    c2_formula,
    c2n_l1,
    find_pushout_counterexample,
    is_one_complemented,
    min_projection_norm,
    op_norm,
    pushout,
    scan_c2,
)

__all__ = [name for name in dir() if not name.startswith("_")]
