"""Acceptance gate: every shipped criterion at its stated tolerance.

Each test runs one seeded criterion end to end, asserts the budgeted wall
time, and prints a single PASS/FAIL line (visible with ``pytest -s`` or in
the captured output).
"""

import time

from envlab.suites import SUITES


def _run(criterion: str, suite: str, trials: int, budget_s: float, seed: int = 42):
    t0 = time.perf_counter()
    result = SUITES[suite](trials=trials, seed=seed)
    elapsed = time.perf_counter() - t0
    status = "PASS" if result.ok and elapsed < budget_s else "FAIL"
    print(
        f"{status} {criterion}: {result.passes}/{result.trials} checks, "
        f"worst residual {result.worst_residual:.3g}, {elapsed:.1f}s"
    )
    assert result.ok, f"{criterion}: {result.failures} failures; {result.details[:5]}"
    assert elapsed < budget_s, f"{criterion}: {elapsed:.1f}s over budget {budget_s}s"
    return result


def test_criterion_01_envelope_axioms():
    # conditional, lattice, algebraic and isometric maps x 200 subspaces,
    # subspace equality at 1e-7, under 120 s
    _run("criterion 1 (envelope axioms)", "axioms", 200, 120.0)


def test_criterion_02_unital_collapse():
    # 100 random unital subspaces, n in 3..6, uniform weights,
    # p in {1, 1.5, 3, 5}: all four envelopes coincide at 1e-7 and the
    # block-average projection verifies norm <= 1 + 1e-6; under 60 s
    _run("criterion 2 (unital envelope collapse)", "unital-collapse", 100, 60.0)


def test_criterion_03_intersection_projections():
    # 50 seeded pairs of block-average projections: the averaged iteration
    # converges below 1e-6 and lands exactly on the join-partition range,
    # staying p-contractive on 100 sampled vectors per instance
    _run("criterion 3 (intersection projections)", "intersection", 50, 120.0)


def test_criterion_04_cesaro_vs_spectral():
    # 100 seeded convex combinations of signed permutations (n <= 6):
    # Cesaro limit within 1e-6 of the spectral projection
    result = _run("criterion 4 (cesaro vs spectral oracle)", "cesaro-oracle", 100, 120.0)
    assert result.worst_residual <= 1e-6


def test_criterion_05_fixed_space_splitting():
    # 50 seeded generated groups (|G| <= 10^4), p in {1.5, 3}: exact
    # direct-sum rank identity and duality-map residual <= 1e-8
    result = _run("criterion 5 (ergodic splitting)", "ergodic-split", 50, 120.0)
    assert result.worst_residual <= 1e-8


def test_criterion_06_constants():
    # curve: value 1 at p=2 (1e-12), conjugate symmetry on a 50-point grid
    # (1e-10), strict monotonicity on [1.001, 2] and [2, 50];
    # growth: anchors 1 and 4/pi (1e-12), nondecreasing through n = 64;
    # all under 1 s
    t0 = time.perf_counter()
    curve = SUITES["euclidean-curve"](trials=50, seed=42)
    growth = SUITES["euclidean-growth"](trials=64, seed=42)
    elapsed = time.perf_counter() - t0
    ok = curve.ok and growth.ok and elapsed < 1.0
    print(
        f"{'PASS' if ok else 'FAIL'} criterion 6 (complementation constants): "
        f"{curve.passes + growth.passes} checks, {elapsed:.2f}s"
    )
    assert curve.ok, curve.details[:5]
    assert growth.ok, growth.details[:5]
    assert elapsed < 1.0


def test_criterion_07_pushout_counterexample():
    # screening finds a 2-dim subspace of l_1^3 with projection constant
    # >= 1.01 (exact polyhedral), the glued double space keeps both copies
    # 1-complemented (<= 1 + 1e-6) while the glued plane stays >= 1.005;
    # under 10 minutes
    _run("criterion 7 (pushout counterexample)", "pushout", 200, 600.0)


def test_criterion_08_hilbert_collapse():
    # 100 random subspaces at p=2: envelope equals the subspace exactly and
    # the minimal projection norm is 1 within 1e-9
    _run("criterion 8 (hilbert collapse)", "hilbert", 100, 120.0)


def test_criterion_09_mazur_conjugation():
    # 200 random signed permutations, p, q in {1, 1.5, 3}: conjugation by
    # the sphere maps acts as the same signed permutation, spheres map to
    # spheres within 1e-10
    result = _run("criterion 9 (mazur conjugation)", "mazur", 200, 120.0)
    assert result.worst_residual <= 1e-10


def test_criterion_10_union_chains():
    # 50 seeded nested chains (uniform weights, p=3): conditional and
    # isometric envelopes of the top space equal the span of the stage
    # envelopes exactly
    _run("criterion 10 (envelopes along chains)", "union", 50, 120.0)
