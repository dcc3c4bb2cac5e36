import numpy as np
import pytest

from envlab.errors import (
    HilbertCaseError,
    NotAGroupError,
    NotExtendableError,
    NotIsometryError,
    TooLargeError,
)
from envlab.isometry import (
    SignedPermutation,
    UniquenessReport,
    algebraic_envelope,
    apply,
    close_group,
    compose,
    cycle_partition,
    enumerate_group,
    extend_partial_isometry,
    fixed_space_of,
    group_average_projection,
    group_order,
    identity,
    isometric_envelope,
    matrix,
    stabilizer,
)
from envlab.partition import (
    Partition,
    conditional_envelope,
    conditional_expectation,
    fixed_space,
)
from envlab.sampling import random_signed_permutation
from envlab.space import Space, norm
from envlab.subspace import contains, equal, from_vectors, whole_space, zero_subspace

SHIFT3 = SignedPermutation((1, 2, 0), (1, 1, 1))
SWAP12 = SignedPermutation((1, 0, 2), (1, 1, 1))
FLIP3 = SignedPermutation((0, 1, 2), (1, 1, -1))


def test_apply_examples(u3):
    f = np.array([1.0, 2.0, 3.0])
    np.testing.assert_allclose(apply(u3, identity(3), f), f)
    np.testing.assert_allclose(apply(u3, SWAP12, f), [2, 1, 3])
    np.testing.assert_allclose(apply(u3, FLIP3, f), [1, 2, -3])


def test_apply_weight_obstruction():
    sp = Space(2, 3.0, (1.0, 2.0))
    with pytest.raises(NotIsometryError):
        apply(sp, SignedPermutation((1, 0), (1, 1)), [1.0, 0.0])


def test_apply_preserves_every_p_norm(rng):
    sp = Space(5, 1.0, (1.0, 1.0, 2.0, 2.0, 2.0))
    for _ in range(50):
        g = random_signed_permutation(rng, sp)
        f = rng.standard_normal(5)
        for p in (1.0, 3.0, 7.0):
            spp = sp.with_p(p)
            assert norm(spp, apply(spp, g, f)) == pytest.approx(norm(spp, f), rel=1e-12)


def test_enumerate_group_sizes():
    assert len(enumerate_group(Space(1, 3.0, (1.0,)))) == 2
    assert len(enumerate_group(Space(2, 3.0, (1.0, 1.0)))) == 8
    assert len(enumerate_group(Space(2, 3.0, (1.0, 2.0)))) == 4
    assert group_order(Space(3, 3.0, (1.0, 1.0, 1.0))) == 48


def test_enumerate_group_order_deterministic():
    sp = Space(1, 3.0, (1.0,))
    g = enumerate_group(sp)
    assert g[0].signs == (1,) and g[1].signs == (-1,)


def test_enumerate_group_guards():
    with pytest.raises(HilbertCaseError):
        enumerate_group(Space(2, 2.0, (1.0, 1.0)))
    with pytest.raises(TooLargeError):
        enumerate_group(Space(9, 3.0, (1.0,) * 9))


def test_group_closure_and_isometry(u3):
    group = enumerate_group(u3)
    keys = {(g.perm, g.signs) for g in group}
    rng = np.random.default_rng(3)
    for _ in range(60):
        a = group[rng.integers(len(group))]
        b = group[rng.integers(len(group))]
        ab = compose(a, b)
        assert (ab.perm, ab.signs) in keys
        inv = a.inverse()
        assert (inv.perm, inv.signs) in keys
        assert compose(a, inv).is_identity()
        np.testing.assert_allclose(matrix(ab), matrix(a) @ matrix(b), atol=0)


def test_stabilizer_examples(u3):
    assert [g.is_identity() for g in stabilizer(u3, whole_space(u3))] == [True]
    assert len(stabilizer(u3, zero_subspace(u3))) == 48
    st = stabilizer(u3, from_vectors(u3, [[1, 1, 0]]))
    assert len(st) == 4
    perms = {g.perm for g in st}
    assert perms == {(0, 1, 2), (1, 0, 2)}
    assert all(g.signs[0] == 1 and g.signs[1] == 1 for g in st)


def test_fixed_space_of_examples(u3):
    assert fixed_space_of(u3, [identity(3)]).dim == 3
    neg = SignedPermutation((0, 1, 2), (-1, -1, -1))
    assert fixed_space_of(u3, [neg]).dim == 0
    fs = fixed_space_of(u3, [SHIFT3])
    assert fs.dim == 1 and contains(fs, [1, 1, 1])


def test_fixed_space_matches_cycle_partition(rng):
    # single permutation with positive signs: fixed space = cycle constants
    sp = Space(6, 3.0, (1.0,) * 6)
    for _ in range(40):
        g = random_signed_permutation(rng, sp)
        g = SignedPermutation(g.perm, (1,) * 6)
        lhs = fixed_space_of(sp, [g])
        rhs = fixed_space(sp, cycle_partition(g))
        assert lhs.dim == rhs.dim and equal(lhs, rhs, 1e-10)


def test_algebraic_envelope_examples(u3):
    y = from_vectors(u3, [[1, 1, 1], [1, 1, 2]])
    env = algebraic_envelope(u3, y)
    assert equal(env, fixed_space(u3, Partition(3, ((0, 1), (2,)))))
    # p = 2 collapses to the subspace itself
    sp2 = Space(3, 2.0, (1.0, 1.0, 1.0))
    y2 = from_vectors(sp2, [[1, 2, 0]])
    assert algebraic_envelope(sp2, y2) is y2
    # weight-starved group: no swap is compatible, envelope fills the space
    sp3 = Space(3, 3.0, (1.0, 2.0, 4.0))
    y3 = from_vectors(sp3, [[1, 1, 1], [1, 1, 2]])
    assert algebraic_envelope(sp3, y3).dim == 3
    assert conditional_envelope(y3).dim == 2


def test_isometric_envelope_report(u3):
    y = from_vectors(u3, [[1, 1, 1], [1, 1, 2]])
    rep = isometric_envelope(u3, y)
    assert rep.equals_algebraic
    assert equal(rep.subspace, conditional_envelope(y), 1e-9)


def test_envelope_equivariance(rng):
    # env(gY) = g env(Y) for group elements g
    sp = Space(5, 3.0, (1.0,) * 5)
    for _ in range(25):
        y = from_vectors(sp, rng.standard_normal((2, 5)))
        g = random_signed_permutation(rng, sp)
        lhs = algebraic_envelope(sp, from_vectors(sp, np.array([apply(sp, g, b) for b in y.basis])))
        env = algebraic_envelope(sp, y)
        rhs = from_vectors(sp, np.array([apply(sp, g, b) for b in env.basis]))
        assert lhs.dim == rhs.dim and equal(lhs, rhs, 1e-8)


def test_envelope_chain_inclusions():
    # conditional (= minimal, for unital ranges) <= isometric <= algebraic,
    # on unital subspaces over arbitrary enumerable weights
    from envlab.sampling import random_space, random_unital_subspace, rng_for

    for t in range(200):
        rng = rng_for(314, t)
        n = int(rng.integers(3, 7))
        p = float(rng.choice([1.0, 1.5, 3.0, 5.0]))
        style = ["uniform", "clustered", "random"][t % 3]
        sp = random_space(rng, n, p, style)
        y = random_unital_subspace(rng, sp)
        cond = conditional_envelope(y)
        iso = isometric_envelope(sp, y, 1e-8).subspace
        alg = algebraic_envelope(sp, y, 1e-8)
        assert all(contains(iso, b, 1e-7) for b in cond.basis)
        assert all(contains(alg, b, 1e-7) for b in iso.basis)


def test_stabilizer_average_projects_onto_envelope(rng):
    # the average over the stabilizer is a contractive projection whose
    # range is exactly the isometric envelope (uniform weights)
    for p in (1.0, 1.5, 3.0):
        sp = Space(5, p, (1.0,) * 5)
        for _ in range(20):
            y = from_vectors(sp, rng.standard_normal((int(rng.integers(1, 4)), 5)))
            st = stabilizer(sp, y)
            avg = group_average_projection(sp, st)
            env = isometric_envelope(sp, y).subspace
            np.testing.assert_allclose(avg @ avg, avg, atol=1e-12)
            for b in env.basis:
                np.testing.assert_allclose(avg @ b, b, atol=1e-10)
            u, svals, _ = np.linalg.svd(avg)
            assert int(np.sum(svals > 0.5)) == env.dim
            for _ in range(10):
                f = rng.standard_normal(5)
                assert norm(sp, avg @ f) <= norm(sp, f) + 1e-12


def test_fixed_space_of_convex_average_matches_stabilizer(u3):
    # strict convexity argument, discrete form: averaging the stabilizer
    # fixes exactly the stabilizer's common fixed vectors
    y = from_vectors(u3, [[1, 1, 2]])
    st = stabilizer(u3, y)
    avg = group_average_projection(u3, st)
    fs = fixed_space_of(u3, st)
    u, svals, _ = np.linalg.svd(avg)
    rank = int(np.sum(svals > 0.5))
    assert rank == fs.dim
    for b in fs.basis:
        np.testing.assert_allclose(avg @ b, b, atol=1e-12)


def test_group_average_examples(u3):
    neg = SignedPermutation((0, 1, 2), (-1, -1, -1))
    np.testing.assert_allclose(
        group_average_projection(u3, [identity(3), neg]), np.zeros((3, 3)), atol=0
    )
    e = group_average_projection(u3, [identity(3), SWAP12])
    expected = conditional_expectation(u3, cycle_partition(SWAP12))
    np.testing.assert_allclose(e, expected, atol=1e-15)
    st = stabilizer(u3, from_vectors(u3, [[1, 1, 1], [1, 1, 2]]))
    e2 = group_average_projection(u3, st)
    np.testing.assert_allclose(
        e2, conditional_expectation(u3, Partition(3, ((0, 1), (2,)))), atol=1e-15
    )


def test_group_average_rejects_non_groups(u3):
    with pytest.raises(NotAGroupError):
        group_average_projection(u3, [SHIFT3])  # no identity, not closed
    with pytest.raises(NotAGroupError):
        group_average_projection(u3, [identity(3), SHIFT3])  # missing shift^2


def test_close_group(u3):
    group = close_group([SHIFT3])
    assert len(group) == 3
    with pytest.raises(TooLargeError):
        close_group([SHIFT3, SWAP12, FLIP3], cap=5)


def test_extension_identity(u3):
    y = from_vectors(u3, [[1, 1, 1], [1, 1, 2]])
    out = extend_partial_isometry(u3, y, y.basis)
    assert isinstance(out, SignedPermutation)
    for b in y.basis:
        np.testing.assert_allclose(apply(u3, out, b), b, atol=1e-12)


def test_extension_reversal(u3):
    # prescribe 1 -> 1 and (1,1,2) -> (2,1,1) on the generators, convert to
    # the canonical basis, and expect the atom-reversing restriction
    gens = np.array([[1.0, 1, 1], [1, 1, 2]])
    images = np.array([[1.0, 1, 1], [2, 1, 1]])
    y = from_vectors(u3, gens)
    coeff = y.basis @ np.linalg.pinv(gens)
    out = extend_partial_isometry(u3, y, coeff @ images)
    assert isinstance(out, SignedPermutation)
    np.testing.assert_allclose(apply(u3, out, [1, 1, 2]), [2, 1, 1], atol=1e-12)
    np.testing.assert_allclose(apply(u3, out, [1, 1, 1]), [1, 1, 1], atol=1e-12)
    # the restriction to the envelope maps (a,a,b) to (b,a,a)
    np.testing.assert_allclose(apply(u3, out, [1, 1, 0]), [0, 1, 1], atol=1e-12)


def test_extension_weight_obstruction():
    sp = Space(2, 3.0, (1.0, 2.0))
    y = from_vectors(sp, [[1.0, 0.0]])
    scale = norm(sp, y.basis[0]) / norm(sp, [0.0, 1.0])
    with pytest.raises(NotExtendableError):
        extend_partial_isometry(sp, y, [np.array([0.0, scale])])


def test_extension_rejects_non_isometry(u3):
    y = from_vectors(u3, [[1, 0, 0]])
    with pytest.raises(NotIsometryError):
        extend_partial_isometry(u3, y, [np.array([2.0, 0.0, 0.0])])


def test_extension_unique_on_envelope_even_with_many_witnesses(u3):
    # both agreeing group elements restrict identically on the envelope
    y = from_vectors(u3, [[1, 1, 1], [1, 1, 2]])
    out = extend_partial_isometry(u3, y, y.basis)
    assert not isinstance(out, UniquenessReport)


def test_signed_permutation_json_round_trip():
    g = SignedPermutation((2, 0, 1), (1, -1, 1))
    obj = g.to_json()
    assert obj == {"perm": [3, 1, 2], "signs": [1, -1, 1]}
    again = SignedPermutation.from_json(obj)
    assert again == g
