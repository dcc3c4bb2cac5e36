import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from envlab.errors import DimensionError, DomainError, NotStrictlyConvexError
from envlab.isometry import apply
from envlab.space import (
    Space,
    dual,
    dual_exponent,
    duality_map,
    mazur_map,
    norm,
    pairing,
)


def test_norm_examples():
    assert norm(Space(2, 1.0, (1, 1)), [1, 0]) == pytest.approx(1.0)
    assert norm(Space(2, 2.0, (1, 1)), [3, 4]) == pytest.approx(5.0)
    assert norm(Space(2, 3.0, (0.5, 0.5)), [1, 1]) == pytest.approx(1.0)


def test_norm_sup():
    sp = Space(3, 2.0, (1, 2, 3))
    assert norm(sp, [1, -4, 2], p=math.inf) == 4.0


def test_norm_shape_mismatch():
    with pytest.raises(DimensionError):
        norm(Space(2, 2.0, (1, 1)), [1, 2, 3])


def test_weights_must_be_positive():
    with pytest.raises(DomainError):
        Space(2, 2.0, (1.0, 0.0))


def test_ones_norm_is_total_mass_root():
    sp = Space(4, 3.0, (0.5, 1.5, 2.0, 1.0))
    assert norm(sp, np.ones(4)) == pytest.approx(sum(sp.weights) ** (1 / 3))


def test_dual_exponent_examples():
    assert dual_exponent(2.0) == 2.0
    assert dual_exponent(4.0) == pytest.approx(4.0 / 3.0)
    assert dual_exponent(1.0) == math.inf
    assert dual_exponent(math.inf) == 1.0
    with pytest.raises(DomainError):
        dual_exponent(0.5)


@given(st.floats(min_value=1.0 + 1e-6, max_value=50.0))
def test_dual_exponent_involution(p):
    assert dual_exponent(dual_exponent(p)) == pytest.approx(p, rel=1e-9)


def test_duality_map_examples():
    sp2 = Space(2, 2.0, (1.0, 1.0))
    np.testing.assert_allclose(duality_map(sp2, [3, 4]), [3, 4])
    sp3 = Space(2, 3.0, (1.0, 1.0))
    np.testing.assert_allclose(duality_map(sp3, [1, 0]), [1, 0])
    j = duality_map(sp3, [1, 1])
    np.testing.assert_allclose(j, 2 ** (-1 / 3) * np.ones(2), rtol=1e-12)
    assert pairing(sp3, j, [1, 1]) == pytest.approx(2 ** (2 / 3))


def test_duality_map_needs_strict_convexity():
    with pytest.raises(NotStrictlyConvexError):
        duality_map(Space(2, 1.0, (1, 1)), [1, 1])
    with pytest.raises(NotStrictlyConvexError):
        duality_map(Space(2, math.inf, (1, 1)), [1, 1])


def test_duality_identities_random():
    rng = np.random.default_rng(5)
    for _ in range(500):
        n = int(rng.integers(2, 7))
        p = float(rng.uniform(1.1, 8.0))
        sp = Space(n, p, tuple(rng.uniform(0.5, 2.0, n)))
        f = rng.standard_normal(n)
        j = duality_map(sp, f)
        assert norm(dual(sp), j) == pytest.approx(norm(sp, f), abs=1e-9)
        assert pairing(sp, j, f) == pytest.approx(norm(sp, f) ** 2, rel=1e-9)
        # the dual-space duality map inverts J
        back = duality_map(dual(sp), j)
        np.testing.assert_allclose(back, f, atol=1e-9 * max(1, np.abs(f).max()))


def test_duality_map_equivariance():
    # J T = (T*)^{-1} J: for weight-compatible signed permutations the
    # mu-adjoint is the inverse, so J(Tf) = T(Jf) coordinate-wise.
    from envlab.sampling import random_signed_permutation, random_space

    rng = np.random.default_rng(7)
    for trial in range(50):
        n = int(rng.integers(2, 7))
        sp = random_space(rng, n, float(rng.uniform(1.1, 6.0)),
                          "clustered" if trial % 2 else "uniform")
        g = random_signed_permutation(rng, sp)
        f = rng.standard_normal(n)
        np.testing.assert_allclose(
            duality_map(sp, apply(sp, g, f)),
            apply(sp, g, duality_map(sp, f)),
            atol=1e-12,
        )


def test_duality_map_zero():
    sp = Space(3, 3.0, (1, 1, 1))
    np.testing.assert_array_equal(duality_map(sp, np.zeros(3)), np.zeros(3))


def test_mazur_examples():
    sp1 = Space(2, 1.0, (1.0, 1.0))
    np.testing.assert_allclose(mazur_map(sp1, 2.0, [1, 0]), [1, 0])
    out = mazur_map(sp1, 2.0, [0.5, 0.5])
    np.testing.assert_allclose(out, [math.sqrt(0.5), math.sqrt(0.5)])
    assert norm(Space(2, 2.0, (1, 1)), out) == pytest.approx(1.0)
    f = np.array([0.3, -0.7])
    np.testing.assert_allclose(mazur_map(sp1, 1.0, f), f)


def test_mazur_round_trip_on_sphere():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n = int(rng.integers(2, 6))
        p = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
        q = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
        sp = Space(n, p, tuple(rng.uniform(0.5, 2.0, n)))
        f = rng.standard_normal(n)
        f = f / norm(sp, f)
        there = mazur_map(sp, q, f)
        assert norm(sp.with_p(q), there) == pytest.approx(1.0, abs=1e-12)
        back = mazur_map(sp.with_p(q), p, there)
        np.testing.assert_allclose(back, f, atol=1e-10)


def test_mazur_rejects_bad_exponent():
    sp = Space(2, 1.0, (1, 1))
    with pytest.raises(DomainError):
        mazur_map(sp, 0.5, [1, 0])


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=6),
    st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=6),
    st.floats(min_value=1.0, max_value=20.0),
    st.floats(min_value=-100.0, max_value=100.0),
)
def test_norm_homogeneity_and_triangle(xs, ys, p, scale):
    n = min(len(xs), len(ys))
    sp = Space(n, p, (1.0,) * n)
    f, g = np.array(xs[:n]), np.array(ys[:n])
    lhs = norm(sp, f + g)
    assert lhs <= norm(sp, f) + norm(sp, g) + 1e-12 * max(1.0, lhs)
    assert norm(sp, scale * f) == pytest.approx(abs(scale) * norm(sp, f), rel=1e-12, abs=1e-12)


def test_space_json_round_trip():
    sp = Space(3, math.inf, (1.0, 2.0, 0.5))
    again = Space.from_json(sp.to_json())
    assert again == sp
    sp2 = Space(2, 1.5, (1.0, 1.0))
    assert Space.from_json(sp2.to_json()) == sp2
