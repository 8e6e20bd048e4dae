import numpy as np
import pytest
from hypothesis import given, strategies as st

from quatlab.algebra import (BiQuaternion, GroupElement, cayley, eigenvalues, in_D_minus, in_D_plus, in_M,
                             in_T_minus, in_T_plus, mobius, mobius_jacobian_det, mobius_right, on_U2,
                             random_biquaternion, random_domain_point, random_u22, random_u2_point,
                             real_quaternion, scaling, singular_values, u22_residual)
from quatlab.errors import SingularMatrix

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
entries = st.tuples(*[st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)] * 4)


def close(a: BiQuaternion, b: BiQuaternion, tol=1e-12):
    return np.max(np.abs(a.as_array() - b.as_array())) <= tol * max(1.0, np.max(np.abs(b.as_array())))


@given(entries, entries)
def test_norm_is_multiplicative(e1, e2):
    Z, W = BiQuaternion(*e1), BiQuaternion(*e2)
    assert abs((Z * W).norm() - Z.norm() * W.norm()) <= 1e-9 * (1 + abs(Z.norm() * W.norm()))


@given(entries)
def test_adjugate_gives_norm(e):
    Z = BiQuaternion(*e)
    assert close(Z * Z.plus(), BiQuaternion.scalar(Z.norm()), 1e-12)
    assert abs(Z.trace() - (Z + Z.plus()).trace() / 2) < 1e-12


@given(finite, finite, finite, finite)
def test_real_quaternion_roundtrip_is_exact(x0, x1, x2, x3):
    X = real_quaternion(x0, x1, x2, x3)
    assert X.to_real() == (x0, x1, x2, x3)
    assert X.norm().real == pytest.approx(x0 * x0 + x1 * x1 + x2 * x2 + x3 * x3, rel=1e-13, abs=1e-300)


def test_real_quaternion_matrix_form():
    X = real_quaternion(1, 2, 3, 4)
    np.testing.assert_array_equal(X.as_array(), [[1 - 4j, -3 - 2j], [3 - 2j, 1 + 4j]])
    assert X.norm() == 30


def test_inverse_and_singular(rng):
    Z = random_biquaternion(rng)
    assert close(Z * Z.inv(), BiQuaternion.identity())
    with pytest.raises(SingularMatrix):
        BiQuaternion(1.0, 2.0, 2.0, 4.0).inv()


def test_mobius_difference_formula(rng):
    """Z~ - W~ = (a' - W c')^-1 (Z - W) (cZ + d)^-1."""
    for _ in range(10):
        h = GroupElement.from_matrix(np.eye(4) + 0.3 * (rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))))
        Z, W = random_biquaternion(rng, scale=0.5), random_biquaternion(rng, scale=0.5)
        lhs = mobius(h, Z) - mobius(h, W)
        rhs = (h.a_ - W * h.c_).inv() * (Z - W) * (h.c * Z + h.d).inv()
        assert close(lhs, rhs, 1e-12)
        assert close(mobius(h, Z), mobius_right(h, Z), 1e-12)


def test_u22_preserves_domains(rng):
    for R in (0.6, 1.0, 1.7):
        for _ in range(5):
            h = random_u22(rng, R, 0.4)
            assert u22_residual(h, R) < 1e-12
            assert in_D_plus(mobius(h, random_domain_point(rng, R, "plus")), R)
            assert in_D_minus(mobius(h, random_domain_point(rng, R, "minus")), R)
            assert on_U2(mobius(h, random_u2_point(rng, R)), R, 1e-10)


def test_scaling_moves_radius(rng):
    Z = random_u2_point(rng, 1.0)
    assert on_U2(mobius(scaling(2.5), Z), 2.5)


def test_cayley_maps_and_roundtrip(rng):
    Zp, Zm, U = random_domain_point(rng, 1, "plus"), random_domain_point(rng, 1, "minus"), random_u2_point(rng)
    assert in_T_plus(cayley(Zp)) and in_T_minus(cayley(Zm)) and in_M(cayley(U), 1e-10)
    for Z in (Zp, Zm, U):
        assert close(cayley(cayley(Z), "inverse"), Z, 1e-12)


def test_jacobian_of_mobius_is_fourth_power(rng):
    """For dZ -> A dZ B the complex 4x4 determinant is N(A)^2 N(B)^2."""
    h = GroupElement.from_matrix(np.eye(4) + 0.2 * rng.normal(size=(4, 4)))
    Z = random_biquaternion(rng, scale=0.4)
    W = mobius(h, Z)
    expected = (h.a - W * h.c).norm() ** 2 / (h.c * Z + h.d).norm() ** 2
    assert mobius_jacobian_det(h, Z) == pytest.approx(expected, rel=1e-10)


def test_spectral_helpers(rng):
    Z = random_domain_point(rng, 2.0, "plus", None, 0.2, 0.5)
    sv = singular_values(Z)
    assert np.all((sv >= 0.4 - 1e-12) & (sv <= 1.0 + 1e-12))
    l1, l2 = eigenvalues(Z)
    assert l1 * l2 == pytest.approx(complex(Z.norm()), rel=1e-12)
