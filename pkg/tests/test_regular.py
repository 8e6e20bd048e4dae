import numpy as np
import pytest

from quatlab import ads, regular as rg
from quatlab.algebra import BiQuaternion, random_real_quaternion
from quatlab.calculus import Field, dirac_mu_right, dirac_mu_right_shifted, random_polynomial_field
from quatlab.errors import CoincidentPoints, NotInKernel, SingularOnCycle
from quatlab.special import CoeffIndex

MU = 0.8


def unit(rng):
    q = random_real_quaternion(rng)
    return q * (1 / np.sqrt(complex(q.norm()).real))


def scaled(X, r):
    return X * (r / np.sqrt(complex(X.norm()).real))


@pytest.fixture
def phi():
    return ads.H_mu_basis_field(CoeffIndex(1, 1, -1), "plus", MU)


def test_make_regular(rng, phi):
    pts = random_real_quaternion(rng, 4, 0.6)
    for side in ("left", "right"):
        for index in (1, 2):
            pair = rg.make_regular(phi, MU, side, index)
            assert pair.kind == ("column" if side == "left" else "row")
            assert pair.max_residual(pts) < 1e-12
    with pytest.raises(NotInKernel):
        rg.make_regular(random_polynomial_field(rng, 2, 4), MU)
    with pytest.raises(ValueError):
        rg.make_regular(phi, MU, "left", 3)


def test_rotations_preserve_regularity(rng, phi):
    pts = random_real_quaternion(rng, 4, 0.6)
    pair = rg.make_regular(phi, MU)
    for _ in range(3):
        assert rg.transported(pair, unit(rng), unit(rng)).max_residual(pts) < 1e-12


def test_kernel_closed_form_matches_derivatives(rng):
    for _ in range(3):
        X, Y = random_real_quaternion(rng, None, 0.5), random_real_quaternion(rng, None, 0.5)
        for side in ("left", "right"):
            a = rg.k_mu_kernel_eval(X, Y, MU, side)
            b = rg.k_mu_kernel_eval(X, Y, MU, side, method="ad")
            assert np.max(np.abs(a - b)) < 1e-12 * np.max(np.abs(b))
    with pytest.raises(CoincidentPoints):
        rg.k_mu_kernel_eval(X, X, MU)


def test_kernel_rows_are_right_regular(rng):
    X, Y = random_real_quaternion(rng, None, 0.5), random_real_quaternion(rng, None, 0.5)
    K = ads.K_mu_field(Y, MU)
    KI = Field(lambda Z: BiQuaternion.scalar(K(Z)))
    zero = Field(lambda Z: BiQuaternion.scalar(0 * Z.z11))
    for pair in ((KI, zero), (zero, KI)):
        row = dirac_mu_right_shifted(pair, MU, MU)
        scale = max(np.max(np.abs(g(X).as_array())) for g in row)
        for r in dirac_mu_right(row, MU):
            assert np.max(np.abs(r(X).as_array())) < 1e-12 * scale


def test_kernel_tends_to_fueter_kernel(rng):
    X, Y = random_real_quaternion(rng, None, 0.5), random_real_quaternion(rng, None, 0.5)
    k = rg.k_mu_kernel_eval(X, Y, 1e-7)
    F = rg.fueter_kernel(X, Y).as_array()
    assert np.allclose(k[2:, :2], F, atol=1e-10)
    assert np.allclose(k[:2, 2:], (X - Y).as_array() / complex((X - Y).norm()) ** 2, atol=1e-10)
    assert np.max(np.abs(k[:2, :2])) < 1e-6 and np.max(np.abs(k[2:, 2:])) < 1e-6


def test_surface_form_vanishes_for_regular_pairs(rng, phi):
    f = rg.make_regular(phi, MU, "left", 1)
    g = rg.make_regular(ads.H_mu_basis_field(CoeffIndex(0, 0, 0), "plus", MU), MU, "right", 2)
    cyc = rg.SphereCycle(random_real_quaternion(rng, None, 0.1), 0.5)
    assert np.max(np.abs(rg.surface_integral_form(g, f, cyc, MU))) < 1e-13


def test_cauchy_fueter_small(rng, phi):
    f = rg.make_regular(phi, MU, "left", 2)
    cyc = rg.SphereCycle(random_real_quaternion(rng, None, 0.1), 0.5)
    Y = cyc.center + scaled(random_real_quaternion(rng), 0.15)
    v = rg.cauchy_fueter_integral(f, Y, cyc, MU)
    ref = f(Y)
    for a, b in zip(v, ref):
        assert np.max(np.abs(a - b.as_array())) < 1e-10
    out = rg.cauchy_fueter_integral(f, cyc.center + scaled(random_real_quaternion(rng), 1.0), cyc, MU)
    assert max(np.max(np.abs(o)) for o in out) < 1e-10
    with pytest.raises(SingularOnCycle):
        rg.cauchy_fueter_integral(f, cyc.center + scaled(random_real_quaternion(rng), 0.5), cyc, MU)
    with pytest.raises(ValueError):
        rg.SphereCycle(cyc.center, 0.0)


def test_classical_fueter_formula(rng):
    """At small mu the integral reproduces the constant column with the pinned orientation."""
    mu = 1e-6
    f = rg.make_regular(ads.H_mu_basis_field(CoeffIndex(0, 0, 0), "plus", mu), mu, "left", 1)
    cyc = rg.SphereCycle(0 * random_real_quaternion(rng), 0.5)
    Y = scaled(random_real_quaternion(rng), 0.2)
    v = rg.cauchy_fueter_integral(f, Y, cyc, mu)
    ref = f(Y)
    assert np.max(np.abs(v[0] - ref[0].as_array())) <= 1e-8 * np.max(np.abs(ref[0].as_array()))
