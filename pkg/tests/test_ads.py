import numpy as np
import pytest

from quatlab import ads
from quatlab.algebra import random_real_quaternion
from quatlab.calculus import (Field, box_14, box_mu_tilde, conformal_generator, deg, deg_tilde, jet_eval,
                              random_polynomial_field)
from quatlab.dual import sqrt
from quatlab.errors import CoincidentPoints, InvalidLambda, OnBoundary, OutsideConvergenceRegion
from quatlab.special import CoeffIndex, indices


def point_at(rng, r):
    X = random_real_quaternion(rng, None, 1.0)
    return X * (r / np.sqrt(complex(X.norm()).real))


def box_rel(f, mu, X):
    r = np.abs(np.asarray(box_mu_tilde(f, mu)(X)))
    return float(np.max(r / (1 + np.abs(np.asarray(f(X))))))


def test_kernel_basics(rng):
    mu = 0.8
    X, Y = random_real_quaternion(rng, None, 0.6), random_real_quaternion(rng, None, 0.6)
    assert ads.K_mu_eval(X, Y, mu) == pytest.approx(complex(ads.K_mu_eval(Y, X, mu)), rel=1e-14)
    # the interval is the R^{1,4} square of the difference of the lifted points
    d = ads.hat_embed(X, mu) - ads.hat_embed(Y, mu)
    assert complex(ads.hat_interval(X, Y, mu)) == pytest.approx(complex(d.inner(d)), rel=1e-12)
    assert complex(ads.K_mu_eval(X, Y, 1e-5)) == pytest.approx(complex(1 / (X - Y).norm()), rel=1e-8)
    # K_mu(0, X) with X = sqrt(3) and mu = 1: 1 / (2 sqrt(1 + 3) - 2) = 1/2
    zero, x = 0 * X, ads.BiQuaternion.scalar(np.sqrt(3.0))
    assert complex(ads.K_mu_eval(zero, x, 1.0)) == pytest.approx(0.5, rel=1e-14)
    with pytest.raises(CoincidentPoints):
        ads.K_mu_eval(X, X, mu)
    with pytest.raises(ValueError):
        ads.AdSParams(0.0)


@pytest.mark.parametrize("mu", [0.4, 1.3])
def test_kernel_and_basis_solve_the_deformed_equation(rng, mu):
    Y = random_real_quaternion(rng, None, 1.0)
    X = random_real_quaternion(rng, 4, 0.7)
    assert box_rel(ads.K_mu_field(Y, mu), mu, X) < 1e-9
    for i in indices(2):
        for side, dual in (("plus", False), ("minus", False), ("minus", True)):
            assert box_rel(ads.H_mu_basis_field(i, side, mu, dual), mu, X) < 1e-9


def test_fundamental_identity(rng):
    """deg~_X K_mu(X, Y) = -2 mu^-2 (1 - s_Y / s_X) / <X^ - Y^, X^ - Y^>^2 with s = sqrt(mu^-2 + N)."""
    for mu in (0.5, 1.2):
        X, Y = random_real_quaternion(rng, None, 0.8), random_real_quaternion(rng, None, 0.8)
        sX, sY = (np.sqrt(mu ** -2 + complex(P.norm())) for P in (X, Y))
        q = complex(ads.hat_interval(X, Y, mu))
        ref = -2 * mu ** -2 * (1 - sY / sX) / q ** 2
        assert complex(deg_tilde(ads.K_mu_field(Y, mu))(X)) == pytest.approx(ref, rel=1e-11)


def test_multiplication_by_s_commutator(rng):
    """[box~_mu, s] f = 2 mu^2 s (deg + 2) f."""
    mu = 0.8
    s = Field(lambda p: sqrt(mu ** -2 + p.norm()))
    for _ in range(3):
        f = random_polynomial_field(rng, 3, 6)
        X = random_real_quaternion(rng, None, 0.6)
        lhs = complex(box_mu_tilde(s * f, mu)(X)) - complex(s(X) * box_mu_tilde(f, mu)(X))
        rhs = complex(2 * mu ** 2 * s(X) * (deg(f)(X) + 2 * f(X)))
        assert lhs == pytest.approx(rhs, rel=1e-10)


def test_orthogonality_small():
    mu, R = 0.7, 0.9
    hidx = list(indices(1))
    for form in ("first", "second"):
        M = np.array([[ads.pairing_mu(ads.H_mu_basis_field(i, "plus", mu),
                                      ads.H_mu_basis_field(j, "minus", mu, dual=True), mu, R, l_max=1, form=form)
                       for j in hidx] for i in hidx])
        E = np.diag([mu ** (-2 * i.two_l - 2) for i in hidx])
        assert np.max(np.abs(M - E)) < 1e-10 * np.max(E)


def test_conformal_generator_is_skew(rng):
    mu = 0.8
    p = ads.H_mu_basis_field(CoeffIndex(1, 1, -1), "plus", mu)
    X = random_real_quaternion(rng, 3, 0.6)
    assert box_rel(conformal_generator(p, mu), mu, X) < 1e-9
    for j in (CoeffIndex(0, 0, 0), CoeffIndex(1, 1, -1), CoeffIndex(2, 0, 0)):
        d = ads.H_mu_basis_field(j, "minus", mu, dual=True)
        a = ads.pairing_mu(conformal_generator(p, mu), d, mu, l_max=3)
        b = ads.pairing_mu(p, conformal_generator(d, mu), mu, l_max=3)
        assert abs(a + b) < 1e-12 * max(1.0, abs(a))


def test_so15_generators():
    eta = np.diag([1.0, -1, -1, -1, -1, -1])
    assert len(ads.so15_generators()) == 15
    for i, j in ads.so15_generators():
        g = ads.so15_generator(i, j)
        assert np.allclose(g.T @ eta + eta @ g, 0)
        a = ads.so15_element(i, j, 0.4)
        assert np.allclose(a.T @ eta @ a, eta)
    with pytest.raises(ValueError):
        ads.so15_generator(2, 2)


@pytest.mark.parametrize("gen", [(0, 1), (1, 2), (0, 5), (2, 5)])
def test_so15_action_preserves_solutions(rng, gen):
    mu = 0.8
    p = ads.H_mu_basis_field(CoeffIndex(1, 1, -1), "plus", mu)
    X = random_real_quaternion(rng, 3, 0.6)
    for rho0 in (1 / mu, 2.3):
        g = ads.so15_action_field(ads.so15_element(*gen, 0.3), p, rho0, mu)
        assert box_rel(g, mu, X) < 1e-9
    # the identity acts trivially
    ident = ads.so15_action_field(np.eye(6), p, 1.0, mu)
    assert np.allclose(np.asarray(ident(X)), np.asarray(p(X)), rtol=1e-13)


def test_poisson_small(rng):
    mu, R = 0.9, 1.0
    i = CoeffIndex(1, -1, 1)
    Yi, Yo = point_at(rng, 0.4), point_at(rng, 2.2)
    for form in ("deg_phi", "deg_kernel", "symmetric"):
        phi = ads.H_mu_basis_field(i, "plus", mu)
        assert ads.poisson_mu_eval(phi, Yi, mu, R, "plus", form) == pytest.approx(complex(phi(Yi)), rel=1e-8)
        phi = ads.H_mu_basis_field(i, "minus", mu)
        assert ads.poisson_mu_eval(phi, Yo, mu, R, "minus", form) == pytest.approx(complex(phi(Yo)), rel=1e-8)
    wrong = ads.poisson_mu_eval(ads.H_mu_basis_field(i, "minus", mu), Yi, mu, R, "plus", "symmetric")
    assert abs(wrong) < 1e-8
    with pytest.raises(OnBoundary):
        ads.poisson_mu_eval(ads.H_mu_basis_field(i, "plus", mu), point_at(rng, 1.0), mu, R, "plus")


def test_kernel_expansion(rng):
    mu = 0.9
    X, Y = point_at(rng, 0.5), point_at(rng, 1.4)
    ref = complex(ads.K_mu_eval(X, Y, mu))
    assert ads.K_mu_expansion_partial(X, Y, mu, 40) == pytest.approx(ref, rel=1e-10)
    angles = ads.DeformedAngles.from_points(X, Y, mu)
    assert angles.ratio < 1
    with pytest.raises(OutsideConvergenceRegion):
        ads.K_mu_expansion_partial(Y, X, mu)


def test_extensions(rng):
    mu = 0.7
    x = rng.normal(size=(4, 3)) * 0.5
    w = (np.linalg.norm(x, axis=0) * 1.5 + 0.2, *x)
    assert np.all(ads.forward_cone(w))
    assert not ads.forward_cone((0.1, 1.0, 0.0, 0.0, 0.0))
    for i in indices(1):
        for lam in ads.LAMBDAS:
            for side in ("plus", "minus"):
                F = ads.extension_5d_field(i, lam, side, mu)
                h = jet_eval(F, w).hess
                scale = sum(np.abs(h[j, j]) for j in range(5))
                assert np.max(np.abs(box_14(F)(w)) / scale) < 1e-9
                Xh = random_real_quaternion(rng, 2, 0.6)
                assert box_rel(ads.on_hyperboloid(F, 1.3, mu), mu, Xh) < 1e-9
    with pytest.raises(InvalidLambda):
        ads.extension_5d_field(CoeffIndex(0, 0, 0), -3, "plus", mu)


def test_polar_coordinates_split_the_wave_operator(rng):
    """Along a ray rho -> rho^lam: the restriction to H_rho is the extension itself."""
    mu, lam = 0.7, -2
    F = ads.extension_5d_field(CoeffIndex(1, 1, 1), lam, "plus", mu)
    G = ads.in_polar_coordinates(F, mu)
    X = random_real_quaternion(rng, None, 0.5)
    x = X.to_real()
    v1 = complex(G((1.0, *x)))
    v2 = complex(G((2.0, *x)))
    assert v2 == pytest.approx(2.0 ** lam * v1, rel=1e-13)
    assert complex(ads.on_hyperboloid(F, 1.0, mu)(X)) == pytest.approx(v1, rel=1e-13)
