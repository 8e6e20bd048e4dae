import numpy as np
import pytest

from quatlab.algebra import (BiQuaternion, mobius, random_domain_point, random_real_quaternion, random_u22,
                             random_u2_point)
from quatlab.calculus import NORM, Field, box, constant
from quatlab.errors import OnBoundary, OutsideConvergenceRegion
from quatlab.projectors import (HALVING_SCHEDULE, LimitSchedule, I_R_eval, I_mixed_closed_form, P_pm_eval,
                                P_zero_eval, S_poisson_eval, cayley_pushforward, kernel_expansion_partial,
                                mult_integral, p01_eval)
from quatlab.spaces import ZhBasisIndex, basis_field, classify, group_action_field, zh_indices
from quatlab.special import CoeffIndex, t_coeff


def domain_pair(rng, side, R=1.0):
    return (random_domain_point(rng, R, side, None, 0.1, 0.4), random_domain_point(rng, R, side, None, 0.1, 0.4))


def point_at(rng, r):
    X = random_real_quaternion(rng, None, 1.0)
    return X * (r / np.sqrt(complex(X.norm()).real))


@pytest.mark.parametrize("R", [0.8, 1.3])
def test_embedding_table(rng, R):
    Z1, Z2 = domain_pair(rng, "plus", R)
    assert I_R_eval(constant(1.0), Z1, Z2, R) == pytest.approx(1.0, abs=1e-10)
    assert abs(I_R_eval(1 / NORM, Z1, Z2, R)) < 1e-10
    assert abs(I_R_eval(NORM ** -2, Z1, Z2, R)) < 1e-10
    assert I_R_eval(NORM, Z1, Z2, R) == pytest.approx(complex(0.5 * (Z1 * Z2.plus()).trace()), abs=1e-10)
    W1, W2 = domain_pair(rng, "minus", R)
    assert abs(I_R_eval(constant(1.0), W1, W2, R)) < 1e-10
    assert I_R_eval(NORM ** -2, W1, W2, R) == pytest.approx(complex(1 / (W1.norm() * W2.norm())), rel=1e-9)
    # a single entry of W in Zh+ is carried through linearly
    w12 = Field(lambda W: W.z12)
    assert I_R_eval(w12, Z1, Z2, R) == pytest.approx(complex(0.5 * (Z1.z12 + Z2.z12)), abs=1e-10)


def test_mixed_closed_form(rng):
    for R in (1.0, 1.7):
        Z1 = random_domain_point(rng, R, "plus", None, 0.1, 0.4)
        Z2 = random_domain_point(rng, R, "minus", None, 0.1, 0.4)
        ref = I_mixed_closed_form(Z1 / R, Z2 / R) / R ** 2
        assert I_R_eval(1 / NORM, Z1, Z2, R) == pytest.approx(ref, rel=1e-8)


def test_embedding_equivariance(rng):
    """I_R(rho1(h) f)(Z1, Z2) = I_R(f)(h Z1, h Z2) / (N(c Z1 + d) N(a' - Z2 c'))."""
    for side, k in (("plus", 1), ("minus", -4)):
        f = basis_field("Zh", ZhBasisIndex(k, CoeffIndex(1, 1, -1)))
        h = random_u22(rng, 1.0, 0.1)
        Z1, Z2 = domain_pair(rng, side)
        lhs = I_R_eval(group_action_field(h, f), Z1, Z2)
        rhs = I_R_eval(f, mobius(h, Z1), mobius(h, Z2)) / ((h.c * Z1 + h.d).norm() * (h.a_ - Z2 * h.c_).norm())
        assert abs(lhs - rhs) <= 1e-8 * abs(lhs)


def test_projectors_split_norm_powers(rng):
    f = constant(1.0) + 1 / NORM + NORM ** -2
    Zp = random_domain_point(rng, 1.0, "plus", None, 0.1, 0.4)
    Zm = random_domain_point(rng, 1.0, "minus", None, 0.1, 0.4)
    assert P_pm_eval(f, Zp, 1.0, "plus") == pytest.approx(1.0, abs=1e-10)
    assert P_pm_eval(f, Zm, 1.0, "minus") == pytest.approx(complex(Zm.norm() ** -2), rel=1e-10)
    # idempotence: P+ f = 1 and P+ 1 = 1
    assert P_pm_eval(constant(P_pm_eval(f, Zp, 1.0, "plus")), Zp, 1.0, "plus") == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(OnBoundary):
        P_pm_eval(f, random_u2_point(rng), 1.0, "plus")


def test_projectors_on_zh_basis(rng):
    Zp = random_domain_point(rng, 1.0, "plus", None, 0.1, 0.4)
    Zm = random_domain_point(rng, 1.0, "minus", None, 0.1, 0.4)
    for i in zh_indices([(1, 1), (-1, 1), (-3, 1), (0, 2), (-4, 2)]):
        f = basis_field("Zh", i)
        comp = classify(i.k, i.idx.two_l)
        vp, vm = P_pm_eval(f, Zp, 1.0, "plus"), P_pm_eval(f, Zm, 1.0, "minus")
        assert vp == pytest.approx(complex(f(Zp)) if comp == "plus" else 0.0, abs=1e-9)
        assert vm == pytest.approx(complex(f(Zm)) if comp == "minus" else 0.0, abs=1e-9)


def test_p_zero_basic(rng):
    Z = random_u2_point(rng)
    assert abs(P_zero_eval(constant(1.0), Z)) < 1e-3
    assert abs(P_zero_eval(NORM ** -2, Z)) < 1e-3
    assert P_zero_eval(1 / NORM, Z) == pytest.approx(complex(1 / Z.norm()), abs=1e-3)
    v, info = P_zero_eval(Field(lambda W: W.z21 / W.norm()), Z, return_info=True)
    assert v == pytest.approx(complex(Z.z21 / Z.norm()), abs=1e-3)
    assert info["error_estimate"] < 1e-2


def test_limit_schedule_validation():
    with pytest.raises(ValueError):
        LimitSchedule(s_values=(0.9, 0.95))
    with pytest.raises(ValueError):
        LimitSchedule(theta_values=(0.1, 0.4, 0.2))
    with pytest.raises(ValueError):
        LimitSchedule(s_values=(0.9, 0.95, 1.0))
    assert len(HALVING_SCHEDULE.s_values) == 3


def test_reproducing_decomposition(rng):
    """P- f + P0 f + P+ f = f on U(2)_R; P+- are evaluated through a larger or smaller cycle."""
    idx = zh_indices([(k, tl) for k in range(-2, 3) for tl in range(2)])
    chosen = rng.choice(len(idx), 6, replace=False)
    coeffs = rng.normal(size=6) + 1j * rng.normal(size=6)
    parts = [(c, basis_field("Zh", idx[j])) for c, j in zip(coeffs, chosen)]
    f = Field(lambda W: sum(c * g(W) for c, g in parts))
    R = 1.0
    Z = random_u2_point(rng, R)
    total = P_pm_eval(f, Z, 1.5 * R, "plus") + P_pm_eval(f, Z, R / 1.5, "minus") + P_zero_eval(f, Z, R)
    assert abs(total - complex(f(Z))) <= 5e-3 * max(1.0, abs(complex(f(Z))))


def test_poisson_operators(rng):
    R = 1.3
    for tl in range(4):
        idx = CoeffIndex(tl, -tl, tl)
        t = Field(lambda X, idx=idx: t_coeff(idx, X))
        Zp = random_domain_point(rng, R, "plus", None, 0.1, 0.4)
        Zm = random_domain_point(rng, R, "minus", None, 0.1, 0.4)
        assert S_poisson_eval(t, Zp, R, "plus") == pytest.approx(complex(t(Zp)), rel=1e-9, abs=1e-12)
        ref = R ** (2 * (tl + 1)) * complex(Zm.norm()) ** (-tl - 1) * complex(t(Zm))
        assert S_poisson_eval(t, Zm, R, "minus") == pytest.approx(ref, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("spaces, radii, r, sign", [
    (("H+", "H+"), (1.0, 1.2), 0.5, 1.0),      # inside both spheres
    (("H-", "H-"), (1.0, 1.2), 1.6, 1.0),      # outside both
    (("H-", "H+"), (0.5, 2.0), 1.0, -1.0),     # between them
])
def test_multiplication_integral(rng, spaces, radii, r, sign):
    for tl1, tl2 in ((0, 1), (1, 1)):
        p1 = basis_field(spaces[0], CoeffIndex(tl1, tl1, -tl1))
        p2 = basis_field(spaces[1], CoeffIndex(tl2, -tl2, tl2))
        W = point_at(rng, r)
        v = mult_integral(p1, p2, W, *radii)
        assert v == pytest.approx(sign * complex((p1 * p2)(W)), rel=1e-7, abs=1e-12)


def test_kernel_expansions(rng):
    Z = random_domain_point(rng, 1.0, "plus", None, 0.1, 0.6)
    W = random_domain_point(rng, 1.0, "minus", None, 0.1, 0.6)
    ref2 = complex(1 / (Z - W).norm() ** 2)
    assert kernel_expansion_partial("second", W, Z, 40, 1) == pytest.approx(ref2, rel=1e-9)
    assert kernel_expansion_partial("second", Z, W, 40, 2) == pytest.approx(ref2, rel=1e-9)
    assert kernel_expansion_partial("first", Z, W, 40) == pytest.approx(complex(1 / (Z - W).norm()), rel=1e-9)
    # the leading term alone
    assert kernel_expansion_partial("second", Z, BiQuaternion.zero(), 0, 1) == pytest.approx(
        complex(Z.norm() ** -2))
    with pytest.raises(OutsideConvergenceRegion):
        kernel_expansion_partial("first", W, Z, 10)


def test_p01_symmetries(rng):
    pts = [random_domain_point(rng, 1, s, None, 0.2, 0.4) for s in ("plus", "plus", "minus", "minus")]
    v = p01_eval(*pts)
    assert p01_eval(pts[1], pts[0], pts[3], pts[2]) == pytest.approx(v, rel=1e-10)
    assert p01_eval(pts[2], pts[3], pts[0], pts[1]) == pytest.approx(v, rel=1e-10)


def test_cayley_pushforward(rng):
    Z = BiQuaternion.from_matrix(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    assert cayley_pushforward(constant(1.0))(Z) == pytest.approx(complex(2 / (Z - 1.0).norm()))
    assert cayley_pushforward(1 / NORM)(Z) == pytest.approx(complex(-2 / (Z + 1.0).norm()))
    t = basis_field("H+", CoeffIndex(2, 0, 2))
    for direction in ("forward", "inverse"):
        g = cayley_pushforward(t, direction)
        assert abs(complex(box(g)(Z))) < 1e-9 * max(1.0, abs(complex(g(Z))))
