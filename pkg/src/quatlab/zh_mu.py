"""Deformed Laurent space Zh_mu: basis, pairing over U(2)_R with the deformed
measure, the expansion of ``<X^ - Y^, X^ - Y^>^-2`` and the projectors P_mu^+-.

With ``s = sqrt(1 + mu^2 N(Z))`` (principal branch)::

    f_{k l m n}  = t^l_{m n}(Z) (s - 1)^k / (s + 1)^{2l+k+2}
    f'_{k l m n} = t^l_{n m}(Z^+) (s + 1)^k / (s - 1)^{2l+k+2}

``<f_{k l m n}, f'_{k' l' m' n'}>_mu = mu^{-4l-4} / (2l+1) delta``.
"""
from __future__ import annotations

import math

import numpy as np

from .algebra import BiQuaternion, eigenvalues
from .ads import hat_interval
from .calculus import Field, u_mu_domain
from .dual import sqrt
from .errors import BadRadius, NonConvergence, OutsideAdmissibleRegion, OutsideConvergenceRegion
from .projectors import kernel_orders
from .quadrature import SurfaceRule, build_u2_rule, integrate
from .spaces import ZhBasisIndex, classify, zh_indices  # noqa: F401  (re-exported)
from .special import t_matrix, t_coeff

MAX_NODES = 4_000_000

#: Zh_mu basis elements are labelled exactly like the undeformed ones.
ZhMuIndex = ZhBasisIndex


def _s(mu: float, Z):
    return sqrt(1 + mu * mu * Z.norm())


def _s_minus_one(mu: float, Z, s=None):
    """``s - 1`` as ``mu^2 N / (s + 1)``, free of cancellation near N = 0."""
    s = _s(mu, Z) if s is None else s
    return mu * mu * Z.norm() / (s + 1)


def zh_mu_basis_field(i: ZhMuIndex, variant: str, mu: float) -> Field:
    tl, k = i.idx.two_l, i.k
    # N = 0 is only excluded where a negative power of (s - 1) appears
    if variant == "f":
        regular_at_zero = k >= 0
        idx = i.idx

        def fn(Z):
            s = _s(mu, Z)
            return t_coeff(idx, Z) * _s_minus_one(mu, Z, s) ** k / (s + 1) ** (tl + k + 2)
    elif variant in ("f'", "fprime"):
        regular_at_zero = tl + k + 2 <= 0
        sw = i.idx.swapped()

        def fn(Z):
            s = _s(mu, Z)
            return t_coeff(sw, Z.plus()) * (s + 1) ** k / _s_minus_one(mu, Z, s) ** (tl + k + 2)
    else:
        raise ValueError("variant must be 'f' or \"f'\"")
    return Field(fn, u_mu_domain(mu, allow_zero=regular_at_zero), f"{variant}[{i.k},{i.idx}]")


def w_mu(mu: float, Z):
    """``(s - 1)/(s + 1)``, the deformed replacement of ``mu^2 N / 4``."""
    s = _s(mu, Z)
    return _s_minus_one(mu, Z, s) / (s + 1)


def w_bounds(mu: float, R: float) -> tuple[float, float]:
    """Range of ``|w_mu|`` over U(2)_R."""
    x = mu * mu * R * R
    return ((math.sqrt(1 + x) - 1) / (math.sqrt(1 + x) + 1),
            (1 - math.sqrt(1 - x)) / (math.sqrt(1 - x) + 1))


def _check_radius(mu: float, R: float) -> None:
    if not (0 < R < 1 / mu):
        raise BadRadius("need 0 < R < 1/mu")


def pairing_Zh_mu(f1: Field, f2: Field, mu: float, R: float,
                  rule: SurfaceRule | None = None, l_max: float = 2, k_range: int = 3):
    """``(i/2pi^3) \\int_{U(2)_R} f1 f2 dV_{R,mu}``."""
    _check_radius(mu, R)
    rule = rule or build_u2_rule(R, l_max, k_range, mu=mu)
    return 1j / (2 * np.pi ** 3) * integrate(f1 * f2, rule)


def _equal_modulus_eigen(X: BiQuaternion, Y: BiQuaternion) -> bool:
    l1, l2 = eigenvalues(X * Y.inv())
    a, b = abs(complex(l1)), abs(complex(l2))
    return abs(a - b) <= 1e-9 * max(a, b)


def expansion_1overN2_deformed_partial(X: BiQuaternion, Y: BiQuaternion, mu: float,
                                       L_max: int = 40):
    """``sum (2l+1) mu^{4l+4} f_{k l m n}(X) f'_{k l m n}(Y)`` over ``k >= 0`` and
    ``2l + 2k <= L_max``; converges to ``<X^ - Y^, X^ - Y^>^-2`` when X Y^-1 has
    eigenvalues of equal modulus and ``|w(X)| < |w(Y)|``."""
    if not _equal_modulus_eigen(X, Y):
        raise OutsideConvergenceRegion("X Y^-1 eigenvalues differ in modulus")
    wX, wY = complex(w_mu(mu, X)), complex(w_mu(mu, Y))
    if not abs(wX) < abs(wY):
        raise OutsideConvergenceRegion("need |w(X)| < |w(Y)|")
    sX, sY = complex(_s(mu, X)), complex(_s(mu, Y))
    Yp = Y.plus()
    total = 0j
    for tl in range(L_max + 1):
        tr = np.sum(t_matrix(tl, X) * t_matrix(tl, Yp).T) * (tl + 1)
        base = tr * mu ** (2 * tl + 4) / ((sX + 1) ** (tl + 2) * (sY - 1) ** (tl + 2))
        for k in range(0, (L_max - tl) // 2 + 1):
            total += base * ((sX - 1) * (sY + 1) / ((sX + 1) * (sY - 1))) ** k
    return total


def P_mu_region(Y: BiQuaternion, mu: float, R: float) -> str:
    """``'plus'``/``'minus'`` if Y satisfies the corresponding modulus
    inequality relative to U(2)_R, else ``'none'``."""
    lo, hi = w_bounds(mu, R)
    w = abs(complex(w_mu(mu, Y)))
    if w < lo:
        return "plus"
    if w > hi:
        return "minus"
    return "none"


def _p_mu_orders(Y, mu, R, side, extra):
    lo, hi = w_bounds(mu, R)
    w = abs(complex(w_mu(mu, Y)))
    q = math.sqrt(w / lo) if side == "plus" else math.sqrt(hi / w)
    o = kernel_orders(q, extra)
    boost = math.ceil(18.0 / math.log(1.0 / (mu * R)))
    o = (o[0] + boost,) + o[1:]
    if math.prod(o) > MAX_NODES:
        raise NonConvergence(f"Y is too close to the cycle (ratio {q:.3f}); pass an explicit rule")
    return o


def P_mu_eval(f: Field, Y: BiQuaternion, mu: float, R: float, side: str = "plus",
              rule: SurfaceRule | None = None, extra: int = 4):
    """``(i/2pi^3) \\int_{U(2)_R} f(X) dV_{R,mu} / <X^ - Y^, X^ - Y^>^2``."""
    _check_radius(mu, R)
    if not u_mu_domain(mu)(Y):
        raise OutsideAdmissibleRegion("Y outside U_mu")
    region = P_mu_region(Y, mu, R)
    if region != side:
        raise OutsideAdmissibleRegion(f"Y does not satisfy the {side} modulus inequality")
    rule = rule or build_u2_rule(R, mu=mu, orders=_p_mu_orders(Y, mu, R, side, extra))
    kern = Field(lambda X: hat_interval(X, Y, mu) ** -2)
    return 1j / (2 * np.pi ** 3) * integrate(f * kern, rule)
