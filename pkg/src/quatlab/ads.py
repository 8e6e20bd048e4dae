"""Hyperboloid model of quaternions inside R^{1,4} and the deformed harmonic
analysis attached to the conformal Laplacian ``box + mu^2 (deg~^2 + deg~)``.

A quaternion X is identified with the point
``X^ = (sqrt(mu^-2 + N(X)), x0, x1, x2, x3)`` of the hyperboloid
``<W, W>_{1,4} = mu^-2``.  Everything here is written in terms of
``t = sqrt(1 + mu^2 N(X))``; hyperbolic angles are only reported, never used.

Basis conventions::

    phi+_{l m n}(X) = t^l_{m n}(X) / (t + 1)^{2l+1}          regular at 0
    phi-_{l m n}(X) = t^l_{m n}(X) / (t - 1)^{2l+1}          regular at infinity
    dual phi-       = t^l_{n m}(X^+) / (t - 1)^{2l+1}        (``dual=True``)

so that ``(phi+_{l m n}, dual phi-_{l' m' n'})_mu = mu^{-4l-2} delta``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .algebra import BiQuaternion
from .calculus import Field, deg_tilde, u_mu_domain
from .dual import primal, sqrt
from .errors import (CoincidentPoints, InvalidLambda, OnBoundary, OutsideConvergenceRegion,
                     ProjectiveSingularity)
from .quadrature import SurfaceRule, build_sphere_rule, integrate
from .special import CoeffIndex, t_coeff, t_matrix


@dataclass(frozen=True)
class AdSParams:
    mu: float

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError("mu must be positive")


@dataclass(frozen=True)
class Minkowski5Point:
    """Point of R^{1,4}, signature (+, -, -, -, -)."""

    w0: float
    w1: float
    w2: float
    w3: float
    w4: float

    def as_tuple(self) -> tuple:
        return (self.w0, self.w1, self.w2, self.w3, self.w4)

    def inner(self, other: "Minkowski5Point"):
        return inner_14(self.as_tuple(), other.as_tuple())

    def __sub__(self, other: "Minkowski5Point") -> "Minkowski5Point":
        return Minkowski5Point(*(a - b for a, b in zip(self.as_tuple(), other.as_tuple())))

    @property
    def rho(self):
        """``||W||_{1,4}`` (defined on the forward cone)."""
        return sqrt(self.inner(self))

    def in_forward_cone(self) -> bool:
        w = np.real(np.asarray([primal(x) for x in self.as_tuple()]))
        return bool(w[0] > np.sqrt(np.sum(w[1:] ** 2)))


def inner_14(a, b):
    return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3] - a[4] * b[4]


def hat_embed(X: BiQuaternion, mu: float) -> Minkowski5Point:
    x0, x1, x2, x3 = X.to_real()
    return Minkowski5Point(sqrt(mu ** -2 + X.norm()), x0, x1, x2, x3)


def hat_interval(X: BiQuaternion, Y: BiQuaternion, mu: float):
    """``<X^ - Y^, X^ - Y^>_{1,4} = 2 mu^-2 - 2 sX sY + Tr(X Y^+)``,
    ``s = sqrt(mu^-2 + N)``; holomorphic in the entries of X and Y."""
    nX, nY = X.norm(), Y.norm()
    tt = sqrt(1 + mu * mu * nX) * sqrt(1 + mu * mu * nY)
    # 2 mu^-2 (1 - tX tY) without cancellation for small mu
    return -2 * (nX + nY + mu * mu * nX * nY) / (1 + tt) + (X * Y.plus()).trace()


def K_mu_eval(X: BiQuaternion, Y: BiQuaternion, mu: float):
    """``K_mu(X, Y) = -1 / <X^ - Y^, X^ - Y^>_{1,4}``."""
    q = hat_interval(X, Y, mu)
    scale = mu ** -2 + abs(complex(np.max(np.abs(primal(X.norm()))))) + abs(
        complex(np.max(np.abs(primal(Y.norm())))))
    if np.any(np.abs(np.asarray(primal(q))) <= 1e-14 * scale):
        raise CoincidentPoints("K_mu is singular at X = Y")
    return -1.0 / q


def K_mu_field(Y: BiQuaternion, mu: float, variable: str = "X") -> Field:
    """``X -> K_mu(X, Y)`` (or ``Y -> K_mu(Y0, Y)`` with ``variable='Y'``)."""
    if variable == "X":
        return Field(lambda X: K_mu_eval(X, Y, mu), None, "K_mu(.,Y)")
    return Field(lambda Z: K_mu_eval(Y, Z, mu), None, "K_mu(X,.)")


@dataclass(frozen=True)
class DeformedAngles:
    """``t_i = cosh theta_i = sqrt(1 + mu^2 N)`` for the pair (X, Y) and
    ``a = 2 cosh(th1/2) 2 sinh(th2/2)``, ``b = 2 sinh(th1/2) 2 cosh(th2/2)``."""

    t1: complex
    t2: complex
    theta1: complex
    theta2: complex
    a: complex
    b: complex

    @classmethod
    def from_points(cls, X: BiQuaternion, Y: BiQuaternion, mu: float) -> "DeformedAngles":
        t1 = complex(np.sqrt(1 + mu * mu * complex(X.norm())))
        t2 = complex(np.sqrt(1 + mu * mu * complex(Y.norm())))
        a = 2 * np.sqrt((t1 + 1) * (t2 - 1))
        b = 2 * np.sqrt((t1 - 1) * (t2 + 1))
        return cls(t1, t2, complex(np.arccosh(t1)), complex(np.arccosh(t2)), a, b)

    @property
    def ratio(self) -> float:
        """``b / a = tanh(th1/2) / tanh(th2/2)``, the geometric rate of the
        kernel expansion."""
        return abs(self.b / self.a)


# ---------------------------------------------------------------------------
# deformed harmonic spaces


def H_mu_basis_field(idx: CoeffIndex, side: str, mu: float, dual: bool = False) -> Field:
    """``t^l(X) / (sqrt(1 + mu^2 N) +- 1)^{2l+1}``.

    ``dual=True`` (minus side only) uses ``t^l_{n m}(X^+)`` in place of
    ``t^l_{m n}(X)``, the partner of ``phi+_{l m n}`` in the pairing.
    """
    p = idx.two_l + 1
    if side == "plus":
        if dual:
            raise ValueError("dual basis is defined on the minus side")
        return Field(lambda X: t_coeff(idx, X) / (sqrt(1 + mu * mu * X.norm()) + 1) ** p,
                     u_mu_domain(mu, allow_zero=True), f"phi+{idx}")
    if side != "minus":
        raise ValueError(side)
    sw = idx.swapped()
    if dual:
        num = lambda X: t_coeff(sw, X.plus())  # noqa: E731
    else:
        num = lambda X: t_coeff(idx, X)  # noqa: E731
    return Field(lambda X: num(X) / _t_minus_one(X, mu) ** p,
                 u_mu_domain(mu), f"phi-{idx}{'*' if dual else ''}")


def _t_minus_one(X, mu: float):
    """``sqrt(1 + mu^2 N) - 1`` without cancellation at small ``mu^2 N``."""
    n = mu * mu * X.norm()
    return n / (sqrt(1 + n) + 1)


def pairing_mu(phi1: Field, phi2: Field, mu: float, R: float = 1.0,
               rule: SurfaceRule | None = None, l_max: float = 2, form: str = "first"):
    """``sqrt(1 + mu^2 R^2)/(2 pi^2) \\int_{S^3_R} (deg~ phi1) phi2 dS / R``;
    ``form='second'`` uses ``-phi1 deg~ phi2`` instead."""
    rule = rule or build_sphere_rule(R, l_max)
    integrand = deg_tilde(phi1) * phi2 if form == "first" else -(phi1 * deg_tilde(phi2))
    c = math.sqrt(1 + mu * mu * rule.R ** 2) / (2 * np.pi ** 2 * rule.R)
    return c * integrate(integrand, rule)


def _poisson_ratio(Y: BiQuaternion, R: float, mu: float, side: str) -> float:
    nY = float(np.real(complex(Y.norm())))
    th = lambda n: math.tanh(0.5 * math.asinh(mu * math.sqrt(max(n, 0.0))))  # noqa: E731
    if side == "plus":
        if nY >= R * R * (1 - 1e-6):
            raise OnBoundary("Y must satisfy N(Y) < R^2")
        return th(nY) / th(R * R)
    if nY <= R * R * (1 + 1e-6):
        raise OnBoundary("Y must satisfy N(Y) > R^2")
    return th(R * R) / th(nY)


def poisson_mu_eval(phi: Field, Y: BiQuaternion, mu: float, R: float = 1.0, side: str = "plus",
                    form: str = "deg_phi", extra: int = 4, rule: SurfaceRule | None = None):
    """Poisson reproduction of a solution of the deformed equation.

    ``side='plus'`` (N(Y) < R^2): ``phi(Y) = (phi, K_mu(., Y))_mu``;
    ``side='minus'`` (N(Y) > R^2): ``phi(Y) = (K_mu(., Y), phi)_mu``.
    ``form`` chooses on which factor deg~ acts; ``'symmetric'`` averages the
    two.  Applied to a function of the wrong type (phi+ with the exterior
    formula or phi- with the interior one) the symmetric form returns 0.
    """
    q = _poisson_ratio(Y, R, mu, side)
    if rule is None:
        from .projectors import sphere_kernel_orders
        rule = build_sphere_rule(R, orders=sphere_kernel_orders(q, extra))
    K = K_mu_field(Y, mu)
    sign = 1.0 if side == "plus" else -1.0
    if form == "deg_phi":
        integrand = deg_tilde(phi) * K
    elif form == "deg_kernel":
        integrand = -(deg_tilde(K) * phi)
    elif form == "symmetric":
        integrand = 0.5 * (deg_tilde(phi) * K - deg_tilde(K) * phi)
    else:
        raise ValueError(form)
    c = math.sqrt(1 + mu * mu * R * R) / (2 * np.pi ** 2 * R)
    return sign * c * integrate(integrand, rule)


def K_mu_expansion_partial(X: BiQuaternion, Y: BiQuaternion, mu: float, L_max: int = 40):
    """``sum_{2l <= L_max} sum_{m n} phi+_{l m n}(X) mu^{4l+2} dual phi-_{l m n}(Y)``."""
    nX, nY = complex(X.norm()).real, complex(Y.norm()).real
    if not nX < nY:
        raise OutsideConvergenceRegion("the expansion needs N(X) < N(Y)")
    tX = complex(np.sqrt(1 + mu * mu * complex(X.norm())))
    tY = complex(np.sqrt(1 + mu * mu * complex(Y.norm())))
    Yp = Y.plus()
    total = 0j
    for tl in range(L_max + 1):
        tr = np.sum(t_matrix(tl, X) * t_matrix(tl, Yp).T)
        total += tr * mu ** (2 * tl + 2) / ((tX + 1) * (tY - 1)) ** (tl + 1)
    return total


# ---------------------------------------------------------------------------
# conformal group SO(1,5)

_ETA6 = np.diag([1.0, -1, -1, -1, -1, -1])


def so15_generator(i: int, j: int) -> np.ndarray:
    """Standard generator of so(1,5) in the (w^i, w^j) plane: a boost when one
    index is 0, a rotation otherwise."""
    if not (0 <= i < 6 and 0 <= j < 6 and i != j):
        raise ValueError("need two distinct indices in 0..5")
    g = np.zeros((6, 6))
    g[i, j] = 1.0
    g[j, i] = 1.0 if 0 in (i, j) else -1.0
    return g


def so15_element(i: int, j: int, t: float) -> np.ndarray:
    return scipy.linalg.expm(t * so15_generator(i, j))


def so15_generators() -> list[tuple[int, int]]:
    return [(i, j) for i in range(6) for j in range(i + 1, 6)]


def hyperboloid_point(X: BiQuaternion, rho: float, mu: float) -> tuple:
    """``W = (rho sqrt(1 + mu^2 N(X)), mu rho x)`` on H_rho."""
    x = X.to_real()
    return (rho * sqrt(1 + mu * mu * X.norm()),) + tuple(mu * rho * xi for xi in x)


def so15_action_field(a: np.ndarray, phi: Field, rho0: float, mu: float) -> Field:
    """``(rho0 / nu(a^-1 W)) phi(rho0 (a^-1 W) / nu(a^-1 W))`` with W the point
    of H_rho0 over X, lifted to R^{1,5} by ``w^5 = rho0``."""
    a = np.asarray(a, dtype=float)
    ainv = _ETA6 @ a.T @ _ETA6            # inverse in O(1,5)

    def fn(X):
        W = hyperboloid_point(X, rho0, mu) + (rho0,)
        V = [sum(ainv[r, c] * W[c] for c in range(6)) for r in range(6)]
        nu = V[5]
        if np.any(np.abs(np.asarray(primal(nu))) <= 1e-12 * rho0):
            raise ProjectiveSingularity("nu(a^-1 W) = 0")
        s = rho0 / nu
        x = [s * V[k] / (mu * rho0) for k in range(1, 5)]
        return s * phi(BiQuaternion.from_real(*x))

    return Field(fn, None, f"pi(a){phi.name}")


# ---------------------------------------------------------------------------
# extensions to R^{1,4}

LAMBDAS = (-1, -2)


def _rho_and_X(w, mu: float):
    rho = sqrt(w[0] * w[0] - w[1] * w[1] - w[2] * w[2] - w[3] * w[3] - w[4] * w[4])
    s = 1.0 / (mu * rho)
    return rho, BiQuaternion.from_real(w[1] * s, w[2] * s, w[3] * s, w[4] * s)


def forward_cone(w):
    w = np.real(np.asarray([primal(x) for x in w]))
    return w[0] > np.sqrt(np.sum(w[1:] ** 2, axis=0))


def extension_5d_field(idx: CoeffIndex, lam: int, side: str, mu: float) -> Field:
    """``rho^lam t^l(X) / (sqrt(1 + mu^2 N(X)) +- 1)^{2l+1}`` on R^{1,4}_+,
    ``rho = ||W||_{1,4}``, ``X = (w1, .., w4) / (mu rho)``."""
    if lam not in LAMBDAS:
        raise InvalidLambda("only lambda = -1 and -2 give solutions of both equations")
    sgn = {"plus": 1.0, "minus": -1.0}[side]
    p = idx.two_l + 1

    def fn(w):
        rho, X = _rho_and_X(w, mu)
        return rho ** lam * t_coeff(idx, X) / (sqrt(1 + mu * mu * X.norm()) + sgn) ** p

    return Field(fn, forward_cone, f"ext{idx}[{lam},{side}]", dim=5)


def on_hyperboloid(F: Field, rho: float, mu: float) -> Field:
    """Restriction of a field on R^{1,4}_+ to H_rho, as a function of X."""
    return Field(lambda X: F(hyperboloid_point(X, rho, mu)), None, f"{F.name}|H", 4)


def in_polar_coordinates(F: Field, mu: float) -> Field:
    """``(rho, x0, .., x3) -> F(W(rho, X))``, a 5-variable field."""
    def fn(p):
        rho, x = p[0], p[1:]
        X = BiQuaternion.from_real(*x)
        return F(hyperboloid_point(X, rho, mu))

    return Field(fn, None, f"{F.name}(rho,X)", dim=5)
