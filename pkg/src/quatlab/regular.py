"""Left/right regular functions for the deformed Dirac operators, the
matrix-valued 3-form Dx_mu restricted to spheres, and the Cauchy-Fueter
reproducing formula.

A column ``(f1, f2)`` or row ``(g1, g2)`` has quaternion-valued components
(2x2 complex matrices, i.e. :class:`BiQuaternion`).  Kernels with two rows
(``k_mu``) or two columns (``k'_mu``) are 4x4 arrays in 2x2 block form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .algebra import BiQuaternion, random_real_quaternion
from .ads import K_mu_eval, hat_interval
from .calculus import (Field, box_mu_tilde, dirac_mu_left, dirac_mu_left_shifted, dirac_mu_right,
                       dirac_mu_right_shifted)
from .dual import primal, sqrt
from .errors import CoincidentPoints, NotInKernel, SingularOnCycle
from .quadrature import build_sphere_rule

#: sign of the discretised sphere orientation (outward normal first); pinned by
#: reproducing the classical Fueter formula at mu = 0
ORIENTATION = 1.0
KERNEL_CHECK_TOL = 1e-9


@dataclass(frozen=True)
class RegularPair:
    """Two quaternion-valued fields forming a column (``kind='column'``,
    acted on by nabla_mu from the left) or a row (acted on from the right)."""

    f1: Field
    f2: Field
    kind: Literal["column", "row"] = "column"
    mu: float | None = None

    def __call__(self, X):
        return _bq(self.f1(X)), _bq(self.f2(X))

    def residual(self, mu: float | None = None) -> tuple[Field, Field]:
        mu = self.mu if mu is None else mu
        if self.kind == "column":
            return dirac_mu_left((self.f1, self.f2), mu)
        return dirac_mu_right((self.f1, self.f2), mu)

    def max_residual(self, points: BiQuaternion, mu: float | None = None) -> float:
        r1, r2 = self.residual(mu)
        return float(max(np.max(np.abs(r1(points).as_array())),
                         np.max(np.abs(r2(points).as_array()))))


def _bq(v) -> BiQuaternion:
    return v if isinstance(v, BiQuaternion) else BiQuaternion.scalar(v)


def _scalar_times_identity(phi: Field) -> Field:
    return Field(lambda X: BiQuaternion.scalar(phi(X)), phi.domain, f"{phi.name}*I")


_ZERO = Field(lambda X: BiQuaternion.scalar(0 * X.z11), None, "0")


def _sample_points(n: int = 6, scale: float = 0.7) -> BiQuaternion:
    rng = np.random.default_rng(20240611)
    return random_real_quaternion(rng, n, scale)


def check_in_kernel(phi: Field, mu: float, points: BiQuaternion | None = None,
                    tol: float = KERNEL_CHECK_TOL) -> float:
    """Largest relative ``box~_mu phi`` residual; raises :class:`NotInKernel`."""
    points = _sample_points() if points is None else points
    r = np.abs(np.asarray(box_mu_tilde(phi, mu)(points)))
    scale = 1.0 + np.abs(np.asarray(phi(points)))
    worst = float(np.max(r / scale))
    if worst > tol:
        raise NotInKernel(f"box~_mu residual {worst:.2e} exceeds {tol:.0e}")
    return worst


def make_regular(phi: Field, mu: float, side: str = "left", index: int = 1,
                 check: bool = True) -> RegularPair:
    """Column ``index`` of ``(nabla_mu - mu) phi`` (``side='left'``) or row
    ``index`` of ``phi (nabla_mu_bar + mu)`` (``side='right'``)."""
    if index not in (1, 2):
        raise ValueError("index must be 1 or 2")
    if check:
        check_in_kernel(phi, mu)
    P = _scalar_times_identity(phi)
    pair = (P, _ZERO) if index == 1 else (_ZERO, P)
    if side == "left":
        a, b = dirac_mu_left_shifted(pair, mu, -mu)
        return RegularPair(a, b, "column", mu)
    if side == "right":
        a, b = dirac_mu_right_shifted(pair, mu, mu)
        return RegularPair(a, b, "row", mu)
    raise ValueError(side)


def transported(pair: RegularPair, a: BiQuaternion, d: BiQuaternion) -> RegularPair:
    """``(a^-1 f1(a X d^-1), d^-1 f2(a X d^-1))`` for unit quaternions a, d."""
    ai, di = a.inv(), d.inv()
    return RegularPair(Field(lambda X: ai * _bq(pair.f1(a * X * di))),
                       Field(lambda X: di * _bq(pair.f2(a * X * di))), pair.kind, pair.mu)


# ---------------------------------------------------------------------------
# kernels


def _blocks_to_array(b11, b12, b21, b22) -> np.ndarray:
    A = [x.as_array() for x in (b11, b12, b21, b22)]
    top = np.concatenate([A[0], A[1]], axis=-1)
    bot = np.concatenate([A[2], A[3]], axis=-1)
    return np.concatenate([top, bot], axis=-2)


def k_mu_kernel_eval(X: BiQuaternion, Y: BiQuaternion, mu: float, side: str = "left",
                     method: str = "closed") -> np.ndarray:
    """Cauchy-Fueter kernel as a 4x4 block array.

    ``side='left'``: ``k_mu = -1/2 K_mu(X, Y) (nabla_mu_bar + mu)`` (two rows, for
    left-regular f); ``side='right'``: ``k'_mu = -1/2 (nabla_mu - mu) K_mu``.
    ``method='ad'`` differentiates K_mu instead of using the closed form.
    """
    q = hat_interval(X, Y, mu)
    if np.any(np.abs(np.asarray(primal(q))) <= 1e-14):
        raise CoincidentPoints("kernel is singular at X = Y")
    if method == "ad" or side == "right":
        K = Field(lambda Z: K_mu_eval(Z, Y, mu))
        KI = _scalar_times_identity(K)
        if side == "left":
            r1 = dirac_mu_right_shifted((KI, _ZERO), mu, mu)
            r2 = dirac_mu_right_shifted((_ZERO, KI), mu, mu)
            b = [r1[0](X), r1[1](X), r2[0](X), r2[1](X)]
        else:
            c1 = dirac_mu_left_shifted((KI, _ZERO), mu, -mu)
            c2 = dirac_mu_left_shifted((_ZERO, KI), mu, -mu)
            b = [c1[0](X), c2[0](X), c1[1](X), c2[1](X)]
        return -0.5 * _blocks_to_array(*(_bq(x) for x in b))
    bX = sqrt(1 + mu * mu * X.norm())
    bY = sqrt(1 + mu * mu * Y.norm())
    nX, nY = X.norm(), Y.norm()
    scal = 0.5 * mu * (X * Y.plus()).trace() - 2 * mu * (nX + nY + mu * mu * nX * nY) / (1 + bX * bY)
    b11 = mu * (Y * X.plus()) + scal
    b12 = X * bY - Y * bX
    b21 = X.plus() * bY - Y.plus() * bX
    b22 = mu * (Y.plus() * X) + scal
    q2 = q * q
    return _blocks_to_array(b11 / q2, b12 / q2, b21 / q2, b22 / q2)


def fueter_kernel(X: BiQuaternion, Y: BiQuaternion) -> BiQuaternion:
    """Classical ``(X - Y)^+ / N(X - Y)^2``."""
    D = X - Y
    return D.plus() / D.norm() ** 2


# ---------------------------------------------------------------------------
# sphere cycles


@dataclass(frozen=True)
class SphereCycle:
    center: BiQuaternion
    radius: float
    orientation: float = ORIENTATION

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    def rule(self, orders: tuple):
        base = build_sphere_rule(self.radius, orders=tuple(orders))
        return base.nodes + self.center, base.weights

    def distance_ratio(self, Y: BiQuaternion) -> float:
        d = math.sqrt(abs(complex((Y - self.center).norm())))
        return min(d / self.radius, self.radius / d) if d > 0 else 0.0


def sphere_orders(q: float, extra: int = 6, cap: int = 160) -> tuple[int, int, int]:
    """Orders for a sphere integrand with an interior/exterior singularity at
    distance ratio ``q``, plus ``extra`` for the smooth factors."""
    L = math.ceil(math.log(1e-13) / math.log(max(min(q, 0.95), 1e-3)))
    o = (L // 2 + extra + 3, L // 4 + extra // 2 + 3, L + 2 * extra + 3)
    return tuple(min(x, cap) for x in o)


def dx_mu_blocks(X: BiQuaternion, cycle: SphereCycle, mu: float):
    """Blocks of ``Dx_mu`` restricted to the sphere (without ``dS / eps``)."""
    Xp = X - cycle.center
    s = sqrt(1 + mu * mu * X.norm())
    d11 = (X * Xp.plus() - Xp * X.plus()) * (0.5 * mu) / s
    d22 = (X.plus() * Xp - Xp.plus() * X) * (0.5 * mu) / s
    return d11, Xp, Xp.plus(), d22


def _row_form_column(g: tuple, D: tuple, f: tuple) -> BiQuaternion:
    g1, g2 = g
    f1, f2 = f
    d11, d12, d21, d22 = D
    return g1 * d11 * f1 + g1 * d12 * f2 + g2 * d21 * f1 + g2 * d22 * f2


def surface_integral_form(g: RegularPair, f: RegularPair, cycle: SphereCycle, mu: float,
                          orders: tuple | None = None) -> np.ndarray:
    """``\\oint_{cycle} g . Dx_mu . f`` as a 2x2 complex matrix."""
    orders = orders or sphere_orders(0.5)
    X, w = cycle.rule(orders)
    D = dx_mu_blocks(X, cycle, mu)
    val = _row_form_column(g(X), D, f(X))
    if not np.all(np.isfinite(val.as_array())):
        raise SingularOnCycle("integrand is singular on the cycle")
    return cycle.orientation * np.tensordot(w, val.as_array(), axes=(0, 0)) / cycle.radius


def cauchy_fueter_integral(f: RegularPair, Y: BiQuaternion, cycle: SphereCycle, mu: float,
                           orders: tuple | None = None, extra: int = 6) -> tuple[np.ndarray, np.ndarray]:
    """``(1/2pi^2) \\oint k_mu(X, Y) . Dx_mu . f(X)``: f(Y) for Y inside the
    sphere, 0 outside.  Returns the two components as 2x2 arrays."""
    q = cycle.distance_ratio(Y)
    if q > 1 - 1e-6:
        raise SingularOnCycle("Y lies on the cycle")
    orders = orders or sphere_orders(q, extra)
    X, w = cycle.rule(orders)
    k = k_mu_kernel_eval(X, Y, mu)                       # (n, 4, 4)
    rows = []
    for r in range(2):
        blk = k[:, 2 * r:2 * r + 2, :]
        g = (BiQuaternion.from_matrix(blk[:, :, :2]), BiQuaternion.from_matrix(blk[:, :, 2:]))
        rows.append(g)
    D = dx_mu_blocks(X, cycle, mu)
    fx = f(X)
    out = []
    for g in rows:
        val = _row_form_column(g, D, fx).as_array()
        out.append(cycle.orientation * np.tensordot(w, val, axes=(0, 0))
                   / (cycle.radius * 2 * np.pi ** 2))
    return out[0], out[1]
