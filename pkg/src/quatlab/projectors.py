"""Embedding maps I_R, the projectors P+, P0, P-, Poisson operators and the
kernel expansions of 1/N(Z-W) and 1/N(Z-W)^2.

Quadrature orders for the kernels are chosen from the separation ratio
``q`` of the evaluation points from the cycle (q = |Z|/R inside, R/|Z|
outside, |.| the largest resp. smallest singular value): the integrands are
power series in q and the product rule aliases at total degree ~ its order.

P0 is evaluated in Weyl coordinates.  For Z in U(2)_R write W = Z V with
V = g diag(z1, z2) g^{-1} in U(2).  Then

    (i/2pi^3) \\int f(W) dV / (N(W - aZ) N(W - bZ))
        = 1/2 sum_{p,q} h_{pq} [2 M_p M_q - M_{p+1} M_{q-1} - M_{p-1} M_{q+1}]

where h_{pq} are the torus Fourier coefficients of the conjugation average
of f(Z g D g^{-1}) and M_p = (1/2pi i) \\oint z^{p+1} dz / ((z-a)(z-b)) over the
unit circle, |a| < 1 < |b|.  The double limit s -> 1, theta -> 0 of the
definition of P0 is then taken by Richardson extrapolation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .algebra import BiQuaternion, cayley, eigenvalues, singular_values
from .calculus import Field, deg_tilde
from .dual import primal
from .errors import (DegenerateEigenvalues, NonConvergence, OnBoundary,
                     OutsideConvergenceRegion)
from .quadrature import ContourRule, SurfaceRule, build_sphere_rule, build_u2_rule, integrate
from .special import t_matrix

Side = Literal["plus", "minus"]
BOUNDARY_GUARD = 1e-3


def _side_of(Z: BiQuaternion, R: float) -> tuple[str, float]:
    """Domain of a single point and its separation ratio from U(2)_R / S^3_R."""
    sv = singular_values(Z)
    hi, lo = float(sv[0]), float(sv[-1])
    if hi < R * (1 - BOUNDARY_GUARD):
        return "plus", hi / R
    if lo > R * (1 + BOUNDARY_GUARD):
        return "minus", R / lo
    raise OnBoundary("point is on (or too close to) the integration cycle")


def kernel_orders(q: float, extra: int = 4, tol: float = 1e-15) -> tuple[int, int, int, int]:
    """``(n_alpha, n_phi, n_theta, n_psi)`` resolving kernels with ratio ``q``
    times a Laurent polynomial of degree ``extra``."""
    L = math.ceil(math.log(tol) / math.log(max(q, 1e-3)))
    return (L // 2 + extra + 3, L // 2 + extra + 3, L // 4 + extra + 3, L + 2 * extra + 3)


def sphere_kernel_orders(q: float, extra: int = 4, tol: float = 1e-15) -> tuple[int, int, int]:
    L = math.ceil(math.log(tol) / math.log(max(q, 1e-3)))
    return (L // 2 + extra + 3, L // 4 + extra + 3, L + 2 * extra + 3)


def kernel_rule(R: float, q: float, extra: int = 4) -> SurfaceRule:
    return build_u2_rule(R, orders=kernel_orders(q, extra))


def _point_ratio(points, R):
    return max(_side_of(P, R)[1] for P in points)


def I_R_eval(f: Field, Z1: BiQuaternion, Z2: BiQuaternion, R: float = 1.0,
             rule: SurfaceRule | None = None, extra: int = 4):
    """``(i/2pi^3) \\int_{U(2)_R} f(W) dV / (N(W - Z1) N(W - Z2))``."""
    q = _point_ratio((Z1, Z2), R)
    rule = rule or kernel_rule(R, q, extra)
    kern = Field(lambda W: 1.0 / ((W - Z1).norm() * (W - Z2).norm()))
    return 1j / (2 * np.pi ** 3) * integrate(f * kern, rule)


def P_pm_eval(f: Field, Z: BiQuaternion, R: float = 1.0, side: Side = "plus",
              rule: SurfaceRule | None = None, extra: int = 4):
    """``(i/2pi^3) \\int f(W) dV / N(W - Z)^2`` for Z in D+_R or D-_R."""
    where, _ = _side_of(Z, R)
    if where != side:
        raise OnBoundary(f"point lies in D{'+' if where == 'plus' else '-'}_R, not the requested side")
    return I_R_eval(f, Z, Z, R, rule, extra)


def _mixed_eigenvalues(Z1: BiQuaternion, Z2: BiQuaternion):
    return eigenvalues(Z1 * Z2.inv())


def I_mixed_closed_form(Z1: BiQuaternion, Z2: BiQuaternion, confluent: bool = False):
    """``N(Z2)^{-1} log((1 - l1)/(1 - l2)) / (l2 - l1)`` with l1, l2 the
    eigenvalues of ``Z1 Z2^{-1}``; ``confluent=True`` returns the continuous
    extension ``N(Z2)^{-1} / (1 - l)`` at a double eigenvalue."""
    l1, l2 = (complex(x) for x in _mixed_eigenvalues(Z1, Z2))
    n2 = complex(primal(Z2.norm()))
    if abs(l1 - l2) <= 1e-10 * max(1.0, abs(l1)):
        if not confluent:
            raise DegenerateEigenvalues("Z1 Z2^{-1} has a double eigenvalue")
        lam = 0.5 * (l1 + l2)
        return 1.0 / (n2 * (1 - lam))
    return np.log((1 - l1) / (1 - l2)) / (n2 * (l2 - l1))


def I_sum_closed_form(Z1: BiQuaternion, Z2: BiQuaternion):
    """``-(log l2 - log l1) / (N(Z2)(l2 - l1))`` (``-1/(N(Z2) l)`` when confluent):
    the value of ``(I^{+-} + I^{-+}) N^{-1}`` at Z1, Z2 on U(2)_R."""
    l1, l2 = (complex(x) for x in _mixed_eigenvalues(Z1, Z2))
    n2 = complex(primal(Z2.norm()))
    if abs(l1 - l2) <= 1e-10:
        return -1.0 / (n2 * 0.5 * (l1 + l2))
    return -(np.log(l2) - np.log(l1)) / (n2 * (l2 - l1))


# ---------------------------------------------------------------------------
# P0


@dataclass(frozen=True)
class LimitSchedule:
    """Stages of the double limit, theta outer and s inner.

    ``order`` is the degree of the Richardson polynomial (in 1-s and in
    theta^2); ``moments`` selects exact residues or a trapezoid contour rule
    with ``ceil(contour_boost / (1 - s))`` nodes.
    """

    s_values: tuple = (0.999, 0.9995, 0.99975)
    theta_values: tuple = (0.4, 0.2, 0.1)
    order: int = 2
    moments: Literal["residue", "contour"] = "residue"
    contour_boost: float = 40.0
    tol: float = 1e-2

    def __post_init__(self):
        for seq, name in ((self.s_values, "s"), (self.theta_values, "theta")):
            if len(seq) < 3:
                raise ValueError(f"need at least 3 {name} stages")
            d = np.diff(seq)
            if not (np.all(d > 0) or np.all(d < 0)):
                raise ValueError(f"{name} stages must be strictly monotone")
        if not all(0 < s < 1 for s in self.s_values):
            raise ValueError("s stages must lie in (0, 1)")


HALVING_SCHEDULE = LimitSchedule((0.9, 0.95, 0.975), (0.3, 0.15, 0.075))


def torus_coefficients(f: Field, Z: BiQuaternion, band: int = 6, n_sphere: int | None = None):
    """Fourier coefficients ``h[p, q]`` (FFT layout) of the conjugation average
    of ``f(Z g diag(z1, z2) g^{-1})`` over the unit torus."""
    n_sphere = n_sphere or band + 2
    x, wg = np.polynomial.legendre.leggauss(n_sphere)
    nph = 2 * n_sphere + 1
    nt = 2 * band + 1
    ph = 2 * np.pi * np.arange(nph) / nph
    zt = np.exp(2j * np.pi * np.arange(nt) / nt)
    X, PH, Z1, Z2 = np.meshgrid(x, ph, zt, zt, indexing="ij")
    c2, s2 = (1 + X) / 2, (1 - X) / 2
    off = -0.5j * np.sqrt(1 - X * X) * np.exp(1j * PH)
    # V = z2 I + (z1 - z2) u u*,  u = (cos(th/2) e^{i ph/2}, i sin(th/2) e^{-i ph/2})
    dz = Z1 - Z2
    V = BiQuaternion(Z2 + dz * c2, dz * off, dz * np.conj(off), Z2 + dz * s2)
    vals = np.broadcast_to(f(Z * V), X.shape)
    w = np.broadcast_to(wg[:, None, None, None], X.shape) / (2 * nph)
    h = np.sum(vals * w, axis=(0, 1))
    hh = np.fft.fft2(h) / nt ** 2
    tail = max(np.abs(hh[band, :]).max(), np.abs(hh[:, band]).max(),
               np.abs(hh[band + 1, :]).max(), np.abs(hh[:, band + 1]).max())
    return hh, tail


def _moments_residue(p: np.ndarray, a: complex, b: complex) -> np.ndarray:
    e = p + 1
    return np.where(e >= 0, a ** e.astype(float), b ** e.astype(float)) / (a - b)


def _moments_contour(p: np.ndarray, a: complex, b: complex, n: int) -> np.ndarray:
    rule = ContourRule(0.0, 1.0, n)
    z = rule.nodes
    k = rule.weights / ((z - a) * (z - b))
    return np.array([np.sum(k * z ** int(pp + 1)) for pp in p.ravel()]).reshape(p.shape)


def _weyl_pair_integral(hh: np.ndarray, a: complex, b: complex, moments: str, n_contour: int):
    nt = hh.shape[0]
    ps = np.fft.fftfreq(nt, 1 / nt).astype(int)
    allp = np.arange(ps.min() - 1, ps.max() + 2)
    if moments == "residue":
        table = _moments_residue(allp, a, b)
    else:
        table = _moments_contour(allp, a, b, n_contour)
    M = lambda p: table[p - allp[0]]  # noqa: E731
    P, Q = np.meshgrid(ps, ps, indexing="ij")
    ker = 2 * M(P) * M(Q) - M(P + 1) * M(Q - 1) - M(P - 1) * M(Q + 1)
    return 0.5 * np.sum(hh * ker)


def _richardson(x: np.ndarray, y: np.ndarray, order: int) -> tuple[complex, float]:
    c = np.polyfit(x, y, min(order, len(x) - 1))
    val = c[-1]
    # error estimate: compare with the fit that drops the stage farthest from the limit
    far = np.argmax(np.abs(x))
    keep = np.arange(len(x)) != far
    c2 = np.polyfit(x[keep], y[keep], min(order, int(keep.sum()) - 1))
    return val, float(abs(val - c2[-1]))


def P_zero_eval(f: Field, Z: BiQuaternion, R: float = 1.0,
                sched: LimitSchedule | None = None, band: int = 6,
                n_sphere: int | None = None, return_info: bool = False):
    """Regularised projector onto Zh0 at ``Z`` in U(2)_R:

    ``-lim_theta lim_s [J(s e^{it} Z, s^{-1} e^{-it} Z) + J(s^{-1} e^{it} Z, s e^{-it} Z)]``
    with ``J(Z1, Z2) = (I_R f)(Z1, Z2)``.
    """
    sched = sched or LimitSchedule()
    from .algebra import u2_residual
    if u2_residual(Z, R) > 1e-10 * max(1.0, R * R):
        raise OnBoundary("P0 needs Z on U(2)_R")
    hh, tail = torus_coefficients(f, Z, band, n_sphere)
    if tail > 1e-10 * max(1.0, np.abs(hh).max()):
        raise NonConvergence("torus band too small for this function; raise `band`")
    inner = []
    for th in sched.theta_values:
        vals = []
        for s in sched.s_values:
            n_c = int(math.ceil(sched.contour_boost / (1 - s)))
            j1 = _weyl_pair_integral(hh, s * np.exp(1j * th), np.exp(-1j * th) / s, sched.moments, n_c)
            j2 = _weyl_pair_integral(hh, s * np.exp(-1j * th), np.exp(1j * th) / s, sched.moments, n_c)
            vals.append(-(j1 + j2))
        v, _ = _richardson(1 - np.asarray(sched.s_values), np.asarray(vals), sched.order)
        inner.append(v)
    value, err = _richardson(np.asarray(sched.theta_values) ** 2, np.asarray(inner), sched.order)
    if err > sched.tol:
        raise NonConvergence(f"P0 extrapolation estimate {err:.2e} exceeds {sched.tol:.1e}")
    if return_info:
        return value, {"error_estimate": err, "stages": inner, "band_tail": tail}
    return value


# ---------------------------------------------------------------------------
# Poisson operators and the multiplication integral


def S_poisson_eval(phi: Field, Z: BiQuaternion, R: float = 1.0, side: Side = "plus",
                   rule: SurfaceRule | None = None, extra: int = 4):
    """``(1/2pi^2) \\int_{S^3_R} (deg~ phi)(X) / N(X - Z) dS / R``."""
    where, q = _side_of(Z, R)
    if where != side:
        raise OnBoundary("point not on the requested side of S^3_R")
    rule = rule or build_sphere_rule(R, orders=sphere_kernel_orders(q, extra))
    kern = Field(lambda X: 1.0 / (X - Z).norm())
    return integrate(deg_tilde(phi) * kern, rule) / (2 * np.pi ** 2 * R)


def mult_integral(phi1: Field, phi2: Field, W: BiQuaternion, R1: float, R2: float, extra: int = 4):
    """Double surface integral over S^3_{R1} x S^3_{R2} of
    ``(deg~ phi1)(Z1) (deg~ phi2)(Z2) / (N(W - Z1) N(W - Z2))``, normalised by
    ``(2pi^2)^2 R1 R2``.  The integrand separates, so it is the product of two
    sphere integrals."""
    side1, _ = _side_of(W, R1)
    side2, _ = _side_of(W, R2)
    return (S_poisson_eval(phi1, W, R1, side1, extra=extra)
            * S_poisson_eval(phi2, W, R2, side2, extra=extra))


# ---------------------------------------------------------------------------
# kernel expansions


def _spectral_radius(A: BiQuaternion) -> float:
    l1, l2 = eigenvalues(A)
    return float(max(abs(complex(l1)), abs(complex(l2))))


def kernel_expansion_partial(kind: str, Z: BiQuaternion, W: BiQuaternion, L_max: int = 40,
                             variant: int = 1):
    """Truncated matrix-coefficient expansions.

    ``first``:   1/N(Z-W) = N(W)^{-1} sum t^l_{mn}(Z) t^l_{nm}(W^{-1}),  Z W^{-1} -> 0
    ``second``, variant 1: 1/N(Z-W)^2 = sum (2l+1) t^l_{mn}(Z^{-1}) N(Z)^{-k-2} t^l_{nm}(W) N(W)^k
    ``second``, variant 2: 1/N(Z-W)^2 = sum (2l+1) t^l_{mn}(Z) N(Z)^k t^l_{nm}(W^{-1}) N(W)^{-k-2}

    The first kind keeps 2l <= L_max, the second kind 2l + 2k <= L_max.
    """
    if kind == "first":
        if _spectral_radius(Z * W.inv()) >= 1:
            raise OutsideConvergenceRegion("Z W^{-1} has an eigenvalue of modulus >= 1")
        Wi = W.inv()
        total = 0j
        for tl in range(L_max + 1):
            A, B = t_matrix(tl, Z), t_matrix(tl, Wi)
            total += np.sum(A * B.T)
        return total / complex(W.norm())
    if kind != "second":
        raise ValueError(kind)
    if variant == 1:
        small, big = W, Z          # W Z^{-1} -> 0
    elif variant == 2:
        small, big = Z, W
    else:
        raise ValueError("variant must be 1 or 2")
    if _spectral_radius(small * big.inv()) >= 1:
        raise OutsideConvergenceRegion("expansion ratio has an eigenvalue of modulus >= 1")
    big_inv = big.inv()
    n_small, n_big = complex(small.norm()), complex(big.norm())
    total = 0j
    for tl in range(L_max + 1):
        tr = np.sum(t_matrix(tl, big_inv) * t_matrix(tl, small).T) * (tl + 1)
        for k in range(0, (L_max - tl) // 2 + 1):
            total += tr * n_big ** (-k - 2) * n_small ** k
    return total


# ---------------------------------------------------------------------------
# one-loop kernel


def p01_eval(Z1, Z2, W1, W2, l_max: int = 0, orders: tuple | None = None):
    """``(i/2pi^3) \\int_{U(2)} dV / (N(Z1-T) N(Z2-T) N(W1-T) N(W2-T))``."""
    pts = (Z1, Z2, W1, W2)
    q = _point_ratio(pts, 1.0)
    if orders is None:
        o = kernel_orders(q, 2 * l_max)
        # four kernel factors instead of two
        orders = (2 * o[0], 2 * o[1], 2 * o[2], 2 * o[3])
    rule = build_u2_rule(1.0, orders=tuple(orders))
    T = rule.nodes
    # symmetric combination so swapping arguments is bitwise neutral up to rounding
    a = (Z1 - T).norm() * (Z2 - T).norm()
    b = (W1 - T).norm() * (W2 - T).norm()
    return 1j / (2 * np.pi ** 3) * rule.sum(1.0 / (a * b))


# ---------------------------------------------------------------------------
# Cayley push-forwards


def cayley_pushforward(phi: Field, direction: str = "forward") -> Field:
    """``forward``: ``phi -> 2/N(Z-1) phi(-i(Z+1)(Z-1)^{-1})`` (pi0_l(gamma)),
    ``inverse``: ``phi -> -2/N(Z+i) phi((Z-i)(Z+i)^{-1})`` (pi0_l(gamma^{-1}))."""
    if direction == "forward":
        def fn(Z):
            return 2.0 / (Z - 1.0).norm() * phi(cayley(Z, "inverse"))
    elif direction == "inverse":
        def fn(Z):
            return -2.0 / (Z + 1j).norm() * phi(cayley(Z, "forward"))
    else:
        raise ValueError(direction)
    return Field(fn, None, f"cayley_{direction}({phi.name})")
