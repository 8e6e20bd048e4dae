"""Biquaternions as 2x2 complex matrices, conformal maps and region tests.

Entries may be Python/numpy scalars, numpy arrays (a batch of points sharing
one shape) or :class:`~quatlab.dual.Dual` numbers, so the same code serves
plain evaluation, vectorised quadrature and automatic differentiation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np
from scipy.linalg import expm

from .dual import primal
from .errors import SingularDenominator, SingularMatrix

SINGULAR_RTOL = 1e-14


@dataclass(frozen=True)
class BiQuaternion:
    """Complexified quaternion ``[[z11, z12], [z21, z22]]``."""

    z11: Any
    z12: Any
    z21: Any
    z22: Any

    __array_ufunc__ = None

    # construction -------------------------------------------------------
    @classmethod
    def identity(cls) -> "BiQuaternion":
        return cls(1.0 + 0j, 0j, 0j, 1.0 + 0j)

    @classmethod
    def zero(cls) -> "BiQuaternion":
        return cls(0j, 0j, 0j, 0j)

    @classmethod
    def scalar(cls, c) -> "BiQuaternion":
        return cls(c, 0 * c, 0 * c, c)

    @classmethod
    def from_matrix(cls, m) -> "BiQuaternion":
        """From an array of shape ``(..., 2, 2)``."""
        m = np.asarray(m, dtype=complex)
        return cls(m[..., 0, 0], m[..., 0, 1], m[..., 1, 0], m[..., 1, 1])

    @classmethod
    def from_real(cls, x0, x1, x2, x3) -> "BiQuaternion":
        """Embed x0 + i x1 + j x2 + k x3."""
        return cls(x0 - 1j * x3, -1j * x1 - x2, -1j * x1 + x2, x0 + 1j * x3)

    def to_real(self):
        """Inverse of :meth:`from_real` (complex coordinates for complex points)."""
        x0 = (self.z11 + self.z22) / 2
        x3 = (self.z22 - self.z11) * (-0.5j)
        x1 = (self.z12 + self.z21) * 0.5j
        x2 = (self.z21 - self.z12) / 2
        return x0, x1, x2, x3

    # shape helpers ------------------------------------------------------
    def entries(self) -> tuple:
        return (self.z11, self.z12, self.z21, self.z22)

    def map(self, fn) -> "BiQuaternion":
        return BiQuaternion(*(fn(e) for e in self.entries()))

    def as_array(self) -> np.ndarray:
        """Numeric entries as an array of shape ``batch + (2, 2)``."""
        e = np.broadcast_arrays(*(np.asarray(primal(x), dtype=complex) for x in self.entries()))
        return np.stack([np.stack([e[0], e[1]], -1), np.stack([e[2], e[3]], -1)], -2)

    @property
    def shape(self) -> tuple:
        return np.broadcast_shapes(*(np.shape(primal(x)) for x in self.entries()))

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    def take(self, index) -> "BiQuaternion":
        return BiQuaternion(*(np.broadcast_to(x, self.shape)[index] for x in self.entries()))

    # algebra ------------------------------------------------------------
    def __add__(self, o):
        if isinstance(o, BiQuaternion):
            return BiQuaternion(self.z11 + o.z11, self.z12 + o.z12, self.z21 + o.z21, self.z22 + o.z22)
        return BiQuaternion(self.z11 + o, self.z12, self.z21, self.z22 + o)

    __radd__ = __add__

    def __neg__(self):
        return BiQuaternion(-self.z11, -self.z12, -self.z21, -self.z22)

    def __sub__(self, o):
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, BiQuaternion):
            return BiQuaternion(
                self.z11 * o.z11 + self.z12 * o.z21,
                self.z11 * o.z12 + self.z12 * o.z22,
                self.z21 * o.z11 + self.z22 * o.z21,
                self.z21 * o.z12 + self.z22 * o.z22,
            )
        return BiQuaternion(self.z11 * o, self.z12 * o, self.z21 * o, self.z22 * o)

    def __rmul__(self, o):
        return BiQuaternion(o * self.z11, o * self.z12, o * self.z21, o * self.z22)

    def __truediv__(self, o):
        return BiQuaternion(self.z11 / o, self.z12 / o, self.z21 / o, self.z22 / o)

    def norm(self):
        return self.z11 * self.z22 - self.z12 * self.z21

    def trace(self):
        return self.z11 + self.z22

    def plus(self) -> "BiQuaternion":
        """Adjugate ``Z^+``; quaternionic conjugation on real points."""
        return BiQuaternion(self.z22, -self.z12, -self.z21, self.z11)

    def star(self) -> "BiQuaternion":
        """Hermitian adjoint ``Z^*`` (numeric entries only)."""
        c = np.conj
        return BiQuaternion(c(self.z11), c(self.z21), c(self.z12), c(self.z22))

    def conj(self) -> "BiQuaternion":
        return self.map(np.conj)

    def inv(self) -> "BiQuaternion":
        n = self.norm()
        if np.any(np.abs(primal(n)) == 0):
            raise SingularMatrix("biquaternion is not invertible")
        return self.plus() / n


def norm(Z: BiQuaternion):
    return Z.norm()


def conj_plus(Z: BiQuaternion) -> BiQuaternion:
    return Z.plus()


def tr(Z: BiQuaternion):
    return Z.trace()


def real_quaternion(x0, x1=0.0, x2=0.0, x3=0.0) -> BiQuaternion:
    return BiQuaternion.from_real(x0, x1, x2, x3)


E0 = BiQuaternion.from_real(1.0, 0.0, 0.0, 0.0)
E1 = BiQuaternion.from_real(0.0, 1.0, 0.0, 0.0)
E2 = BiQuaternion.from_real(0.0, 0.0, 1.0, 0.0)
E3 = BiQuaternion.from_real(0.0, 0.0, 0.0, 1.0)
E0_TILDE = -1j * E0


def _check_denominator(D: BiQuaternion) -> None:
    n = np.abs(np.asarray(primal(D.norm())))
    scale = np.max(np.abs(D.as_array()), axis=(-1, -2))
    if np.any(n < SINGULAR_RTOL * scale ** 2) or np.any(scale == 0):
        raise SingularDenominator("denominator biquaternion is (numerically) singular")


def _scalar_bq(x) -> BiQuaternion:
    return x if isinstance(x, BiQuaternion) else BiQuaternion.scalar(complex(x))


@dataclass(frozen=True)
class GroupElement:
    """Block matrix ``h = [[a, b], [c, d]]`` in GL(2, H_C) = GL(4, C).

    The inverse blocks ``a_, b_, c_, d_`` (a', b', c', d') are recomputed from
    the 4x4 matrix at construction.
    """

    a: BiQuaternion
    b: BiQuaternion
    c: BiQuaternion
    d: BiQuaternion
    a_: BiQuaternion = field(init=False, repr=False)
    b_: BiQuaternion = field(init=False, repr=False)
    c_: BiQuaternion = field(init=False, repr=False)
    d_: BiQuaternion = field(init=False, repr=False)

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, _scalar_bq(getattr(self, name)))
        m = self.matrix()
        if abs(np.linalg.det(m)) < 1e-300:
            raise SingularMatrix("group element is not invertible")
        inv = np.linalg.inv(m)
        object.__setattr__(self, "a_", BiQuaternion.from_matrix(inv[:2, :2]))
        object.__setattr__(self, "b_", BiQuaternion.from_matrix(inv[:2, 2:]))
        object.__setattr__(self, "c_", BiQuaternion.from_matrix(inv[2:, :2]))
        object.__setattr__(self, "d_", BiQuaternion.from_matrix(inv[2:, 2:]))

    @classmethod
    def from_matrix(cls, m) -> "GroupElement":
        m = np.asarray(m, dtype=complex)
        return cls(BiQuaternion.from_matrix(m[:2, :2]), BiQuaternion.from_matrix(m[:2, 2:]),
                   BiQuaternion.from_matrix(m[2:, :2]), BiQuaternion.from_matrix(m[2:, 2:]))

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls.from_matrix(np.eye(4))

    def matrix(self) -> np.ndarray:
        return np.block([[self.a.as_array(), self.b.as_array()],
                         [self.c.as_array(), self.d.as_array()]])

    def inverse(self) -> "GroupElement":
        return GroupElement(self.a_, self.b_, self.c_, self.d_)

    def __matmul__(self, o: "GroupElement") -> "GroupElement":
        return GroupElement.from_matrix(self.matrix() @ o.matrix())


GAMMA = GroupElement.from_matrix(np.array([[1j, 0, 1, 0], [0, 1j, 0, 1],
                                           [1j, 0, -1, 0], [0, 1j, 0, -1]]) / np.sqrt(2))
GAMMA_INV = GAMMA.inverse()
SWAP = GroupElement.from_matrix(np.block([[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]]))


def mobius(h: GroupElement, Z: BiQuaternion) -> BiQuaternion:
    """Fractional linear map ``(aZ+b)(cZ+d)^{-1}``."""
    den = h.c * Z + h.d
    _check_denominator(den)
    return (h.a * Z + h.b) * den.inv()


def mobius_right(h: GroupElement, Z: BiQuaternion) -> BiQuaternion:
    """The same map written through the inverse blocks, ``(a'-Zc')^{-1}(-b'+Zd')``."""
    den = h.a_ - Z * h.c_
    _check_denominator(den)
    return den.inv() * (Z * h.d_ - h.b_)


def mobius_jacobian_det(h: GroupElement, Z: BiQuaternion):
    """Determinant of the complex 4x4 Jacobian of ``Z -> mobius(h, Z)``.

    The differential is ``dZ -> (a - W c) dZ (cZ + d)^{-1}``; its matrix in the
    entry basis (z11, z12, z21, z22) is assembled and its determinant taken
    numerically.
    """
    den = h.c * Z + h.d
    _check_denominator(den)
    W = mobius(h, Z)
    left = (h.a - W * h.c).as_array()
    right = den.inv().as_array()
    jac = np.einsum("...ik,...lj->...ijkl", left, right)
    jac = jac.reshape(jac.shape[:-4] + (4, 4))
    return np.linalg.det(jac)


CayleyDirection = Literal["forward", "inverse"]


def cayley(Z: BiQuaternion, direction: CayleyDirection = "forward") -> BiQuaternion:
    """Cayley transform.

    ``forward``: ``Z -> (Z - i)(Z + i)^{-1}``, the map induced by gamma; it
    sends D+ -> T+, D- -> T- and U(2) -> M.
    ``inverse``: ``Z -> -i(Z + 1)(Z - 1)^{-1}``, induced by gamma^{-1}; it
    sends T+ -> D+, T- -> D- and M -> U(2).
    """
    if direction == "forward":
        return mobius(GAMMA, Z)
    if direction == "inverse":
        return mobius(GAMMA_INV, Z)
    raise ValueError(f"unknown Cayley direction {direction!r}")


def eigenvalues(Z: BiQuaternion):
    """Roots of ``x^2 - Tr(Z) x + N(Z)``, larger-modulus root first."""
    t = np.asarray(primal(Z.trace()), dtype=complex)
    n = np.asarray(primal(Z.norm()), dtype=complex)
    disc = np.sqrt(t * t - 4 * n)
    # pick the sign that avoids cancellation in t +- disc
    sgn = np.where((np.conj(t) * disc).real >= 0, 1.0, -1.0)
    q = (t + sgn * disc) / 2
    safe = np.where(q == 0, 1.0, q)
    lam2 = np.where(q == 0, 0.0, n / safe)
    return q, lam2


# ---------------------------------------------------------------------------
# region predicates


def singular_values(Z: BiQuaternion) -> np.ndarray:
    return np.linalg.svd(Z.as_array(), compute_uv=False)


def in_D_plus(Z: BiQuaternion, R: float = 1.0):
    """ZZ* < R^2."""
    return singular_values(Z)[..., 0] < R


def in_D_minus(Z: BiQuaternion, R: float = 1.0):
    """ZZ* > R^2."""
    return singular_values(Z)[..., -1] > R


def u2_residual(Z: BiQuaternion, R: float = 1.0):
    m = Z.as_array()
    zz = m @ np.conj(np.swapaxes(m, -1, -2))
    return np.max(np.abs(zz - R * R * np.eye(2)), axis=(-1, -2))


def on_U2(Z: BiQuaternion, R: float = 1.0, tol: float = 1e-12):
    return u2_residual(Z, R) <= tol * max(1.0, R * R)


def minkowski_residual(Z: BiQuaternion):
    m = Z.as_array()
    return np.maximum.reduce([np.abs(m[..., 0, 0].real), np.abs(m[..., 1, 1].real),
                              np.abs(m[..., 1, 0] + np.conj(m[..., 0, 1]))])


def in_M(Z: BiQuaternion, tol: float = 1e-12):
    return minkowski_residual(Z) <= tol


def minkowski_parts(Z: BiQuaternion):
    """Split ``Z = W1 + i W2`` with ``W1, W2`` in M."""
    m = Z.as_array()
    mh = np.conj(np.swapaxes(m, -1, -2))
    # M is the anti-Hermitian matrices; i*M is the Hermitian ones
    w1 = (m - mh) / 2
    w2 = (m + mh) / 2j
    return BiQuaternion.from_matrix(w1), BiQuaternion.from_matrix(w2)


def _definiteness(Z: BiQuaternion):
    _, w2 = minkowski_parts(Z)
    h = 1j * w2.as_array()
    h = (h + np.conj(np.swapaxes(h, -1, -2))) / 2
    return np.linalg.eigvalsh(h)


def in_T_plus(Z: BiQuaternion):
    """i W2 negative definite."""
    return _definiteness(Z)[..., -1] < 0


def in_T_minus(Z: BiQuaternion):
    """i W2 positive definite."""
    return _definiteness(Z)[..., 0] > 0


def u22_residual(h: GroupElement, R: float = 1.0) -> float:
    """Largest residual of the three block relations defining U(2,2)_R."""
    s = np.diag([1 / R, 1 / R, 1, 1])
    m = s @ h.matrix() @ np.linalg.inv(s)
    a, b, c, d = m[:2, :2], m[:2, 2:], m[2:, :2], m[2:, 2:]
    H = lambda x: np.conj(x.T)  # noqa: E731
    eye = np.eye(2)
    return max(np.abs(H(a) @ a - eye - H(c) @ c).max(),
               np.abs(H(d) @ d - eye - H(b) @ b).max(),
               np.abs(H(a) @ b - H(c) @ d).max())


# ---------------------------------------------------------------------------
# random sampling used by tests and suites


def random_biquaternion(rng: np.random.Generator, size=None, scale: float = 1.0) -> BiQuaternion:
    shape = (4,) if size is None else (4,) + tuple(np.atleast_1d(size))
    z = scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    return BiQuaternion(*z)


def random_real_quaternion(rng: np.random.Generator, size=None, scale: float = 1.0) -> BiQuaternion:
    shape = (4,) if size is None else (4,) + tuple(np.atleast_1d(size))
    x = scale * rng.standard_normal(shape)
    return BiQuaternion.from_real(*x)


def random_unitary(rng: np.random.Generator, size=None) -> np.ndarray:
    """Haar-random U(2) matrices, shape ``batch + (2, 2)``."""
    shape = () if size is None else tuple(np.atleast_1d(size))
    g = rng.standard_normal(shape + (2, 2)) + 1j * rng.standard_normal(shape + (2, 2))
    q, r = np.linalg.qr(g)
    ph = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (ph / np.abs(ph))[..., None, :]


def random_u2_point(rng: np.random.Generator, R: float = 1.0, size=None) -> BiQuaternion:
    return BiQuaternion.from_matrix(R * random_unitary(rng, size))


def random_domain_point(rng: np.random.Generator, R: float, side: str, size=None,
                        lo: float = 0.1, hi: float = 0.6) -> BiQuaternion:
    """Point of D+_R (``side='plus'``) or D-_R with singular values in R*[lo, hi]
    (plus) or R/[hi, lo] (minus)."""
    shape = () if size is None else tuple(np.atleast_1d(size))
    u = random_unitary(rng, size)
    v = random_unitary(rng, size)
    sv = rng.uniform(lo, hi, shape + (2,))
    if side == "minus":
        sv = 1.0 / sv
    elif side != "plus":
        raise ValueError(side)
    m = R * (u * sv[..., None, :]) @ v
    return BiQuaternion.from_matrix(m)


def random_u22_generator(rng: np.random.Generator) -> np.ndarray:
    """Random element ``[[A, B], [B*, D]]`` of u(2,2), A and D anti-Hermitian."""
    def antiherm():
        x = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        return (x - np.conj(x.T)) / 2
    b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    return np.block([[antiherm(), b], [np.conj(b.T), antiherm()]])


def random_u22(rng: np.random.Generator, R: float = 1.0, scale: float = 0.2) -> GroupElement:
    """exp of a random u(2,2) generator of operator norm ``scale``, conjugated into U(2,2)_R."""
    x = random_u22_generator(rng)
    x *= scale / np.linalg.norm(x, 2)
    s = np.diag([R, R, 1, 1])
    return GroupElement.from_matrix(s @ expm(x) @ np.linalg.inv(s))


def scaling(R: float) -> GroupElement:
    """``Z -> R Z``."""
    return GroupElement.from_matrix(np.diag([R, R, 1, 1]))

