"""Harmonic spaces H^+-, the space Zh of Laurent polynomials, their pairings
and the conformal actions pi0_l, pi0_r, rho_1.

A Zh basis element is ``t^l_{n m}(Z) N(Z)^k`` (row n, column m).  Its dual
under the symmetric pairing is ``t^l_{m n}(Z^{-1}) N(Z)^{-k-2}`` with
pairing value ``1/(2l+1)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from .algebra import BiQuaternion, GroupElement, mobius, mobius_right
from .calculus import Field, deg_tilde, partial
from .dual import primal
from .errors import InvalidIndex
from .quadrature import SurfaceRule, build_sphere_rule, build_u2_rule, integrate
from .special import CoeffIndex, half_range, t_coeff

Component = Literal["plus", "zero", "minus"]


def nonzero_norm(p) -> np.ndarray:
    return np.abs(np.asarray(p.norm())) > 0


def classify(k: int, two_l: int) -> Component:
    """Zh component of the K-type ``t^l N^k``."""
    if k >= 0:
        return "plus"
    if k <= -(two_l + 2):
        return "minus"
    return "zero"


@dataclass(frozen=True, order=True)
class ZhBasisIndex:
    k: int
    idx: CoeffIndex

    @property
    def component(self) -> Component:
        return classify(self.k, self.idx.two_l)

    @property
    def ktype(self) -> tuple[int, int]:
        return (self.k, self.idx.two_l)


def zh_indices(ktypes: Iterable[tuple[int, int]]) -> list[ZhBasisIndex]:
    """All basis indices belonging to the listed K-types ``(k, 2l)``."""
    out = []
    for k, tl in ktypes:
        for tm in half_range(tl):
            for tn in half_range(tl):
                out.append(ZhBasisIndex(k, CoeffIndex(tl, tm, tn)))
    return out


def _t_times_norm_power(idx: CoeffIndex, k: int, Z: BiQuaternion):
    val = t_coeff(idx, Z)
    return val if k == 0 else val * Z.norm() ** k


def basis_field(space: str, index) -> Field:
    """Basis element of ``'H+'`` (t^l), ``'H-'`` (t^l N^{-2l-1}) or ``'Zh'``
    (t^l N^k, ``index`` a :class:`ZhBasisIndex`)."""
    if space == "H+":
        idx = index
        return Field(lambda Z: t_coeff(idx, Z), None, f"t{idx}")
    if space == "H-":
        idx = index
        k = -idx.two_l - 1
        return Field(lambda Z: _t_times_norm_power(idx, k, Z), nonzero_norm, f"t{idx}N^{k}")
    if space == "Zh":
        if not isinstance(index, ZhBasisIndex):
            raise InvalidIndex("Zh basis needs a ZhBasisIndex")
        idx, k = index.idx, index.k
        return Field(lambda Z: _t_times_norm_power(idx, k, Z), nonzero_norm if k < 0 else None,
                     f"t{idx}N^{k}")
    raise InvalidIndex(f"unknown space {space!r}")


def zh_dual_field(index: ZhBasisIndex) -> Field:
    """``t^l_{m n}(Z^{-1}) N^{-k-2} = t^l_{m n}(Z^+) N^{-2l-k-2}``."""
    idx = index.idx.swapped()
    p = -idx.two_l - index.k - 2
    return Field(lambda Z: t_coeff(idx, Z.plus()) * Z.norm() ** p, nonzero_norm, f"dual{index}")


def h_dual_field(idx: CoeffIndex) -> Field:
    """``t^l_{m n}(Z^{-1}) N(Z)^{-1}``, dual to ``t^l_{n m}`` under the H-pairing."""
    sw = idx.swapped()
    p = -idx.two_l - 1
    return Field(lambda Z: t_coeff(sw, Z.plus()) * Z.norm() ** p, nonzero_norm, f"hdual{idx}")


# ---------------------------------------------------------------------------
# pairings


def pairing_H(phi1: Field, phi2: Field, R: float = 1.0, rule: SurfaceRule | None = None,
              l_max: float = 2):
    """``(1 / 2 pi^2) \\int_{S^3_R} (deg~ phi1) phi2 dS / R``."""
    rule = rule or build_sphere_rule(R, l_max)
    return integrate(deg_tilde(phi1) * phi2, rule) / (2 * np.pi ** 2 * rule.R)


def pairing_Zh(f1: Field, f2: Field, R: float = 1.0, rule: SurfaceRule | None = None,
               l_max: float = 2, k_range: int = 3):
    """``(i / 2 pi^3) \\int_{U(2)_R} f1 f2 dV``."""
    rule = rule or build_u2_rule(R, l_max, k_range)
    return 1j / (2 * np.pi ** 3) * integrate(f1 * f2, rule)


def inner_product_Zh(f1: Field, f2: Field, rule: SurfaceRule | None = None,
                     l_max: float = 2, k_range: int = 3):
    """``(i / 2 pi^3) \\int_{U(2)} f1 conj(f2) dV / N^2``."""
    rule = rule or build_u2_rule(1.0, l_max, k_range)
    Z = rule.nodes
    v = f1(Z) * np.conj(np.asarray(primal(f2(Z)))) / Z.norm() ** 2
    return 1j / (2 * np.pi ** 3) * rule.sum(v)


# ---------------------------------------------------------------------------
# group and Lie algebra actions


def group_action_field(h: GroupElement, f: Field, kind: str = "rho1") -> Field:
    """``pi0_l``: f(hZ) / N(cZ+d); ``pi0_r``: f(hZ) / N(a'-Zc'), with hZ written
    as (a'-Zc')^{-1}(-b'+Zd'); ``rho1``: f(hZ) / (N(cZ+d) N(a'-Zc'))."""
    if kind == "pi0_l":
        fn = lambda Z: f(mobius(h, Z)) / (h.c * Z + h.d).norm()  # noqa: E731
    elif kind == "pi0_r":
        fn = lambda Z: f(mobius_right(h, Z)) / (h.a_ - Z * h.c_).norm()  # noqa: E731
    elif kind == "rho1":
        fn = lambda Z: f(mobius(h, Z)) / ((h.c * Z + h.d).norm() * (h.a_ - Z * h.c_).norm())  # noqa: E731
    else:
        raise ValueError(f"unknown action {kind!r}")
    return Field(fn, None, f"{kind}({f.name})")


@dataclass(frozen=True)
class LieElement:
    """Element ``[[A, B], [C, D]]`` of gl(2, H_C)."""

    A: BiQuaternion
    B: BiQuaternion
    C: BiQuaternion
    D: BiQuaternion

    @classmethod
    def from_matrix(cls, m) -> "LieElement":
        m = np.asarray(m, dtype=complex)
        return cls(BiQuaternion.from_matrix(m[:2, :2]), BiQuaternion.from_matrix(m[:2, 2:]),
                   BiQuaternion.from_matrix(m[2:, :2]), BiQuaternion.from_matrix(m[2:, 2:]))

    def matrix(self) -> np.ndarray:
        return np.block([[self.A.as_array(), self.B.as_array()],
                         [self.C.as_array(), self.D.as_array()]])


def generator_basis() -> list[tuple[str, LieElement]]:
    """The 16 elementary directions ``E_ij`` placed in each block."""
    out = []
    for blk, (r0, c0) in zip("ABCD", [(0, 0), (0, 2), (2, 0), (2, 2)]):
        for i in range(2):
            for j in range(2):
                m = np.zeros((4, 4), complex)
                m[r0 + i, c0 + j] = 1.0
                out.append((f"{blk}{i + 1}{j + 1}", LieElement.from_matrix(m)))
    return out


def d_matrix(f: Field) -> Field:
    """``df = [[d11 f, d21 f], [d12 f, d22 f]]`` for scalar f."""
    parts = [partial(f, k) for k in range(4)]

    def fn(Z):
        d = [g(Z) for g in parts]
        return BiQuaternion(d[0], d[2], d[1], d[3])

    return Field(fn, f.domain, f"d({f.name})")


def rho1_blocks(f: Field) -> dict[str, Field]:
    """Matrix-valued fields M_X with ``rho1(X) f = Tr(X M_X)`` per block."""
    df = d_matrix(f)

    def a_part(Z):
        return -(Z * df(Z)) - f(Z)

    def b_part(Z):
        return -df(Z)

    def c_part(Z):
        return Z * df(Z) * Z + 2 * (Z * f(Z))

    def d_part(Z):
        return df(Z) * Z + f(Z)

    return {k: Field(v, f.domain, f"rho1{k}({f.name})")
            for k, v in zip("ABCD", (a_part, b_part, c_part, d_part))}


def rho1_block_values(f: Field, Z: BiQuaternion) -> dict[str, BiQuaternion]:
    """Values of the four ``rho1_blocks`` at ``Z`` with ``df`` evaluated once."""
    df = d_matrix(f)(Z)
    fz = f(Z)
    z_df = Z * df
    return {"A": -z_df - fz, "B": -df, "C": z_df * Z + 2 * (Z * fz), "D": df * Z + fz}


def rho1_apply(x: LieElement, f: Field) -> Field:
    """Lie algebra action:

        A: Tr(A(-Z df - f)),  B: Tr(-B df),  C: Tr(C(Z df Z + 2Zf)),
        D: Tr(D(df Z + f)).
    """
    blocks = rho1_blocks(f)

    def fn(Z):
        out = 0
        for name, M in zip("ABCD", (x.A, x.B, x.C, x.D)):
            if np.any(M.as_array() != 0):
                out = out + (M * blocks[name](Z)).trace()
        return out

    return Field(fn, f.domain, f"rho1({f.name})")


def rho1_c_block_alt(C: BiQuaternion, f: Field) -> Field:
    """Second written form of the C-block, ``Tr(C Z d(Zf))`` with ``d`` acting
    from the left on the matrix-valued ``Zf``."""
    from .calculus import nabla
    zf = Field(lambda Z: Z * f(Z), f.domain)
    nz = nabla(zf)
    return Field(lambda Z: (C * (Z * (0.5 * nz(Z)))).trace(), f.domain)


def rho1_d_block_alt(D: BiQuaternion, f: Field) -> Field:
    """``Tr(D (d(Zf) - f))``."""
    from .calculus import nabla
    zf = Field(lambda Z: Z * f(Z), f.domain)
    nz = nabla(zf)
    return Field(lambda Z: (D * (0.5 * nz(Z) - f(Z))).trace(), f.domain)


def dim_identity_check(d: int) -> tuple[int, int]:
    """``((d+3)(d+2)(d+1)/6, sum_j (d+1-2j)^2)``: two counts of degree-d
    homogeneous polynomials in four variables."""
    lhs = (d + 3) * (d + 2) * (d + 1) // 6
    rhs = sum((d + 1 - 2 * j) ** 2 for j in range(d // 2 + 1) if d + 1 - 2 * j > 0)
    return lhs, rhs


# ---------------------------------------------------------------------------
# K-type expansion by dual bases


class KTypeExpander:
    """Expands values sampled on a U(2)_R rule in a finite set of K-types.

    Coefficients are ``(2l+1) <f, dual>``, exact whenever the rule integrates
    the products exactly; ``residual`` measures what the chosen K-types miss.
    """

    def __init__(self, rule: SurfaceRule, ktypes: Sequence[tuple[int, int]]):
        self.rule = rule
        self.ktypes = list(ktypes)
        self.index = zh_indices(self.ktypes)
        Z = rule.nodes
        self.basis = np.stack([np.broadcast_to(basis_field("Zh", i)(Z), Z.shape) for i in self.index], 1)
        duals = np.stack([np.broadcast_to(zh_dual_field(i)(Z), Z.shape) for i in self.index], 1)
        scale = np.array([i.idx.two_l + 1 for i in self.index], dtype=float)
        self._proj = (1j / (2 * np.pi ** 3)) * (rule.weights[:, None] * duals) * scale[None, :]

    def coefficients(self, values: np.ndarray) -> np.ndarray:
        """``values`` has shape ``(nodes,)`` or ``(nodes, batch)``."""
        return self._proj.T @ values

    def reconstruct(self, coeffs: np.ndarray) -> np.ndarray:
        return self.basis @ coeffs

    def residual(self, values: np.ndarray, coeffs: np.ndarray | None = None) -> float:
        c = self.coefficients(values) if coeffs is None else coeffs
        return float(np.max(np.abs(values - self.reconstruct(c))))

    def slice_of(self, ktype: tuple[int, int]) -> np.ndarray:
        return np.array([i.ktype == ktype for i in self.index])
