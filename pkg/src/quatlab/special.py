"""Matrix coefficients t^l_{n m}(Z) of SU(2) extended to all 2x2 matrices.

Half-integers are stored doubled.  ``t_coeff(CoeffIndex(two_l, two_m, two_n), Z)``
is the polynomial

    sum_{i+j=l-n} C(l-m, i) C(l+m, j) z11^i z21^(l-m-i) z12^j z22^(l+m-j)

i.e. the left subscript is ``n`` (row) and the underlined one ``m`` (column).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterator

import numpy as np

from .algebra import BiQuaternion, eigenvalues
from .dual import primal
from .errors import InvalidIndex, SingularMatrix

MAX_TWO_L = 64
_BINOM = [[comb(n, k) for k in range(n + 1)] for n in range(MAX_TWO_L + 1)]


@dataclass(frozen=True, order=True)
class CoeffIndex:
    """Doubled half-integer triple; ``l = two_l / 2`` and so on."""

    two_l: int
    two_m: int
    two_n: int

    def __post_init__(self):
        l, m, n = self.two_l, self.two_m, self.two_n
        if l < 0 or abs(m) > l or abs(n) > l or (l - m) % 2 or (l - n) % 2:
            raise InvalidIndex(f"invalid matrix coefficient index {self}")
        if l > MAX_TWO_L:
            raise InvalidIndex(f"2l = {l} exceeds the supported cap {MAX_TWO_L}")

    @property
    def l(self) -> float:
        return self.two_l / 2

    @property
    def m(self) -> float:
        return self.two_m / 2

    @property
    def n(self) -> float:
        return self.two_n / 2

    def swapped(self) -> "CoeffIndex":
        """(l, m, n) -> (l, n, m)."""
        return CoeffIndex(self.two_l, self.two_n, self.two_m)

    @classmethod
    def rc(cls, two_l: int, two_row: int, two_col: int) -> "CoeffIndex":
        """Index of the entry in row ``row`` and column ``col``."""
        return cls(two_l, two_col, two_row)


def half_range(two_l: int) -> range:
    """Doubled values -l, -l+1, ..., l."""
    return range(-two_l, two_l + 1, 2)


def indices(two_l_max: int, two_l_min: int = 0) -> Iterator[CoeffIndex]:
    for tl in range(two_l_min, two_l_max + 1):
        for tm in half_range(tl):
            for tn in half_range(tl):
                yield CoeffIndex(tl, tm, tn)


def _sum_terms(terms):
    """Fixed-order sum; ``math.fsum`` for plain float/complex terms."""
    terms = list(terms)
    if not terms:
        return 0.0
    if all(isinstance(t, (int, float, complex)) for t in terms):
        import math
        re = math.fsum(complex(t).real for t in terms)
        im = math.fsum(complex(t).imag for t in terms)
        return complex(re, im)
    out = terms[0]
    for t in terms[1:]:
        out = out + t
    return out


def t_coeff(idx: CoeffIndex, Z: BiQuaternion):
    """Matrix coefficient ``t^l_{n m}(Z)``; works for scalars, arrays and duals."""
    a = (idx.two_l - idx.two_m) // 2          # l - m
    b = (idx.two_l + idx.two_m) // 2          # l + m
    c = (idx.two_l - idx.two_n) // 2          # l - n
    z11, z12, z21, z22 = Z.entries()
    terms = []
    for i in range(max(0, c - b), min(a, c) + 1):
        j = c - i
        coef = _BINOM[a][i] * _BINOM[b][j]
        terms.append(coef * (z11 ** i) * (z21 ** (a - i)) * (z12 ** j) * (z22 ** (b - j)))
    if not terms:
        return 0.0 * z11
    return _sum_terms(terms)


def t_matrix(two_l: int, Z: BiQuaternion) -> np.ndarray:
    """Numeric (2l+1)x(2l+1) table ``T[n, m] = t^l_{n m}(Z)`` (both ascending)
    for a single point.

    Column m holds the coefficients of ``(s z11 + z21)^(l-m) (s z12 + z22)^(l+m)``;
    the coefficient of ``s^(l-n)`` sits in row n.
    """
    if two_l > MAX_TWO_L:
        raise InvalidIndex(f"2l = {two_l} exceeds the supported cap {MAX_TWO_L}")
    z11, z12, z21, z22 = (complex(primal(e)) for e in Z.entries())
    k = two_l + 1
    out = np.empty((k, k), dtype=complex)
    p1 = [np.ones(1, complex)]
    p2 = [np.ones(1, complex)]
    for _ in range(two_l):
        p1.append(np.convolve(p1[-1], [z21, z11]))
        p2.append(np.convolve(p2[-1], [z22, z12]))
    for col, tm in enumerate(half_range(two_l)):
        a = (two_l - tm) // 2
        b = (two_l + tm) // 2
        poly = np.convolve(p1[a], p2[b])          # ascending powers of s, length 2l+1
        # row n <-> power l - n; rows ascend in n so powers descend
        out[:, col] = poly[::-1]
    return out


def chi(two_l: int, Z: BiQuaternion, closed_form: bool = False):
    """Character ``sum_n t^l_{n n}(Z)``.

    ``closed_form=True`` uses ``(l1^(2l+1) - l2^(2l+1)) / (l1 - l2)`` with the
    confluent value ``(2l+1) l^(2l)`` at a double eigenvalue.
    """
    if not closed_form:
        return _sum_terms(t_coeff(CoeffIndex(two_l, tn, tn), Z) for tn in half_range(two_l))
    l1, l2 = eigenvalues(Z)
    p = two_l + 1
    # geometric sum avoids the cancellation in the quotient near l1 = l2
    return sum(l1 ** j * l2 ** (p - 1 - j) for j in range(p))


def t_inverse_transform(idx: CoeffIndex, Z: BiQuaternion):
    """``t^l_{m n}(Z^{-1}) N(Z)^{2l}``, evaluated through the inverse."""
    n = Z.norm()
    if np.any(np.abs(np.asarray(primal(n))) == 0):
        raise SingularMatrix("Z is not invertible")
    return t_coeff(idx.swapped(), Z.inv()) * n ** idx.two_l


def adjugate_ratio(two_l: int, two_row: int, two_col: int, Z: BiQuaternion):
    """Measured ratio ``t^l_{row col}(Z^+) / t^l_{-col, -row}(Z)``.

    Independent of Z; tests assert this and compare it with
    :func:`adjugate_constant`.
    """
    num = t_coeff(CoeffIndex(two_l, two_col, two_row), Z.plus())
    den = t_coeff(CoeffIndex(two_l, -two_row, -two_col), Z)
    return num / den


def adjugate_constant(two_l: int, two_row: int, two_col: int) -> float:
    """Recorded value of :func:`adjugate_ratio`:
    ``(-1)^(row-col) C(2l, l-row) / C(2l, l-col)``."""
    sign = -1.0 if ((two_row - two_col) // 2) % 2 else 1.0
    return sign * comb(two_l, (two_l - two_row) // 2) / comb(two_l, (two_l - two_col) // 2)
