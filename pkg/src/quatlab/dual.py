"""Tagged forward-mode dual numbers.

A ``Dual`` carries a primal part and one infinitesimal part belonging to a
perturbation ``tag``.  Tags order the nesting: a dual with a higher tag is
always the outer layer, so nesting ``partial`` calls yields exact mixed
second derivatives without perturbation confusion.
"""
from __future__ import annotations

import itertools
import numbers

import numpy as np

_tag_counter = itertools.count(1)


def new_tag() -> int:
    return next(_tag_counter)


def _is_scalar_like(x) -> bool:
    return isinstance(x, (Dual, numbers.Number, np.ndarray, np.generic))


class Dual:
    __slots__ = ("re", "eps", "tag")
    # let numpy defer to our reflected operators instead of building object arrays
    __array_ufunc__ = None

    def __init__(self, re, eps, tag: int):
        self.re = re
        self.eps = eps
        self.tag = tag

    def __repr__(self) -> str:
        return f"Dual({self.re!r}, {self.eps!r}, tag={self.tag})"

    def __neg__(self):
        return Dual(-self.re, -self.eps, self.tag)

    def __pos__(self):
        return self

    def __add__(self, o):
        if not _is_scalar_like(o):
            return NotImplemented
        if isinstance(o, Dual):
            if o.tag > self.tag:
                return Dual(self + o.re, o.eps, o.tag)
            if o.tag == self.tag:
                return Dual(self.re + o.re, self.eps + o.eps, self.tag)
        return Dual(self.re + o, self.eps, self.tag)

    __radd__ = __add__

    def __sub__(self, o):
        if not _is_scalar_like(o):
            return NotImplemented
        return self + (-o)

    def __rsub__(self, o):
        if not _is_scalar_like(o):
            return NotImplemented
        return (-self) + o

    def __mul__(self, o):
        if not _is_scalar_like(o):
            return NotImplemented
        if isinstance(o, Dual):
            if o.tag > self.tag:
                return Dual(self * o.re, self * o.eps, o.tag)
            if o.tag == self.tag:
                return Dual(self.re * o.re, self.re * o.eps + self.eps * o.re, self.tag)
        return Dual(self.re * o, self.eps * o, self.tag)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if not _is_scalar_like(o):
            return NotImplemented
        if isinstance(o, Dual):
            if o.tag > self.tag:
                return Dual(self / o.re, -self * o.eps / (o.re * o.re), o.tag)
            if o.tag == self.tag:
                return Dual(self.re / o.re,
                            (self.eps * o.re - self.re * o.eps) / (o.re * o.re), self.tag)
        return Dual(self.re / o, self.eps / o, self.tag)

    def __rtruediv__(self, o):
        if not _is_scalar_like(o):
            return NotImplemented
        return Dual(o / self.re, -o * self.eps / (self.re * self.re), self.tag)

    def __pow__(self, n):
        if isinstance(n, Dual):
            return exp(n * log(self))
        if n == 0:
            return Dual(self.re ** 0, 0.0 * self.eps, self.tag)
        return Dual(self.re ** n, n * self.re ** (n - 1) * self.eps, self.tag)

    def conjugate(self):
        raise TypeError("complex conjugation is not holomorphic; take primal() first")


def primal(x):
    """Strip every dual layer and return the numeric value."""
    while isinstance(x, Dual):
        x = x.re
    return x


def sqrt(x):
    """Principal square root, differentiable through duals."""
    if isinstance(x, Dual):
        r = sqrt(x.re)
        return Dual(r, x.eps / (2 * r), x.tag)
    return np.sqrt(x + 0j)


def exp(x):
    if isinstance(x, Dual):
        e = exp(x.re)
        return Dual(e, e * x.eps, x.tag)
    return np.exp(x + 0j)


def log(x):
    """Principal logarithm."""
    if isinstance(x, Dual):
        return Dual(log(x.re), x.eps / x.re, x.tag)
    return np.log(x + 0j)


def power(x, p):
    """x**p with the principal branch for non-integer p."""
    if isinstance(p, numbers.Integral):
        return x ** int(p)
    return exp(p * log(x))
