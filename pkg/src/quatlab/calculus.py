"""Fields, 2-jets and the differential operators built on tagged duals.

Points are :class:`BiQuaternion` (4 complex entries, order z11, z12, z21, z22)
or plain tuples of coordinates (used for the 5-dimensional space R^{1,4}).
Operators return new :class:`Field` objects and compose lazily, so a product
such as ``nabla_mu(nabla_mu - mu)`` is evaluated by nesting duals.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .algebra import BiQuaternion
from .dual import Dual, new_tag, primal, sqrt
from .errors import DimensionMismatch, OutOfDomain

ENTRY = {"11": 0, "12": 1, "21": 2, "22": 3}


def point_primal(p):
    if isinstance(p, BiQuaternion):
        return p.map(primal)
    return tuple(primal(x) for x in p)


def point_dim(p) -> int:
    return 4 if isinstance(p, BiQuaternion) else len(p)


class Field:
    """A map point -> value with a declared domain.

    ``domain`` receives the numeric point and returns a boolean (array);
    evaluating anywhere it is false raises :class:`OutOfDomain`.
    """

    def __init__(self, fn: Callable, domain: Callable | None = None, name: str = "",
                 dim: int = 4):
        self.fn = fn
        self.domain = domain
        self.name = name
        self.dim = dim

    def __repr__(self) -> str:
        return f"Field({self.name or self.fn!r})"

    def check(self, p) -> None:
        if self.domain is None:
            return
        ok = self.domain(point_primal(p))
        if not np.all(ok):
            raise OutOfDomain(f"{self.name or 'field'} evaluated outside its domain")

    def __call__(self, p):
        if point_dim(p) != self.dim:
            raise DimensionMismatch(f"{self.dim}-dimensional field given a {point_dim(p)}-dimensional point")
        self.check(p)
        return self.fn(p)

    # algebra of fields --------------------------------------------------
    def _combine(self, other, op, sym):
        if isinstance(other, Field):
            if other.dim != self.dim:
                raise DimensionMismatch("cannot combine fields of different dimension")
            return Field(lambda p: op(self.fn(p), other.fn(p)),
                         _and_domain(self.domain, other.domain),
                         f"({self.name}{sym}{other.name})", self.dim)
        return Field(lambda p: op(self.fn(p), other), self.domain, f"({self.name}{sym}c)", self.dim)

    def __add__(self, o):
        return self._combine(o, lambda a, b: a + b, "+")

    def __radd__(self, o):
        return self + o

    def __sub__(self, o):
        return self._combine(o, lambda a, b: a - b, "-")

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        return self._combine(o, lambda a, b: a * b, "*")

    def __rmul__(self, o):
        if isinstance(o, Field):
            return o * self
        return Field(lambda p: o * self.fn(p), self.domain, self.name, self.dim)

    def __truediv__(self, o):
        return self._combine(o, lambda a, b: a / b, "/")

    def __rtruediv__(self, o):
        return Field(lambda p: o / self.fn(p), self.domain, f"(c/{self.name})", self.dim)

    def __pow__(self, k):
        return Field(lambda p: self.fn(p) ** k, self.domain, f"{self.name}^{k}", self.dim)

    def __neg__(self):
        return Field(lambda p: -self.fn(p), self.domain, f"-{self.name}", self.dim)

    def with_domain(self, domain: Callable | None) -> "Field":
        return Field(self.fn, _and_domain(self.domain, domain), self.name, self.dim)


def _and_domain(d1, d2):
    if d1 is None:
        return d2
    if d2 is None:
        return d1
    return lambda p: np.logical_and(d1(p), d2(p))


def field(fn: Callable = None, *, domain=None, name: str = "", dim: int = 4):
    """Decorator/constructor shorthand."""
    if fn is None:
        return lambda g: Field(g, domain, name or g.__name__, dim)
    return Field(fn, domain, name or getattr(fn, "__name__", ""), dim)


def constant(c, dim: int = 4) -> Field:
    return Field(lambda p: c, None, f"{c}", dim)


def coordinate(k: int, dim: int = 4) -> Field:
    if dim == 4:
        return Field(lambda p: p.entries()[k], None, f"z[{k}]", 4)
    return Field(lambda p: p[k], None, f"w[{k}]", dim)


def random_polynomial_field(rng: np.random.Generator, degree: int = 3, n_terms: int = 6,
                            dim: int = 4) -> Field:
    """Scalar polynomial with ``n_terms`` random complex monomials of total
    degree at most ``degree``."""
    coefs = rng.normal(size=n_terms) + 1j * rng.normal(size=n_terms)
    exps = []
    for _ in range(n_terms):
        e = np.zeros(dim, dtype=int)
        for _ in range(int(rng.integers(0, degree + 1))):
            e[rng.integers(dim)] += 1
        exps.append(e)

    def fn(p):
        x = p.entries() if isinstance(p, BiQuaternion) else p
        out = 0
        for c, e in zip(coefs, exps):
            term = c
            for xk, ek in zip(x, e):
                if ek:
                    term = term * xk ** int(ek)
            out = out + term
        return out

    return Field(fn, None, "poly", dim)


NORM = Field(lambda p: p.norm(), None, "N")
IDENTITY_POINT = Field(lambda p: p, None, "Z")


# ---------------------------------------------------------------------------
# differentiation


def _perturb(p, k: int, tag: int):
    if isinstance(p, BiQuaternion):
        e = list(p.entries())
        e[k] = Dual(e[k], 1.0, tag)
        return BiQuaternion(*e)
    e = list(p)
    e[k] = Dual(e[k], 1.0, tag)
    return tuple(e)


def _extract(v, tag: int):
    if isinstance(v, BiQuaternion):
        return v.map(lambda x: _extract(x, tag))
    if isinstance(v, tuple):
        return tuple(_extract(x, tag) for x in v)
    if isinstance(v, Dual) and v.tag == tag:
        return v.eps
    return np.zeros_like(np.asarray(primal(v), dtype=complex))[()]


def partial(f: Field, k) -> Field:
    """Holomorphic partial derivative in coordinate ``k``.

    ``k`` is an index or one of ``'11', '12', '21', '22'``.
    """
    k = ENTRY.get(k, k)

    def fn(p):
        tag = new_tag()
        return _extract(f(_perturb(p, k, tag)), tag)

    return Field(fn, f.domain, f"d{k}({f.name})", f.dim)


@dataclass(frozen=True)
class Jet2:
    value: complex
    grad: np.ndarray
    hess: np.ndarray


def jet_eval(f: Field, p) -> Jet2:
    """Value, gradient and Hessian of a scalar field at ``p``."""
    n = f.dim
    value = np.asarray(primal(f(p)), dtype=complex)
    grad = np.array([np.asarray(primal(partial(f, k)(p)), dtype=complex) for k in range(n)])
    hess = np.empty((n, n) + value.shape, dtype=complex)
    for j in range(n):
        dj = partial(f, j)
        for k in range(j, n):
            hess[j, k] = hess[k, j] = np.asarray(primal(partial(dj, k)(p)), dtype=complex)
    return Jet2(value[()], grad, hess)


# ---------------------------------------------------------------------------
# operators on functions of Z


# 2x2 operator matrices, each entry {coordinate: coefficient}
_NABLA = (({0: 2}, {2: 2}), ({1: 2}, {3: 2}))
_NABLA_PLUS = (({3: 2}, {2: -2}), ({1: -2}, {0: 2}))


def _as_bq(v) -> BiQuaternion:
    return v if isinstance(v, BiQuaternion) else BiQuaternion.scalar(v)


def _apply_matrix_op(opmat, d, value_is_matrix: bool, side: str) -> BiQuaternion:
    def comb(entry, getter):
        out = 0
        for k, c in entry.items():
            out = out + c * getter(d[k])
        return out

    if not value_is_matrix:
        return BiQuaternion(*(comb(opmat[i][j], lambda x: x) for i in range(2) for j in range(2)))
    ent = lambda x, i, j: x.entries()[2 * i + j]  # noqa: E731
    res = []
    for i in range(2):
        for j in range(2):
            acc = 0
            for q in range(2):
                if side == "left":   # (O F)_ij = sum_q O_iq F_qj
                    acc = acc + comb(opmat[i][q], lambda x: ent(x, q, j))
                else:                # (F O)_ij = sum_q O_qj F_iq
                    acc = acc + comb(opmat[q][j], lambda x: ent(x, i, q))
            res.append(acc)
    return BiQuaternion(*res)


def _matrix_operator(f: Field, opmat, side: str, name: str) -> Field:
    parts = [partial(f, k) for k in range(4)]

    def fn(p):
        d = [g(p) for g in parts]
        is_mat = any(isinstance(x, BiQuaternion) for x in d)
        if is_mat:
            d = [_as_bq(x) for x in d]
        return _apply_matrix_op(opmat, d, is_mat, side)

    return Field(fn, f.domain, f"{name}({f.name})")


def nabla(f: Field, side: str = "left") -> Field:
    """``nabla = 2 [[d11, d21], [d12, d22]]`` applied from the left (``nabla f``)
    or the right (``f nabla``)."""
    return _matrix_operator(f, _NABLA, side, "nabla")


def nabla_plus(f: Field, side: str = "left") -> Field:
    """``nabla^+ = 2 [[d22, -d21], [-d12, d11]]``."""
    return _matrix_operator(f, _NABLA_PLUS, side, "nabla+")


def box(f: Field) -> Field:
    """``4 (d11 d22 - d12 d21)``, the complexified Laplacian."""
    a = partial(partial(f, 0), 3)
    b = partial(partial(f, 1), 2)
    return Field(lambda p: 4 * (a(p) - b(p)), f.domain, f"box({f.name})", f.dim)


def deg(f: Field) -> Field:
    """Euler operator ``sum_k x_k d_k``."""
    parts = [partial(f, k) for k in range(f.dim)]

    def fn(p):
        coords = p.entries() if isinstance(p, BiQuaternion) else p
        out = 0
        for x, g in zip(coords, parts):
            out = out + x * g(p)
        return out

    return Field(fn, f.domain, f"deg({f.name})", f.dim)


def deg_tilde(f: Field) -> Field:
    return deg(f) + f


def box_mu(f: Field, mu: float) -> Field:
    """``box + mu^2 (deg^2 + 3 deg)``."""
    d = deg(f)
    return box(f) + (mu * mu) * (deg(d) + 3 * d)


def box_mu_tilde(f: Field, mu: float) -> Field:
    """``box + mu^2 (deg~^2 + deg~)``."""
    return box_mu(f, mu) + (2 * mu * mu) * f


def box_14(f: Field) -> Field:
    """Wave operator ``d0^2 - d1^2 - d2^2 - d3^2 - d4^2`` on R^{1,4}."""
    if f.dim != 5:
        raise DimensionMismatch("box_14 needs a field on R^{1,4}")
    second = [partial(partial(f, k), k) for k in range(5)]

    def fn(p):
        out = second[0](p)
        for g in second[1:]:
            out = out - g(p)
        return out

    return Field(fn, f.domain, f"box14({f.name})", 5)


def sqrt_one_plus(mu: float) -> Field:
    """``sqrt(1 + mu^2 N(Z))`` on the principal branch."""
    return Field(lambda p: sqrt(1 + mu * mu * p.norm()), u_mu_domain(mu, allow_zero=True),
                 "sqrt(1+mu^2N)")


def conformal_generator(f: Field, mu: float) -> Field:
    """``sqrt(1 + mu^2 N) deg~``."""
    return sqrt_one_plus(mu) * deg_tilde(f)


def u_mu_domain(mu: float, allow_zero: bool = False):
    """Predicate for U_mu: N(Z) off the cut (-inf, -mu^-2] (and N(Z) != 0)."""
    def pred(p):
        n = np.asarray(primal(p.norm()), dtype=complex)
        on_cut = (np.abs(n.imag) <= 1e-14 * (1 + np.abs(n))) & (n.real <= -1.0 / (mu * mu))
        ok = ~on_cut
        if not allow_zero:
            ok &= np.abs(n) > 0
        return ok
    return pred


OPERATORS = {
    "nabla": lambda f, mu=None: nabla(f),
    "nabla_plus": lambda f, mu=None: nabla_plus(f),
    "box": lambda f, mu=None: box(f),
    "deg": lambda f, mu=None: deg(f),
    "deg_tilde": lambda f, mu=None: deg_tilde(f),
    "box_mu": lambda f, mu: box_mu(f, mu),
    "box_mu_tilde": lambda f, mu: box_mu_tilde(f, mu),
    "box_14": lambda f, mu=None: box_14(f),
    "conformal_generator": lambda f, mu: conformal_generator(f, mu),
}


def apply_operator(op: str, f: Field, mu: float | None = None) -> Field:
    """Apply an operator by name (see ``OPERATORS``)."""
    try:
        return OPERATORS[op](f, mu)
    except KeyError:
        raise ValueError(f"unknown operator {op!r}") from None


# ---------------------------------------------------------------------------
# deformed Dirac operators on pairs of (matrix-valued) fields


def _bq_field(f: Field) -> Field:
    return Field(lambda p: _as_bq(f.fn(p)), f.domain, f.name, f.dim)


def dirac_mu_left(pair: Sequence[Field], mu: float) -> tuple[Field, Field]:
    """Column operator

        [[mu (X nabla - deg~),  s nabla^+      ],
         [s nabla,              mu (X^+ nabla^+ - deg~)]],   s = sqrt(1 + mu^2 N)

    applied to the column ``(f1, f2)``."""
    f1, f2 = (_bq_field(f) for f in pair)
    s = sqrt_one_plus(mu)
    n1, np2 = nabla(f1), nabla_plus(f2)
    dt1, dt2 = deg_tilde(f1), deg_tilde(f2)

    def first(p):
        return mu * (p * n1(p) - dt1(p)) + s(p) * np2(p)

    def second(p):
        return s(p) * n1(p) + mu * (p.plus() * np2(p) - dt2(p))

    dom = _and_domain(_and_domain(f1.domain, f2.domain), s.domain)
    return Field(first, dom, "Dmu1"), Field(second, dom, "Dmu2")


def dirac_mu_right(pair: Sequence[Field], mu: float) -> tuple[Field, Field]:
    """Row operator acting on the right of ``(g1, g2)``:

        (mu (deg~ g1 - (g1 nabla^+) X^+) + s (g2 nabla),
         s (g1 nabla^+) + mu (deg~ g2 - (g2 nabla) X))."""
    g1, g2 = (_bq_field(g) for g in pair)
    s = sqrt_one_plus(mu)
    g1np = nabla_plus(g1, side="right")
    g2n = nabla(g2, side="right")
    dt1, dt2 = deg_tilde(g1), deg_tilde(g2)

    def first(p):
        return mu * (dt1(p) - g1np(p) * p.plus()) + s(p) * g2n(p)

    def second(p):
        return s(p) * g1np(p) + mu * (dt2(p) - g2n(p) * p)

    dom = _and_domain(_and_domain(g1.domain, g2.domain), s.domain)
    return Field(first, dom, "Dmu1r"), Field(second, dom, "Dmu2r")


def dirac_mu_left_shifted(pair: Sequence[Field], mu: float, c: float) -> tuple[Field, Field]:
    """``(nabla_mu + c) (f1, f2)``; ``c = -mu`` gives the regularising factor."""
    d1, d2 = dirac_mu_left(pair, mu)
    f1, f2 = (_bq_field(f) for f in pair)
    return d1 + c * f1, d2 + c * f2


def dirac_mu_right_shifted(pair: Sequence[Field], mu: float, c: float) -> tuple[Field, Field]:
    """``(g1, g2) (nabla_mu_bar + c)``."""
    d1, d2 = dirac_mu_right(pair, mu)
    g1, g2 = (_bq_field(g) for g in pair)
    return d1 + c * g1, d2 + c * g2
