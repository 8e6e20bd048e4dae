"""Product quadrature on S^3_R, U(2)_R (holomorphic 4-form dV) and dV_{R,mu}.

Euler parametrisation of SU(2) used throughout:

    g(phi, theta, psi) = diag(e^{i phi/2}, e^{-i phi/2})
                         [[cos theta/2, i sin theta/2], [i sin theta/2, cos theta/2]]
                         diag(e^{i psi/2}, e^{-i psi/2})

with phi uniform on [0, 2pi), psi uniform on [0, 4pi) and Gauss-Legendre
nodes in cos theta.  The matrix coefficient t^l_{n m}(g) carries the phase
e^{-i(n phi + m psi)}, which is what the order choices below resolve.
"""
from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

import numpy as np

from .algebra import BiQuaternion
from .calculus import Field
from .errors import BadRadius

WORKERS_ENV = "QUATLAB_WORKERS"


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class SurfaceRule:
    nodes: BiQuaternion
    weights: np.ndarray
    kind: str
    R: float
    mu: float | None = None
    orders: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return int(self.weights.size)

    def sum(self, values) -> Any:
        """``sum_i w_i v_i`` for values already evaluated at the nodes."""
        if isinstance(values, BiQuaternion):
            return values.map(lambda v: np.sum(self.weights * v))
        return np.sum(self.weights * values)

    def to_dict(self) -> dict:
        pts = self.nodes.as_array().reshape(-1, 4)
        return {
            "kind": self.kind, "R": self.R, "mu": self.mu, "orders": self.orders,
            "nodes": [[[z.real, z.imag] for z in row] for row in pts],
            "weights": [[w.real, w.imag] for w in self.weights],
        }

    def dump_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh)


def _freeze(*arrays):
    for a in arrays:
        a.setflags(write=False)


def su2_nodes(n_phi: int, n_theta: int, n_psi: int):
    """Euler-angle grid; returns entries of g and the weights of the Haar
    measure ``sin(theta) dphi dtheta dpsi`` (total 16 pi^2)."""
    x, wg = np.polynomial.legendre.leggauss(n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    psi = 4 * np.pi * np.arange(n_psi) / n_psi
    PH, X, PS = np.meshgrid(phi, x, psi, indexing="ij")
    W = np.broadcast_to(wg[None, :, None], PH.shape) * (2 * np.pi / n_phi) * (4 * np.pi / n_psi)
    c = np.sqrt((1 + X) / 2)
    s = np.sqrt((1 - X) / 2)
    g11 = c * np.exp(0.5j * (PH + PS))
    g12 = 1j * s * np.exp(0.5j * (PH - PS))
    g21 = 1j * s * np.exp(0.5j * (PS - PH))
    g22 = c * np.exp(-0.5j * (PH + PS))
    return (g11.ravel(), g12.ravel(), g21.ravel(), g22.ravel()), W.ravel()


def sphere_orders(l_max: float) -> dict:
    L = math.ceil(l_max)
    return {"n_phi": 4 * L + 5, "n_theta": 2 * L + 3, "n_psi": 4 * L + 5}


@lru_cache(maxsize=64)
def build_sphere_rule(R: float, l_max: float = 2, orders: tuple | None = None) -> SurfaceRule:
    """Rule for ``dS`` on ``S^3_R = {N(X) = R^2}``; total weight ``2 pi^2 R^3``.

    ``orders = (n_phi, n_theta, n_psi)`` overrides the defaults derived from
    ``l_max``.
    """
    if R <= 0:
        raise BadRadius("R must be positive")
    o = sphere_orders(l_max) if orders is None else dict(zip(("n_phi", "n_theta", "n_psi"), orders))
    g, w = su2_nodes(o["n_phi"], o["n_theta"], o["n_psi"])
    nodes = BiQuaternion(*(R * e for e in g))
    weights = (R ** 3 / 8) * w + 0j
    _freeze(weights, *nodes.entries())
    return SurfaceRule(nodes, weights, "S3", R, None, o)


def u2_orders(l_max: float, k_range: int, mu: float | None = None, R: float | None = None) -> dict:
    L = math.ceil(l_max)
    o = sphere_orders(L)
    n_alpha = 4 * (L + k_range) + 5
    if mu is not None:
        # the sqrt in the deformed weight limits the analyticity strip to |Im a| < log(1/(mu R))
        n_alpha += math.ceil(18.0 / math.log(1.0 / (mu * R)))
    o["n_alpha"] = n_alpha
    return o


@lru_cache(maxsize=64)
def build_u2_rule(R: float, l_max: float = 2, k_range: int = 3, mu: float | None = None,
                  orders: tuple | None = None) -> SurfaceRule:
    """Rule for the holomorphic form ``dV`` on ``U(2)_R`` (or ``dV_{R,mu}``).

    Points ``Z = R e^{i alpha} g`` with alpha uniform on [0, pi).  The
    undeformed weight is ``(R^4 / 8i) e^{4 i alpha} sin(theta)``, which fixes
    ``sum w / N(Z)^2 = -2 pi^3 i``.  With ``mu`` the weight is multiplied by
    ``(d log w / d alpha) / 2i`` for ``w(alpha) = (s - 1)/(s + 1)``,
    ``s = sqrt(1 + mu^2 R^2 e^{2 i alpha})``, which equals ``1/s``.

    ``orders = (n_alpha, n_phi, n_theta, n_psi)`` overrides the defaults.
    """
    if R <= 0:
        raise BadRadius("R must be positive")
    if mu is not None and not (0 < mu * R < 1):
        raise BadRadius("deformed rule needs 0 < R < 1/mu")
    if orders is None:
        o = u2_orders(l_max, k_range, mu, R)
    else:
        o = dict(zip(("n_alpha", "n_phi", "n_theta", "n_psi"), orders))
    g, wg = su2_nodes(o["n_phi"], o["n_theta"], o["n_psi"])
    na = o["n_alpha"]
    alpha = np.pi * np.arange(na) / na
    ph = np.exp(1j * alpha)
    wa = (R ** 4 / 8j) * ph ** 4 * (np.pi / na)
    if mu is not None:
        q = mu * mu * R * R * ph ** 2
        s = np.sqrt(1 + q)
        ds = 1j * q / s                          # d s / d alpha
        dlogw = ds / (s - 1) - ds / (s + 1)
        wa = wa * dlogw / 2j
    nodes = BiQuaternion(*((R * ph[:, None]) * e[None, :] for e in g))
    nodes = nodes.map(np.ravel)
    weights = (wa[:, None] * wg[None, :]).ravel()
    _freeze(weights, *nodes.entries())
    return SurfaceRule(nodes, weights, "U2" if mu is None else "U2_mu", R, mu, o)


def _tree_sum(parts: list):
    while len(parts) > 1:
        nxt = [parts[i] + parts[i + 1] for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            nxt.append(parts[-1])
        parts = nxt
    return parts[0]


def integrate(f: Field, rule: SurfaceRule, workers: int | None = None):
    """``sum_i w_i f(node_i)``.

    Nodes are split into ``workers`` contiguous blocks evaluated in a thread
    pool; block sums are combined by a fixed binary tree, so the result only
    depends on the worker count.
    """
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1:
        return rule.sum(f(rule.nodes))
    bounds = np.linspace(0, rule.size, workers + 1).astype(int)

    def block(i):
        sl = slice(bounds[i], bounds[i + 1])
        pts = rule.nodes.take(sl)
        v = f(pts)
        w = rule.weights[sl]
        if isinstance(v, BiQuaternion):
            return v.map(lambda x: np.sum(w * x))
        return np.sum(w * v)

    with ThreadPoolExecutor(max_workers=workers) as ex:
        parts = list(ex.map(block, range(workers)))
    return _tree_sum(parts)


@dataclass(frozen=True)
class ContourRule:
    """Trapezoid rule for ``(1 / 2 pi i) \\oint f(z) dz`` on a circle."""

    center: complex
    radius: float
    n: int

    @property
    def nodes(self) -> np.ndarray:
        return self.center + self.radius * np.exp(2j * np.pi * np.arange(self.n) / self.n)

    @property
    def weights(self) -> np.ndarray:
        return self.radius * np.exp(2j * np.pi * np.arange(self.n) / self.n) / self.n

    def integrate(self, fn) -> complex:
        return np.sum(self.weights * fn(self.nodes))
