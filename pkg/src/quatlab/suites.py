"""Registered verification suites.

Every suite builds a list of :class:`~quatlab.runner.CaseSpec`; a case returns
one observed error (already normalised) that is compared with its tolerance.
Random inputs come from the generator handed to each case.
"""
from __future__ import annotations

import math

import numpy as np

from . import ads, projectors as proj, regular, zh_mu
from .algebra import BiQuaternion, random_biquaternion, random_domain_point, random_real_quaternion, \
    random_u2_point, random_unitary
from .calculus import (NORM, Field, box, box_14, box_mu_tilde, constant, deg, deg_tilde, dirac_mu_left,
                       dirac_mu_left_shifted, dirac_mu_right, dirac_mu_right_shifted, jet_eval,
                       random_polynomial_field)
from .errors import ConfigInvalid
from .quadrature import build_sphere_rule, build_u2_rule
from .runner import CaseSpec, SuiteConfig, register
from .spaces import (basis_field, classify, d_matrix, dim_identity_check, h_dual_field,
                     rho1_block_values, zh_dual_field, zh_indices)
from .special import CoeffIndex, indices, t_coeff

U2_VOLUME = -2j * np.pi ** 3


def _values(f: Field, Z) -> np.ndarray:
    return np.broadcast_to(np.asarray(f(Z), dtype=complex), Z.shape)


def _rel(a, b, floor: float = 1.0) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)) / np.maximum(np.abs(b), floor)))


def _box_mu_tilde_rel(G: Field, mu: float, X) -> float:
    """``|box~_mu G| / (|box G| + mu^2 (|deg^2 G| + 3|deg G| + 2|G|))``."""
    dG = deg(G)
    b, d2, d1, g = (np.abs(np.asarray(h(X))) for h in (box(G), deg(dG), dG, G))
    res = np.abs(np.asarray(box_mu_tilde(G, mu)(X)))
    return float(np.max(res / (b + mu * mu * (d2 + 3 * d1 + 2 * g) + 1e-300)))


def _su2_point(rng) -> BiQuaternion:
    u = random_unitary(rng)
    return BiQuaternion.from_matrix(u / np.sqrt(np.linalg.det(u)))


def _ktypes(cfg: SuiteConfig) -> list[tuple[int, int]]:
    return [(k, tl) for k in range(-cfg.k_range, cfg.k_range + 1) for tl in range(cfg.two_l_max + 1)]


def _fitted_order(mus, defects) -> float:
    defects = np.asarray(defects, dtype=float)
    if np.any(defects <= 0) or not np.all(np.isfinite(defects)):
        return math.nan
    return float(np.polyfit(np.log(mus), np.log(defects), 1)[0])


# ---------------------------------------------------------------------------
# 1  calibration


@register("calibration", "U(2)_R orientation and volume normalisations of the quadrature rules",
          "Orientation of U(2)_R: integral of dV/N^2 equals -2 pi^3 i",
          R=(0.7, 1.0, 1.5), mu=(0.5, 1.0))
def _calibration(cfg: SuiteConfig) -> list[CaseSpec]:
    out = []
    for R in cfg.R:
        def u2(rng, R=R):
            rule = build_u2_rule(R, 0, 0, orders=_grow((5, 5, 3, 5), cfg.grid))
            return abs(rule.sum(1.0 / rule.nodes.norm() ** 2) - U2_VOLUME) / abs(U2_VOLUME)

        def s3(rng, R=R):
            rule = build_sphere_rule(R, 0)
            return abs(rule.sum(np.ones(rule.size)) - 2 * np.pi ** 2 * R ** 3) / (2 * np.pi ** 2 * R ** 3)

        out.append(CaseSpec(f"u2-volume-R{R:g}", f"sum w / N^2 = -2 pi^3 i on U(2)_{R:g}", 1e-12, u2))
        out.append(CaseSpec(f"s3-volume-R{R:g}", f"total mass 2 pi^2 R^3 of S^3_{R:g}", 1e-12, s3))
    for mu in cfg.mu:
        def deformed(rng, mu=mu):
            i0 = zh_mu.ZhMuIndex(0, CoeffIndex(0, 0, 0))
            v = zh_mu.pairing_Zh_mu(zh_mu.zh_mu_basis_field(i0, "f", mu),
                                    zh_mu.zh_mu_basis_field(i0, "f'", mu), mu, 0.5 / mu, l_max=0, k_range=1)
            return abs(v - mu ** -4) / mu ** -4

        out.append(CaseSpec(f"deformed-measure-mu{mu:g}", "<f_0000, f'_0000>_mu = mu^-4 at R = 1/(2mu)",
                            1e-10, deformed))
    return out


def _grow(orders: tuple, grid: int) -> tuple:
    return tuple(o + grid for o in orders)


# ---------------------------------------------------------------------------
# 2  classical orthogonality


@register("orthogonality-classical", "matrix-coefficient orthogonality for the H and Zh pairings",
          "Eqs. (t-orthog)/(orthogonality)", l_max=2.0, k_range=3, R=(0.8, 1.3), grid=0)
def _orth_classical(cfg: SuiteConfig) -> list[CaseSpec]:
    out = []
    hidx = list(indices(cfg.two_l_max))
    zidx = zh_indices(_ktypes(cfg))
    for R in cfg.R:
        def h_table(rng, R=R, sign=1):
            rule = build_sphere_rule(R, cfg.l_max + cfg.grid)
            Z = rule.nodes
            plus = [basis_field("H+", i) for i in hidx]
            dual = [h_dual_field(i) for i in hidx]
            first, second = (plus, dual) if sign > 0 else (dual, plus)
            A = np.stack([_values(deg_tilde(f), Z) for f in first], 1)
            B = np.stack([_values(f, Z) for f in second], 1)
            M = (A * rule.weights[:, None]).T @ B / (2 * np.pi ** 2 * R)
            return float(np.max(np.abs(M - sign * np.eye(len(hidx)))))

        def zh_table(rng, R=R):
            rule = build_u2_rule(R, cfg.l_max + cfg.grid, cfg.k_range)
            Z = rule.nodes
            F = np.stack([_values(basis_field("Zh", i), Z) for i in zidx], 1)
            D = np.stack([_values(zh_dual_field(i), Z) for i in zidx], 1)
            M = 1j / (2 * np.pi ** 3) * (F * rule.weights[:, None]).T @ D
            E = np.diag([1.0 / (i.idx.two_l + 1) for i in zidx])
            return float(np.max(np.abs(M - E)))

        out.append(CaseSpec(f"H-pairing-R{R:g}", f"(t^l', t^l(Z^-1)/N)_R = delta, 2l <= {cfg.two_l_max}",
                            1e-10, h_table))
        out.append(CaseSpec(f"H-antisymmetry-R{R:g}", "reversed arguments give -delta", 1e-10,
                            lambda rng, R=R: h_table(rng, R, -1)))
        out.append(CaseSpec(f"Zh-pairing-R{R:g}",
                            f"<t N^k', t(Z^-1) N^(-k-2)> = delta/(2l+1), |k| <= {cfg.k_range}",
                            1e-10, zh_table))
    return out


# ---------------------------------------------------------------------------
# 3  dimension identity


@register("dimension-identity", "K-type count of homogeneous polynomials and basis rank",
          "Eqs. (dim1)=(dim2); K-type basis proposition", l_max=15.0)
def _dimension(cfg: SuiteConfig) -> list[CaseSpec]:
    def counts(rng):
        worst = 0
        for d in range(2 * cfg.two_l_max + 1):
            a, b = dim_identity_check(d)
            worst = max(worst, abs(a - b))
        return worst

    def rank(rng):
        worst = 0
        for d in range(min(2 * cfg.two_l_max, 8) + 1):
            expected = (d + 3) * (d + 2) * (d + 1) // 6
            idx = [(k, tl) for tl in range(d + 1) for k in range(d + 1) if tl + 2 * k == d]
            Z = random_u2_point(rng, 1.0, 2 * expected + 10)
            cols = [_values(basis_field("Zh", i), Z) for i in zh_indices(idx)]
            s = np.linalg.svd(np.stack(cols, 1), compute_uv=False)
            r = int(np.sum(s > 1e-10 * s[0]))
            worst = max(worst, abs(r - expected), abs(len(cols) - expected))
        return worst

    d_max = 2 * cfg.two_l_max
    return [CaseSpec("dim1-equals-dim2", f"integer identity for degrees d <= {d_max}", 0.5, counts),
            CaseSpec("ktype-basis-rank", f"t^l N^k of degree d span all polynomials, d <= {min(d_max, 8)}",
                     0.5, rank)]


# ---------------------------------------------------------------------------
# 4  I_R table


def _pair(rng, side: str, R: float = 1.0):
    return (random_domain_point(rng, R, side, None, 0.1, 0.4),
            random_domain_point(rng, R, side, None, 0.1, 0.4))


@register("embedding-table", "values of the two-point integral I_R on D+ and D-",
          "Theorem (embedding): I_R has the following properties", samples=10, R=(1.0,), grid=0)
def _embedding(cfg: SuiteConfig) -> list[CaseSpec]:
    n = cfg.samples
    trace = lambda Z1, Z2: 0.5 * (Z1 * Z2.plus()).trace()  # noqa: E731
    inv_norms = lambda Z1, Z2: 1.0 / (Z1.norm() * Z2.norm())  # noqa: E731
    zero = lambda Z1, Z2: 0.0  # noqa: E731
    one = lambda Z1, Z2: 1.0  # noqa: E731
    table = {
        "plus": [("1", constant(1.0), one), ("N^-1", 1 / NORM, zero), ("N^-2", NORM ** -2, zero),
                 ("N", NORM, trace)],
        "minus": [("1", constant(1.0), zero), ("N^-1", 1 / NORM, zero),
                  ("N^-2", NORM ** -2, inv_norms), ("N", NORM, zero)],
    }
    out = []
    for R in cfg.R:
        for side, rows in table.items():
            for name, f, exact in rows:
                def run(rng, f=f, exact=exact, side=side, R=R):
                    worst = 0.0
                    for _ in range(n):
                        Z1, Z2 = _pair(rng, side, R)
                        worst = max(worst, _rel(proj.I_R_eval(f, Z1, Z2, R, extra=4 + cfg.grid),
                                                complex(exact(Z1, Z2))))
                    return worst

                out.append(CaseSpec(f"I_R-{side}-{name}-R{R:g}", f"I_R({name}) on D{side[0]} at {n} point pairs",
                                    1e-8, run))
    return out


# ---------------------------------------------------------------------------
# 5  mixed closed form


@register("mixed-closed-form", "I_R(1/N) for Z1 in D+, Z2 in D- against the logarithmic formula",
          "Eq. (I_R): closed form valid only for mixed domains", samples=10, R=(1.0,), grid=0)
def _mixed(cfg: SuiteConfig) -> list[CaseSpec]:
    def run(rng, R):
        worst = 0.0
        for _ in range(cfg.samples):
            Z1 = random_domain_point(rng, R, "plus", None, 0.1, 0.4)
            Z2 = random_domain_point(rng, R, "minus", None, 0.1, 0.4)
            # the closed form is written for R = 1; rescale
            ref = proj.I_mixed_closed_form(Z1 / R, Z2 / R) / R ** 2
            worst = max(worst, _rel(proj.I_R_eval(1 / NORM, Z1, Z2, R, extra=4 + cfg.grid), ref, 0.0))
        return worst

    return [CaseSpec(f"mixed-log-R{R:g}", f"quadrature vs closed form at {cfg.samples} points", 1e-6,
                     lambda rng, R=R: run(rng, R)) for R in cfg.R]


# ---------------------------------------------------------------------------
# 6  P0


@register("p-zero", "the regularised projector P0 onto the middle component",
          "Theorem (Zh^0-projector): P0 is well-defined, annihilates Zh+ and Zh-",
          l_max=0.5, R=(1.0,), grid=0)
def _p_zero(cfg: SuiteConfig) -> list[CaseSpec]:
    sched = proj.LimitSchedule()
    items = []
    for i in zh_indices([(k, tl) for tl in range(cfg.two_l_max + 1) for k in range(-tl - 1, 0)]):
        items.append((f"reproduce-{i.k}-{i.idx.two_l}{i.idx.two_m}{i.idx.two_n}", basis_field("Zh", i), True))
    items += [("annihilate-1", constant(1.0), False), ("annihilate-N^-2", NORM ** -2, False),
              ("annihilate-t1/2", basis_field("H+", CoeffIndex(1, 1, -1)), False),
              ("annihilate-t1/2N^-3", basis_field("Zh", zh_indices([(-3, 1)])[0]), False)]
    out = []
    for R in cfg.R:
        for name, f, keep in items:
            def run(rng, f=f, keep=keep, R=R):
                Z = random_u2_point(rng, R)
                v = proj.P_zero_eval(f, Z, R, sched, band=6 + cfg.grid)
                return _rel(v, complex(f(Z)) if keep else 0.0)

            out.append(CaseSpec(f"{name}-R{R:g}", "P0 " + ("reproduces" if keep else "annihilates") + f" {f.name}",
                                1e-3, run))
    return out


# ---------------------------------------------------------------------------
# 7  kernel expansions


def _pair_plus_minus(rng):
    """``Z`` in D+_R and ``W`` in D-_R with R random, so that |Z| |W^-1| < 1/2."""
    R = rng.uniform(0.5, 2.0)
    return (random_domain_point(rng, R, "plus", None, 0.1, 0.7),
            random_domain_point(rng, R, "minus", None, 0.1, 0.7))


@register("kernel-expansions", "truncated matrix-coefficient expansions of 1/N(Z-W) and 1/N(Z-W)^2",
          "Prop. (prop27) and Eq. (1/N-expansion)", l_max=20.0, samples=5)
def _expansions(cfg: SuiteConfig) -> list[CaseSpec]:
    L = cfg.two_l_max

    def second(rng, variant):
        worst = 0.0
        for _ in range(cfg.samples):
            Z, W = _pair_plus_minus(rng)
            a, b = (W, Z) if variant == 1 else (Z, W)
            worst = max(worst, _rel(proj.kernel_expansion_partial("second", a, b, L, variant),
                                    complex(1 / (Z - W).norm() ** 2), 0.0))
        return worst

    def first(rng):
        worst = 0.0
        for _ in range(cfg.samples):
            Z, W = _pair_plus_minus(rng)
            worst = max(worst, _rel(proj.kernel_expansion_partial("first", Z, W, L),
                                    complex(1 / (Z - W).norm()), 0.0))
        return worst

    return [CaseSpec("second-kind-variant-1", f"1/N(Z-W)^2 from W Z^-1 -> 0, 2l+2k <= {L}", 1e-6,
                     lambda rng: second(rng, 1)),
            CaseSpec("second-kind-variant-2", f"1/N(Z-W)^2 from Z W^-1 -> 0, 2l+2k <= {L}", 1e-6,
                     lambda rng: second(rng, 2)),
            CaseSpec("first-kind", f"1/N(Z-W) from Z W^-1 -> 0, 2l <= {L}", 1e-6, first)]


# ---------------------------------------------------------------------------
# 8  rho_1 structure


def _rho1_images(idx, Z) -> np.ndarray:
    """``(16, nodes, len(idx))`` values of rho1(E) f for the 16 elementary E."""
    n = int(np.prod(Z.shape))
    out = np.empty((16, n, len(idx)), dtype=complex)
    for a, i in enumerate(idx):
        bl = rho1_block_values(basis_field("Zh", i), Z)
        c = 0
        for name in "ABCD":
            M = bl[name].as_array()
            for r in range(2):
                for s in range(2):
                    # Tr(E_rs M) = M_sr
                    out[c, :, a] = np.broadcast_to(M[..., s, r], Z.shape).reshape(n)
                    c += 1
    return out


@register("rho1-structure", "Lie algebra action rho_1: invariance of the pairing, components, B/C formulas",
          "Lemma (rho-algebra-action) and Eqs. (B-action)/(C-action)", l_max=1.5, k_range=3, grid=0)
def _rho1(cfg: SuiteConfig) -> list[CaseSpec]:
    idx = zh_indices(_ktypes(cfg))
    tl, kr, g = cfg.two_l_max, cfg.k_range, cfg.grid
    ltot = math.ceil((2 * tl + 1) / 2)
    # exact for the products of images with basis elements (frequency bounds in each angle)
    orders = (2 * tl + 4 * kr + 11 + g, 2 * ltot + 3 + g, ltot + 3 + g, 2 * ltot + 3 + g)

    def invariance(rng):
        rule = build_u2_rule(1.0, orders=orders)
        Z = rule.nodes
        F = np.stack([_values(basis_field("Zh", i), Z) for i in idx], 1)
        W = rule.weights * 1j / (2 * np.pi ** 3)
        imgs = _rho1_images(idx, Z)
        worst = 0.0
        for c in range(16):
            P = (imgs[c] * W[:, None]).T @ F
            worst = max(worst, float(np.max(np.abs(P + P.T))))
        return worst

    def components(rng):
        Z = random_u2_point(rng, 1.0, 400)
        worst = 0.0
        for k, t in _ktypes(cfg):
            own = classify(k, t)
            nb = zh_indices([(k + dk, t + dl) for dk in (-1, 0, 1) for dl in (-1, 0, 1) if t + dl >= 0])
            B = np.stack([_values(basis_field("Zh", i), Z) for i in nb], 1)
            Y = _rho1_images(zh_indices([(k, t)]), Z)
            Y = Y.transpose(1, 0, 2).reshape(Z.size, -1)
            c, *_ = np.linalg.lstsq(B, Y, rcond=None)
            fit = np.max(np.abs(B @ c - Y)) / max(1.0, np.max(np.abs(Y)))
            other = np.array([i.component != own for i in nb])
            leak = np.max(np.abs(c[other])) if other.any() else 0.0
            worst = max(worst, fit, leak)
        return worst

    def action(rng, which):
        X = random_biquaternion(rng, 5, 0.8)
        worst = 0.0
        for ci in indices(tl):
            fl = Field(lambda Z, ci=ci: t_coeff(ci, Z))
            D = d_matrix(fl)(X)
            F = fl(X)
            N = X.norm()
            l2 = ci.two_l
            for k in range(-kr, kr + 1):
                fk = Field(lambda Z, ci=ci, k=k: t_coeff(ci, Z) * Z.norm() ** k)
                dk = d_matrix(fk)(X)
                if which == "B":
                    Xp = X.plus()
                    t1 = ((l2 + k + 1) / (l2 + 1)) * D * N ** k
                    t2 = (k / (l2 + 1)) * (Xp * D.plus() * Xp + Xp * F) * N ** (k - 1)
                    lhs = dk
                else:
                    t1 = ((l2 + k + 2) / (l2 + 1)) * (X * D * X + X * F) * N ** k
                    t2 = ((k + 1) / (l2 + 1)) * D.plus() * N ** (k + 1)
                    lhs = X * dk * X + 2 * (X * F * N ** k)
                scale = max(float(np.max(np.abs(t1.as_array()) + np.abs(t2.as_array()))),
                            float(np.max(np.abs(lhs.as_array()))),
                            float(np.max(np.abs((X * F * N ** k).as_array()))))
                worst = max(worst, float(np.max(np.abs((lhs - t1 - t2).as_array()))) / scale)
        return worst

    def harmonic_parts(rng):
        X = random_biquaternion(rng, 5, 0.8)
        worst = 0.0
        for ci in indices(tl):
            fl = Field(lambda Z, ci=ci: t_coeff(ci, Z))
            df = d_matrix(fl)
            parts = (df, Field(lambda Z: Z.plus() * df(Z).plus() * Z.plus() + Z.plus() * fl(Z)),
                     Field(lambda Z: Z * df(Z) * Z + Z * fl(Z)), Field(lambda Z: df(Z).plus()))
            for h in parts:
                v = np.abs(box(h)(X).as_array())
                worst = max(worst, float(np.max(v)) / max(1.0, float(np.max(np.abs(h(X).as_array())))))
        return worst

    return [CaseSpec("pairing-invariance", f"<rho1(E)f, g> + <f, rho1(E)g> = 0, 16 directions, "
                     f"2l <= {tl}, |k| <= {kr}", 1e-9, invariance),
            CaseSpec("component-preservation", "rho1(E) f expands only in K-types of the component of f",
                     1e-9, components),
            CaseSpec("B-action", "derivative of t^l N^k split into harmonic parts", 1e-9,
                     lambda rng: action(rng, "B")),
            CaseSpec("C-action", "C-block image of t^l N^k split into harmonic parts", 1e-9,
                     lambda rng: action(rng, "C")),
            CaseSpec("harmonic-parts", "the split pieces are harmonic", 1e-9, harmonic_parts)]


# ---------------------------------------------------------------------------
# 9  deformed kernel and factorisation


def _bq_field(parts) -> Field:
    return Field(lambda X: BiQuaternion(*(p(X) for p in parts)))


@register("deformed-kernel", "box~_mu K_mu = 0 and factorisation of box~_mu by the deformed Dirac operators",
          "Lemma (fundamental_sol) and Prop. (lap-factorization)", mu=(0.5, 1.0), samples=50)
def _deformed_kernel(cfg: SuiteConfig) -> list[CaseSpec]:
    out = []
    for mu in cfg.mu:
        def kernel(rng, mu=mu):
            worst = 0.0
            for _ in range(10):
                X, Y = random_real_quaternion(rng, None, 1.0), random_real_quaternion(rng, None, 1.0)
                worst = max(worst, _box_mu_tilde_rel(ads.K_mu_field(Y, mu), mu, X))
            return worst

        def factor(rng, mu=mu, side="left"):
            worst = 0.0
            for _ in range(cfg.samples):
                A = _bq_field([random_polynomial_field(rng) for _ in range(4)])
                B = _bq_field([random_polynomial_field(rng) for _ in range(4)])
                X = random_real_quaternion(rng, None, 0.6)
                if side == "left":
                    h = dirac_mu_left(dirac_mu_left_shifted((A, B), mu, -mu), mu)
                else:
                    h = dirac_mu_right_shifted(dirac_mu_right((A, B), mu), mu, mu)
                for hv, src in zip(h, (A, B)):
                    ref = box_mu_tilde(src, mu)(X).as_array()
                    worst = max(worst, _rel(hv(X).as_array(), ref))
            return worst

        out.append(CaseSpec(f"kernel-mu{mu:g}", "box~_mu K_mu(., Y) = 0 at 10 random pairs", 1e-9, kernel))
        out.append(CaseSpec(f"factorisation-left-mu{mu:g}",
                            f"nabla_mu (nabla_mu - mu) = box~_mu on {cfg.samples} polynomial columns", 1e-9, factor))
        out.append(CaseSpec(f"factorisation-right-mu{mu:g}",
                            f"(. nabla_mu)(nabla_mu + mu) = box~_mu on {cfg.samples} polynomial rows", 1e-9,
                            lambda rng, mu=mu: factor(rng, mu, "right")))
    return out


# ---------------------------------------------------------------------------
# 10  deformed orthogonality


@register("orthogonality-deformed", "orthogonality of the deformed bases phi+ and dual phi-",
          "Eq. (t-orthog-desitter)", l_max=1.5, mu=(0.5, 1.0), R=(0.5, 1.2), grid=0)
def _orth_deformed(cfg: SuiteConfig) -> list[CaseSpec]:
    hidx = list(indices(cfg.two_l_max))
    out = []
    for mu in cfg.mu:
        for R in cfg.R:
            def run(rng, mu=mu, R=R, form="first"):
                rule = build_sphere_rule(R, cfg.l_max + cfg.grid)
                Z = rule.nodes
                plus = [ads.H_mu_basis_field(i, "plus", mu) for i in hidx]
                dual = [ads.H_mu_basis_field(i, "minus", mu, dual=True) for i in hidx]
                if form == "first":
                    A = np.stack([_values(deg_tilde(f), Z) for f in plus], 1)
                    B = np.stack([_values(f, Z) for f in dual], 1)
                else:
                    A = -np.stack([_values(f, Z) for f in plus], 1)
                    B = np.stack([_values(deg_tilde(f), Z) for f in dual], 1)
                c = math.sqrt(1 + mu * mu * R * R) / (2 * np.pi ** 2 * R)
                M = c * (A * rule.weights[:, None]).T @ B
                scale = np.array([mu ** (-2 * i.two_l - 2) for i in hidx])
                return float(np.max(np.abs(M - np.diag(scale)) / scale[:, None]))

            out.append(CaseSpec(f"pairing-mu{mu:g}-R{R:g}", f"mu^(-4l-2) delta pattern, 2l <= {cfg.two_l_max}",
                                1e-8, run))
            out.append(CaseSpec(f"pairing-second-form-mu{mu:g}-R{R:g}", "same table with deg~ on the second factor",
                                1e-8, lambda rng, mu=mu, R=R: run(rng, mu, R, "second")))
    return out


# ---------------------------------------------------------------------------
# 11  deformed Poisson


def _point_at(rng, r: float) -> BiQuaternion:
    X = random_real_quaternion(rng, None, 1.0)
    return X * (r / math.sqrt(float(np.real(complex(X.norm())))))


@register("poisson-deformed", "Poisson reproduction of deformed harmonic functions inside and outside S^3_R",
          "Theorem (Poisson5): a real analytic solution of the deformed equation is reproduced",
          l_max=1.5, mu=(0.5, 1.0), R=(1.0,), samples=5, grid=0)
def _poisson(cfg: SuiteConfig) -> list[CaseSpec]:
    hidx = list(indices(cfg.two_l_max))
    out = []
    for mu in cfg.mu:
        for R in cfg.R:
            for side, form in (("plus", "deg_phi"), ("plus", "deg_kernel"),
                               ("minus", "deg_phi"), ("minus", "deg_kernel")):
                def run(rng, mu=mu, R=R, side=side, form=form):
                    worst = 0.0
                    for _ in range(cfg.samples):
                        r = rng.uniform(0.2, 0.6) if side == "plus" else rng.uniform(1.8, 3.0)
                        Y = _point_at(rng, r * R)
                        for i in hidx:
                            phi = ads.H_mu_basis_field(i, side, mu)
                            v = ads.poisson_mu_eval(phi, Y, mu, R, side, form, extra=4 + cfg.grid)
                            worst = max(worst, _rel(v, complex(phi(Y))))
                    return worst

                where = "interior" if side == "plus" else "exterior"
                out.append(CaseSpec(f"{where}-{form}-mu{mu:g}-R{R:g}",
                                    f"phi{'+' if side == 'plus' else '-'}(Y) at {cfg.samples} {where} points",
                                    1e-8, run))

            def wrong(rng, mu=mu, R=R):
                worst = 0.0
                for i in hidx:
                    Yi, Yo = _point_at(rng, 0.4 * R), _point_at(rng, 2.2 * R)
                    worst = max(worst, abs(ads.poisson_mu_eval(ads.H_mu_basis_field(i, "minus", mu), Yi, mu, R,
                                                               "plus", "symmetric")),
                                abs(ads.poisson_mu_eval(ads.H_mu_basis_field(i, "plus", mu), Yo, mu, R,
                                                        "minus", "symmetric")))
                return worst

            out.append(CaseSpec(f"wrong-type-mu{mu:g}-R{R:g}", "symmetric form returns 0 for the other space",
                                1e-8, wrong))
    return out


# ---------------------------------------------------------------------------
# 12  deformed Cauchy-Fueter


@register("cauchy-fueter-deformed", "Cauchy-Fueter reproduction for deformed left-regular functions",
          "Theorem (Cauchy-Fueter-5): the integral is left-regular and reproduces f",
          l_max=0.5, mu=(0.5, 1.0), R=(0.5, 0.3), grid=0)
def _cauchy_fueter(cfg: SuiteConfig) -> list[CaseSpec]:
    if len(cfg.R) < 2:
        raise ConfigInvalid("cauchy-fueter-deformed needs two sphere radii for the independence check")
    eps, eps2 = cfg.R[0], cfg.R[1]
    out = []
    for mu in cfg.mu:
        pairs = [(i, regular.make_regular(ads.H_mu_basis_field(i, "plus", mu), mu, "left", 1))
                 for i in indices(cfg.two_l_max)]

        def err(val, ref):
            return max(_rel(val[0], ref[0].as_array()), _rel(val[1], ref[1].as_array()))

        def interior(rng, mu=mu, pairs=pairs):
            worst = 0.0
            for _, f in pairs:
                cyc = regular.SphereCycle(random_real_quaternion(rng, None, 0.1), eps)
                for _ in range(2):
                    Y = cyc.center + _point_at(rng, rng.uniform(0.05, 0.4) * eps)
                    worst = max(worst, err(regular.cauchy_fueter_integral(f, Y, cyc, mu, extra=6 + cfg.grid), f(Y)))
            return worst

        def exterior(rng, mu=mu, pairs=pairs):
            worst = 0.0
            for _, f in pairs:
                cyc = regular.SphereCycle(random_real_quaternion(rng, None, 0.1), eps)
                Y = cyc.center + _point_at(rng, rng.uniform(1.6, 2.2) * eps)
                val = regular.cauchy_fueter_integral(f, Y, cyc, mu, extra=6 + cfg.grid)
                scale = max(1.0, float(np.max(np.abs(f(Y)[0].as_array()))))
                worst = max(worst, float(max(np.max(np.abs(val[0])), np.max(np.abs(val[1])))) / scale)
            return worst

        def independence(rng, mu=mu, pairs=pairs):
            worst = 0.0
            for _, f in pairs:
                c = random_real_quaternion(rng, None, 0.1)
                Y = c + _point_at(rng, 0.3 * min(eps, eps2))
                a = regular.cauchy_fueter_integral(f, Y, regular.SphereCycle(c, eps), mu, extra=6 + cfg.grid)
                b = regular.cauchy_fueter_integral(f, Y, regular.SphereCycle(c, eps2), mu, extra=6 + cfg.grid)
                worst = max(worst, _rel(a[0], b[0]), _rel(a[1], b[1]))
            return worst

        out += [CaseSpec(f"interior-mu{mu:g}", f"reproduces f(Y) inside S^3_eps, eps={eps:g}", 1e-4, interior),
                CaseSpec(f"exterior-mu{mu:g}", "vanishes outside the sphere", 1e-4, exterior),
                CaseSpec(f"radius-independence-mu{mu:g}", f"eps={eps:g} and eps={eps2:g} agree", 1e-4,
                         independence)]
    return out


# ---------------------------------------------------------------------------
# 13  Zh_mu


def _zh_mu_component(k: int, two_l: int, variant: str) -> str:
    """Component of f_{k l} or of its partner f'_{k l}."""
    c = classify(k, two_l)
    if variant == "f":
        return c
    return {"plus": "minus", "minus": "plus", "zero": "zero"}[c]


@register("zh-mu", "deformed Zh_mu: orthogonality, kernel expansion and the projectors P_mu+-",
          "Eq. (mu-orthogonality), Eq. (1/N^2) and the reproducing formula for P_mu",
          l_max=1.0, k_range=2, mu=(0.5, 1.0), grid=0)
def _zh_mu(cfg: SuiteConfig) -> list[CaseSpec]:
    zidx = zh_indices(_ktypes(cfg))
    out = []
    for mu in cfg.mu:
        def orth(rng, mu=mu):
            R = 0.7 / mu
            rule = build_u2_rule(R, cfg.l_max + cfg.grid, cfg.k_range, mu=mu)
            Z = rule.nodes
            F = np.stack([_values(zh_mu.zh_mu_basis_field(i, "f", mu), Z) for i in zidx], 1)
            G = np.stack([_values(zh_mu.zh_mu_basis_field(i, "f'", mu), Z) for i in zidx], 1)
            M = 1j / (2 * np.pi ** 3) * (F * rule.weights[:, None]).T @ G
            e = np.array([mu ** (-2 * i.idx.two_l - 4) / (i.idx.two_l + 1) for i in zidx])
            return float(np.max(np.abs(M - np.diag(e)) / e[:, None]))

        def expansion(rng, mu=mu):
            worst = 0.0
            for _ in range(5):
                Y = (rng.uniform(0.8, 1.5) / mu) * _su2_point(rng)
                # X Y^-1 = r u with u in SU(2) has eigenvalues of equal modulus
                X = rng.uniform(0.2, 0.5) * _su2_point(rng) * Y
                ref = complex(ads.hat_interval(X, Y, mu)) ** -2
                worst = max(worst, _rel(zh_mu.expansion_1overN2_deformed_partial(X, Y, mu, 40), ref, 0.0))
            return worst

        def projector(rng, mu=mu, side="plus"):
            R = 0.5 / mu
            if side == "plus":
                Y = (0.25 / mu) * _su2_point(rng)
            else:
                Y = 1j * (0.95 / mu) * _su2_point(rng)
            worst = 0.0
            for tl in range(min(cfg.two_l_max, 1) + 1):
                for k in (-tl - 3, -1, 0, 1):
                    for variant in ("f", "f'"):
                        i = zh_mu.ZhMuIndex(k, CoeffIndex(tl, tl, -tl))
                        f = zh_mu.zh_mu_basis_field(i, variant, mu)
                        v = zh_mu.P_mu_eval(f, Y, mu, R, side, extra=4 + cfg.grid)
                        keep = _zh_mu_component(k, tl, variant) == side
                        fy = complex(f(Y))
                        worst = max(worst, abs(v - (fy if keep else 0.0)) / max(1.0, abs(fy)))
            return worst

        out += [CaseSpec(f"orthogonality-mu{mu:g}", "mu^(-4l-4)/(2l+1) delta pattern at R = 0.7/mu", 1e-8, orth),
                CaseSpec(f"expansion-mu{mu:g}", "deformed expansion of <X^-Y^, X^-Y^>^-2, truncation 40", 1e-6,
                         expansion),
                CaseSpec(f"P_mu-plus-mu{mu:g}", "P_mu+ reproduces Zh_mu+ and annihilates the rest", 1e-7,
                         projector),
                CaseSpec(f"P_mu-minus-mu{mu:g}", "P_mu- reproduces Zh_mu- and annihilates the rest", 1e-7,
                         lambda rng, mu=mu: projector(rng, mu, "minus"))]
    return out


# ---------------------------------------------------------------------------
# 14  mu -> 0


@register("mu-continuity", "scaled deformed objects converge to their classical counterparts as mu -> 0",
          "Deformation limits of K_mu, H_mu and Zh_mu", l_max=1.0, k_range=2, mu=(1e-1, 1e-2, 1e-3))
def _mu_limit(cfg: SuiteConfig) -> list[CaseSpec]:
    mus = np.array(sorted(cfg.mu, reverse=True))
    hidx = list(indices(cfg.two_l_max))
    zidx = zh_indices([(k, tl) for k in range(-cfg.k_range, cfg.k_range + 1) for tl in range(cfg.two_l_max + 1)])

    def order_of(defect):
        def run(rng):
            X = random_real_quaternion(rng, None, 0.8)
            Y = random_real_quaternion(rng, None, 0.8)
            return abs(_fitted_order(mus, [defect(mu, X, Y) for mu in mus]) - 2.0)
        return run

    def kernel(mu, X, Y):
        return _rel(ads.K_mu_eval(X, Y, mu), complex(1 / (X - Y).norm()), 0.0)

    def h_plus(mu, X, Y):
        return max(_rel(2 ** (i.two_l + 1) * ads.H_mu_basis_field(i, "plus", mu)(X), t_coeff(i, X), 1e-3)
                   for i in hidx)

    def h_minus(mu, X, Y):
        return max(_rel((mu * mu / 2) ** (i.two_l + 1) * ads.H_mu_basis_field(i, "minus", mu)(X),
                        basis_field("H-", i)(X), 1e-3) for i in hidx)

    def zh_f(mu, X, Y):
        out = 0.0
        for i in zidx:
            tl, k = i.idx.two_l, i.k
            scaled = 2.0 ** (tl + 2 * k + 2) * mu ** (-2 * k) * zh_mu.zh_mu_basis_field(i, "f", mu)(X)
            out = max(out, _rel(scaled, basis_field("Zh", i)(X), 1e-3))
        return out

    def zh_fprime(mu, X, Y):
        out = 0.0
        for i in zidx:
            tl, k = i.idx.two_l, i.k
            p = tl + k + 2
            scaled = (mu * mu / 2) ** p * 2.0 ** (-k) * zh_mu.zh_mu_basis_field(i, "f'", mu)(X)
            out = max(out, _rel(scaled, zh_dual_field(i)(X), 1e-3))
        return out

    def pairing_plus(mu, X, Y):
        out = 0.0
        for i in hidx:
            v = ads.pairing_mu(2 ** (i.two_l + 1) * ads.H_mu_basis_field(i, "plus", mu), h_dual_field(i), mu,
                               1.0, l_max=cfg.l_max)
            out = max(out, abs(v - 1.0))
        return out

    def pairing_minus(mu, X, Y):
        out = 0.0
        for i in hidx:
            phi = (mu * mu / 2) ** (i.two_l + 1) * ads.H_mu_basis_field(i, "minus", mu, dual=True)
            v = ads.pairing_mu(basis_field("H+", i), phi, mu, 1.0, l_max=cfg.l_max)
            out = max(out, abs(v - 1.0))
        return out

    def zh_pairing_exact(rng):
        out = 0.0
        for mu in mus:
            rule = build_u2_rule(1.0, cfg.l_max, cfg.k_range, mu=mu)
            for i in zidx:
                tl, k = i.idx.two_l, i.k
                f = 2.0 ** (tl + 2 * k + 2) * mu ** (-2 * k) * zh_mu.zh_mu_basis_field(i, "f", mu)
                v = zh_mu.pairing_Zh_mu(f, zh_dual_field(i), mu, 1.0, rule=rule)
                out = max(out, abs(v - 1.0 / (tl + 1)) * (tl + 1))
        return out

    cases = [("kernel", "K_mu -> 1/N(X-Y)", kernel), ("H-plus-basis", "2^(2l+1) phi+ -> t^l", h_plus),
             ("H-minus-basis", "(mu^2/2)^(2l+1) phi- -> t^l N^(-2l-1)", h_minus),
             ("Zh-f-basis", "scaled f_klmn -> t^l N^k", zh_f),
             ("Zh-fprime-basis", "scaled f'_klmn -> t^l(Z^+) N^(-2l-k-2)", zh_fprime),
             ("H-pairing-plus", "(2^(2l+1) phi+, classical dual)_mu -> 1", pairing_plus),
             ("H-pairing-minus", "(t^l, scaled dual phi-)_mu -> 1", pairing_minus)]
    out = [CaseSpec(f"order-{name}", f"fitted order of {desc} is 2", 0.1, order_of(fn)) for name, desc, fn in cases]
    out.append(CaseSpec("Zh-pairing-limit", "scaled Zh_mu pairing equals the classical value for every mu",
                        1e-10, zh_pairing_exact))
    return out


# ---------------------------------------------------------------------------
# 15  5-dimensional extensions


def _cone_points(rng, n: int):
    x = rng.normal(size=(4, n)) * 0.6
    w0 = np.linalg.norm(x, axis=0) * rng.uniform(1.2, 2.5, n) + rng.uniform(0.1, 0.5, n)
    return (w0, *x)


@register("extensions-5d", "homogeneous extensions to R^{1,4}_+ solve the wave and deformed equations",
          "Eq. (t-extensions): extensions simultaneously satisfy both equations",
          l_max=1.0, mu=(0.7,), samples=20)
def _extensions(cfg: SuiteConfig) -> list[CaseSpec]:
    hidx = list(indices(cfg.two_l_max))
    out = []
    for mu in cfg.mu:
        for lam in ads.LAMBDAS:
            for side in ("plus", "minus"):
                def wave(rng, mu=mu, lam=lam, side=side):
                    w = _cone_points(rng, cfg.samples)
                    worst = 0.0
                    for i in hidx:
                        F = ads.extension_5d_field(i, lam, side, mu)
                        h = jet_eval(F, w).hess
                        res = h[0, 0] - h[1, 1] - h[2, 2] - h[3, 3] - h[4, 4]
                        scale = sum(np.abs(h[j, j]) for j in range(5)) + 1e-300
                        worst = max(worst, float(np.max(np.abs(res) / scale)))
                    return worst

                def hyperboloid(rng, mu=mu, lam=lam, side=side):
                    worst = 0.0
                    for i in hidx:
                        F = ads.extension_5d_field(i, lam, side, mu)
                        for rho in rng.uniform(0.5, 2.0, 2):
                            X = random_real_quaternion(rng, max(cfg.samples // 2, 1), 0.8)
                            worst = max(worst, _box_mu_tilde_rel(ads.on_hyperboloid(F, rho, mu), mu, X))
                    return worst

                tag = f"lam{lam}-{side}-mu{mu:g}"
                out.append(CaseSpec(f"box14-{tag}", f"wave operator at {cfg.samples} cone points", 1e-8, wave))
                out.append(CaseSpec(f"box-mu-{tag}", "box~_mu on hyperboloid slices", 1e-8, hyperboloid))
        # consistency of the pointwise wave operator helper with the package operator
        def operator_check(rng, mu=mu):
            F = ads.extension_5d_field(hidx[-1], -1, "plus", mu)
            w = _cone_points(rng, 3)
            h = jet_eval(F, w).hess
            return _rel(box_14(F)(w), h[0, 0] - h[1, 1] - h[2, 2] - h[3, 3] - h[4, 4], 1e-3)

        out.append(CaseSpec(f"box14-operator-mu{mu:g}", "box_14 agrees with the Hessian trace", 1e-12,
                            operator_check))
    return out


__all__ = ["U2_VOLUME"]
