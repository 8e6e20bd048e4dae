import json

import numpy as np
import pytest

from quatlab.errors import BadRadius
from quatlab.quadrature import (ContourRule, build_sphere_rule, build_u2_rule, integrate, sphere_orders,
                                u2_orders)
from quatlab.spaces import ZhBasisIndex, basis_field, zh_dual_field
from quatlab.special import CoeffIndex, t_coeff
from quatlab.calculus import NORM, Field
from quatlab.zh_mu import ZhMuIndex, pairing_Zh_mu, zh_mu_basis_field

U2_VOLUME = -2j * np.pi ** 3


@pytest.mark.parametrize("R", [0.5, 0.7, 1.0, 1.5, 2.0])
def test_u2_orientation(R):
    rule = build_u2_rule(R, 0, 0)
    assert abs(rule.sum(1 / rule.nodes.norm() ** 2) - U2_VOLUME) <= 1e-12 * abs(U2_VOLUME)


@pytest.mark.parametrize("R", [0.5, 1.0, 2.0])
def test_sphere_mass(R):
    rule = build_sphere_rule(R, 0)
    assert rule.sum(np.ones(rule.size)) == pytest.approx(2 * np.pi ** 2 * R ** 3, rel=1e-13)
    assert np.max(np.abs(rule.nodes.norm() - R * R)) < 1e-13


def test_bad_radius():
    with pytest.raises(BadRadius):
        build_sphere_rule(-1.0)
    with pytest.raises(BadRadius):
        build_u2_rule(0.0)


def test_spectral_exactness():
    """Past the exactness bound, doubling the orders leaves basis integrals unchanged."""
    i = ZhBasisIndex(1, CoeffIndex(2, 0, 2))
    f = basis_field("Zh", i) * zh_dual_field(i)
    base = u2_orders(1, 1)
    o1 = (base["n_alpha"], base["n_phi"], base["n_theta"], base["n_psi"])
    o2 = tuple(2 * x for x in o1)
    a = integrate(f, build_u2_rule(1.0, orders=o1))
    b = integrate(f, build_u2_rule(1.0, orders=o2))
    assert abs(a - b) <= 1e-13 * abs(b)
    assert 1j / (2 * np.pi ** 3) * b == pytest.approx(1 / 3, rel=1e-12)
    g = Field(lambda X, c=CoeffIndex(3, 1, -1): t_coeff(c, X) * np.conj(t_coeff(c, X)))
    o = sphere_orders(1.5)
    s1 = integrate(g, build_sphere_rule(1.0, orders=(o["n_phi"], o["n_theta"], o["n_psi"])))
    s2 = integrate(g, build_sphere_rule(1.0, orders=(2 * o["n_phi"], 2 * o["n_theta"], 2 * o["n_psi"])))
    assert abs(s1 - s2) <= 1e-13 * abs(s2)


def test_calibrations_do_not_depend_on_radius():
    vals = []
    for R in (0.5, 1.0, 2.0):
        rule = build_u2_rule(R, 0, 0)
        vals.append(rule.sum(1 / rule.nodes.norm() ** 2))
    assert np.ptp(np.abs(vals)) <= 1e-11 * abs(U2_VOLUME)
    i0 = ZhMuIndex(0, CoeffIndex(0, 0, 0))
    for mu in (0.5, 1.0):
        f, g = zh_mu_basis_field(i0, "f", mu), zh_mu_basis_field(i0, "f'", mu)
        v = [pairing_Zh_mu(f, g, mu, R, l_max=0, k_range=1) for R in (0.3 / mu, 0.7 / mu)]
        assert abs(v[0] - v[1]) <= 1e-11 * mu ** -4
        assert v[1] == pytest.approx(mu ** -4, rel=1e-11)


def test_integrate_is_deterministic_across_workers():
    rule = build_u2_rule(1.0, 1, 1)
    f = NORM ** -2 + Field(lambda Z: Z.z12 * Z.z21)
    one = integrate(f, rule, workers=1)
    assert integrate(f, rule, workers=1) == one
    three = integrate(f, rule, workers=3)
    assert integrate(f, rule, workers=3) == three
    assert abs(one - three) < 1e-14


def test_rule_serialises(tmp_path):
    rule = build_sphere_rule(1.0, 0)
    path = tmp_path / "rule.json"
    rule.dump_json(path)
    data = json.loads(path.read_text())
    assert data["kind"] == rule.kind and len(data["weights"]) == rule.size


def test_contour_rule_residue():
    rule = ContourRule(0.3 + 0.1j, 1.0, 64)
    assert rule.integrate(lambda z: 1 / (z - 0.5)) == pytest.approx(1.0, abs=1e-14)
    assert abs(rule.integrate(lambda z: z ** 3)) < 1e-14
