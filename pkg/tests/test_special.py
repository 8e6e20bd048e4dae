import numpy as np
import pytest
from hypothesis import given, strategies as st

from quatlab.algebra import BiQuaternion, random_biquaternion
from quatlab.calculus import Field, box
from quatlab.errors import InvalidIndex
from quatlab.special import (CoeffIndex, adjugate_constant, adjugate_ratio, chi, half_range, indices,
                             t_coeff, t_inverse_transform, t_matrix)

Z0 = BiQuaternion(1 + 1j, 2.0, -0.5j, 0.75)

# hand-checkable values from the generating function
FROZEN = [
    (CoeffIndex(1, 1, 1), 0.75),
    (CoeffIndex(1, -1, 1), -0.5j),
    (CoeffIndex(2, 0, 0), 0.75 - 0.25j),      # z11 z22 + z12 z21
    (CoeffIndex(2, 2, -2), 4.0),               # z12^2
    (CoeffIndex(3, 1, -1), 3 + 1j),
    (CoeffIndex(4, 0, 2), -0.1875 - 0.5625j),
]


def generating_oracle(idx: CoeffIndex, z: np.ndarray) -> complex:
    """Coefficient of s^(l-n) in (s z11 + z21)^(l-m) (s z12 + z22)^(l+m)."""
    a, b = (idx.two_l - idx.two_m) // 2, (idx.two_l + idx.two_m) // 2
    p = np.polynomial.polynomial
    poly = p.polymul(p.polypow([z[1, 0], z[0, 0]], a), p.polypow([z[1, 1], z[0, 1]], b))
    return complex(poly[(idx.two_l - idx.two_n) // 2])


@pytest.mark.parametrize("idx, value", FROZEN)
def test_frozen_values(idx, value):
    assert complex(t_coeff(idx, Z0)) == pytest.approx(value, abs=1e-14)


def test_matches_generating_function(rng):
    for _ in range(5):
        Z = random_biquaternion(rng)
        for idx in indices(6):
            assert complex(t_coeff(idx, Z)) == pytest.approx(generating_oracle(idx, Z.as_array()), rel=1e-12,
                                                             abs=1e-12)


def test_index_validation():
    with pytest.raises(InvalidIndex):
        CoeffIndex(2, 1, 0)
    with pytest.raises(InvalidIndex):
        CoeffIndex(1, 3, 1)
    assert list(half_range(3)) == [-3, -1, 1, 3]
    assert len(list(indices(4))) == sum((d + 1) ** 2 for d in range(5))


def test_multiplicativity(rng):
    for _ in range(5):
        Z1, Z2 = random_biquaternion(rng), random_biquaternion(rng)
        for tl in range(5):
            lhs = t_matrix(tl, Z1 * Z2)
            rhs = t_matrix(tl, Z1) @ t_matrix(tl, Z2)
            assert np.max(np.abs(lhs - rhs)) <= 1e-11 * max(1.0, np.max(np.abs(lhs)))


def test_t_matrix_agrees_with_entries(rng):
    Z = random_biquaternion(rng)
    T = t_matrix(3, Z)
    for idx in indices(3, 3):
        assert T[(idx.two_n + 3) // 2, (idx.two_m + 3) // 2] == pytest.approx(complex(t_coeff(idx, Z)))


def test_harmonic(rng):
    X = random_biquaternion(rng, 4)
    for idx in indices(4):
        f = Field(lambda Z, idx=idx: t_coeff(idx, Z))
        scale = max(1.0, float(np.max(np.abs(f(X)))))
        assert np.max(np.abs(box(f)(X))) <= 1e-9 * scale


@given(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
       st.integers(0, 4), st.integers(0, 10_000))
def test_homogeneity(c, tl, seed):
    Z = random_biquaternion(np.random.default_rng(seed))
    for idx in indices(tl, tl):
        lhs = complex(t_coeff(idx, c * Z))
        rhs = c ** tl * complex(t_coeff(idx, Z))
        assert abs(lhs - rhs) <= 1e-11 * (1 + abs(rhs))


def test_adjugate_proportionality_constant(rng):
    """The ratio t^l_{m n}(Z^+) / t^l_{-n,-m}(Z) does not depend on Z; its value is recorded."""
    for tl in range(1, 5):
        for r in half_range(tl):
            for c in half_range(tl):
                ratios = [adjugate_ratio(tl, r, c, random_biquaternion(rng)) for _ in range(4)]
                assert np.allclose(ratios, ratios[0], rtol=1e-10)
                assert ratios[0] == pytest.approx(adjugate_constant(tl, r, c), rel=1e-10)
    assert [adjugate_constant(2, r, c) for r in (-2, 0, 2) for c in (-2, 0, 2)] == \
        [1.0, -0.5, 1.0, -2.0, 1.0, -2.0, 1.0, -0.5, 1.0]


def test_character(rng):
    Z = random_biquaternion(rng)
    for tl in range(6):
        assert complex(chi(tl, Z)) == pytest.approx(complex(chi(tl, Z, closed_form=True)), rel=1e-11)
    assert complex(chi(3, Z0)) == pytest.approx(0.984375 + 0.5625j, abs=1e-14)
    # double eigenvalue: confluent branch
    assert complex(chi(4, BiQuaternion.scalar(1.5), closed_form=True)) == pytest.approx(5 * 1.5 ** 4)


def test_inverse_transform_is_polynomial(rng):
    """t^l_{mn}(Z^-1) N(Z)^2l = t^l_{mn}(Z^+), since Z^-1 N(Z) = Z^+."""
    Z = random_biquaternion(rng)
    for idx in indices(3):
        ref = complex(t_coeff(idx.swapped(), Z.plus()))
        assert complex(t_inverse_transform(idx, Z)) == pytest.approx(ref, rel=1e-11, abs=1e-12)
