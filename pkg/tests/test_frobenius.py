"""Tests for algebra construction and Frobenius pair verification."""

import numpy as np
import pytest

from lgcardy.frobenius import (
    FiniteAlgebra,
    FrobeniusPair,
    QuaternionElement,
    complex_to_json,
    json_to_complex,
    m2_quaternion_isomorphism,
    matrix_pair,
    number_pair,
    orthogonal_sum,
    orthogonal_sum_list,
    pair_from_dict,
    pair_to_dict,
    quaternion_pair,
    verify_frobenius,
    zero_pair,
)


def test_number_pair():
    p = number_pair(0.5)
    rep = verify_frobenius(p, commutative=True)
    assert rep.passed
    assert p.gram()[0, 0] == pytest.approx(0.5)
    with pytest.raises(ValueError, match="degenerate functional"):
        number_pair(0.0)


def test_matrix_pair_products():
    p = matrix_pair(2, 1.0)
    alg = p.algebra
    # E12 * E21 = E11, E12 * E12 = 0
    e12 = np.zeros(4)
    e12[1] = 1.0
    e21 = np.zeros(4)
    e21[2] = 1.0
    prod = alg.multiply(e12, e21)
    expect = np.zeros(4)
    expect[0] = 1.0
    assert np.allclose(prod, expect)
    assert np.allclose(alg.multiply(e12, e12), 0.0)
    rep = verify_frobenius(p)
    assert rep.passed
    # matrices do not commute, so the commutative check must fire
    rep = verify_frobenius(p, commutative=True)
    assert not rep.passed
    assert rep.residuals["commutativity"] > 0.5


def test_matrix_pair_gram():
    mu = 0.7 - 0.2j
    p = matrix_pair(3, mu)
    g = p.gram()
    # (E_kr, E_lm) = mu when r = l and m = k, else 0
    for k in range(3):
        for r in range(3):
            for l in range(3):
                for m in range(3):
                    expect = mu if (r == l and m == k) else 0.0
                    assert g[k * 3 + r, l * 3 + m] == pytest.approx(expect)


def test_quaternion_relations():
    p = quaternion_pair(1.0)
    alg = p.algebra
    I = np.array([0, 1, 0, 0], dtype=complex)
    J = np.array([0, 0, 1, 0], dtype=complex)
    K = np.array([0, 0, 0, 1], dtype=complex)
    assert np.allclose(alg.multiply(I, J), K)
    assert np.allclose(alg.multiply(J, K), I)
    assert np.allclose(alg.multiply(K, I), J)
    assert np.allclose(alg.multiply(J, I), -K)
    for u in (I, J, K):
        assert np.allclose(alg.multiply(u, u), -alg.unit)
    assert verify_frobenius(p).passed


def test_quaternion_gram():
    rho = 0.25 + 0.1j
    p = quaternion_pair(rho)
    g = p.gram()
    assert np.allclose(g, np.diag([2, -2, -2, -2]) * rho)
    assert p.apply(p.algebra.unit) == pytest.approx(2 * rho)


def test_quaternion_element_wrapper():
    q1 = QuaternionElement(1.0, 2.0, 0.0, 0.0)
    q2 = QuaternionElement(0.0, 0.0, 1.0, 0.0)
    prod = q1 * q2
    # (1 + 2I) J = J + 2K
    assert np.allclose(prod.v, [0, 0, 1, 2])
    norm = q1 * q1.conjugate()
    assert np.allclose(norm.v, [5, 0, 0, 0])


def test_orthogonal_sum():
    p = orthogonal_sum(number_pair(2.0), quaternion_pair(0.5))
    assert p.algebra.dim == 5
    assert p.algebra.blocks == [(0, 1), (1, 4)]
    rep = verify_frobenius(p)
    assert rep.passed
    # cross-block products vanish
    x = np.zeros(5)
    x[0] = 1.0
    y = np.zeros(5)
    y[1] = 1.0
    assert np.allclose(p.algebra.multiply(x, y), 0.0)
    # folding over a list keeps one block per summand
    q = orthogonal_sum_list([number_pair(1.0), number_pair(2.0), quaternion_pair(1.0)])
    assert q.algebra.blocks == [(0, 1), (1, 1), (2, 4)]


def test_orthogonal_sum_with_zero_dim():
    z = zero_pair()
    assert verify_frobenius(z).passed
    p = orthogonal_sum(number_pair(2.0), z)
    assert p.algebra.dim == 1
    assert p.algebra.blocks == [(0, 1)]
    assert verify_frobenius(p).passed
    q = orthogonal_sum(z, quaternion_pair(1.0))
    assert q.algebra.dim == 4
    assert np.allclose(q.gram(), np.diag([2.0, -2, -2, -2]))


def test_degenerate_form_detected():
    # zero functional on a 1-dim algebra: Gram is singular
    mul = np.ones((1, 1, 1), dtype=complex)
    pair = FrobeniusPair(FiniteAlgebra(mul, [1.0]), [0.0])
    rep = verify_frobenius(pair)
    assert not rep.passed
    assert rep.margins["form_nondegeneracy"] == pytest.approx(0.0)


def test_broken_associativity_detected():
    mul = np.zeros((3, 3, 3), dtype=complex)
    for i in range(3):  # e0 is a two-sided unit
        mul[0, i, i] = 1.0
        mul[i, 0, i] = 1.0
    mul[0, 0, 0] = 1.0
    mul[1, 1, 2] = 1.0  # e1*e1 = e2
    mul[1, 2, 0] = 1.0  # e1*e2 = e0, but e2*e2 = 0: not associative
    mul[2, 1, 0] = 1.0
    pair = FrobeniusPair(FiniteAlgebra(mul, [1.0, 0.0, 0.0]), [0.0, 0.0, 1.0])
    rep = verify_frobenius(pair)
    assert rep.residuals["associativity"] > 1e-3
    assert not rep.passed


def test_m2_quaternion_isomorphism():
    psi, residual = m2_quaternion_isomorphism()
    assert residual < 1e-12
    quat = quaternion_pair(0.3 - 0.8j)
    mat = matrix_pair(2, 0.3 - 0.8j)
    rng = np.random.default_rng(5)
    for _ in range(10):
        x = rng.normal(size=4) + 1j * rng.normal(size=4)
        y = rng.normal(size=4) + 1j * rng.normal(size=4)
        lhs = psi @ mat.algebra.multiply(x, y)
        rhs = quat.algebra.multiply(psi @ x, psi @ y)
        assert np.allclose(lhs, rhs, atol=1e-12)
        # trace functionals agree through the map
        assert quat.apply(psi @ x) == pytest.approx(mat.apply(x), abs=1e-12)
    assert np.allclose(psi @ mat.algebra.unit, quat.algebra.unit)
    # frozen images: E11 = (1 + iI)/2, E12 = -(J + iK)/2 as quaternions
    assert np.allclose(psi[:, 0], [0.5, 0.5j, 0, 0])
    assert np.allclose(psi[:, 1], [0, 0, -0.5, -0.5j])
    assert np.allclose(psi[:, 2], [0, 0, 0.5, -0.5j])
    assert np.allclose(psi[:, 3], [0.5, -0.5j, 0, 0])


def test_json_round_trip():
    p = orthogonal_sum(quaternion_pair(1j), number_pair(3.0), name="mix")
    d = pair_to_dict(p)
    assert d["dim"] == 5
    assert len(d["structure"]) == 125 and len(d["structure"][0]) == 2
    q = pair_from_dict(d)
    assert q.name == "mix"
    assert np.allclose(q.algebra.mul, p.algebra.mul)
    assert np.allclose(q.functional, p.functional)
    assert q.algebra.blocks == p.algebra.blocks
    x = json_to_complex(complex_to_json(np.array([[1 + 2j, 0], [3, -1j]])))
    assert np.allclose(x, [[1 + 2j, 0], [3, -1j]])
