"""Tests for bulk-boundary pairs and commutative decomposition."""

import numpy as np
import pytest

from lgcardy.cardy import (
    CardyFrobeniusAlgebra,
    cardy_residual_coordinates,
    cardy_residual_trace,
    cf_from_dict,
    cf_to_dict,
    decompose_commutative,
    matrix_cf,
    orthogonal_sum_cf,
    phi_star,
    quaternionic_cf,
    verify_cardy_frobenius,
)
from lgcardy.frobenius import (
    FiniteAlgebra,
    FrobeniusPair,
    number_pair,
    quaternion_pair,
    zero_pair,
)


def test_quaternionic_block_passes():
    cf = quaternionic_cf(0.7)
    rep = verify_cardy_frobenius(cf)
    assert rep.passed, rep.summary()
    # transfer of the boundary unit is 2/rho times the bulk unit
    ps = phi_star(cf)
    assert ps.shape == (1, 4)
    assert ps[0, 0] == pytest.approx(2.0 / 0.7)
    assert np.allclose(ps[0, 1:], 0.0)


def test_quaternionic_block_trace_values():
    rho = 0.7
    cf = quaternionic_cf(rho)
    alg = cf.b.algebra
    # trace of b -> 1 b 1 is the dimension, 4
    one = alg.unit
    tr = np.trace(alg.left_action_matrix(one) @ alg.right_action_matrix(one))
    assert tr == pytest.approx(4.0)
    # and the bulk side gives the same: rho^2 (2/rho)^2 = 4
    ps = phi_star(cf)
    lhs = (ps.T @ cf.a.gram() @ ps)[0, 0]
    assert lhs == pytest.approx(4.0)
    # mixed pair (I, 1): both sides vanish
    I = np.array([0, 1, 0, 0], dtype=complex)
    tr_i = np.trace(alg.left_action_matrix(I) @ alg.right_action_matrix(one))
    assert abs(tr_i) < 1e-14


def test_matrix_block_passes():
    for m in (2, 3):
        cf = matrix_cf(m, 0.4 - 1.1j)
        rep = verify_cardy_frobenius(cf)
        assert rep.passed, rep.summary()
        assert rep.residuals["cardy_trace"] < 1e-12
        assert rep.residuals["cardy_coordinate"] < 1e-12


def test_trace_and_coordinate_routes_agree():
    for cf in (quaternionic_cf(1.3 + 0.2j), matrix_cf(2, 0.9)):
        r1 = cardy_residual_trace(cf)
        r2 = cardy_residual_coordinates(cf)
        assert abs(r1 - r2) < 1e-10


def test_wrong_scale_fails_cardy_only():
    # bulk scale rho^3 instead of rho^2 breaks the transfer identity
    rho = 2.0
    phi = np.zeros((4, 1), dtype=complex)
    phi[0, 0] = 1.0
    cf = CardyFrobeniusAlgebra(number_pair(rho**3), quaternion_pair(rho), phi)
    rep = verify_cardy_frobenius(cf)
    assert not rep.passed
    assert rep.residuals["cardy_trace"] == pytest.approx(2.0)
    assert rep.residuals["cardy_coordinate"] == pytest.approx(2.0)
    for key in ("commutativity", "homomorphism", "unit_preservation", "centrality"):
        assert rep.residuals[key] < 1e-12


def test_noncentral_image_detected():
    # diagonal matrices inside M2 map by inclusion: a homomorphism with
    # non-central image
    mul = np.zeros((2, 2, 2), dtype=complex)
    mul[0, 0, 0] = 1.0
    mul[1, 1, 1] = 1.0
    a = FrobeniusPair(FiniteAlgebra(mul, [1.0, 1.0]), [1.0, 1.0])
    from lgcardy.frobenius import matrix_pair

    b = matrix_pair(2, 1.0)
    phi = np.zeros((4, 2), dtype=complex)
    phi[0, 0] = 1.0  # e1 -> E11
    phi[3, 1] = 1.0  # e2 -> E22
    rep = verify_cardy_frobenius(CardyFrobeniusAlgebra(a, b, phi))
    assert not rep.passed
    assert rep.residuals["centrality"] > 0.5
    assert rep.residuals["homomorphism"] < 1e-12
    assert rep.residuals["unit_preservation"] < 1e-12


def test_zero_dim_boundary_is_vacuous():
    cf = CardyFrobeniusAlgebra(number_pair(3.0), zero_pair(), np.zeros((0, 1)))
    rep = verify_cardy_frobenius(cf)
    assert rep.passed
    assert "cardy_trace" not in rep.residuals


def test_orthogonal_sum_cf():
    cf = orthogonal_sum_cf(quaternionic_cf(0.5), quaternionic_cf(1.0j))
    assert cf.a.algebra.dim == 2
    assert cf.b.algebra.dim == 8
    assert cf.phi.shape == (8, 2)
    rep = verify_cardy_frobenius(cf)
    assert rep.passed, rep.summary()
    # adding a trivial block with no boundary keeps everything valid
    trivial = CardyFrobeniusAlgebra(number_pair(2.5), zero_pair(), np.zeros((0, 1)))
    bigger = orthogonal_sum_cf(cf, trivial)
    assert bigger.a.algebra.dim == 3
    assert bigger.b.algebra.dim == 8
    assert verify_cardy_frobenius(bigger).passed


def test_decompose_commutative_polynomial_case():
    # C[z]/(3z^2 - 3) in the basis (1, z): z*z = 1, l = (0, 1/3)
    mul = np.zeros((2, 2, 2), dtype=complex)
    mul[0, 0, 0] = 1.0
    mul[0, 1, 1] = 1.0
    mul[1, 0, 1] = 1.0
    mul[1, 1, 0] = 1.0
    pair = FrobeniusPair(FiniteAlgebra(mul, [1.0, 0.0]), [0.0, 1.0 / 3.0])
    idems, weights = decompose_commutative(pair)
    assert np.allclose(sorted(weights.real), [-1.0 / 6.0, 1.0 / 6.0])
    # the idempotents are (1 -+ z)/2
    for e, w in zip(idems, weights):
        expect = np.array([0.5, 0.5]) if w.real > 0 else np.array([0.5, -0.5])
        assert np.allclose(e, expect, atol=1e-10)


def test_decompose_rejects_nilpotents():
    # C[z]/(z^2): Frobenius but not semisimple
    mul = np.zeros((2, 2, 2), dtype=complex)
    mul[0, 0, 0] = 1.0
    mul[0, 1, 1] = 1.0
    mul[1, 0, 1] = 1.0
    pair = FrobeniusPair(FiniteAlgebra(mul, [1.0, 0.0]), [0.0, 1.0])
    with pytest.raises(ValueError, match="not semisimple"):
        decompose_commutative(pair)


def test_decompose_rebuild_gram():
    # random change of basis on a sum of five 1-dim blocks, then recover
    rng = np.random.default_rng(11)
    d = 5
    lam = rng.normal(size=d) + 1j * rng.normal(size=d)
    s = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    s_inv = np.linalg.inv(s)
    mul = np.zeros((d, d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            mul[i, j, :] = s_inv @ (s[:, i] * s[:, j])
    unit = s_inv @ np.ones(d)
    functional = lam @ s
    pair = FrobeniusPair(FiniteAlgebra(mul, unit), functional)
    idems, weights = decompose_commutative(pair, seed=3)
    assert np.allclose(
        np.sort_complex(np.asarray(weights)), np.sort_complex(lam), atol=1e-8
    )
    m = np.stack(idems, axis=1)
    rebuilt = np.linalg.inv(m).T @ np.diag(weights) @ np.linalg.inv(m)
    assert np.allclose(rebuilt, pair.gram(), atol=1e-8)


def test_cf_json_round_trip():
    cf = orthogonal_sum_cf(quaternionic_cf(0.5), matrix_cf(2, 1.5), name="two_blocks")
    d = cf_to_dict(cf)
    back = cf_from_dict(d)
    assert back.name == "two_blocks"
    assert np.allclose(back.phi, cf.phi)
    assert np.allclose(back.a.gram(), cf.a.gram())
    assert np.allclose(back.b.algebra.mul, cf.b.algebra.mul)
    assert verify_cardy_frobenius(back).passed
