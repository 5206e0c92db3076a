import numpy as np
import pytest
from numpy.testing import assert_allclose

import golden
from hittime import (
    DimensionError,
    Tolerance,
    fixed_space,
    hs_inner,
    is_psd,
    kron,
    spectral_radius,
    unvec,
    vec,
)
from hittime.examples import qubit_demo_kraus


def test_vec_row_stacking():
    a = np.array([[1 + 2j, 3], [4, 5 - 1j]])
    assert_allclose(vec(a), [1 + 2j, 3, 4, 5 - 1j])


def test_vec_identity():
    assert_allclose(vec(np.eye(2)), [1, 0, 0, 1])


def test_vec_rejects_nonsquare():
    with pytest.raises(DimensionError):
        vec(np.ones((2, 3)))


def test_unvec_identity():
    assert_allclose(unvec([1, 0, 0, 1]), np.eye(2))


def test_unvec_explicit():
    assert_allclose(unvec([1j, 2, 3, 4]), [[1j, 2], [3, 4]])


def test_unvec_zero_vector():
    assert_allclose(unvec(np.zeros(9)), np.zeros((3, 3)))


def test_unvec_rejects_non_square_length():
    with pytest.raises(DimensionError):
        unvec(np.zeros(5))


@pytest.mark.parametrize("n", range(1, 9))
def test_vec_unvec_roundtrip(n):
    rng = np.random.default_rng(n)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    assert_allclose(unvec(vec(a)), a)
    assert_allclose(vec(unvec(vec(a))), vec(a))


def test_kron_identity():
    assert_allclose(kron(np.eye(2), np.eye(2)), np.eye(4))


@pytest.mark.parametrize("n", [2, 3])
def test_kron_pins_row_stacking_convention(n):
    rng = np.random.default_rng(42 + n)
    a, b, x = (
        rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        for _ in range(3)
    )
    assert_allclose(vec(a @ x @ b.T), kron(a, b) @ vec(x), atol=1e-12)


def test_kron_builds_demo_channel():
    left, right = qubit_demo_kraus()
    rep = kron(left, left.conj()) + kron(right, right.conj())
    assert_allclose(rep, golden.QUBIT_PHI, atol=1e-14)


def test_hs_inner_identity():
    assert hs_inner(np.eye(2), np.eye(2)) == pytest.approx(2.0)


def test_hs_inner_conjugate_symmetry():
    rng = np.random.default_rng(1)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert hs_inner(b, a) == pytest.approx(np.conj(hs_inner(a, b)))


def test_hs_inner_equals_vec_inner():
    rng = np.random.default_rng(2)
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    assert hs_inner(b, a) == pytest.approx(np.vdot(vec(b), vec(a)))


def test_hs_inner_self_is_squared_norm():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    value = hs_inner(a, a)
    assert value.imag == pytest.approx(0.0)
    assert value.real == pytest.approx(np.linalg.norm(vec(a)) ** 2)
    assert value.real >= 0


def test_hs_inner_rejects_mismatch():
    with pytest.raises(DimensionError):
        hs_inner(np.eye(2), np.eye(3))


def test_fixed_space_identity():
    basis = fixed_space(np.eye(3))
    assert len(basis) == 3
    gram = np.array([[np.vdot(u, v) for v in basis] for u in basis])
    assert_allclose(gram, np.eye(3), atol=1e-12)


def test_fixed_space_demo_channel_is_one_dimensional():
    left, right = qubit_demo_kraus()
    rep = np.kron(left, left.conj()) + np.kron(right, right.conj())
    basis = fixed_space(rep)
    assert len(basis) == 1
    overlap = abs(np.vdot(basis[0], vec(np.eye(2)) / np.sqrt(2)))
    assert overlap == pytest.approx(1.0, abs=1e-12)


def test_fixed_space_rotation_is_empty():
    rotation = np.array([[0.0, -1.0], [1.0, 0.0]])
    assert fixed_space(rotation) == []


def test_fixed_space_planted_subspace():
    rng = np.random.default_rng(7)
    q, _ = np.linalg.qr(rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5)))
    b = q[:, :2]
    m = b @ b.conj().T + 0.3 * (np.eye(5) - b @ b.conj().T)
    basis = fixed_space(m)
    assert len(basis) == 2
    for v in basis:
        assert np.linalg.norm(m @ v - v) <= 1e-10
    gram = np.array([[np.vdot(u, v) for v in basis] for u in basis])
    assert_allclose(gram, np.eye(2), atol=1e-10)


def test_is_psd_identity():
    check = is_psd(np.eye(4))
    assert check.ok
    assert check.min_eigenvalue == pytest.approx(1.0)


def test_is_psd_indefinite():
    check = is_psd(np.diag([1.0, -1.0]))
    assert not check.ok
    assert check.min_eigenvalue == pytest.approx(-1.0)


def test_is_psd_half_identity_strictly_positive():
    check = is_psd(np.eye(2) / 2)
    assert check.ok
    assert check.min_eigenvalue == pytest.approx(0.5)
    assert check.min_eigenvalue > Tolerance().atol


def test_is_psd_rejects_non_hermitian():
    assert not is_psd(np.array([[0.0, 1.0], [0.0, 0.0]])).ok


def test_is_psd_conjugated_diagonal():
    rng = np.random.default_rng(11)
    q, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
    d = np.diag(rng.uniform(0.0, 2.0, size=4))
    assert is_psd(q.conj().T @ d @ q).ok


def test_spectral_radius_identity():
    assert spectral_radius(np.eye(4)) == pytest.approx(1.0)


def test_spectral_radius_nilpotent():
    assert spectral_radius(np.array([[0.0, 1.0], [0.0, 0.0]])) == pytest.approx(0.0)


def test_spectral_radius_survival_map_contracts(qubit_solution):
    radius = spectral_radius(
        qubit_solution.projectors.qq_rep @ qubit_solution.map.rep
    )
    assert radius == pytest.approx(5.0 / 6.0, abs=1e-12)
    assert radius < 1.0
