import math

import numpy as np
import pytest

from entkit.qstate import (
    DensityMatrix,
    bell_pair,
    bell_vector,
    ghz,
    hermitian_eig,
    kron,
    maximally_mixed,
    partial_trace,
    partial_transpose,
    pure_state,
    random_entangled_block,
    random_pure,
    relative_entropy,
    von_neumann_entropy,
    werner,
)

RNG = np.random.default_rng(7)


def random_hermitian(d, rng=RNG):
    m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (m + m.conj().T) / 2


def random_density(dims, rng=RNG, rank=None):
    d = int(np.prod(dims))
    rank = rank or d
    m = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = m @ m.conj().T
    return DensityMatrix(rho / np.trace(rho).real, dims)


# --- kron --------------------------------------------------------------


def test_kron_identities():
    assert np.allclose(kron(np.eye(2), np.eye(2)), np.eye(4))


def test_kron_basis_bookkeeping():
    p0 = np.diag([1.0, 0.0])
    p1 = np.diag([0.0, 1.0])
    assert np.allclose(kron(p0, p1), np.diag([0.0, 1.0, 0.0, 0.0]))


def test_kron_trace_multiplicative():
    rng = np.random.default_rng(11)
    for _ in range(100):
        a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert np.isclose(np.trace(kron(a, b)), np.trace(a) * np.trace(b))


# --- hermitian_eig -----------------------------------------------------


def test_eig_diagonal():
    spec = hermitian_eig(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(spec.eigenvalues, [1.0, 2.0, 3.0])


def test_eig_pauli_x():
    x = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert np.allclose(hermitian_eig(x).eigenvalues, [-1.0, 1.0])


def test_eig_matches_lapack_and_reconstructs():
    for d in (2, 3, 4, 5, 8, 16):
        h = random_hermitian(d)
        spec = hermitian_eig(h)
        assert np.max(np.abs(spec.eigenvalues - np.linalg.eigvalsh(h))) < 1e-9
        recon = spec.basis @ np.diag(spec.eigenvalues) @ spec.basis.conj().T
        assert np.max(np.abs(recon - h)) < 1e-8
        gram = spec.basis.conj().T @ spec.basis
        assert np.max(np.abs(gram - np.eye(d))) < 1e-8


def test_eig_sum_equals_trace():
    for _ in range(20):
        h = random_hermitian(6)
        spec = hermitian_eig(h)
        assert abs(spec.eigenvalues.sum() - np.trace(h).real) < 1e-9


def test_eig_rejects_non_hermitian():
    with pytest.raises(ValueError):
        hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_eig_zero_matrix():
    spec = hermitian_eig(np.zeros((3, 3)))
    assert np.allclose(spec.eigenvalues, 0.0)


# --- DensityMatrix -----------------------------------------------------


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(4) / 2, (2, 2))  # trace 2
    with pytest.raises(ValueError):
        DensityMatrix(np.array([[0.5, 0.5], [0.4, 0.5]]), (2,))  # non-Hermitian
    with pytest.raises(ValueError):
        DensityMatrix(np.diag([1.5, -0.5]), (2,))  # negative eigenvalue
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(4) / 4, (2,))  # dims mismatch


def test_density_matrix_immutable():
    rho = maximally_mixed((2, 2))
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 9.0


def test_density_matrix_json_roundtrip():
    rho = random_density((2, 2))
    again = DensityMatrix.from_json_dict(rho.to_json_dict())
    assert again.dims == rho.dims
    assert np.allclose(again.matrix, rho.matrix)


def test_density_matrix_json_malformed():
    with pytest.raises(ValueError):
        DensityMatrix.from_json_dict({"dims": [2]})


# --- partial trace -----------------------------------------------------


def test_partial_trace_of_product():
    rng = np.random.default_rng(3)
    rho_a = random_density((2,), rng)
    rho_b = random_density((2,), rng)
    joint = DensityMatrix(kron(rho_a.matrix, rho_b.matrix), (2, 2))
    assert np.allclose(partial_trace(joint, (0,)).matrix, rho_a.matrix)
    assert np.allclose(partial_trace(joint, (1,)).matrix, rho_b.matrix)


def test_partial_trace_bell_is_maximally_mixed():
    reduced = partial_trace(bell_pair(), (0,))
    assert np.allclose(reduced.matrix, np.eye(2) / 2)


def test_partial_trace_preserves_trace_and_psd():
    rng = np.random.default_rng(5)
    for _ in range(1000):
        rho = random_density((2, 2), rng, rank=int(rng.integers(1, 5)))
        keep = (0,) if rng.random() < 0.5 else (1,)
        reduced = partial_trace(rho, keep)  # construction re-validates PSD/trace
        assert abs(np.trace(reduced.matrix).real - 1.0) < 1e-10


def test_partial_trace_three_parties():
    rho = ghz(3)
    reduced = partial_trace(rho, (0, 2))
    assert reduced.dims == (2, 2)
    assert np.allclose(reduced.matrix, np.diag([0.5, 0.0, 0.0, 0.5]))


def test_partial_trace_bad_arguments():
    rho = maximally_mixed((2, 2))
    with pytest.raises(ValueError):
        partial_trace(rho, ())
    with pytest.raises(ValueError):
        partial_trace(rho, (2,))


# --- partial transpose -------------------------------------------------


def _as_unchecked(mat, dims):
    # PT output can be non-PSD; wrap it unvalidated for the involution test
    shell = object.__new__(DensityMatrix)
    shell.dims = dims
    shell.matrix = mat
    return shell


def test_partial_transpose_involution():
    rng = np.random.default_rng(9)
    for _ in range(50):
        rho = random_density((2, 2), rng)
        pt = partial_transpose(rho, (1,))
        back = partial_transpose(_as_unchecked(pt, (2, 2)), (1,))
        assert np.allclose(back, rho.matrix)


def test_partial_transpose_product_spectrum_unchanged():
    rng = np.random.default_rng(13)
    rho_a = random_density((2,), rng)
    rho_b = random_density((2,), rng)
    joint = DensityMatrix(kron(rho_a.matrix, rho_b.matrix), (2, 2))
    pt = partial_transpose(joint, (1,))
    assert np.allclose(np.linalg.eigvalsh(pt), np.linalg.eigvalsh(joint.matrix))


def test_partial_transpose_bell_spectrum():
    pt = partial_transpose(bell_pair(), (1,))
    assert np.allclose(np.linalg.eigvalsh(pt), [-0.5, 0.5, 0.5, 0.5])


def test_partial_transpose_preserves_invariants():
    rng = np.random.default_rng(17)
    for _ in range(50):
        rho = random_density((2, 2), rng)
        pt = partial_transpose(rho, (0,))
        assert abs(np.trace(pt).real - 1.0) < 1e-12
        assert np.max(np.abs(pt - pt.conj().T)) < 1e-12
        assert np.isclose(np.linalg.norm(pt), np.linalg.norm(rho.matrix))


# --- entropies ---------------------------------------------------------


def test_entropy_pure_state():
    assert abs(von_neumann_entropy(bell_pair())) < 1e-10


def test_entropy_maximally_mixed():
    assert abs(von_neumann_entropy(maximally_mixed((2, 2))) - math.log(4)) < 1e-10


def test_entropy_two_level():
    rho = DensityMatrix(np.diag([0.75, 0.25]), (2,))
    expected = -0.75 * math.log(0.75) - 0.25 * math.log(0.25)
    assert abs(von_neumann_entropy(rho) - expected) < 1e-12


def test_relative_entropy_self_is_zero():
    rho = random_density((2, 2))
    assert abs(relative_entropy(rho, rho)) < 1e-10


def test_relative_entropy_two_level_closed_form():
    rho = pure_state([1.0, 0.0], (2,))
    assert abs(relative_entropy(rho, maximally_mixed((2,))) - math.log(2)) < 1e-12


def test_relative_entropy_disjoint_support():
    ket01 = np.zeros(4)
    ket01[1] = 1.0
    assert relative_entropy(bell_pair(), pure_state(ket01, (2, 2))) == math.inf


def test_relative_entropy_nonnegative_and_faithful():
    rng = np.random.default_rng(23)
    for dims in ((2, 2), (2, 2, 2)):
        for _ in range(50):
            rho = random_density(dims, rng)
            sigma = random_density(dims, rng)
            s = relative_entropy(rho, sigma)
            assert s >= -1e-10
            if s <= 1e-10:
                assert np.linalg.norm(rho.matrix - sigma.matrix) <= 1e-4


def test_relative_entropy_dim_mismatch():
    with pytest.raises(ValueError):
        relative_entropy(maximally_mixed((2,)), maximally_mixed((2, 2)))


# --- random states -----------------------------------------------------


def test_random_pure_normalized_and_deterministic():
    v1 = random_pure(4, seed=42)
    v2 = random_pure(4, seed=42)
    assert np.allclose(v1, v2)
    assert abs(np.linalg.norm(v1) - 1.0) < 1e-12
    assert not np.allclose(v1, random_pure(4, seed=43))


def test_random_entangled_block_cut_purities():
    for k in (2, 3):
        vec = random_entangled_block(k, seed=5)
        assert abs(np.linalg.norm(vec) - 1.0) < 1e-12
        rho = pure_state(vec, (2,) * k)
        for i in range(k):
            reduced = partial_trace(rho, (i,))
            purity = float(np.sum(np.abs(reduced.matrix) ** 2))
            assert purity < 1.0 - 1e-6


def test_random_entangled_block_deterministic():
    assert np.allclose(random_entangled_block(2, 9), random_entangled_block(2, 9))


def test_random_entangled_block_needs_two_parties():
    with pytest.raises(ValueError):
        random_entangled_block(1, seed=0)


def test_werner_boundary_matrix():
    assert np.allclose(werner(0.0).matrix, np.eye(4) / 4)
    assert np.allclose(werner(1.0).matrix, bell_pair().matrix)
    assert np.allclose(
        werner(0.5).matrix,
        0.5 * np.outer(bell_vector(), bell_vector().conj()) + 0.5 * np.eye(4) / 4,
    )
