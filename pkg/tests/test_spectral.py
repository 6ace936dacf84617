import numpy as np
import pytest

from susy8v import hilbert, spectral, vertex
from susy8v.hilbert import LinearMap
from susy8v.vertex import VertexWeights


class TestCluster:
    def test_examples(self):
        assert spectral.cluster([8.0, 8.0 + 1e-12, 5.0], 1e-8) == [(pytest.approx(8.0), 2), (5.0, 1)]
        assert spectral.cluster([], 1e-8) == []

    def test_chaining(self):
        cl = spectral.cluster([1.0, 1.0 + 2e-8, 1.0 + 4e-8], 3e-8)
        assert len(cl) == 1 and cl[0][1] == 3

    def test_multiplicities_sum(self, rng):
        vals = rng.standard_normal(50) + 1j * rng.standard_normal(50)
        vals = np.concatenate([vals, vals[:10]])
        cl = spectral.cluster(vals, 1e-9)
        assert sum(m for _, m in cl) == vals.size

    def test_deterministic_under_permutation(self, rng):
        vals = np.round(rng.standard_normal(30), 2)
        assert spectral.cluster(vals, 1e-3) == spectral.cluster(vals[::-1], 1e-3)

    def test_isolated(self):
        assert spectral.isolated_cluster([8, 8, 7.9, 1], 8, 1e-6) == (2, pytest.approx(0.1))
        assert spectral.isolated_cluster([1, 2], 8, 1e-6)[0] == 0


class TestDenseHermitian:
    def test_diagonal(self):
        r = spectral.eig_dense_hermitian(np.diag([1.0, -1.0]))
        np.testing.assert_allclose(r.eigenvalues, [1, -1])

    def test_xyz_bottom(self):
        r = spectral.eig_dense_hermitian(hilbert.xyz_hamiltonian_susy(3, 1.0))
        assert r.clusters[-1][0].real == pytest.approx(-3.0)
        assert r.clusters[-1][1] == 2

    def test_roundtrip(self, rng):
        A = rng.standard_normal((64, 64)) + 1j * rng.standard_normal((64, 64))
        A = A + A.conj().T
        r = spectral.eig_dense_hermitian(A)
        V = r.eigenvectors
        assert np.abs(V @ np.diag(r.eigenvalues) @ V.conj().T - A).max() < 1e-11
        assert np.abs(V.conj().T @ V - np.eye(64)).max() < 1e-11
        assert np.abs(r.eigenvalues.imag).max() < 1e-10

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            spectral.eig_dense_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_budget(self):
        with pytest.raises(spectral.BudgetError):
            spectral.eig_dense_hermitian(np.eye(16), max_dim=8)

    def test_projected(self):
        L, zeta = 5, 0.5
        B = hilbert.alternate_cyclic_basis(L)
        r = spectral.eig_dense_hermitian(hilbert.xyz_hamiltonian_susy(L, zeta), project=B)
        assert r.eigenvalues.real.min() == pytest.approx(hilbert.ground_energy(L, zeta))
        assert r.eigenvectors.shape == (32, B.shape[1])


class TestDenseGeneral:
    def test_rotation(self):
        r = spectral.eig_dense_general(np.array([[0.0, -1.0], [1.0, 0.0]]))
        np.testing.assert_allclose(r.eigenvalues, [1j, -1j], atol=1e-15)

    def test_companion_cube_roots(self):
        C = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=float)
        r = spectral.eig_dense_general(C)
        roots = np.exp(2j * np.pi * np.arange(3) / 3)
        for z in roots:
            assert np.min(np.abs(r.eigenvalues - z)) < 1e-12

    def test_transfer_matrix(self):
        T = vertex.transfer_matrix_dense(VertexWeights(1, 1, 1, 1), 3)
        r = spectral.eig_dense_general(T)
        assert r.multiplicity_near(8.0, 1e-8) == 2
        assert r.residual_bound < 1e-8 * np.linalg.norm(T, 2)


class TestKrylov:
    def test_diagonal(self):
        d = np.arange(1, 101, dtype=float)
        for symmetric in (True, False):
            r = spectral.krylov_extremal(lambda x: d * x, 100, 3, symmetric)
            np.testing.assert_allclose(r.eigenvalues.real, [100, 99, 98], rtol=1e-10)

    @pytest.mark.parametrize("L", [5, 8, 10])
    def test_dense_agreement(self, L, rng):
        H = hilbert.xyz_hamiltonian_susy(L, 0.6)
        dense = spectral.eig_dense_hermitian(H).eigenvalues.real[::-1]
        r = spectral.krylov_extremal(H, 2**L, 3, True, which="smallest")
        np.testing.assert_allclose(np.sort(r.eigenvalues.real), dense[:3], rtol=1e-8)

    def test_degenerate_ground_state(self):
        H = hilbert.xyz_hamiltonian_susy(9, 0.5)
        r = spectral.krylov_extremal(H, 2**9, 2, True, which="smallest")
        np.testing.assert_allclose(r.eigenvalues.real, hilbert.ground_energy(9, 0.5), rtol=1e-10)

    def test_nonsymmetric_transfer(self, rng):
        w = vertex.random_weights(rng)
        T = vertex.transfer_matrix(w, 6)
        r = spectral.krylov_extremal(T, 64, 2, False, which="magnitude")
        dense = np.linalg.eigvals(T.to_dense())
        assert np.abs(r.eigenvalues[0]) == pytest.approx(np.abs(dense).max(), rel=1e-8)

    def test_lanczos_argument_checks(self):
        with pytest.raises(ValueError):
            spectral.lanczos_extremal(lambda x: x, 10, 10)
        with pytest.raises(ValueError):
            spectral.lanczos_extremal(lambda x: x, 10, 1, which="middle")


class TestPowerIteration:
    def test_perron_frobenius(self, rng):
        for _ in range(5):
            A = rng.uniform(0.1, 1.0, size=(50, 50))
            r = spectral.power_iteration(lambda v: A @ v, np.ones(50))
            v = r.vector / r.vector[0]
            assert np.all(v.real > 0)
            assert r.value.real == pytest.approx(np.abs(np.linalg.eigvals(A)).max(), rel=1e-9)

    def test_non_convergence(self):
        R = np.array([[0.0, -1.0], [1.0, 0.0]])
        with pytest.raises(spectral.ConvergenceError):
            spectral.power_iteration(lambda v: R @ v, np.array([1.0, 0.0]), maxiter=50)
        r = spectral.power_iteration(lambda v: R @ v, np.array([1.0, 0.0]), maxiter=50, strict=False)
        assert not r.converged

    def test_linear_map_input(self):
        op = LinearMap.dense(np.diag([3.0, 1.0]), 1)
        r = spectral.power_iteration(op.apply, np.array([1.0, 1.0]))
        assert r.value.real == pytest.approx(3.0)
