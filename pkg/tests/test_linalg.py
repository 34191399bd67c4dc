import numpy as np
import pytest

from mubpurity.linalg import (
    PAULI_X,
    PAULI_Z,
    DensityMatrix,
    PureState,
    density_from_json,
    density_to_json,
    hermitian_eigenvalues,
    matrix_from_json,
    matrix_to_json,
    partial_trace,
    partial_trace_matrix,
    partial_transpose,
    purity,
    tensor,
)

BELL = np.zeros((4, 4), dtype=complex)
BELL[0, 0] = BELL[0, 3] = BELL[3, 0] = BELL[3, 3] = 0.5


def _rng(seed=0):
    return np.random.default_rng(seed)


def _random_complex(rng, n, m=None):
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


def _random_density_matrix(rng, n):
    g = _random_complex(rng, n)
    m = g @ g.conj().T
    return m / np.trace(m).real


class TestTensor:
    def test_identity(self):
        assert np.array_equal(tensor(np.eye(2), np.eye(2)), np.eye(4))

    def test_computational_projectors(self):
        p0 = np.diag([1.0, 0.0])
        p1 = np.diag([0.0, 1.0])
        out = tensor(p0, p1)
        expected = np.zeros((4, 4))
        expected[1, 1] = 1.0  # |01>
        assert np.array_equal(out, expected)

    def test_pauli_zz(self):
        # hand-expanded 4x4 Kronecker product
        assert np.array_equal(tensor(PAULI_Z, PAULI_Z), np.diag([1.0, -1.0, -1.0, 1.0]))

    def test_dimensions_multiply(self):
        out = tensor(np.ones((2, 3)), np.ones((4, 5)))
        assert out.shape == (8, 15)

    def test_associativity_integer_exact(self):
        rng = _rng(1)
        a, b, c = (rng.integers(-5, 5, size=(2, 2)).astype(complex) for _ in range(3))
        assert np.array_equal(tensor(tensor(a, b), c), tensor(a, tensor(b, c)))

    def test_associativity_random_complex(self):
        rng = _rng(2)
        for _ in range(20):
            a, b, c = (_random_complex(rng, 2) for _ in range(3))
            lhs = tensor(tensor(a, b), c)
            rhs = tensor(a, tensor(b, c))
            assert np.abs(lhs - rhs).max() <= 1e-14

    def test_rejects_nan(self):
        bad = np.array([[np.nan, 0], [0, 1]])
        with pytest.raises(ValueError):
            tensor(bad, np.eye(2))


class TestPartialTrace:
    def test_bell_marginal(self):
        rho = DensityMatrix(BELL, (2, 2))
        for keep in ([0], [1]):
            out = partial_trace(rho, keep)
            assert np.abs(out.matrix - np.eye(2) / 2).max() <= 1e-14
            assert out.dims == (2,)

    def test_product_factorization(self):
        rng = _rng(3)
        for _ in range(20):
            a = _random_density_matrix(rng, 2)
            b = _random_density_matrix(rng, 3)
            rho = DensityMatrix(np.kron(a, b), (2, 3))
            assert np.abs(partial_trace(rho, [0]).matrix - a).max() <= 1e-14
            assert np.abs(partial_trace(rho, [1]).matrix - b).max() <= 1e-14

    def test_werner_marginal_direct_computation(self):
        # independent oracle: assemble the 4x4 family state and sum the
        # diagonal A-blocks by hand
        x = 0.5
        psi = np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2.0)
        m = x * np.outer(psi, psi) + (1.0 - x) / 4.0 * np.eye(4)
        expected = m[0:2, 0:2] + m[2:4, 2:4]
        assert np.abs(expected - np.eye(2) / 2).max() <= 1e-15
        out = partial_trace(DensityMatrix(m, (2, 2)), [1])
        assert np.abs(out.matrix - expected).max() <= 1e-14

    def test_trace_preserved_three_factors(self):
        rng = _rng(4)
        m = _random_density_matrix(rng, 12)
        out = partial_trace_matrix(m, (2, 3, 2), keep=(0, 2))
        assert out.shape == (4, 4)
        assert abs(np.trace(out) - np.trace(m)) <= 1e-13

    def test_invalid_subsystem(self):
        rho = DensityMatrix(np.eye(4) / 4, (2, 2))
        with pytest.raises(ValueError):
            partial_trace(rho, [2])
        with pytest.raises(ValueError):
            partial_trace(rho, [])


class TestPartialTranspose:
    def test_involution_exact(self):
        rng = _rng(5)
        m = _random_complex(rng, 6)
        for sub in (0, 1):
            twice = partial_transpose(partial_transpose(m, (2, 3), sub), (2, 3), sub)
            assert np.array_equal(twice, m)

    def test_bell_negative_eigenvalue(self):
        pt = partial_transpose(BELL, (2, 2), subsystem=1)
        # entrywise oracle: (i,j;k,l) -> (i,l;k,j) turns the |00><11| corner
        # into the swap-like middle block
        expected = np.diag([0.5, 0.0, 0.0, 0.5]).astype(complex)
        expected[1, 2] = expected[2, 1] = 0.5
        assert np.abs(pt - expected).max() <= 1e-15
        assert abs(hermitian_eigenvalues(pt)[0] - (-0.5)) <= 1e-12

    def test_product_stays_psd(self):
        rng = _rng(6)
        for _ in range(10):
            a = _random_density_matrix(rng, 2)
            b = _random_density_matrix(rng, 3)
            pt = partial_transpose(np.kron(a, b), (2, 3), subsystem=1)
            assert hermitian_eigenvalues(pt)[0] >= -1e-12

    def test_trace_and_hermiticity_preserved(self):
        rng = _rng(7)
        m = _random_density_matrix(rng, 6)
        pt = partial_transpose(m, (2, 3), subsystem=0)
        assert abs(np.trace(pt) - np.trace(m)) <= 1e-14
        assert np.abs(pt - pt.conj().T).max() <= 1e-14

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            partial_transpose(np.eye(5), (2, 2), subsystem=1)


class TestHermitianEigenvalues:
    def test_diagonal(self):
        assert np.allclose(hermitian_eigenvalues(np.diag([3.0, 1.0, 2.0])), [1, 2, 3])

    def test_pauli_x(self):
        assert np.allclose(hermitian_eigenvalues(PAULI_X), [-1.0, 1.0])

    def test_two_by_two_closed_form(self):
        # quadratic-formula oracle for 100 random Hermitian 2x2 matrices
        rng = _rng(8)
        for _ in range(100):
            a, c = rng.standard_normal(2)
            b = rng.standard_normal() + 1j * rng.standard_normal()
            m = np.array([[a, b], [b.conjugate(), c]])
            mid = (a + c) / 2
            rad = np.sqrt((a - c) ** 2 / 4 + abs(b) ** 2)
            assert np.allclose(hermitian_eigenvalues(m), [mid - rad, mid + rad], atol=1e-12)

    def test_spectral_sums(self):
        rng = _rng(9)
        for n in (3, 5, 8):
            g = _random_complex(rng, n)
            m = g + g.conj().T
            w = hermitian_eigenvalues(m)
            assert abs(w.sum() - np.trace(m).real) <= 1e-9
            assert abs((w**2).sum() - np.trace(m @ m).real) <= 1e-9

    def test_eigenvector_residuals(self):
        rng = _rng(10)
        g = _random_complex(rng, 6)
        m = g + g.conj().T
        w = hermitian_eigenvalues(m)
        w_ref, v = np.linalg.eigh(m)
        assert np.allclose(w, w_ref)
        for k in range(6):
            residual = np.linalg.norm(m @ v[:, k] - w[k] * v[:, k])
            assert residual <= 1e-9 * np.linalg.norm(m)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            hermitian_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestPurity:
    def test_maximally_mixed(self):
        for d in (2, 3, 4):
            rho = DensityMatrix(np.eye(d) / d, (d,))
            assert abs(purity(rho) - 1.0 / d) <= 1e-12

    def test_pure_projector(self):
        rng = _rng(11)
        v = _random_complex(rng, 4, 1).ravel()
        v /= np.linalg.norm(v)
        rho = DensityMatrix(np.outer(v, v.conj()), (4,))
        assert abs(purity(rho) - 1.0) <= 1e-12

    @pytest.mark.parametrize("x", [0.0, 0.25, 0.5, 0.75, 1.0])
    def test_family_closed_form(self, x):
        # eigenvalue oracle: x + (1-x)/4 once and (1-x)/4 three times
        expected = (x + (1 - x) / 4) ** 2 + 3 * ((1 - x) / 4) ** 2
        assert abs(expected - (1 + 3 * x * x) / 4) <= 1e-15
        psi = np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2.0)
        m = x * np.outer(psi, psi) + (1 - x) / 4 * np.eye(4)
        assert abs(purity(DensityMatrix(m, (2, 2))) - expected) <= 1e-12

    def test_matches_squared_eigenvalues(self):
        rng = _rng(12)
        m = _random_density_matrix(rng, 6)
        w = hermitian_eigenvalues(m)
        assert abs(purity(m) - (w**2).sum()) <= 1e-10


class TestTypes:
    def test_pure_state_norm_enforced(self):
        with pytest.raises(ValueError):
            PureState(np.array([1.0, 1.0]))

    def test_density_rejects_non_hermitian(self):
        m = np.eye(2, dtype=complex) / 2
        m[0, 1] = 0.1
        with pytest.raises(ValueError):
            DensityMatrix(m, (2,))

    def test_density_rejects_bad_trace(self):
        with pytest.raises(ValueError):
            DensityMatrix(np.eye(2), (2,))

    def test_density_rejects_negative_eigenvalue(self):
        with pytest.raises(ValueError):
            DensityMatrix(np.diag([1.1, -0.1]), (2,))

    def test_density_rejects_nan(self):
        m = np.eye(2) / 2
        m[0, 0] = np.nan
        with pytest.raises(ValueError):
            DensityMatrix(m, (2,))

    def test_density_dims_mismatch(self):
        with pytest.raises(ValueError):
            DensityMatrix(np.eye(4) / 4, (2, 3))

    def test_immutable(self):
        rho = DensityMatrix(np.eye(2) / 2, (2,))
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 9.0


class TestJson:
    def test_matrix_round_trip(self):
        rng = _rng(13)
        m = _random_complex(rng, 3)
        obj = matrix_to_json(m)
        assert obj["rows"] == 3 and obj["cols"] == 3 and len(obj["data"]) == 9
        assert np.array_equal(matrix_from_json(obj), m)

    def test_density_round_trip(self):
        rng = _rng(14)
        rho = DensityMatrix(_random_density_matrix(rng, 6), (2, 3))
        back = density_from_json(density_to_json(rho))
        assert back.dims == (2, 3)
        assert np.array_equal(back.matrix, rho.matrix)

    def test_malformed(self):
        with pytest.raises(ValueError):
            matrix_from_json({"rows": 2, "cols": 2, "data": [[1, 0]]})
        with pytest.raises(ValueError):
            density_from_json(matrix_to_json(np.eye(2) / 2))
