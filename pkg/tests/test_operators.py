import numpy as np
import pytest

from conftest import random_self_map
from cnops.conjugations import JMu, JWp
from cnops.errors import NotSelfMapError
from cnops.hardy import kernel_series, lft_power_series
from cnops.moebius import LinearFractionalMap
from cnops.operators import (
    AntilinearOperator,
    adjoint_via_cowen,
    analytic_toeplitz_matrix,
    canonical_weight_series,
    cnormal_residual_matrix,
    composition_matrix,
    conjugation_operator,
    stable_keep,
    weighted_composition_matrix,
    write_matrix_csv,
)

GENERIC = LinearFractionalMap(0.5, 0.25, 0.25, 1)


class TestCompositionMatrix:
    def test_dilation_is_diagonal(self):
        alpha = 0.6 * np.exp(0.5j)
        M = composition_matrix(LinearFractionalMap(alpha, 0, 0, 1), 8)
        assert np.allclose(M, np.diag(alpha ** np.arange(8)))

    def test_half_map(self):
        M = composition_matrix(LinearFractionalMap(1, 0, 0, 2), 4)
        assert np.allclose(M, np.diag([1, 0.5, 0.25, 0.125]))

    def test_first_column_is_delta_second_is_series(self):
        M = composition_matrix(GENERIC, 32)
        e0 = np.zeros(32)
        e0[0] = 1
        assert np.array_equal(M[:, 0], e0)
        assert np.array_equal(M[:, 1], lft_power_series(GENERIC, 32))

    def test_block_stability(self):
        # leading block of the double truncation equals the small truncation
        small = composition_matrix(GENERIC, 24)
        big = composition_matrix(GENERIC, 48)
        assert np.array_equal(big[:24, :24][:, :24], small)

    def test_rejects_non_self_map(self):
        with pytest.raises(NotSelfMapError):
            composition_matrix(LinearFractionalMap(2, 0, 0, 1), 8)


class TestToeplitz:
    def test_identity_symbol(self):
        assert np.allclose(analytic_toeplitz_matrix(np.array([1.0]), 5), np.eye(5))

    def test_shift_symbol(self):
        M = analytic_toeplitz_matrix(np.array([0.0, 1.0]), 4)
        assert np.allclose(M, np.eye(4, k=-1))

    def test_geometric_symbol(self):
        M = analytic_toeplitz_matrix(kernel_series(0.5, 6), 6)
        for k in range(6):
            assert np.allclose(np.diag(M, -k), 0.5 ** k)


class TestWeightedComposition:
    def test_unit_weight_reduces_to_composition(self):
        psi = np.zeros(16, dtype=complex)
        psi[0] = 1.0
        assert np.allclose(weighted_composition_matrix(psi, GENERIC, 16),
                           composition_matrix(GENERIC, 16))

    def test_constant_weight_scales(self):
        beta = 0.7 - 0.2j
        psi = np.zeros(16, dtype=complex)
        psi[0] = beta
        assert np.allclose(weighted_composition_matrix(psi, GENERIC, 16),
                           beta * composition_matrix(GENERIC, 16))

    def test_canonical_weight_series(self):
        # beta K_{sigma(0)} for GENERIC: sigma(0) = -0.25, series (-0.25)^n
        psi = canonical_weight_series(GENERIC, 1.0, 4)
        assert np.allclose(psi, [1.0, -0.25, 0.0625, -0.015625])


class TestAdjointViaCowen:
    def test_dilation_exact(self):
        m = LinearFractionalMap(1, 0, 0, 2)
        A = adjoint_via_cowen(m, 16)
        assert np.allclose(A, composition_matrix(m, 16).conj().T, atol=1e-15)

    @pytest.mark.parametrize("m", [
        GENERIC,
        LinearFractionalMap(-1.0, 0.5, -0.5, 1.0),        # automorphism, q = 0.5
        LinearFractionalMap(0.3 + 0.2j, 0.1, 0.1j, 1.0),
    ])
    def test_matches_conjugate_transpose(self, m):
        N = 64
        A = adjoint_via_cowen(m, N)
        B = composition_matrix(m, N).conj().T
        assert np.abs((A - B)[:16, :16]).max() < 1e-8

    def test_difference_does_not_grow_with_truncation(self):
        # the construction is block-exact, so the defect sits at rounding level
        for seed in range(5):
            m = random_self_map(np.random.default_rng(seed), max_offset=0.5)
            if abs(m.c / m.d) > 0.5:
                continue
            diffs = []
            for N in (64, 128):
                D = adjoint_via_cowen(m, N) - composition_matrix(m, N).conj().T
                diffs.append(np.abs(D[: N // 4, : N // 4]).max())
            assert diffs[1] <= max(diffs[0], 1e-12)


class TestConjugationOperator:
    def test_jmu_unit_is_identity_matrix(self):
        A = conjugation_operator(JMu(1.0), 8)
        assert np.allclose(A.matrix, np.eye(8))

    def test_jmu_applied_twice_fixes_basis_vectors(self):
        A = conjugation_operator(JMu(np.exp(1.3j)), 16)
        for n in (0, 3, 15):
            e = np.zeros(16, dtype=complex)
            e[n] = 1.0
            assert np.allclose(A.apply(A.apply(e)), e, atol=1e-14)

    def test_jwp_involution_defect_on_stable_block(self):
        # the 32x32 leading block is clean at truncation 128 ...
        A = conjugation_operator(JWp(0.4), 128)
        assert A.involution_defect(32) < 1e-8
        # ... but NOT at truncation 64: powers of the inner factor move
        # coefficient mass past the cut, so only rows within the stable block
        # (stable_keep -> 21 here) are reliable
        A64 = conjugation_operator(JWp(0.4), 64)
        assert A64.involution_defect(stable_keep(64, C=JWp(0.4))) < 1e-5
        assert A64.involution_defect(32) > 1e-3

    def test_antilinear_apply_definition(self, rng):
        M = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        A = AntilinearOperator(M)
        x = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        assert np.allclose(A.apply(x), M @ np.conj(x))

    def test_double_application_equals_linearization(self, rng):
        # applying twice through the action equals the linear map M conj(M)
        A = conjugation_operator(JWp(0.3 + 0.2j), 32)
        x = rng.standard_normal(32) + 1j * rng.standard_normal(32)
        assert np.abs(A.apply(A.apply(x))
                      - (A.matrix @ np.conj(A.matrix)) @ x).max() <= 1e-14 * np.abs(x).max() * 100


class TestCnormalResidualMatrix:
    def test_dilation_jmu_machine_zero(self):
        m = LinearFractionalMap(0.6 * np.exp(0.4j), 0, 0, 1)
        T = composition_matrix(m, 64)
        C = conjugation_operator(JMu(np.exp(0.9j)), 64)
        assert cnormal_residual_matrix(T, C) < 1e-12

    def test_rotation_jwp_small_on_stable_block(self):
        m = LinearFractionalMap(np.exp(0.7j), 0, 0, 1)
        N = 128
        T = composition_matrix(m, N)
        C = conjugation_operator(JWp(0.4), N)
        keep = stable_keep(N, m=m, C=JWp(0.4))
        assert cnormal_residual_matrix(T, C, keep) < 1e-8

    def test_translated_map_fails_jwp(self):
        # phi(0) != 0: the identity genuinely fails, residual stays large
        N = 128
        T = composition_matrix(GENERIC, N)
        C = conjugation_operator(JWp(0.4), N)
        keep = stable_keep(N, m=GENERIC, C=JWp(0.4))
        assert cnormal_residual_matrix(T, C, keep) > 1e-3

    def test_dimension_mismatch(self):
        T = np.eye(8, dtype=complex)
        C = conjugation_operator(JMu(1.0), 16)
        with pytest.raises(ValueError):
            cnormal_residual_matrix(T, C)


class TestStableKeep:
    def test_strict_contraction_keeps_half(self):
        assert stable_keep(64, m=GENERIC) == 32
        assert stable_keep(64, m=GENERIC, C=JMu(1.0)) == 32

    def test_jw_reduces_block(self):
        assert stable_keep(64, C=JWp(0.4)) < 32

    def test_automorphism_reduces_block(self):
        m = LinearFractionalMap(-1.0, 0.5, -0.5, 1.0)
        assert stable_keep(128, m=m) < 64


def test_write_matrix_csv(tmp_path):
    M = np.array([[1 + 2j, 3j], [0.5, -1]], dtype=complex)
    path = tmp_path / "m.csv"
    write_matrix_csv(M, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "col,row,re,im"
    assert len(lines) == 5
    # column-major: first data row is entry (0, 0), second is (1, 0)
    assert lines[1].startswith("0,0,1.0,2.0")
    assert lines[2].startswith("0,1,0.5,0.0")
