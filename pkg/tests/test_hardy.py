import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cnops.errors import NotExpandableError, SingularKernelError
from cnops.hardy import (
    KernelCombo,
    inner_product,
    kernel_eval,
    kernel_series,
    lft_power_series,
    norm,
    series_eval,
    series_multiply,
)
from cnops.moebius import LinearFractionalMap

disk_points = st.builds(
    lambda r, t: r * np.exp(1j * t),
    st.floats(0.0, 0.9), st.floats(0.0, 2 * np.pi),
)


class TestKernel:
    def test_kernel_at_origin_is_one(self):
        for z in (0.0, 0.5, -0.3 + 0.2j):
            assert kernel_eval(0.0, z) == 1.0

    def test_half_half(self):
        assert kernel_eval(0.5, 0.5) == pytest.approx(4.0 / 3.0)

    def test_singularity(self):
        with pytest.raises(SingularKernelError):
            kernel_eval(1.0, 1.0)

    def test_reproducing_property(self, rng):
        # <f, K_w> recovers f(w) exactly for polynomials of degree < N
        f = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        for w in (0.2, -0.5 + 0.3j, 0.9):
            kw = kernel_series(w, 16)
            assert inner_product(f, kw) == pytest.approx(series_eval(f, w), abs=1e-12)

    def test_combo_validates_points(self):
        with pytest.raises(ValueError):
            KernelCombo(((1.0, 1.0 + 0j),))

    def test_combo_eval_matches_series(self):
        combo = KernelCombo(((2.0, 0.3), (1j, -0.5)))
        z = 0.4 + 0.2j
        assert combo(z) == pytest.approx(series_eval(combo.series(256), z), abs=1e-12)


class TestPowerSeries:
    def test_dilation(self):
        p = lft_power_series(LinearFractionalMap(1, 0, 0, 2), 6)
        assert np.allclose(p, [0, 0.5, 0, 0, 0, 0])

    def test_alternating_example(self):
        # z/(z/2 + 1): p0 = 0, p1 = 1, then ratio -1/2
        p = lft_power_series(LinearFractionalMap(1, 0, 0.5, 1), 5)
        assert np.allclose(p, [0, 1, -0.5, 0.25, -0.125])

    def test_generic_recurrence(self):
        p = lft_power_series(LinearFractionalMap(0.5, 0.25, 0.25, 1), 4)
        assert p[0] == pytest.approx(0.25)
        assert p[1] == pytest.approx(0.5 - 0.25 * 0.25)
        assert p[2] == pytest.approx(-0.25 * p[1])

    def test_pole_at_origin_rejected(self):
        with pytest.raises(NotExpandableError):
            lft_power_series(LinearFractionalMap(0, 1, 1, 0), 8)

    def test_pole_in_disk_rejected(self):
        with pytest.raises(NotExpandableError):
            lft_power_series(LinearFractionalMap(1, 0, 2, 1), 8)

    def test_tail_ratio(self, rng):
        m = LinearFractionalMap(0.5, 0.25, 0.25, 1)
        p = lft_power_series(m, 40)
        ratio = abs(m.c / m.d)
        for n in range(2, 39):
            if abs(p[n]) > 0:
                assert abs(p[n + 1] / p[n]) == pytest.approx(ratio)

    def test_matches_evaluation(self):
        m = LinearFractionalMap(0.5, 0.25, 0.25, 1)
        p = lft_power_series(m, 64)
        for z in (0.3, -0.6 + 0.2j):
            assert series_eval(p, z) == pytest.approx(m(z), abs=1e-14)


class TestSeriesMultiply:
    def test_one_is_neutral(self, rng):
        f = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        one = np.zeros(8, dtype=complex)
        one[0] = 1.0
        assert np.allclose(series_multiply(f, one, 8), f)

    def test_difference_of_squares(self):
        f = np.array([1.0, 1.0])
        g = np.array([1.0, -1.0])
        assert np.allclose(series_multiply(f, g, 4), [1, 0, -1, 0])

    def test_geometric_square(self):
        # (sum z^n/2^n)^2 has coefficients (n+1)/2^n
        geo = 0.5 ** np.arange(12)
        sq = series_multiply(geo, geo, 12)
        n = np.arange(12)
        assert np.allclose(sq, (n + 1) / 2.0 ** n)

    @pytest.mark.parametrize("seed", range(5))
    def test_commutative_associative(self, seed):
        g = np.random.default_rng(seed)
        f1, f2, f3 = (g.standard_normal(16) + 1j * g.standard_normal(16) for _ in range(3))
        assert np.abs(series_multiply(f1, f2, 16) - series_multiply(f2, f1, 16)).max() <= 1e-13
        lhs = series_multiply(series_multiply(f1, f2, 16), f3, 16)
        rhs = series_multiply(f1, series_multiply(f2, f3, 16), 16)
        assert np.abs(lhs - rhs).max() <= 1e-13 * max(1.0, np.abs(lhs).max())


class TestInnerProduct:
    def test_norm_squared_nonnegative(self, rng):
        f = rng.standard_normal(10) + 1j * rng.standard_normal(10)
        ip = inner_product(f, f)
        assert ip.imag == pytest.approx(0.0)
        assert ip.real == pytest.approx(norm(f) ** 2)

    def test_orthonormal_monomials(self):
        z1 = np.array([0, 1, 0], dtype=complex)
        z2 = np.array([0, 0, 1], dtype=complex)
        assert inner_product(z1, z2) == 0
        assert inner_product(z1, z1) == 1

    def test_truncated_kernel_pairing(self):
        # <K_w^(N), K_v^(N)> = sum_{n<N} (conj(w) v)^n -> 1/(1 - conj(w) v)
        w, v, N = 0.6 + 0.2j, -0.4 + 0.7j, 96
        got = inner_product(kernel_series(w, N), kernel_series(v, N))
        assert got == pytest.approx(kernel_eval(w, v), abs=1e-13)


@given(w=disk_points, v=disk_points, N=st.integers(8, 64))
@settings(max_examples=80, deadline=None)
def test_truncated_kernel_geometric_bound(w, v, N):
    x = np.conj(w) * v
    partial = inner_product(kernel_series(w, N), kernel_series(v, N))
    bound = abs(x) ** N / (1.0 - abs(x)) + 1e-13
    assert abs(partial - 1.0 / (1.0 - x)) <= bound
