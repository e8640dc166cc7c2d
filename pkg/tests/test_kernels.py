import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import simpson

from graphspectra.errors import DegreeTooLarge, DomainMismatch, InvalidParameters, InvalidWarp
from graphspectra.kernels import (
    FunctionKernel,
    KernelSystem,
    bspline,
    bspline_system,
    frame_analysis,
    gamma_residual,
    merge_bands,
    meyer_aux,
    sample_system,
    solve_gamma,
    umt_system,
    warp_system,
)
from graphspectra.warp import monotone_cubic


def bspline_by_convolution(n, x, h=1e-3):
    """Degree-n central B-spline from n-fold numeric self-convolution of the unit box."""
    t = np.arange(-0.5, 0.5, h) + h / 2
    box = np.ones_like(t)
    f = box.copy()
    for _ in range(n):
        f = np.convolve(f, box) * h
    grid = (np.arange(f.size) - (f.size - 1) / 2) * h
    return np.interp(x, grid, f)


def umt_integrals(system, points=10_000):
    lam = np.linspace(0.0, system.lam_max, points + 1)
    return np.array([simpson(k(lam), x=lam) for k in system.kernels])


class TestBSpline:
    def test_degree_zero(self):
        assert bspline(0, 0.0) == 1.0
        assert bspline(0, 0.5) == 0.5
        assert bspline(0, -0.5) == 0.5
        assert bspline(0, 0.7) == 0.0

    def test_degree_one(self):
        assert bspline(1, 0.0) == pytest.approx(1.0)
        assert bspline(1, 1.0) == 0.0 and bspline(1, -1.0) == 0.0

    def test_degree_three(self):
        assert bspline(3, 0.0) == pytest.approx(2 / 3, abs=1e-14)
        assert bspline(3, 1.0) == pytest.approx(1 / 6, abs=1e-14)
        assert bspline(3, -1.0) == pytest.approx(1 / 6, abs=1e-14)

    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_matches_convolution(self, n):
        x = np.linspace(-(n + 1) / 2, (n + 1) / 2, 57)
        np.testing.assert_allclose(bspline(n, x), bspline_by_convolution(n, x), atol=2e-3)

    @pytest.mark.parametrize("n", [2, 5, 9, 25])
    def test_integer_shifts_sum_to_one(self, n):
        x = np.linspace(-0.5, 0.5, 101)
        total = sum(bspline(n, x - k) for k in range(-n - 2, n + 3))
        np.testing.assert_allclose(total, 1.0, atol=1e-9)

    def test_support_and_limits(self):
        assert bspline(4, 2.5) == 0.0 and bspline(4, 3.0) == 0.0
        with pytest.raises(DegreeTooLarge):
            bspline(26, 0.0)
        with pytest.raises(InvalidParameters):
            bspline(-1, 0.0)


class TestBSplineSystem:
    @pytest.mark.parametrize("n", [3, 7])
    def test_partition_of_unity(self, n):
        _, _, B1, B2 = frame_analysis(bspline_system(20, n, 2.0))
        assert max(1 - B1, B2 - 1) <= 1e-9

    def test_partition_of_unity_all_sizes(self):
        worst = 0.0
        for J in range(2, 31):
            for n in range(2, 10):
                s = bspline_system(J, n, 1.5)
                lam = np.linspace(0.0, 1.5, 10 * J * 100)
                worst = max(worst, np.abs(s.frame_function(lam) - 1).max())
        assert worst <= 1e-9

    def test_two_bands_endpoints(self):
        # folded end kernels: B_1(0)^2 = beta(0) + beta(1) = 7/8 for n = 2
        s = bspline_system(2, 2, 1.0)
        assert s[0](0.0) == pytest.approx(math.sqrt(7 / 8), abs=1e-14)
        assert s[1](1.0) == pytest.approx(math.sqrt(7 / 8), abs=1e-14)
        assert s[0](0.0) ** 2 + s[1](0.0) ** 2 == pytest.approx(1.0, abs=1e-14)

    def test_folding_and_interior_shape(self):
        s = bspline_system(10, 5, 9.0)
        assert s[0].edge_folded and s[-1].edge_folded and not s[4].edge_folded
        # knot spacing is 1 on this lam_max; interior kernel j peaks at knot j - 1
        assert s[4](4.0) == pytest.approx(math.sqrt(bspline(5, 0.0)))

    def test_invalid(self):
        with pytest.raises(InvalidParameters):
            bspline_system(1, 3, 2.0)
        with pytest.raises(InvalidParameters):
            bspline_system(5, 1, 2.0)


class TestMeyer:
    def test_values(self):
        assert meyer_aux(0.0) == 0.0 and meyer_aux(1.0) == 1.0
        assert meyer_aux(0.5) == pytest.approx(0.5, abs=1e-15)
        assert meyer_aux(0.3) + meyer_aux(0.7) == pytest.approx(1.0, abs=1e-14)
        assert meyer_aux(-1.0) == 0.0 and meyer_aux(2.0) == 1.0

    def test_crossfade(self):
        t = np.linspace(-0.2, 1.2, 1001)
        v = 0.5 * np.pi * meyer_aux(t)
        np.testing.assert_allclose(np.cos(v) ** 2 + np.sin(v) ** 2, 1.0, atol=1e-15)


class TestUMT:
    def test_parameters(self):
        s = umt_system(5, 2.0)
        assert s.meta["a"] == pytest.approx(0.224215, abs=1e-6)
        assert s.meta["delta"] == pytest.approx(0.387893, abs=1e-6)

    @pytest.mark.parametrize("J", [2, 3, 5, 7, 10, 25])
    @pytest.mark.parametrize("gamma", [1.2, 2.73, 4.0])
    def test_tight(self, J, gamma):
        _, G, B1, B2 = frame_analysis(umt_system(J, 3.0, gamma))
        assert max(1 - B1, B2 - 1) <= 1e-9

    def test_endpoints(self):
        s = umt_system(7, 2.0)
        assert s[0](0.0) == 1.0 and s[-1](2.0) == 1.0
        assert s[0](2.5) == 0.0 and s[-1](-0.1) == 0.0

    def test_pairwise_overlap(self):
        s = umt_system(7, 2.0)
        V = s(np.linspace(0, 2.0, 20001)) > 0
        for j in range(len(s) - 2):
            assert not np.any(V[j] & V[j + 2])

    @pytest.mark.parametrize("J", [2, 5, 7, 10])
    def test_uniform_integrals(self, J):
        q = umt_integrals(umt_system(J, 2.0))
        assert np.abs(q - q.mean()).max() / q.mean() <= 1e-2

    def test_invalid(self):
        with pytest.raises(InvalidParameters):
            umt_system(1, 2.0)
        with pytest.raises(InvalidParameters):
            umt_system(5, 2.0, gamma=1.0)


class TestGamma:
    def test_solve(self):
        assert solve_gamma() == pytest.approx(2.73, abs=0.005)

    def test_residual_small_at_solution(self):
        # the grid search lands within one step of the continuous root
        r = gamma_residual(2.73)
        assert abs(r) <= abs(gamma_residual(2.72)) and abs(r) <= abs(gamma_residual(2.74))
        assert abs(r) <= 1e-3

    def test_scale_invariance(self):
        # residual is linear in a, so its root does not depend on lam_max or J
        for a in (0.1, 0.5, 3.0):
            assert gamma_residual(2.5, a) == pytest.approx(a * gamma_residual(2.5, 1.0), rel=1e-9)
        for lam_max in (2.0, 10.0):
            a = umt_system(7, lam_max).meta["a"]
            gs = np.arange(2.6, 2.86, 0.01)
            assert gs[np.argmin([abs(gamma_residual(g, a)) for g in gs])] == pytest.approx(2.73)


class TestWarpSystem:
    def test_identity(self):
        s = umt_system(5, 2.0)
        w = warp_system(s, lambda lam: lam)
        lam = np.linspace(0, 2, 1001)
        np.testing.assert_array_equal(w(lam), s(lam))

    def test_square_warp_widens_first_band(self):
        s = umt_system(3, 2.0)
        w = warp_system(s, lambda lam: lam ** 2 / 2.0)
        lam = np.linspace(0, 2, 20001)
        edge = lambda k: lam[np.flatnonzero(k(lam) > 0)[-1]]
        assert edge(w[0]) > edge(s[0])

    @settings(max_examples=20, deadline=None)
    @given(st.lists(st.floats(0.01, 1.0), min_size=2, max_size=12), st.integers(2, 12))
    def test_random_monotone_warps_keep_tightness(self, steps, J):
        lam_max = 2.0
        y = np.concatenate([[0.0], np.cumsum(steps)])
        y = lam_max * y / y[-1]
        x = np.linspace(0.0, lam_max, y.size)
        T = monotone_cubic(np.column_stack([x, y]))
        _, _, B1, B2 = frame_analysis(warp_system(umt_system(J, lam_max), T))
        assert max(1 - B1, B2 - 1) <= 1e-8

    def test_warp_overshooting_lam_max_by_rounding(self):
        lam_max = 6.143296816732267
        w = warp_system(umt_system(14, lam_max), lambda lam: np.where(lam == lam_max, np.nextafter(lam_max, 7.0), lam))
        assert w.frame_function(np.array([lam_max]))[0] == pytest.approx(1.0, abs=1e-12)

    def test_invalid_warp(self):
        s = umt_system(4, 2.0)
        with pytest.raises(InvalidWarp):
            warp_system(s, lambda lam: 0.5 * lam)
        with pytest.raises(InvalidWarp):
            warp_system(s, lambda lam: 2.0 - lam)

    def test_sampling_consistency(self, desk):
        T = monotone_cubic([(0, 0), (0.5, 1.2), (desk.lam_max, desk.lam_max)])
        s = umt_system(6, desk.lam_max)
        a = sample_system(warp_system(s, T), desk.spectrum).values
        b = s(T(desk.spectrum.eigenvalues))
        assert np.abs(a - b).max() <= 1e-12


class TestFrameAndSampling:
    def test_constant_kernel(self):
        s = KernelSystem((FunctionKernel(lambda lam: 1.0, 2.0),), 2.0)
        assert frame_analysis(s)[2:] == (1.0, 1.0)

    def test_scaling(self):
        s = umt_system(4, 2.0)
        doubled = KernelSystem(tuple(FunctionKernel(lambda lam, k=k: 2 * k(lam), 2.0) for k in s), 2.0)
        _, _, B1, B2 = frame_analysis(doubled)
        assert B1 == pytest.approx(4.0) and B2 == pytest.approx(4.0)

    def test_sampled_tight(self, rgg200):
        _, _, S = rgg200
        v = sample_system(umt_system(7, S.lambda_max), S).values
        assert np.abs((v ** 2).sum(0) - 1).max() <= 1e-9

    def test_linear_kernel_on_p3(self, p3_spectrum):
        s = KernelSystem((FunctionKernel(lambda lam: lam, 3.0),), 3.0)
        np.testing.assert_allclose(sample_system(s, p3_spectrum).values[0], [0, 1, 3], atol=1e-12)

    def test_constant_row(self, p3_spectrum):
        s = KernelSystem((FunctionKernel(lambda lam: 1.0, 3.0),), 3.0)
        np.testing.assert_array_equal(sample_system(s, p3_spectrum).values, np.ones((1, 3)))

    def test_domain_mismatch(self, p3_spectrum):
        with pytest.raises(DomainMismatch):
            sample_system(umt_system(3, 2.0), p3_spectrum)

    def test_merge_keeps_tightness(self):
        s = bspline_system(12, 3, 2.0)
        m = merge_bands(s, [[0, 1, 2], [3], [4, 5, 6, 7], [8, 9, 10, 11]])
        assert len(m) == 4
        _, _, B1, B2 = frame_analysis(m)
        assert max(1 - B1, B2 - 1) <= 1e-9
        with pytest.raises(InvalidParameters):
            merge_bands(s, [[0, 1], [3]])
