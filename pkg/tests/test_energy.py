import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphspectra.energy import (
    SignalSet,
    band_abscissas,
    demean_normalize,
    demean_normalize_null,
    esd_banded,
    esd_direct,
    esd_interpolate,
    kernel_l2_norm,
)
from graphspectra.errors import DegenerateSignal, DimensionMismatch, InvalidParameters
from graphspectra.graph import build_graph, full_spectrum, laplacian
from graphspectra.kernels import FunctionKernel, bspline_system, umt_system
from graphspectra.signals import make_sets


def chi(spectrum, l):
    """Eigenvector with 1-based index ``l``."""
    return spectrum.eigenvectors[:, l - 1]


@pytest.fixture(scope="module")
def p3_L(p3):
    return laplacian(p3).with_lambda_max(3.0)


class TestSignalSet:
    def test_vector_becomes_column(self):
        F = SignalSet(np.arange(4.0))
        assert F.signals.shape == (4, 1) and F.labels == ("s0",)

    def test_label_mismatch(self):
        with pytest.raises(DimensionMismatch):
            SignalSet(np.ones((3, 2)), ("a",))


class TestDemeanNormalize:
    def test_orthogonal_signal_unchanged(self, p3_spectrum):
        v = chi(p3_spectrum, 3)
        out = demean_normalize(SignalSet(v), p3_spectrum).signals[:, 0]
        np.testing.assert_allclose(out, v, atol=1e-14)
        assert np.linalg.norm(out) == pytest.approx(1.0)

    def test_constant_is_degenerate(self, p3_spectrum):
        with pytest.raises(DegenerateSignal):
            demean_normalize(SignalSet(np.ones(3)), p3_spectrum)

    def test_projection(self, p3_spectrum):
        f = chi(p3_spectrum, 1) + 2 * chi(p3_spectrum, 3)
        out = demean_normalize(SignalSet(f), p3_spectrum).signals[:, 0]
        np.testing.assert_allclose(out, chi(p3_spectrum, 3), atol=1e-14)

    def test_literal_rule_removes_two_components(self, p3_spectrum):
        f = chi(p3_spectrum, 2) + chi(p3_spectrum, 3)
        lit = demean_normalize(SignalSet(f), p3_spectrum, "literal").signals[:, 0]
        null = demean_normalize(SignalSet(f), p3_spectrum, "null").signals[:, 0]
        np.testing.assert_allclose(lit, chi(p3_spectrum, 3), atol=1e-14)
        np.testing.assert_allclose(null, f / np.sqrt(2), atol=1e-14)
        with pytest.raises(InvalidParameters):
            demean_normalize(SignalSet(f), p3_spectrum, "other")

    def test_null_vector_variant(self, rgg200, rng):
        g, L, S = rgg200
        F = SignalSet(rng.standard_normal((g.n_vertices, 4)))
        a = demean_normalize_null(F, L).signals
        b = demean_normalize(F, S, "null").signals
        np.testing.assert_allclose(a, b, atol=1e-10)


class TestDirect:
    def test_single_eigenvector(self, p3_spectrum):
        e = esd_direct(SignalSet(chi(p3_spectrum, 3)), p3_spectrum)
        np.testing.assert_allclose(e.values, [0, 0, 1], atol=1e-14)

    def test_two_eigenvectors_four_nodes(self):
        S = full_spectrum(laplacian(build_graph([(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)], 4)))
        f = (chi(S, 2) + chi(S, 3)) / np.sqrt(2)
        # the null-only rule gives 0.5 each; the literal rule also drops chi_2
        np.testing.assert_allclose(esd_direct(SignalSet(f), S, "null").values, [0, 0.5, 0.5, 0], atol=1e-14)
        np.testing.assert_allclose(esd_direct(SignalSet(f), S).values, [0, 0, 1, 0], atol=1e-14)

    def test_properties(self, desk):
        F = make_sets(desk.graph, seed=4)
        e = esd_direct(F, desk.spectrum).values
        assert e.sum() == pytest.approx(1.0, abs=1e-10)
        assert e.min() >= 0.0
        assert np.abs(e[:2]).max() <= 1e-25


class TestBanded:
    def test_exact_sums_to_one(self, desk, desk_comb):
        for st_ in (desk, desk_comb):
            F = make_sets(st_.graph, seed=1)
            a = esd_banded(F, st_.L, 100, spectrum=st_.spectrum)
            assert a.total == pytest.approx(1.0, abs=1e-10)
            assert a.values.min() >= 0.0 and a.mode == "exact"

    @pytest.mark.parametrize("n_bands", [10, 25, 50])
    def test_chebyshev_sum(self, desk, n_bands):
        F = make_sets(desk.graph, seed=2)
        a = esd_banded(F, desk.L, n_bands, mode="chebyshev", order=80, lam_max=desk.lam_max)
        assert a.total == pytest.approx(1.0, abs=1e-3)

    def test_single_eigenvector_is_squared_kernel(self, p3_spectrum, p3_L):
        system = bspline_system(4, 3, 3.0)
        a = esd_banded(SignalSet(chi(p3_spectrum, 3)), p3_L, 4, spectrum=p3_spectrum)
        np.testing.assert_allclose(a.values, system(3.0) ** 2, atol=1e-9)
        f = SignalSet(chi(p3_spectrum, 2)[:, None], normalized=True)
        a = esd_banded(f, p3_L, 4, spectrum=p3_spectrum)
        np.testing.assert_allclose(a.values, system(1.0) ** 2, atol=1e-9)

    def test_chebyshev_converges_to_exact(self, desk):
        F = make_sets(desk.graph, seed=0)
        Fn = demean_normalize_null(F, desk.L)
        exact = esd_banded(Fn, desk.L, 100, spectrum=desk.spectrum).values
        cheb = esd_banded(F, desk.L, 100, mode="chebyshev", order=200, lam_max=desk.lam_max).values
        assert np.abs(exact - cheb).max() <= 1e-4

    def test_removal_rule_discrepancy(self, desk):
        # literal (null + chi_2) vs null-only de-meaning: measured, small
        F = make_sets(desk.graph, seed=0)
        lit = esd_banded(F, desk.L, 100, spectrum=desk.spectrum).values
        null = esd_banded(demean_normalize_null(F, desk.L), desk.L, 100, spectrum=desk.spectrum).values
        gap = np.abs(lit - null).max()
        assert 0.0 < gap <= 1e-2

    def test_power_iteration_domain(self, desk):
        F = make_sets(desk.graph, seed=0)
        a = esd_banded(F, laplacian(desk.graph, "normalized"), 20, mode="chebyshev")
        assert a.lam_max >= desk.lam_max
        assert a.total == pytest.approx(1.0, abs=1e-3)

    def test_invalid(self, desk):
        F = make_sets(desk.graph, seed=0)
        with pytest.raises(InvalidParameters):
            esd_banded(F, desk.L, 1, spectrum=desk.spectrum)
        with pytest.raises(InvalidParameters):
            esd_banded(F, desk.L, 10, mode="fast", spectrum=desk.spectrum)


class TestInterpolation:
    def test_anchor_and_abscissas(self, desk):
        F = make_sets(desk.graph, seed=0)
        banded = esd_banded(F, desk.L, 30, spectrum=desk.spectrum)
        E, e = esd_interpolate(banded, desk.spectrum)
        assert E(0.0) == 0.0
        assert e.shape == (desk.spectrum.n,)
        np.testing.assert_allclose(E(banded.abscissas), banded.values, atol=1e-15)
        assert np.all(e >= 0)
        # kernels whose cubic support lies inside [0, lam_max] have equal norms
        steps = np.diff(banded.abscissas)[1:30 - 3]
        assert np.ptp(steps) <= 1e-10 * desk.lam_max

    def test_flat_values(self):
        system = bspline_system(12, 3, 2.0)
        from graphspectra.energy import EnsembleESD

        flat = EnsembleESD("banded", np.full(12, 1 / 12), 2.0, band_abscissas(system), system)
        E, _ = esd_interpolate(flat)
        x = np.linspace(flat.abscissas[0], flat.abscissas[-1], 500)
        np.testing.assert_allclose(E(x), 1 / 12, atol=1e-15)


class TestKernelNorm:
    def test_constant(self):
        assert kernel_l2_norm(FunctionKernel(lambda lam: 1.0, 2.0)) == pytest.approx(2.0, abs=1e-12)
        assert kernel_l2_norm(FunctionKernel(lambda lam: 1.0, 2.0), squared=False) == pytest.approx(np.sqrt(2))

    def test_umt_norms_sum_to_lam_max(self):
        s = umt_system(7, 2.0)
        assert sum(kernel_l2_norm(k) for k in s) == pytest.approx(2.0, abs=1e-6)

    def test_interior_shift_invariance(self):
        s = bspline_system(12, 3, 2.0)
        norms = [kernel_l2_norm(k, intervals=11 * 1024) for k in s.kernels[2:-2]]
        assert np.ptp(norms) <= 1e-10


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 6))
def test_direct_esd_sums_to_one(seed, n_signals):
    from graphspectra.signals import random_geometric_graph

    g = random_geometric_graph(60, seed=seed % 7)
    S = full_spectrum(laplacian(g, "normalized"))
    F = SignalSet(np.random.default_rng(seed).standard_normal((60, n_signals)))
    e = esd_direct(F, S).values
    assert abs(e.sum() - 1) <= 1e-10 and e.min() >= 0
