"""Ensemble energy spectral density (ESD) of a set of graph signals.

The direct estimate needs the full eigendecomposition and resolves every
eigenvalue. The banded estimate filters the signals with a B-spline
Parseval system, either exactly or through Chebyshev polynomials of the
Laplacian, and resolves ``n_bands`` overlapping bands.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.integrate import simpson

from .chebyshev import DEFAULT_ORDER_SMOOTH, cheb_apply_many, filters_for
from .errors import DegenerateSignal, DimensionMismatch, InvalidParameters
from .graph import LaplacianOperator, Spectrum, estimate_lambda_max, full_spectrum
from .kernels import KernelSystem, bspline_system, sample_system
from .warp import pchip

#: Bands used for warp estimation unless told otherwise.
DEFAULT_N_BANDS = 100
DEFAULT_ESTIMATION_DEGREE = 3

RemovalRule = Literal["literal", "null"]


@dataclass(frozen=True, eq=False)
class SignalSet:
    """``N_g x N_s`` matrix of graph signals, one per column."""

    signals: np.ndarray
    labels: tuple = ()
    normalized: bool = False

    def __post_init__(self):
        sig = np.asarray(self.signals, dtype=float)
        if sig.ndim == 1:
            sig = sig[:, None]
        object.__setattr__(self, "signals", sig)
        labels = tuple(self.labels) or tuple(f"s{i}" for i in range(sig.shape[1]))
        if len(labels) != sig.shape[1]:
            raise DimensionMismatch(f"{len(labels)} labels for {sig.shape[1]} signals")
        object.__setattr__(self, "labels", labels)

    @property
    def n_vertices(self) -> int:
        return self.signals.shape[0]

    @property
    def n_signals(self) -> int:
        return self.signals.shape[1]

    def __len__(self) -> int:
        return self.n_signals


@dataclass(frozen=True, eq=False)
class EnsembleESD:
    """Direct (per-eigenvalue) or banded ensemble energy.

    For the banded kind ``abscissas`` holds the band positions ``omega_i``
    and ``system`` the B-spline system used to measure them.
    """

    kind: Literal["direct", "banded"]
    values: np.ndarray
    lam_max: float
    abscissas: np.ndarray | None = None
    system: KernelSystem | None = field(default=None, repr=False)
    mode: str = "exact"

    @property
    def total(self) -> float:
        return float(self.values.sum())


def _removed_count(spectrum: Spectrum, remove: RemovalRule) -> int:
    m1 = spectrum.groups[0][1]
    if remove == "literal":
        return 1 + m1
    if remove == "null":
        return m1
    raise InvalidParameters(f"unknown removal rule {remove!r}")


def demean_normalize(F: SignalSet, spectrum: Spectrum, remove: RemovalRule = "literal") -> SignalSet:
    """Project out the lowest eigenvectors and scale each signal to unit norm.

    ``remove="literal"`` drops the first ``1 + m`` eigenvectors (``m`` the
    multiplicity of eigenvalue 0); ``remove="null"`` drops only the null
    space.
    """
    X = F.signals
    if X.shape[0] != spectrum.n:
        raise DimensionMismatch(f"signals have {X.shape[0]} entries, graph has {spectrum.n}")
    r = _removed_count(spectrum, remove)
    V = spectrum.eigenvectors[:, :r]
    resid = X - V @ (V.T @ X)
    return _normalize_columns(F, resid)


def _normalize_columns(F: SignalSet, resid: np.ndarray) -> SignalSet:
    norms = np.linalg.norm(resid, axis=0)
    scale = np.maximum(np.linalg.norm(F.signals, axis=0), 1e-300)
    bad = np.flatnonzero(norms <= 1e-12 * scale)
    if bad.size:
        raise DegenerateSignal(
            f"signals {[F.labels[i] for i in bad[:5]]} lie in the removed subspace")
    return SignalSet(resid / norms, F.labels, normalized=True)


def demean_normalize_null(F: SignalSet, L: LaplacianOperator) -> SignalSet:
    """De-mean against the analytically known null vector only (no eigendecomposition)."""
    if F.n_vertices != L.n:
        raise DimensionMismatch(f"signals have {F.n_vertices} entries, graph has {L.n}")
    u = L.null_vector()
    resid = F.signals - np.outer(u, u @ F.signals)
    return _normalize_columns(F, resid)


def esd_direct(F: SignalSet, spectrum: Spectrum, remove: RemovalRule = "literal") -> EnsembleESD:
    """``e[l]``: mean squared GFT magnitude of the de-meaned, normalized signals."""
    Fn = F if F.normalized else demean_normalize(F, spectrum, remove)
    coeffs = spectrum.gft(Fn.signals)
    e = np.mean(coeffs ** 2, axis=1)
    return EnsembleESD("direct", e, spectrum.lambda_max)


def kernel_l2_norm(kernel, lam_max: float | None = None, intervals: int = 4096,
                   squared: bool = True) -> float:
    """``||K||^2`` over ``[0, lam_max]`` by composite Simpson (``squared=False`` gives ``||K||``)."""
    lam_max = kernel.lam_max if lam_max is None else lam_max
    intervals = max(int(intervals), 2)
    intervals += intervals % 2
    lam = np.linspace(0.0, lam_max, intervals + 1)
    val = float(simpson(np.asarray(kernel(lam)) ** 2, x=lam))
    return val if squared else float(np.sqrt(val))


def band_abscissas(system: KernelSystem, intervals: int = 4096) -> np.ndarray:
    """``omega_i = (lam_max / C) sum_{k<=i} ||B_k||^2`` with ``C`` the total."""
    norms = np.array([kernel_l2_norm(k, system.lam_max, intervals) for k in system.kernels])
    cum = np.cumsum(norms)
    omega = system.lam_max * cum / cum[-1]
    omega[-1] = system.lam_max
    return omega


def esd_banded(
    F: SignalSet,
    L: LaplacianOperator,
    n_bands: int = DEFAULT_N_BANDS,
    mode: Literal["exact", "chebyshev"] = "exact",
    order: int = DEFAULT_ORDER_SMOOTH,
    degree: int = DEFAULT_ESTIMATION_DEGREE,
    spectrum: Spectrum | None = None,
    lam_max: float | None = None,
    system: KernelSystem | None = None,
) -> EnsembleESD:
    """Ensemble energy captured by each band of a B-spline Parseval system.

    ``mode="exact"`` filters through the eigendecomposition (computed if
    ``spectrum`` is not given). ``mode="chebyshev"`` never diagonalizes: the
    system spans ``[0, lam_max]`` with ``lam_max`` taken from the argument,
    the Laplacian hint, or a power-iteration estimate, and signals are
    de-meaned against the null vector only. A custom estimation ``system``
    (e.g. a multiresolution one) may be passed instead of ``n_bands``.
    """
    if F.n_vertices != L.n:
        raise DimensionMismatch(f"signals have {F.n_vertices} entries, graph has {L.n}")
    if system is None and n_bands < 2:
        raise InvalidParameters("need at least 2 bands")
    if mode == "exact":
        if spectrum is None:
            spectrum = full_spectrum(L)
        lam_max = spectrum.lambda_max
        if system is None:
            system = bspline_system(n_bands, degree, lam_max)
        Fn = F if F.normalized else demean_normalize(F, spectrum)
        b = sample_system(system, spectrum).values
        fhat2 = spectrum.gft(Fn.signals) ** 2
        a = np.mean(b ** 2 @ fhat2, axis=1)
    elif mode == "chebyshev":
        if system is not None:
            lam_max = system.lam_max
        if lam_max is None:
            lam_max = L.lambda_max_hint or estimate_lambda_max(L)
        if system is None:
            system = bspline_system(n_bands, degree, lam_max)
        Fn = demean_normalize_null(F, L)
        Y = cheb_apply_many(L, filters_for(system, order, lam_max), Fn.signals)
        a = np.mean(np.sum(Y ** 2, axis=1), axis=1)
    else:
        raise InvalidParameters(f"unknown mode {mode!r}")
    return EnsembleESD("banded", a, float(lam_max), band_abscissas(system), system,
                       mode if mode == "exact" else f"chebyshev({order})")


def esd_interpolate(banded: EnsembleESD, spectrum: Spectrum | None = None):
    """Continuous estimate through ``(0, 0)`` and ``(omega_i, a_i)``.

    Returns ``(E, e)`` where ``E`` is a shape-preserving cubic and ``e`` its
    samples at the eigenvalues (``None`` without a spectrum).
    """
    if banded.kind != "banded":
        raise InvalidParameters("interpolation needs a banded ESD")
    x = np.concatenate([[0.0], banded.abscissas])
    y = np.concatenate([[0.0], banded.values])
    E = pchip(x, y)
    e = None if spectrum is None else np.asarray(E(spectrum.eigenvalues))
    return E, e
