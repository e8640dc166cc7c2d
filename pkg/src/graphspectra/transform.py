"""Analysis and synthesis of graph signals with a system of spectral kernels."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .chebyshev import ChebyshevFilter, cheb_apply_many
from .errors import DimensionMismatch, IndexOutOfRange, InvalidParameters, NotParseval, ZeroSignal
from .graph import LaplacianOperator
from .kernels import KernelSystem, SampledSystem, merge_bands, warp_system


@dataclass(frozen=True, eq=False)
class Coefficients:
    """``values[j]`` is the band-``j`` filtered signal (``J x N_g``)."""

    values: np.ndarray
    mode: str = "direct"

    @property
    def n_bands(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True, eq=False)
class Atom:
    band: int
    vertex: int
    vector: np.ndarray


def _signal(f, n: int) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.ndim != 1 or f.size != n:
        raise DimensionMismatch(f"expected a length-{n} signal, got shape {f.shape}")
    return f


def atom(sampled: SampledSystem, band: int, vertex: int) -> Atom:
    """Impulse response of kernel ``band`` centred at ``vertex`` (both 0-based)."""
    spec = sampled.spectrum
    if not (0 <= band < sampled.n_bands and 0 <= vertex < spec.n):
        raise IndexOutOfRange(f"atom ({band}, {vertex}) out of range")
    V = spec.eigenvectors
    psi = V @ (sampled.values[band] * V[vertex])
    return Atom(band, vertex, psi)


def decompose_direct(f, sampled: SampledSystem) -> Coefficients:
    spec = sampled.spectrum
    f = _signal(f, spec.n)
    fhat = spec.gft(f)
    return Coefficients((sampled.values * fhat) @ spec.eigenvectors.T, "direct")


def reconstruct(c: Coefficients, sampled: SampledSystem, tol: float = 1e-8) -> np.ndarray:
    """Synthesis ``sum_j sum_m c[j, m] psi_{j, m}``, done in the spectral domain."""
    if c.mode != "direct":
        raise InvalidParameters("reconstruction needs direct-mode coefficients")
    if c.values.shape != sampled.values.shape:
        raise DimensionMismatch(f"coefficients {c.values.shape} vs system {sampled.values.shape}")
    G = np.sum(sampled.values ** 2, axis=0)
    if np.max(np.abs(G - 1.0)) > tol:
        raise NotParseval(f"sum of squared kernels deviates from 1 by {np.max(np.abs(G - 1.0)):.2e}")
    V = sampled.spectrum.eigenvectors
    chat = c.values @ V
    return V @ np.sum(sampled.values * chat, axis=0)


def decompose_cheb(f, L: LaplacianOperator, filters: Sequence[ChebyshevFilter]) -> Coefficients:
    """Band-filtered signals through Chebyshev polynomials of ``L``."""
    f = _signal(f, L.n)
    order = max(flt.order for flt in filters)
    return Coefficients(cheb_apply_many(L, filters, f), f"chebyshev({order})")


def band_energies(c: Coefficients) -> np.ndarray:
    """Fraction of the coefficient energy in each band."""
    per_band = np.sum(c.values ** 2, axis=1)
    total = per_band.sum()
    if total <= 0:
        raise ZeroSignal("all coefficients are zero")
    return per_band / total


def ensemble_band_energies(F, sampled: SampledSystem, remove: str = "literal") -> np.ndarray:
    """Mean of :func:`band_energies` over the de-meaned, normalized signals of ``F``."""
    from .energy import demean_normalize

    Fn = F if F.normalized else demean_normalize(F, sampled.spectrum, remove)
    return np.mean([band_energies(decompose_direct(f, sampled)) for f in Fn.signals.T], axis=0)


def build_signal_adapted(prototype: KernelSystem, warp) -> KernelSystem:
    """Warp a tight prototype system (normally UMT) by an energy-equalizing map."""
    system = warp_system(prototype, warp)
    system.meta["signal_adapted"] = True
    return system


def merged_coarse_bands(system: KernelSystem, band_energy: np.ndarray, n_lower: int,
                        n_middle: int = 3, tail_energy: float = 0.01) -> KernelSystem:
    """Coarse Parseval system from a fine estimation system.

    The first ``n_lower`` fine bands form band 1. Trailing fine bands whose
    cumulative share of ``band_energy`` stays within ``tail_energy`` form the
    last band, and the remainder is split into ``n_middle`` bands of roughly
    equal energy.
    """
    e = np.asarray(band_energy, dtype=float)
    J = len(system)
    if e.size != J or not (0 < n_lower < J):
        raise InvalidParameters("band_energy must match the system and 0 < n_lower < J")
    e = e / e.sum()
    tail_cum = np.cumsum(e[::-1])
    n_tail = max(1, int(np.searchsorted(tail_cum, tail_energy, side="right")))
    start, stop = n_lower, J - n_tail
    if stop - start < n_middle:
        raise InvalidParameters("not enough fine bands left for the middle groups")
    mid = e[start:stop]
    cum = np.cumsum(mid) / mid.sum()
    cuts = [int(np.searchsorted(cum, q)) + 1 for q in np.arange(1, n_middle) / n_middle]
    # keep every middle group nonempty
    edges = [0]
    for k, cut in enumerate(cuts):
        lo = edges[-1] + 1
        hi = mid.size - (n_middle - 1 - k)
        edges.append(min(max(cut, lo), hi))
    edges.append(mid.size)
    groups = [list(range(n_lower))]
    groups += [list(range(start + edges[k], start + edges[k + 1])) for k in range(n_middle)]
    groups.append(list(range(stop, J)))
    return merge_bands(system, groups)
