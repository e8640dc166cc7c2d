"""Synthetic experiments: smooth signal sets on a road-like graph.

Each function returns plain data (numpy arrays and dicts) so the CLI and
the demos can export or plot it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .energy import SignalSet, esd_banded, esd_direct
from .graph import Graph, LaplacianOperator, Spectrum, full_spectrum, laplacian
from .kernels import KernelSystem, sample_system, umt_system
from .signals import add_noise, make_sets, reference_sets, road_like_graph
from .transform import build_signal_adapted, ensemble_band_energies
from .warp import (
    average_warps,
    energy_warp_approx,
    energy_warp_exact,
    spectrum_warp,
    warp_distance,
)

DEFAULT_SNRS = (-20.0, -10.0, 0.0, 10.0, 20.0)


def desk_graph(seed: int = 0, n_vertices: int = 500) -> Graph:
    return road_like_graph(n_vertices, seed=seed)


@dataclass
class Setup:
    graph: Graph
    L: LaplacianOperator
    spectrum: Spectrum

    @property
    def lam_max(self) -> float:
        return self.spectrum.lambda_max


def setup(graph: Graph, kind: str = "normalized") -> Setup:
    L = laplacian(graph, kind)
    S = full_spectrum(L)
    return Setup(graph, L.with_lambda_max(S.lambda_max), S)


def adapted_warp(F: SignalSet, st: Setup, mode: str = "approx", n_approx: int = 100):
    """Energy-equalizing warp of ``F`` (``mode`` is ``exact``, ``approx`` or ``chebyshev``)."""
    if mode == "exact":
        return energy_warp_exact(esd_direct(F, st.spectrum), st.spectrum)
    if mode == "approx":
        return energy_warp_approx(esd_banded(F, st.L, n_approx, spectrum=st.spectrum))
    if mode == "chebyshev":
        return energy_warp_approx(esd_banded(F, st.L, n_approx, mode="chebyshev",
                                             lam_max=st.lam_max))
    raise ValueError(f"unknown warp mode {mode!r}")


def first_band_edge(system: KernelSystem, grid_points: int = 20001) -> float:
    """Largest ``lambda`` where the first kernel is nonzero."""
    lam = np.linspace(0.0, system.lam_max, grid_points)
    k = np.asarray(system.kernels[0](lam))
    return float(lam[np.flatnonzero(k > 0)[-1]])


@dataclass
class MinnesotaResult:
    setup: Setup
    sets: dict
    esd: dict
    warps: dict
    systems: dict
    band_energies: dict = field(default_factory=dict)


def minnesota(graph: Graph | None = None, kind: str = "normalized", n_bands: int = 7,
              n_approx: int = 100, seed: int = 0, spectrum_bands: int = 6) -> MinnesotaResult:
    """Two smoothness classes, their exact/approximate warps and adapted systems."""
    st = setup(desk_graph(seed) if graph is None else graph, kind)
    F1, F2 = reference_sets(st.graph, seed)
    sets = {"F1": F1, "F2": F2}
    esd, warps, systems, energies = {}, {}, {}, {}
    proto = umt_system(n_bands, st.lam_max)
    for name, F in sets.items():
        esd[name] = esd_direct(F, st.spectrum)
        banded = esd_banded(F, st.L, n_approx, spectrum=st.spectrum)
        esd[name + "_banded"] = banded
        warps[name + "_exact"] = energy_warp_exact(esd[name], st.spectrum)
        warps[name + "_approx"] = energy_warp_approx(banded)
        for mode in ("exact", "approx"):
            key = f"{name}_{mode}"
            systems[key] = build_signal_adapted(proto, warps[key])
            energies[key] = ensemble_band_energies(F, sample_system(systems[key], st.spectrum))
    warps["spectrum"] = spectrum_warp(st.spectrum)
    systems["spectrum"] = build_signal_adapted(umt_system(spectrum_bands, st.lam_max),
                                               warps["spectrum"])
    return MinnesotaResult(st, sets, esd, warps, systems, energies)


def noise_sweep(graph: Graph | None = None, kind: str = "normalized", snrs=DEFAULT_SNRS,
                seed: int = 0, n_approx: int = 100, n_bands: int = 7) -> dict:
    """Warp deviations of noisy versions of the ``n = 2`` set.

    Returns per-SNR RMS distances to the clean energy warp and to the
    spectrum warp, the sup distance to their average, the trend checks,
    and the warps themselves.
    """
    st = setup(desk_graph(seed) if graph is None else graph, kind)
    F1, _ = reference_sets(st.graph, seed)
    lam_max = st.lam_max
    T_F = adapted_warp(F1, st, "approx", n_approx)
    T_L = spectrum_warp(st.spectrum)
    T_mid = average_warps([T_F, T_L], lam_max)
    rows = []
    noisy_warps = {}
    for snr in snrs:
        Fs = add_noise(F1, snr, seed=seed + 1)
        T = adapted_warp(Fs, st, "approx", n_approx)
        noisy_warps[snr] = T
        rows.append({
            "snr_db": float(snr),
            "dist_energy": warp_distance(T, T_F, lam_max),
            "dist_spectrum": warp_distance(T, T_L, lam_max),
            "sup_dist_average": warp_distance(T, T_mid, lam_max, ord=np.inf),
        })
    order = np.argsort([r["snr_db"] for r in rows])
    d_e = np.array([rows[i]["dist_energy"] for i in order])
    lowest = rows[order[0]]
    zero = [r for r in rows if r["snr_db"] == 0.0]
    checks = {
        "energy_distance_nonincreasing": bool(np.all(np.diff(d_e) <= 0.0)),
        "lowest_snr_closer_to_spectrum": bool(lowest["dist_spectrum"] < lowest["dist_energy"]),
        "zero_db_near_average": bool(zero and zero[0]["sup_dist_average"] <= 0.1 * lam_max),
    }
    return {"rows": rows, "checks": checks, "lam_max": lam_max, "T_F": T_F, "T_L": T_L,
            "T_average": T_mid, "noisy_warps": noisy_warps,
            "systems": {snr: build_signal_adapted(umt_system(n_bands, lam_max), T)
                        for snr, T in noisy_warps.items()}}


def equi_energy(graph: Graph | None = None, kind: str = "normalized", n_bands: int = 7,
                smoothness: int = 2, seed: int = 0, mode: str = "exact", n_approx: int = 100) -> dict:
    """Ensemble band energies of the signal-adapted UMT system built from the same set."""
    st = setup(desk_graph(seed) if graph is None else graph, kind)
    F = make_sets(st.graph, [(0.2, smoothness), (0.5, smoothness)], 10, seed)
    T = adapted_warp(F, st, mode, n_approx)
    system = build_signal_adapted(umt_system(n_bands, st.lam_max), T)
    energies = ensemble_band_energies(F, sample_system(system, st.spectrum))
    return {"band_energies": energies, "target": 1.0 / n_bands,
            "max_deviation": float(np.max(np.abs(energies - 1.0 / n_bands))),
            "warp": T, "system": system, "lam_max": st.lam_max}
