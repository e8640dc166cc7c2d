"""Signal-adapted tight frames of spectral graph kernels."""

from .chebyshev import ChebyshevFilter, cheb_apply, cheb_apply_many, cheb_coeffs, filters_for
from .energy import EnsembleESD, SignalSet, esd_banded, esd_direct, esd_interpolate
from .errors import ConfigError, DataError, GraphSpectraError, NumericalError
from .graph import Graph, LaplacianOperator, Spectrum, build_graph, estimate_lambda_max, full_spectrum, laplacian
from .kernels import (
    KernelSystem,
    bspline_system,
    frame_analysis,
    merge_bands,
    sample_system,
    solve_gamma,
    umt_system,
    warp_system,
)
from .signals import add_noise, make_sets, random_geometric_graph, road_like_graph, smooth_signal, spike
from .transform import (
    band_energies,
    build_signal_adapted,
    decompose_cheb,
    decompose_direct,
    ensemble_band_energies,
    reconstruct,
)
from .warp import (
    energy_warp_approx,
    energy_warp_exact,
    monotone_cubic,
    pivot_warp,
    sosks_system,
    spectrum_warp,
    warp_distance,
)

__version__ = "0.1.0"

__all__ = [
    "add_noise",
    "band_energies",
    "bspline_system",
    "build_graph",
    "build_signal_adapted",
    "cheb_apply",
    "cheb_apply_many",
    "cheb_coeffs",
    "ChebyshevFilter",
    "ConfigError",
    "DataError",
    "decompose_cheb",
    "decompose_direct",
    "energy_warp_approx",
    "energy_warp_exact",
    "ensemble_band_energies",
    "EnsembleESD",
    "esd_banded",
    "esd_direct",
    "esd_interpolate",
    "estimate_lambda_max",
    "filters_for",
    "frame_analysis",
    "full_spectrum",
    "Graph",
    "GraphSpectraError",
    "KernelSystem",
    "laplacian",
    "LaplacianOperator",
    "make_sets",
    "merge_bands",
    "monotone_cubic",
    "NumericalError",
    "pivot_warp",
    "random_geometric_graph",
    "reconstruct",
    "road_like_graph",
    "sample_system",
    "SignalSet",
    "smooth_signal",
    "solve_gamma",
    "sosks_system",
    "Spectrum",
    "spectrum_warp",
    "spike",
    "umt_system",
    "warp_distance",
    "warp_system",
]
