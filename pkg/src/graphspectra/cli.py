"""Command-line driver: load graphs, design kernel systems, run experiments.

Every subcommand writes CSV files (17 significant digits, LF newlines) and
a JSON provenance record into ``--out``. Exit codes: 0 success, 2 bad
configuration, 3 bad data, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import contextlib
import os
import sys
from pathlib import Path

import numpy as np

from . import experiments as exps
from .chebyshev import DEFAULT_ORDER_SMOOTH, filters_for
from .energy import DEFAULT_N_BANDS, SignalSet, esd_banded, esd_direct
from .errors import ConfigError, DataError, GraphSpectraError, InvalidParameters, NumericalError
from .graph import Graph, estimate_lambda_max, full_spectrum, laplacian
from .io import load_graph, read_csv, write_csv, write_metadata
from .kernels import (
    DEFAULT_GAMMA,
    KernelSystem,
    bspline_system,
    frame_analysis,
    sample_system,
    umt_system,
    warp_system,
)
from .signals import add_noise, make_sets, random_geometric_graph, road_like_graph
from .transform import decompose_cheb, decompose_direct
from .warp import (
    energy_warp_approx,
    energy_warp_exact,
    pivot_warp,
    sosks_system,
    spectrum_warp,
)

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_NUMERICAL = 0, 2, 3, 4
DESIGN_GRID = 2001
WARP_MODES = ("none", "energy-exact", "energy-approx", "spectrum", "pivot")
DEFAULT_BANDS = {"umt": 7, "bspline": 20, "sosks": 57}
LAPLACIANS = {"comb": "combinatorial", "norm": "normalized"}


# ----------------------------------------------------------------- inputs

def _graph(args) -> Graph:
    """``--graph`` is a file, or ``road:N`` / ``rgg:N`` for a seeded generator."""
    spec = args.graph or "road:500"
    if not Path(spec).exists() and ":" in spec:
        kind, _, n = spec.partition(":")
        try:
            n = int(n)
        except ValueError:
            raise InvalidParameters(f"bad generator spec {spec!r}") from None
        if kind == "road":
            return road_like_graph(n, seed=args.seed)
        if kind == "rgg":
            return random_geometric_graph(n, seed=args.seed)
        raise InvalidParameters(f"unknown generator {kind!r}; use road:N or rgg:N")
    if not Path(spec).exists():
        raise ConfigError(f"graph file {spec!r} not found")
    return load_graph(spec, args.format)


def _signals(args, g: Graph) -> SignalSet:
    """Signals from ``--signals`` (CSV, one column per signal) or generated."""
    if args.signals:
        header, cols = read_csv(args.signals)
        if header and header[0] == "vertex":
            header, cols = header[1:], cols[1:]
        F = SignalSet(np.column_stack(cols), tuple(header))
        if F.n_vertices != g.n_vertices:
            raise DataError(f"signals have {F.n_vertices} rows, graph has {g.n_vertices} vertices")
        return F
    return make_sets(g, [(0.2, args.smoothness), (0.5, args.smoothness)], args.realizations, args.seed)


class _Context:
    """Graph, Laplacian and (lazily) spectrum shared by a command."""

    def __init__(self, args, need_graph: bool = True):
        self.args = args
        self.kind = LAPLACIANS[args.laplacian]
        self.graph = _graph(args) if need_graph else None
        self.L = laplacian(self.graph, self.kind) if self.graph is not None else None
        self._spectrum = None

    @property
    def spectrum(self):
        if self._spectrum is None:
            self._spectrum = full_spectrum(self.L)
        return self._spectrum

    @property
    def lam_max(self) -> float:
        if self.graph is None:
            return float(self.args.lambda_max)
        return self.spectrum.lambda_max

    def L_hinted(self):
        return self.L.with_lambda_max(self.lam_max)


def _warp(ctx: _Context, F: SignalSet | None = None):
    mode = ctx.args.warp
    if mode == "none":
        return None
    if mode == "spectrum":
        return spectrum_warp(ctx.spectrum)
    if mode == "pivot":
        a = ctx.args
        total = a.bands or DEFAULT_BANDS[a.family]
        return pivot_warp(a.pivot * ctx.lam_max, a.lower, total, ctx.lam_max)
    F = _signals(ctx.args, ctx.graph) if F is None else F
    if mode == "energy-exact":
        return energy_warp_exact(esd_direct(F, ctx.spectrum), ctx.spectrum)
    return energy_warp_approx(esd_banded(F, ctx.L_hinted(), ctx.args.na, spectrum=ctx.spectrum))


def _system(ctx: _Context, warp=None) -> KernelSystem:
    a = ctx.args
    J = a.bands or DEFAULT_BANDS[a.family]
    lam_max = ctx.lam_max
    if a.family == "umt":
        system = umt_system(J, lam_max, a.gamma)
    elif a.family == "bspline":
        system = bspline_system(J, a.degree, lam_max)
    else:
        if a.warp != "none":
            raise InvalidParameters("sosks already carries its pivot warp; use --warp none")
        return sosks_system(lam_max, J, a.lower, a.pivot, a.degree)
    if warp is not None:
        system = warp_system(system, warp)
    return system


def _needs_graph(args) -> bool:
    return args.graph is not None or args.warp not in ("none", "pivot")


# ----------------------------------------------------------------- outputs

def _out(args) -> Path:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out")}


def _kernel_table(system: KernelSystem, points: int = DESIGN_GRID):
    lam = np.linspace(0.0, system.lam_max, points)
    K = system(lam)
    header = ["lambda"] + [f"k{j + 1}" for j in range(len(system))] + ["G"]
    return header, [lam, *K, np.sum(K ** 2, axis=0)]


def _warp_record(T) -> dict | None:
    if T is None:
        return None
    return {"knots": T.knots, "values": T.values, "tangents": T.tangents}


def _system_meta(system: KernelSystem) -> dict:
    _, _, B1, B2 = frame_analysis(system)
    keep = ("family", "gamma", "a", "delta", "degree", "n_lower", "pivot", "merged_groups")
    meta = {k: system.meta[k] for k in keep if k in system.meta}
    return {"n_bands": len(system), "lambda_max": system.lam_max, "tight": system.tight,
            "frame_bounds": [B1, B2], **meta}


# ---------------------------------------------------------------- commands

def cmd_load(args) -> int:
    g = _graph(args)
    deg = g.degrees
    info = {"n_vertices": g.n_vertices, "n_edges": g.n_edges, "connected": g.is_connected(),
            "degree_min": float(deg.min()), "degree_mean": float(deg.mean()),
            "degree_max": float(deg.max())}
    for k, v in info.items():
        print(f"{k}: {v}")
    if args.out:
        write_metadata(_out(args) / "graph.json", _config(args), args.seed, graph=info)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    ctx = _Context(args)
    S = ctx.spectrum
    out = _out(args)
    mult = np.repeat([m for _, m, _ in S.groups], [m for _, m, _ in S.groups])
    write_csv(out / "spectrum.csv", ["index", "lambda", "multiplicity"],
              [np.arange(1, S.n + 1), S.eigenvalues, mult])
    write_metadata(out / "spectrum.json", _config(args), args.seed,
                   lambda_max=S.lambda_max, n_distinct=len(S.groups),
                   lambda_max_estimate=estimate_lambda_max(ctx.L))
    print(f"lambda_max: {S.lambda_max:.17g}  distinct eigenvalues: {len(S.groups)}")
    return EXIT_OK


def cmd_design(args) -> int:
    ctx = _Context(args, need_graph=_needs_graph(args))
    T = None if args.warp == "none" else _warp(ctx)
    system = _system(ctx, T)
    out = _out(args)
    header, cols = _kernel_table(system)
    write_csv(out / "kernels.csv", header, cols)
    meta = _system_meta(system)
    write_metadata(out / "design.json", _config(args), args.seed, system=meta, warp=_warp_record(T))
    print(f"{len(system)} kernels, frame bounds [{meta['frame_bounds'][0]:.12g}, "
          f"{meta['frame_bounds'][1]:.12g}]")
    return EXIT_OK


def cmd_esd(args) -> int:
    ctx = _Context(args)
    F = _signals(args, ctx.graph)
    out = _out(args)
    if args.esd_mode == "exact":
        S = ctx.spectrum
        e = esd_direct(F, S)
        write_csv(out / "esd_direct.csv", ["lambda", "e"], [S.eigenvalues, e.values])
        banded = esd_banded(F, ctx.L_hinted(), args.na, spectrum=S)
        totals = {"direct": e.total}
    else:
        lam_max = estimate_lambda_max(ctx.L)
        banded = esd_banded(F, ctx.L.with_lambda_max(lam_max), args.na, mode="chebyshev",
                            order=args.order, lam_max=lam_max)
        totals = {}
    totals["banded"] = banded.total
    write_csv(out / "esd_banded.csv", ["omega", "a"], [banded.abscissas, banded.values])
    write_metadata(out / "esd.json", _config(args), args.seed, totals=totals,
                   lambda_max=banded.lam_max, mode=banded.mode)
    print(" ".join(f"sum_{k}={v:.12g}" for k, v in totals.items()))
    return EXIT_OK


def cmd_warp(args) -> int:
    if args.warp == "none":
        raise InvalidParameters("choose a warp with --warp")
    ctx = _Context(args)
    T = _warp(ctx)
    out = _out(args)
    lam = np.linspace(0.0, ctx.lam_max, DESIGN_GRID)
    write_csv(out / "warp.csv", ["lambda", "T"], [lam, T(lam)])
    write_metadata(out / "warp.json", _config(args), args.seed, warp=_warp_record(T),
                   lambda_max=ctx.lam_max)
    return EXIT_OK


def cmd_decompose(args) -> int:
    ctx = _Context(args)
    F = _signals(args, ctx.graph)
    if not 0 <= args.column < F.n_signals:
        raise InvalidParameters(f"--column {args.column} out of range for {F.n_signals} signals")
    f = F.signals[:, args.column]
    T = None if args.warp == "none" else _warp(ctx, F)
    system = _system(ctx, T)
    if args.order == 0:
        c = decompose_direct(f, sample_system(system, ctx.spectrum))
    else:
        c = decompose_cheb(f, ctx.L_hinted(), filters_for(system, args.order, ctx.lam_max))
    out = _out(args)
    header = ["vertex"] + [f"c{j + 1}" for j in range(c.n_bands)]
    write_csv(out / "coefficients.csv", header, [np.arange(1, ctx.graph.n_vertices + 1), *c.values])
    write_metadata(out / "decompose.json", _config(args), args.seed, mode=c.mode,
                   signal=F.labels[args.column], system=_system_meta(system))
    return EXIT_OK


def cmd_synth(args) -> int:
    g = _graph(args)
    F = _signals(args, g)
    out = _out(args)
    vertex = np.arange(1, g.n_vertices + 1)
    write_csv(out / "signals.csv", ["vertex", *F.labels], [vertex, *F.signals.T])
    files = ["signals.csv"]
    for snr in args.snr_list or ():
        Fs = add_noise(F, snr, seed=args.seed + 1)
        name = f"signals_snr{snr:g}.csv"
        write_csv(out / name, ["vertex", *Fs.labels], [vertex, *Fs.signals.T])
        files.append(name)
    write_metadata(out / "synth.json", _config(args), args.seed, files=files)
    return EXIT_OK


def _experiment_minnesota(args, g, out: Path) -> dict:
    r = exps.minnesota(g, LAPLACIANS[args.laplacian], args.bands or 7, args.na, args.seed)
    S = r.setup.spectrum
    write_csv(out / "esd.csv", ["lambda", "e_F1", "e_F2"],
              [S.eigenvalues, r.esd["F1"].values, r.esd["F2"].values])
    b1, b2 = r.esd["F1_banded"], r.esd["F2_banded"]
    write_csv(out / "esd_banded.csv", ["omega", "a_F1", "a_F2"], [b1.abscissas, b1.values, b2.values])
    lam = np.linspace(0.0, r.setup.lam_max, DESIGN_GRID)
    names = sorted(r.warps)
    write_csv(out / "warps.csv", ["lambda", *names], [lam, *(r.warps[k](lam) for k in names)])
    for key, system in r.systems.items():
        write_csv(out / f"kernels_{key}.csv", *_kernel_table(system))
    keys = sorted(r.band_energies)
    J = len(r.band_energies[keys[0]])
    write_csv(out / "band_energies.csv", ["band", *keys],
              [np.arange(1, J + 1), *(r.band_energies[k] for k in keys)])
    edges = {k: exps.first_band_edge(s) for k, s in r.systems.items()}
    return {"lambda_max": r.setup.lam_max, "first_band_edge": edges,
            "F2_first_band_below_F1": edges["F2_exact"] < edges["F1_exact"],
            "sup_exact_minus_approx": {
                n: float(np.max(np.abs(r.warps[f"{n}_exact"](lam) - r.warps[f"{n}_approx"](lam))))
                for n in ("F1", "F2")}}


def _experiment_noise(args, g, out: Path) -> dict:
    snrs = args.snr_list or exps.DEFAULT_SNRS
    r = exps.noise_sweep(g, LAPLACIANS[args.laplacian], snrs, args.seed, args.na, args.bands or 7)
    rows = r["rows"]
    write_csv(out / "noise_sweep.csv", ["snr_db", "dist_energy", "dist_spectrum", "sup_dist_average"],
              [np.array([row[k] for row in rows]) for k in
               ("snr_db", "dist_energy", "dist_spectrum", "sup_dist_average")])
    lam = np.linspace(0.0, r["lam_max"], DESIGN_GRID)
    cols = [r["T_F"](lam), r["T_L"](lam), r["T_average"](lam)]
    cols += [r["noisy_warps"][s](lam) for s in snrs]
    write_csv(out / "warps.csv", ["lambda", "T_F", "T_spectrum", "T_average",
                                  *(f"T_snr{s:g}" for s in snrs)], [lam, *cols])
    return {"lambda_max": r["lam_max"], "checks": r["checks"]}


def _experiment_equi(args, g, out: Path) -> dict:
    mode = {"energy-approx": "approx"}.get(args.warp, "exact")
    r = exps.equi_energy(g, LAPLACIANS[args.laplacian], args.bands or 7, args.smoothness,
                         args.seed, mode, args.na)
    e = r["band_energies"]
    write_csv(out / "band_energies.csv", ["band", "energy", "target"],
              [np.arange(1, e.size + 1), e, np.full(e.size, r["target"])])
    return {"lambda_max": r["lam_max"], "max_deviation": r["max_deviation"], "warp_mode": mode}


EXPERIMENTS = {"minnesota": _experiment_minnesota, "noise-sweep": _experiment_noise,
               "equi-energy": _experiment_equi}


def cmd_experiment(args) -> int:
    g = _graph(args)
    out = _out(args)
    summary = EXPERIMENTS[args.name](args, g, out)
    write_metadata(out / "experiment.json", _config(args), args.seed, experiment=args.name,
                   summary=summary)
    for k, v in summary.items():
        print(f"{k}: {v}")
    return EXIT_OK


# ------------------------------------------------------------------ parser

def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="edge list / MatrixMarket file, or road:N, rgg:N")
    common.add_argument("--format", choices=("edgelist", "matrixmarket"), default="edgelist")
    common.add_argument("--laplacian", choices=tuple(LAPLACIANS), default="norm")
    common.add_argument("--family", choices=tuple(DEFAULT_BANDS), default="umt")
    common.add_argument("--bands", type=int, help="number of kernels J")
    common.add_argument("--degree", type=int, default=3, help="B-spline degree")
    common.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    common.add_argument("--warp", choices=WARP_MODES, default="none")
    common.add_argument("--na", type=int, default=DEFAULT_N_BANDS, help="bands for ESD estimation")
    common.add_argument("--order", type=int, default=DEFAULT_ORDER_SMOOTH,
                        help="Chebyshev order (0 means exact filtering)")
    common.add_argument("--snr-list", type=_float_list, help="e.g. -20,-10,0,10,20")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="output directory (default: current)")
    common.add_argument("--signals", help="CSV of signals, one column each")
    common.add_argument("--smoothness", type=int, default=2)
    common.add_argument("--realizations", type=int, default=10)
    common.add_argument("--lambda-max", type=float, default=2.0,
                        help="spectral range when no graph is given")
    common.add_argument("--lower", type=int, default=20, help="bands below the pivot")
    common.add_argument("--pivot", type=float, default=0.05, help="pivot as a fraction of lambda_max")

    p = argparse.ArgumentParser(prog="graphspectra", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, func, help_ in [
        ("load", cmd_load, "parse and validate a graph"),
        ("validate", cmd_load, "alias of load"),
        ("spectrum", cmd_spectrum, "eigenvalues of the Laplacian"),
        ("design", cmd_design, "sample a kernel system"),
        ("esd", cmd_esd, "ensemble energy spectral density"),
        ("warp", cmd_warp, "warping function"),
        ("decompose", cmd_decompose, "analysis coefficients of one signal"),
        ("synth", cmd_synth, "generate smooth signal sets"),
    ]:
        sp_ = sub.add_parser(name, parents=[common], help=help_)
        sp_.set_defaults(func=func)
        if name == "esd":
            sp_.add_argument("--esd-mode", choices=("exact", "chebyshev"), default="exact")
        if name == "decompose":
            sp_.add_argument("--column", type=int, default=0, help="0-based signal column")
    ex = sub.add_parser("experiment", parents=[common], help="run a synthetic experiment")
    ex.add_argument("name", choices=tuple(EXPERIMENTS))
    ex.set_defaults(func=cmd_experiment)
    return p


@contextlib.contextmanager
def _thread_limit():
    n = os.environ.get("GRAPHSPECTRA_THREADS")
    if not n:
        yield
        return
    from threadpoolctl import threadpool_limits

    with threadpool_limits(limits=max(1, int(n))):
        yield


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with _thread_limit():
            return args.func(args)
    except (GraphSpectraError, FileNotFoundError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code(exc)


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, DataError):
        return EXIT_DATA
    if isinstance(exc, NumericalError):
        return EXIT_NUMERICAL
    return EXIT_CONFIG

if __name__ == "__main__":
    sys.exit(main())
