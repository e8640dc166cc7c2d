"""Synthetic graph signals ``A^n p`` from random spike patterns, plus noise.

Every random draw uses a PCG64 generator seeded from ``(seed, index)`` so
results do not depend on evaluation order.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import minimum_spanning_tree
from scipy.spatial import cKDTree

from .energy import SignalSet
from .errors import InvalidDensity, InvalidParameters
from .graph import Graph, build_graph

MAX_SMOOTHNESS = 16

#: Densities and realizations of the two reference signal sets.
DEFAULT_DENSITIES = (0.2, 0.5)
DEFAULT_REALIZATIONS = 10


def rng_for(seed: int, *index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *map(int, index)])))


def spike(density: float, n_vertices: int, seed: int = 0) -> np.ndarray:
    """0/1 vector with ``round(density * n_vertices)`` ones at random positions."""
    if not (0.0 < density <= 1.0):
        raise InvalidDensity(f"density must lie in (0, 1], got {density}")
    k = int(round(density * n_vertices))
    p = np.zeros(n_vertices)
    p[rng_for(seed).choice(n_vertices, size=k, replace=False)] = 1.0
    return p


def smooth_signal(g: Graph, smoothness: int, p: np.ndarray) -> np.ndarray:
    """``A^n p`` by ``n`` repeated sparse products."""
    n = int(smoothness)
    if not (0 <= n <= MAX_SMOOTHNESS):
        raise InvalidParameters(f"smoothness must lie in [0, {MAX_SMOOTHNESS}], got {n}")
    x = np.asarray(p, dtype=float).copy()
    for _ in range(n):
        x = g.adjacency @ x
    return x


def make_sets(g: Graph, pairs: Iterable[Sequence[float]] = ((0.2, 2), (0.5, 2)),
              realizations: int = DEFAULT_REALIZATIONS, seed: int = 0) -> SignalSet:
    """``realizations`` signals for each ``(density, smoothness)`` pair.

    Labels read ``eta=<density>;n=<smoothness>;i=<realization>``.
    """
    cols, labels = [], []
    for k, (eta, n) in enumerate(pairs):
        for i in range(int(realizations)):
            p = spike(eta, g.n_vertices, seed=_mix(seed, k, i))
            cols.append(smooth_signal(g, int(n), p))
            labels.append(f"eta={eta:g};n={int(n)};i={i}")
    return SignalSet(np.column_stack(cols), tuple(labels))


def reference_sets(g: Graph, seed: int = 0) -> tuple[SignalSet, SignalSet]:
    """The two smoothness classes: ``n = 2`` and ``n = 4`` at densities 0.2 and 0.5."""
    F1 = make_sets(g, [(eta, 2) for eta in DEFAULT_DENSITIES], DEFAULT_REALIZATIONS, seed)
    F2 = make_sets(g, [(eta, 4) for eta in DEFAULT_DENSITIES], DEFAULT_REALIZATIONS, seed)
    return F1, F2


def _mix(seed: int, *index: int) -> int:
    return int(np.random.SeedSequence([int(seed), *map(int, index)]).generate_state(1)[0])


def add_noise(F: SignalSet, snr_db: float, seed: int = 0) -> SignalSet:
    """Add white Gaussian noise at ``snr_db`` relative to each signal's sample variance.

    ``snr_db = inf`` returns the set unchanged.
    """
    if np.isposinf(snr_db):
        return F
    X = F.signals
    sigma_x = np.std(X, axis=0, ddof=1)
    sigma_e = sigma_x / np.sqrt(10.0 ** (snr_db / 10.0))
    noise = np.column_stack([rng_for(seed, s).standard_normal(X.shape[0]) for s in range(X.shape[1])])
    labels = tuple(f"{lab};snr={snr_db:g}" for lab in F.labels)
    return SignalSet(X + noise * sigma_e, labels)


def random_geometric_graph(n_vertices: int = 500, radius: float | None = None, seed: int = 0,
                           max_tries: int = 50) -> Graph:
    """Connected unit-weight random geometric graph in the unit square.

    Without ``radius`` the connectivity threshold ``sqrt(log N / (pi N))``
    is used; the radius grows by 10% until the graph is connected.
    """
    pts = rng_for(seed).random((n_vertices, 2))
    r = np.sqrt(np.log(n_vertices) / (np.pi * n_vertices)) if radius is None else float(radius)
    tree = cKDTree(pts)
    for _ in range(max_tries):
        pairs = tree.query_pairs(r, output_type="ndarray")
        g = build_graph(pairs, n_vertices)
        if g.is_connected():
            return g
        r *= 1.1
    raise InvalidParameters("could not obtain a connected graph; increase radius")


def road_like_graph(n_vertices: int = 500, rgg_degree: float = 2.0, seed: int = 0) -> Graph:
    """Sparse connected geometric graph resembling a road network.

    Points in the unit square are joined within the radius whose expected
    degree is ``rgg_degree``; the edges of their Euclidean minimum spanning
    tree are then added so the graph is connected. The default gives a
    mean degree of about 2.5.
    """
    if n_vertices < 2:
        raise InvalidParameters("need at least two vertices")
    pts = rng_for(seed).random((n_vertices, 2))
    tree = cKDTree(pts)
    r = np.sqrt(max(rgg_degree, 0.0) / (np.pi * n_vertices))
    pairs = {tuple(p) for p in tree.query_pairs(r, output_type="ndarray")} if r > 0 else set()
    # MST over a kNN candidate set is exact when that set is connected
    k = min(n_vertices - 1, 12)
    while True:
        dist, idx = tree.query(pts, k=k + 1)
        rows = np.repeat(np.arange(n_vertices), k)
        cand = sp.csr_matrix((dist[:, 1:].ravel(), (rows, idx[:, 1:].ravel())),
                             shape=(n_vertices, n_vertices))
        cand = cand.maximum(cand.T)
        mst = minimum_spanning_tree(cand).tocoo()
        if mst.nnz == n_vertices - 1 or k == n_vertices - 1:
            break
        k = min(n_vertices - 1, 2 * k)
    pairs.update((min(i, j), max(i, j)) for i, j in zip(mst.row.tolist(), mst.col.tolist()))
    return build_graph(sorted(pairs), n_vertices)


def path_graph(n: int) -> Graph:
    return build_graph([(i, i + 1) for i in range(n - 1)], n)


