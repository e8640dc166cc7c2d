"""Graphs, Laplacians and their spectra.

Vertices are 0-based everywhere in the Python API. Edge-list files are
1-based and converted by :mod:`graphspectra.io`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Literal, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import (
    Disconnected,
    DimensionMismatch,
    DuplicateEdge,
    IndexOutOfRange,
    IsolatedVertex,
    NegativeWeight,
    NoConvergence,
    SelfLoop,
    TooLarge,
)

LaplacianKind = Literal["combinatorial", "normalized"]

#: Largest graph accepted by :func:`full_spectrum`.
DENSE_EIG_CAP = 5000


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected weighted graph without self-loops.

    ``adjacency`` is a symmetric CSR matrix; ``edges`` lists each undirected
    edge once as ``(i, j, w)`` with ``i < j``.
    """

    n_vertices: int
    adjacency: sp.csr_matrix
    edges: tuple = field(repr=False, default=())

    @property
    def degrees(self) -> np.ndarray:
        return np.asarray(self.adjacency.sum(axis=1)).ravel()

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def is_connected(self) -> bool:
        n_comp, _ = connected_components(self.adjacency, directed=False)
        return n_comp == 1


def build_graph(edge_list: Iterable[Sequence[float]], n_vertices: int) -> Graph:
    """Build a :class:`Graph` from ``(i, j[, w])`` tuples with 0-based indices.

    Each undirected edge must appear exactly once; listing both ``(i, j)``
    and ``(j, i)`` raises :class:`DuplicateEdge`. A missing weight means 1.
    """
    n_vertices = int(n_vertices)
    if n_vertices < 1:
        raise IndexOutOfRange("n_vertices must be positive")
    seen = {}
    for edge in edge_list:
        if len(edge) == 2:
            i, j = edge
            w = 1.0
        elif len(edge) == 3:
            i, j, w = edge
        else:
            raise ValueError(f"edge must be (i, j) or (i, j, w), got {edge!r}")
        i, j, w = int(i), int(j), float(w)
        if not (0 <= i < n_vertices and 0 <= j < n_vertices):
            raise IndexOutOfRange(f"edge ({i}, {j}) outside [0, {n_vertices})")
        if i == j:
            raise SelfLoop(f"self-loop at vertex {i}")
        if not np.isfinite(w) or w < 0:
            raise NegativeWeight(f"edge ({i}, {j}) has weight {w}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise DuplicateEdge(f"edge {key} listed more than once")
        seen[key] = w

    edges = tuple(sorted((i, j, w) for (i, j), w in seen.items()))
    if edges:
        ii, jj, ww = (np.array(col) for col in zip(*edges))
        rows = np.concatenate([ii, jj]).astype(np.int64)
        cols = np.concatenate([jj, ii]).astype(np.int64)
        vals = np.concatenate([ww, ww]).astype(float)
    else:
        rows = cols = np.zeros(0, dtype=np.int64)
        vals = np.zeros(0)
    A = sp.csr_matrix((vals, (rows, cols)), shape=(n_vertices, n_vertices))
    A.sort_indices()
    return Graph(n_vertices, A, edges)


def graph_from_adjacency(A) -> Graph:
    """Wrap a symmetric (dense or sparse) adjacency matrix as a :class:`Graph`."""
    A = sp.csr_matrix(A, dtype=float)
    if A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"adjacency must be square, got {A.shape}")
    upper = sp.triu(A, k=1).tocoo()
    if abs(A - A.T).max() > 0:
        from .errors import AsymmetricWeight

        raise AsymmetricWeight("adjacency matrix is not symmetric")
    if A.diagonal().any():
        raise SelfLoop("adjacency has nonzero diagonal")
    return build_graph(zip(upper.row, upper.col, upper.data), A.shape[0])


@dataclass(frozen=True, eq=False)
class LaplacianOperator:
    kind: LaplacianKind
    matrix: sp.csr_matrix
    degrees: np.ndarray = field(repr=False)
    lambda_max_hint: float | None = None

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def null_vector(self) -> np.ndarray:
        """Unit-norm eigenvector of eigenvalue 0, known without diagonalizing."""
        if self.kind == "combinatorial":
            v = np.ones(self.n)
        else:
            v = np.sqrt(self.degrees)
        return v / np.linalg.norm(v)

    def with_lambda_max(self, value: float) -> "LaplacianOperator":
        return LaplacianOperator(self.kind, self.matrix, self.degrees, float(value))

    def is_connected(self) -> bool:
        n_comp, _ = connected_components(self.matrix, directed=False)
        return n_comp == 1


def laplacian(g: Graph, kind: LaplacianKind = "combinatorial") -> LaplacianOperator:
    """Combinatorial ``D - A`` or normalized ``D^-1/2 (D - A) D^-1/2`` Laplacian."""
    if kind not in ("combinatorial", "normalized"):
        raise ValueError(f"unknown Laplacian kind {kind!r}")
    d = g.degrees
    isolated = np.flatnonzero(d <= 0)
    if isolated.size:
        raise IsolatedVertex(f"vertices without edges: {isolated[:10].tolist()}")
    L = (sp.diags(d) - g.adjacency).tocsr()
    if kind == "normalized":
        s = sp.diags(1.0 / np.sqrt(d))
        L = (s @ L @ s).tocsr()
        # exact unit diagonal, symmetric to the last bit
        L = ((L + L.T) * 0.5).tocsr()
        L.setdiag(1.0)
    L.sort_indices()
    return LaplacianOperator(kind, L, d)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues and orthonormal eigenvectors (columns).

    ``groups`` holds ``(value, multiplicity, first_index)`` per distinct
    eigenvalue, with 0-based ``first_index``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)
    groups: tuple
    kind: str | None = None

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    def gft(self, f: np.ndarray) -> np.ndarray:
        """Graph Fourier transform; works column-wise on 2-D input."""
        return self.eigenvectors.T @ f

    def igft(self, fhat: np.ndarray) -> np.ndarray:
        return self.eigenvectors @ fhat

    def multiplicities(self) -> np.ndarray:
        """Per-eigenvalue multiplicity ``m`` and first index ``i`` as two arrays."""
        m = np.empty(self.n, dtype=int)
        first = np.empty(self.n, dtype=int)
        for _, mult, start in self.groups:
            m[start:start + mult] = mult
            first[start:start + mult] = start
        return m, first


def group_eigenvalues(lam: np.ndarray, tol: float) -> tuple:
    groups = []
    start = 0
    for k in range(1, lam.size + 1):
        if k == lam.size or lam[k] - lam[k - 1] > tol:
            groups.append((float(lam[start]), k - start, start))
            start = k
    return tuple(groups)


def _fix_signs(V: np.ndarray) -> np.ndarray:
    # deterministic orientation: largest-magnitude entry of each column positive
    idx = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[idx, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def full_spectrum(
    L: LaplacianOperator,
    group_tol: float | None = None,
    max_size: int = DENSE_EIG_CAP,
) -> Spectrum:
    """Dense eigendecomposition of a connected graph's Laplacian.

    ``group_tol`` defaults to ``1e-8 * lambda_max``.
    """
    if L.n > max_size:
        raise TooLarge(f"N_g={L.n} exceeds dense eigendecomposition cap {max_size}")
    if not L.is_connected():
        raise Disconnected("graph is disconnected; only connected graphs are supported")
    lam, V = scipy.linalg.eigh(L.matrix.toarray())
    lam = np.maximum(lam, 0.0)
    lam[0] = 0.0
    if L.kind == "normalized":
        # bounded by 2; rounding can push the top eigenvalue a hair above it
        lam = np.minimum(lam, 2.0)
    V = _fix_signs(V)
    if group_tol is None:
        group_tol = 1e-8 * lam[-1]
    return Spectrum(lam, V, group_eigenvalues(lam, group_tol), L.kind)


def estimate_lambda_max(
    L: LaplacianOperator,
    tol: float = 1e-6,
    max_iter: int = 10000,
    margin: float = 0.01,
    seed: int = 0,
) -> float:
    """Power-iteration estimate of the largest eigenvalue, inflated by ``1 + margin``.

    Iterates until the relative eigen-residual ``|Lx - rho x| / rho`` drops
    below ``sqrt(tol)``, which bounds the Rayleigh-quotient error by ``tol``
    relative.
    """
    A = L.matrix
    x = np.random.default_rng(seed).standard_normal(L.n)
    x /= np.linalg.norm(x)
    rho = 0.0
    for _ in range(max_iter):
        y = A @ x
        rho = float(x @ y)
        if rho <= 0:
            raise NoConvergence("operator annihilated the iterate")
        res = np.linalg.norm(y - rho * x) / rho
        if res ** 2 <= tol:
            return (1.0 + margin) * rho
        x = y / np.linalg.norm(y)
    raise NoConvergence(f"power iteration did not converge in {max_iter} steps (residual {res:.2e})")


def apply_operator(L: LaplacianOperator, f: np.ndarray) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape[0] != L.n:
        raise DimensionMismatch(f"signal length {f.shape[0]} != N_g={L.n}")
    return L.matrix @ f
