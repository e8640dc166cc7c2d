"""Graph loading and deterministic CSV/JSON export."""

from __future__ import annotations

import hashlib
import json
import warnings
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
import scipy
import scipy.io
import scipy.sparse as sp

from .errors import AsymmetricWeight, NegativeWeight, ParseError, SelfLoop
from .graph import Graph, build_graph, graph_from_adjacency

FLOAT_FORMAT = "%.17g"


class DisconnectedWarning(UserWarning):
    pass


def parse_edge_list(text: str) -> Graph:
    """Parse whitespace-separated ``i j [w]`` lines with 1-based vertices.

    ``#`` starts a comment. An edge may be listed in both directions if the
    weights agree; differing weights raise :class:`AsymmetricWeight`. The
    vertex count is the largest index seen.
    """
    weights: dict[tuple[int, int], float] = {}
    n = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"expected 'i j [w]', got {raw.strip()!r}", lineno)
        try:
            i, j = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise ParseError(f"not a number in {raw.strip()!r}", lineno) from None
        if i < 1 or j < 1:
            raise ParseError(f"vertex indices are 1-based, got {i} {j}", lineno)
        if i == j:
            raise SelfLoop(f"line {lineno}: self-loop at vertex {i}")
        if not np.isfinite(w) or w < 0:
            raise NegativeWeight(f"line {lineno}: weight {w}")
        key = (min(i, j) - 1, max(i, j) - 1)
        if key in weights and weights[key] != w:
            raise AsymmetricWeight(
                f"line {lineno}: edge {i}-{j} has weight {w}, earlier {weights[key]}")
        weights[key] = w
        n = max(n, i, j)
    if n == 0:
        raise ParseError("no edges found")
    g = build_graph([(i, j, w) for (i, j), w in weights.items()], n)
    _warn_if_disconnected(g)
    return g


def load_edge_list(path) -> Graph:
    return parse_edge_list(Path(path).read_text())


def load_matrix_market(path) -> Graph:
    try:
        A = scipy.io.mmread(str(path))
    except (ValueError, IndexError) as exc:
        raise ParseError(f"{path}: {exc}") from None
    g = graph_from_adjacency(sp.csr_matrix(A))
    _warn_if_disconnected(g)
    return g


def load_graph(path, fmt: str = "edgelist") -> Graph:
    if fmt == "edgelist":
        return load_edge_list(path)
    if fmt == "matrixmarket":
        return load_matrix_market(path)
    raise ValueError(f"unknown graph format {fmt!r}")


def _warn_if_disconnected(g: Graph) -> None:
    if not g.is_connected():
        warnings.warn("graph is disconnected; spectral operations will reject it",
                      DisconnectedWarning, stacklevel=3)


def write_edge_list(g: Graph, path) -> None:
    lines = [f"{i + 1} {j + 1} {FLOAT_FORMAT % w}" for i, j, w in g.edges]
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def format_float(x: float) -> str:
    return FLOAT_FORMAT % x


def write_csv(path, header: Sequence[str], columns: Sequence) -> None:
    """Write equal-length columns with 17 significant digits and LF newlines.

    Non-numeric columns (labels) are written verbatim.
    """
    cols = [np.asarray(c) for c in columns]
    if len(cols) != len(header):
        raise ValueError("header and columns differ in length")
    n = {c.shape[0] for c in cols}
    if len(n) > 1:
        raise ValueError("columns differ in length")
    fmt = [format_float if np.issubdtype(c.dtype, np.number) else str for c in cols]
    lines = [",".join(header)]
    for r in range(n.pop() if n else 0):
        lines.append(",".join(f(c[r]) for f, c in zip(fmt, cols)))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path) -> tuple[list[str], list[np.ndarray]]:
    """Inverse of :func:`write_csv`; numeric columns come back as float arrays."""
    rows = Path(path).read_text().splitlines()
    header = rows[0].split(",")
    cells = [r.split(",") for r in rows[1:]]
    cols = []
    for k in range(len(header)):
        raw = [c[k] for c in cells]
        try:
            cols.append(np.array([float(v) for v in raw]))
        except ValueError:
            cols.append(np.array(raw, dtype=object))
    return header, cols


def _jsonable(obj):
    if isinstance(obj, Mapping):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return repr(obj)
    return obj


def config_hash(config: Mapping) -> str:
    blob = json.dumps(_jsonable(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def versions() -> dict:
    from . import __version__

    return {"graphspectra": __version__, "numpy": np.__version__, "scipy": scipy.__version__}


def write_metadata(path, config: Mapping, seed: int | None = None, **fields) -> dict:
    """JSON provenance record: config, its hash, seed, library versions and ``fields``."""
    meta = {"config": config, "config_hash": config_hash(config), "seed": seed,
            "versions": versions(), **fields}
    meta = _jsonable(meta)
    with open(path, "w", newline="\n") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return meta
