"""Monotone warping functions of the spectral axis.

A warp ``T: [0, lam_max] -> [0, lam_max]`` is stored as a piecewise-cubic
Hermite interpolant whose tangents are limited with the Fritsch-Carlson
rule, so it is nondecreasing whenever its knots are.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DuplicateAbscissa,
    InvalidPivot,
    InvalidWarp,
    NonMonotoneESD,
    NonMonotoneInput,
)
from .kernels import KernelSystem, bspline_system, warp_system


def fritsch_carlson_tangents(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Shape-preserving knot tangents.

    First pass: averaged secants in the interior (zero at local extrema and
    plateaus), one-sided secants at the ends. Second pass: scale each
    interval's tangent pair back into the circle of radius 3.
    """
    h = np.diff(x)
    delta = np.diff(y) / h
    m = np.empty_like(y)
    m[0] = delta[0]
    m[-1] = delta[-1]
    if y.size > 2:
        avg = 0.5 * (delta[:-1] + delta[1:])
        same = (np.sign(delta[:-1]) == np.sign(delta[1:])) & (delta[:-1] != 0) & (delta[1:] != 0)
        m[1:-1] = np.where(same, avg, 0.0)
    with np.errstate(over="ignore"):
        for k in range(delta.size):
            if delta[k] == 0.0:
                m[k] = m[k + 1] = 0.0
                continue
            alpha = m[k] / delta[k]
            beta = m[k + 1] / delta[k]
            if alpha < 0:
                m[k] = 0.0
                alpha = 0.0
            if beta < 0:
                m[k + 1] = 0.0
                beta = 0.0
            r = np.hypot(alpha, beta)
            if not np.isfinite(r):
                # secant underflow: the interval is flat for all practical purposes
                m[k] = m[k + 1] = 0.0
            elif r > 3.0:
                tau = 3.0 / r
                m[k] = tau * alpha * delta[k]
                m[k + 1] = tau * beta * delta[k]
    return m


@dataclass(frozen=True, eq=False)
class CubicHermite:
    """Piecewise-cubic Hermite interpolant, constant beyond its end knots."""

    knots: np.ndarray
    values: np.ndarray
    tangents: np.ndarray

    @property
    def lam_max(self) -> float:
        return float(self.knots[-1])

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        x, y, m = self.knots, self.values, self.tangents
        xc = np.clip(lam, x[0], x[-1])
        k = np.clip(np.searchsorted(x, xc, side="right") - 1, 0, x.size - 2)
        h = x[k + 1] - x[k]
        t = (xc - x[k]) / h
        t2 = t * t
        t3 = t2 * t
        out = ((2 * t3 - 3 * t2 + 1) * y[k] + (t3 - 2 * t2 + t) * h * m[k]
               + (-2 * t3 + 3 * t2) * y[k + 1] + (t3 - t2) * h * m[k + 1])
        # exact at knots
        out = np.where(t == 0.0, y[k], np.where(t == 1.0, y[k + 1], out))
        return out if out.ndim else float(out)


def pchip(x, y) -> CubicHermite:
    """Shape-preserving cubic through arbitrary data (strictly increasing ``x``)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2 or x.size != y.size:
        raise NonMonotoneInput("need at least two points with matching x and y")
    dx = np.diff(x)
    if np.any(dx == 0):
        raise DuplicateAbscissa("repeated abscissa")
    if np.any(dx < 0):
        raise NonMonotoneInput("abscissas must be strictly increasing")
    return CubicHermite(x, y, fritsch_carlson_tangents(x, y))


@dataclass(frozen=True, eq=False)
class WarpFunction(CubicHermite):
    """Monotone cubic map of ``[0, lam_max]`` onto itself."""

    def __post_init__(self):
        lam_max = self.knots[-1]
        if self.knots[0] != 0.0 or self.values[0] != 0.0 or self.values[-1] != lam_max:
            raise InvalidWarp("warp knots must start at (0, 0) and end at (lam_max, lam_max)")
        if np.any(np.diff(self.values) < 0):
            raise InvalidWarp("warp ordinates must be nondecreasing")


def monotone_cubic(points: Sequence[Sequence[float]]) -> CubicHermite:
    """Monotone piecewise-cubic interpolant of ``(x, y)`` points.

    ``x`` must be strictly increasing and ``y`` nondecreasing. The result is
    a :class:`WarpFunction` when the points run from ``(0, 0)`` to
    ``(x_max, x_max)``.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise NonMonotoneInput("need at least two (x, y) points")
    x, y = pts[:, 0], pts[:, 1]
    if np.any(np.diff(y) < 0):
        raise NonMonotoneInput("ordinates must be nondecreasing")
    interp = pchip(x, y)
    if x[0] == 0.0 and y[0] == 0.0 and y[-1] == x[-1]:
        return WarpFunction(interp.knots, interp.values, interp.tangents)
    return interp


def _warp_through(x, y, lam_max: float) -> WarpFunction:
    """Pin endpoints, clip ordinates into range and build the warp."""
    x = np.concatenate([[0.0], np.asarray(x, dtype=float), [lam_max]])
    y = np.concatenate([[0.0], np.asarray(y, dtype=float), [lam_max]])
    keep = np.concatenate([[True], (x[1:-1] > 0.0) & (x[1:-1] < lam_max), [True]])
    x, y = x[keep], np.clip(y[keep], 0.0, lam_max)
    if np.any(np.diff(y) < 0):
        raise NonMonotoneESD("cumulative energy decreases")
    interp = pchip(x, y)
    return WarpFunction(interp.knots, interp.values, interp.tangents)


def _cumulative(weights: np.ndarray, what: str) -> np.ndarray:
    weights = np.asarray(weights, dtype=float)
    scale = max(1.0, np.abs(weights).sum())
    if np.any(weights < -1e-12 * scale):
        raise NonMonotoneESD(f"{what} has negative entries")
    return np.cumsum(np.maximum(weights, 0.0))


def energy_warp_exact(esd, spectrum) -> WarpFunction:
    """Energy-equalizing warp from a direct (per-eigenvalue) ESD.

    Knot ``lam_l`` maps to ``lam_max`` times the cumulative energy through
    ``l``, averaged over the ``m`` copies of a repeated eigenvalue.
    """
    e = np.asarray(getattr(esd, "values", esd), dtype=float)
    if e.size != spectrum.n:
        raise NonMonotoneESD(f"ESD length {e.size} != N_g={spectrum.n}")
    lam_max = spectrum.lambda_max
    cum = _cumulative(e, "ESD")
    xs, ys = [], []
    for value, mult, first in spectrum.groups:
        if value <= 0.0 or value >= lam_max:
            continue
        xs.append(value)
        ys.append(lam_max * cum[first:first + mult].mean())
    return _warp_through(xs, ys, lam_max)


def energy_warp_approx(banded, system: KernelSystem | None = None) -> WarpFunction:
    """Energy-equalizing warp from a banded ESD estimate.

    Band energies are renormalized to sum to one before accumulating, so
    Chebyshev-mode estimates with a small sum defect still give a warp.
    """
    a = np.asarray(banded.values, dtype=float)
    omega = np.asarray(banded.abscissas, dtype=float)
    lam_max = float(system.lam_max if system is not None else banded.lam_max)
    cum = _cumulative(a, "band energies")
    cum = cum / cum[-1]
    return _warp_through(omega[:-1], lam_max * cum[:-1], lam_max)


def spectrum_warp(spectrum) -> WarpFunction:
    """Warp sending each distinct eigenvalue to its (mean) rank, scaled to ``lam_max``."""
    lam_max = spectrum.lambda_max
    n = spectrum.n
    xs, ys = [], []
    for value, mult, first in spectrum.groups:
        if value <= 0.0 or value >= lam_max:
            continue
        xs.append(value)
        ys.append(lam_max * (first + 0.5 * (mult - 1)) / (n - 1))
    return _warp_through(xs, ys, lam_max)


def average_warps(warps: Sequence[CubicHermite], lam_max: float, grid_points: int = 2001) -> WarpFunction:
    """Pointwise mean of several warps, re-fitted as a monotone cubic."""
    grid = np.linspace(0.0, lam_max, grid_points)
    y = np.mean([w(grid) for w in warps], axis=0)
    return _warp_through(grid[1:-1], np.maximum.accumulate(y)[1:-1], lam_max)


def pivot_warp(lam_piv: float, n_lower: int, n_total: int, lam_max: float,
               smooth_width: float | None = None, grid_points: int = 2001) -> WarpFunction:
    """Smoothed two-slope warp sending ``lam_piv`` to ``lam_max * n_lower / n_total``.

    The kink is replaced by a moving average of width ``smooth_width``
    (default ``0.4 * lam_piv``); away from the kink the map is unchanged.
    """
    if not (0.0 < lam_piv < lam_max):
        raise InvalidPivot(f"pivot {lam_piv} not inside (0, {lam_max})")
    if not (0 < n_lower < n_total):
        raise InvalidPivot(f"need 0 < n_lower < n_total, got {n_lower}, {n_total}")
    w = 0.4 * lam_piv if smooth_width is None else float(smooth_width)
    if not (0.0 <= w < 2.0 * min(lam_piv, lam_max - lam_piv)):
        raise InvalidPivot(f"smooth_width {w} too wide for pivot {lam_piv}")
    y_piv = lam_max * n_lower / n_total
    m1 = y_piv / lam_piv
    m2 = (lam_max - y_piv) / (lam_max - lam_piv)

    def P(lam):
        return np.where(lam <= lam_piv, m1 * lam, y_piv + m2 * (lam - lam_piv))

    def P_int(lam):
        # antiderivative of P, zero at 0
        below = 0.5 * m1 * np.minimum(lam, lam_piv) ** 2
        over = np.maximum(lam - lam_piv, 0.0)
        return below + y_piv * over + 0.5 * m2 * over ** 2

    grid = np.linspace(0.0, lam_max, grid_points)
    grid = np.union1d(grid, [lam_piv - 0.5 * w, lam_piv, lam_piv + 0.5 * w])
    y = P(grid)
    if w > 0:
        near = np.abs(grid - lam_piv) < 0.5 * w
        g = grid[near]
        y[near] = (P_int(g + 0.5 * w) - P_int(g - 0.5 * w)) / w
    # the moving average is monotone; this only absorbs rounding
    y = np.maximum.accumulate(y)
    return _warp_through(grid[1:-1], y[1:-1], lam_max)


def sosks_system(lam_max: float, n_total: int = 57, n_lower: int = 20,
                 pivot_fraction: float = 0.05, degree: int = 3,
                 smooth_width: float | None = None) -> KernelSystem:
    """Multiresolution B-spline system: ``n_lower`` narrow bands below the pivot."""
    base = bspline_system(n_total, degree, lam_max)
    T = pivot_warp(pivot_fraction * lam_max, n_lower, n_total, lam_max, smooth_width)
    system = warp_system(base, T)
    system.meta.update(family="sosks", n_lower=n_lower, pivot=pivot_fraction * lam_max)
    return system


def warp_distance(T1, T2, lam_max: float, grid_points: int = 10000, ord=2) -> float:
    """Distance between two warps on a uniform grid.

    ``ord=2`` gives the root-mean-square difference, ``ord=np.inf`` the
    maximum absolute difference.
    """
    grid = np.linspace(0.0, lam_max, grid_points)
    diff = np.asarray(T1(grid)) - np.asarray(T2(grid))
    if ord == np.inf:
        return float(np.max(np.abs(diff)))
    return float(np.sqrt(np.mean(diff ** 2)))
