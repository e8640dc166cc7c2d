"""Continuous spectral kernels and kernel systems.

Two prototype families are provided:

* B-spline systems: square roots of integer-shifted central B-splines laid
  on a knot axis spanning ``[0, lambda_max]``, with the out-of-range shifts
  folded into the two end kernels. They are smooth and strongly
  overlapping, which makes them good for energy estimation.
* UMT (uniform Meyer-type) systems: narrow cos/sin crossfades of the Meyer
  auxiliary polynomial. For ``gamma = 2.73`` every kernel has the same
  integral.

Both satisfy ``sum_j K_j(lam)**2 == 1`` on ``[0, lambda_max]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DegreeTooLarge, DomainMismatch, InvalidParameters, InvalidWarp

#: Value used when a system is built without an explicit ``gamma``.
DEFAULT_GAMMA = 2.73

MAX_BSPLINE_DEGREE = 25


# ---------------------------------------------------------------------------
# scalar building blocks


def bspline(n: int, x):
    """Central B-spline of degree ``n`` (support ``|x| < (n + 1) / 2``).

    Uses the one-sided power expansion; the function is even so it is
    evaluated at ``-|x|``, which keeps the alternating terms small.
    """
    n = int(n)
    if n < 0:
        raise InvalidParameters("degree must be nonnegative")
    if n > MAX_BSPLINE_DEGREE:
        raise DegreeTooLarge(f"degree {n} > {MAX_BSPLINE_DEGREE}")
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    if n == 0:
        out = np.where(ax < 0.5, 1.0, np.where(ax == 0.5, 0.5, 0.0))
        return out if out.ndim else float(out)
    half = (n + 1) / 2.0
    t = -ax + half
    out = np.zeros_like(t)
    for k in range(n + 2):
        arg = t - k
        pos = arg > 0
        if not pos.any():
            break
        out += np.where(pos, (-1) ** k * math.comb(n + 1, k) * np.where(pos, arg, 0.0) ** n, 0.0)
    out /= math.factorial(n)
    out = np.where(ax >= half, 0.0, np.maximum(out, 0.0))
    return out if out.ndim else float(out)


def meyer_aux(x):
    """Meyer auxiliary polynomial ``x^4 (35 - 84x + 70x^2 - 20x^3)``, clamped to [0, 1]."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    out = x ** 4 * (35.0 - 84.0 * x + 70.0 * x ** 2 - 20.0 * x ** 3)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# kernels


class SpectralKernel:
    """A function of ``lambda`` that vanishes outside ``[0, lam_max]``."""

    lam_max: float

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        out = np.zeros(lam.shape)
        inside = (lam >= 0.0) & (lam <= self.lam_max)
        if inside.any():
            out[inside] = self._eval(lam[inside])
        return out if out.ndim else float(out)

    def _eval(self, lam: np.ndarray) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class BSplineKernel(SpectralKernel):
    """``sqrt(sum_l beta_n(x - (l - 1)))`` with ``x = lam (J - 1) / lam_max``.

    ``shifts`` holds the 1-based spline indices ``l`` folded into this
    kernel; interior kernels carry a single shift.
    """

    degree: int
    n_bands: int
    index: int
    lam_max: float
    shifts: tuple

    @property
    def edge_folded(self) -> bool:
        return len(self.shifts) > 1

    def _eval(self, lam):
        x = lam * (self.n_bands - 1) / self.lam_max
        acc = np.zeros_like(x)
        for l in self.shifts:
            acc += bspline(self.degree, x - (l - 1))
        return np.sqrt(acc)


@dataclass(frozen=True)
class UMTKernel(SpectralKernel):
    """Band ``index`` (1-based) of a uniform Meyer-type system."""

    n_bands: int
    index: int
    gamma: float
    lam_max: float

    @property
    def a(self) -> float:
        J, g = self.n_bands, self.gamma
        return self.lam_max / (J * g - J - g + 3.0)

    @property
    def delta(self) -> float:
        return (self.gamma - 1.0) * self.a

    def _ramp(self, lam, offset):
        # (pi/2) nu((1/(gamma-1)) ((lam - offset)/a - 1))
        a, g = self.a, self.gamma
        return 0.5 * np.pi * meyer_aux(((lam - offset) / a - 1.0) / (g - 1.0))

    def _eval(self, lam):
        j, J = self.index, self.n_bands
        a, g, d = self.a, self.gamma, self.delta
        out = np.zeros_like(lam)
        if j == 1:
            out[lam <= a] = 1.0
            fall = (lam > a) & (lam <= g * a)
            out[fall] = np.cos(self._ramp(lam[fall], 0.0))
            return out
        lo = a + (j - 2) * d
        hi = g * a + (j - 2) * d
        rise = (lam > lo) & (lam <= hi)
        out[rise] = np.sin(self._ramp(lam[rise], (j - 2) * d))
        if j == J:
            out[lam > hi] = 1.0
        else:
            fall = (lam > hi) & (lam <= hi + d)
            out[fall] = np.cos(self._ramp(lam[fall], (j - 1) * d))
        return out


@dataclass(frozen=True)
class WarpedKernel(SpectralKernel):
    """``base(warp(lam))``."""

    base: SpectralKernel
    warp: Callable

    @property
    def lam_max(self) -> float:
        return self.base.lam_max

    def _eval(self, lam):
        # warps may overshoot [0, lam_max] by rounding; the ends are fixed points
        return self.base(np.clip(self.warp(lam), 0.0, self.base.lam_max))


@dataclass(frozen=True)
class MergedKernel(SpectralKernel):
    """``sqrt(sum_i K_i(lam)^2)`` over member kernels.

    Merging members of a Parseval system this way keeps it Parseval.
    """

    members: tuple

    @property
    def lam_max(self) -> float:
        return self.members[0].lam_max

    def _eval(self, lam):
        return np.sqrt(sum(np.asarray(k(lam)) ** 2 for k in self.members))


@dataclass(frozen=True, eq=False)
class FunctionKernel(SpectralKernel):
    """Arbitrary vectorized callable restricted to ``[0, lam_max]``."""

    func: Callable
    lam_max: float

    def _eval(self, lam):
        return np.broadcast_to(np.asarray(self.func(lam), dtype=float), lam.shape).copy()


@dataclass(frozen=True, eq=False)
class TabulatedKernel(SpectralKernel):
    """Piecewise-linear kernel from a sample table."""

    lam: np.ndarray
    values: np.ndarray
    lam_max: float

    def _eval(self, lam):
        return np.interp(lam, self.lam, self.values)


# ---------------------------------------------------------------------------
# systems


@dataclass(frozen=True, eq=False)
class KernelSystem:
    kernels: tuple
    lam_max: float
    tight: bool = False
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.kernels)

    def __iter__(self):
        return iter(self.kernels)

    def __getitem__(self, j):
        return self.kernels[j]

    def __call__(self, lam) -> np.ndarray:
        """Evaluate every kernel: returns shape ``(J,) + lam.shape``."""
        return np.stack([np.asarray(k(lam), dtype=float) for k in self.kernels])

    def frame_function(self, lam) -> np.ndarray:
        return np.sum(self(lam) ** 2, axis=0)


def bspline_system(n_bands: int, degree: int, lam_max: float) -> KernelSystem:
    """Parseval system of ``n_bands`` square-rooted B-spline kernels."""
    J, n = int(n_bands), int(degree)
    if J < 2 or n < 2 or lam_max <= 0:
        raise InvalidParameters(f"need J >= 2, n >= 2, lam_max > 0 (got {J}, {n}, {lam_max})")
    if n > MAX_BSPLINE_DEGREE:
        raise DegreeTooLarge(f"degree {n} > {MAX_BSPLINE_DEGREE}")
    d = n // 2 - 1
    kernels = []
    for j in range(1, J + 1):
        if j == 1:
            shifts = tuple(range(-d, 2))
        elif j == J:
            shifts = tuple(range(J, J + d + 2))
        else:
            shifts = (j,)
        kernels.append(BSplineKernel(n, J, j, float(lam_max), shifts))
    return KernelSystem(tuple(kernels), float(lam_max), tight=True,
                        meta={"family": "bspline", "degree": n, "n_bands": J})


def umt_system(n_bands: int, lam_max: float, gamma: float = DEFAULT_GAMMA) -> KernelSystem:
    """Uniform Meyer-type system; tight for any ``gamma > 1``."""
    J = int(n_bands)
    if J < 2 or gamma <= 1 or lam_max <= 0:
        raise InvalidParameters(f"need J >= 2, gamma > 1, lam_max > 0 (got {J}, {gamma}, {lam_max})")
    kernels = tuple(UMTKernel(J, j, float(gamma), float(lam_max)) for j in range(1, J + 1))
    k0 = kernels[0]
    return KernelSystem(kernels, float(lam_max), tight=True,
                        meta={"family": "umt", "n_bands": J, "gamma": float(gamma),
                              "a": k0.a, "delta": k0.delta})


def gamma_residual(gamma: float, a: float = 1.0, quad_step: float = 1e-4) -> float:
    """``int_a^{gamma a} sin((pi/2) nu(...)) dlam - a`` by a right Riemann sum.

    Samples ``(a, gamma a]`` with spacing ``quad_step * a``.
    """
    h = quad_step * a
    n = int(round((gamma - 1.0) * a / h))
    lam = a + h * np.arange(1, n + 1)
    vals = np.sin(0.5 * np.pi * meyer_aux((lam / a - 1.0) / (gamma - 1.0)))
    return float(vals.sum() * h - a)


def solve_gamma(search_range: Sequence[float] = (1.0, 5.0), gamma_step: float = 1e-2,
                quad_step: float = 1e-4) -> float:
    """Grid search for the ``gamma`` making UMT band integrals equal.

    The residual scales linearly with ``a``, so the minimizer does not
    depend on ``lambda_max`` or ``J``; it is evaluated at ``a = 1``.
    """
    lo, hi = search_range
    n = int(math.floor((hi - lo) / gamma_step + 1e-9))
    gammas = lo + gamma_step * np.arange(1, n + 1)
    gammas = gammas[gammas > 1.0]
    q = np.array([abs(gamma_residual(g, 1.0, quad_step)) for g in gammas])
    return float(np.round(gammas[np.argmin(q)], 12))


def check_warp(warp: Callable, lam_max: float, grid_points: int = 10001, tol: float = 1e-12):
    """Raise :class:`InvalidWarp` unless ``warp`` pins both endpoints and is nondecreasing."""
    w_lam_max = getattr(warp, "lam_max", lam_max)
    if abs(w_lam_max - lam_max) > tol * max(1.0, lam_max):
        raise InvalidWarp(f"warp domain {w_lam_max} != system lam_max {lam_max}")
    grid = np.linspace(0.0, lam_max, grid_points)
    t = np.asarray(warp(grid), dtype=float)
    if abs(t[0]) > tol * lam_max or abs(t[-1] - lam_max) > tol * lam_max:
        raise InvalidWarp(f"warp endpoints ({t[0]}, {t[-1]}) not pinned to (0, {lam_max})")
    if np.any(np.diff(t) < -tol * lam_max):
        raise InvalidWarp("warp is not nondecreasing")
    if t.min() < -tol * lam_max or t.max() > lam_max * (1 + tol):
        raise InvalidWarp("warp leaves [0, lam_max]")


def warp_system(system: KernelSystem, warp: Callable) -> KernelSystem:
    """Compose every kernel with ``warp``; tightness carries over."""
    check_warp(warp, system.lam_max)
    kernels = tuple(WarpedKernel(k, warp) for k in system.kernels)
    meta = dict(system.meta)
    meta["warped"] = True
    return KernelSystem(kernels, system.lam_max, system.tight, meta)


def merge_bands(system: KernelSystem, groups: Sequence[Sequence[int]]) -> KernelSystem:
    """Merge consecutive bands (0-based index groups) into coarser ones.

    ``groups`` must partition ``range(len(system))``.
    """
    flat = [j for g in groups for j in g]
    if sorted(flat) != list(range(len(system))):
        raise InvalidParameters("groups must partition the band indices")
    kernels = tuple(MergedKernel(tuple(system.kernels[j] for j in g)) for g in groups)
    meta = dict(system.meta)
    meta["merged_groups"] = [list(map(int, g)) for g in groups]
    return KernelSystem(kernels, system.lam_max, system.tight, meta)


def frame_analysis(system: KernelSystem, grid_points: int = 10000):
    """Sample ``G(lam) = sum_j K_j(lam)^2`` and return ``(lam, G, B1, B2)``."""
    lam = np.linspace(0.0, system.lam_max, int(grid_points))
    G = system.frame_function(lam)
    return lam, G, float(G.min()), float(G.max())


@dataclass(frozen=True, eq=False)
class SampledSystem:
    """Kernel values at the graph eigenvalues: ``values[j, l] = K_j(lam_l)``."""

    values: np.ndarray
    system: KernelSystem | None
    spectrum: object = field(repr=False, default=None)

    @property
    def n_bands(self) -> int:
        return self.values.shape[0]


def sample_system(system: KernelSystem, spectrum, rtol: float = 1e-10) -> SampledSystem:
    lam = np.asarray(spectrum.eigenvalues, dtype=float)
    if lam.max() > system.lam_max * (1.0 + rtol):
        raise DomainMismatch(
            f"spectrum lambda_max {lam.max()} exceeds system lam_max {system.lam_max}")
    lam = np.minimum(lam, system.lam_max)
    return SampledSystem(system(lam), system, spectrum)
