"""Truncated Chebyshev expansions of spectral kernels.

A kernel on ``[0, lam_max]`` is expanded in shifted Chebyshev polynomials
``C_p((lam - b) / b)`` with ``b = lam_max / 2``, and applied to a signal as
the matching polynomial in the Laplacian. Only sparse mat-vecs are used.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, DomainMismatch, InvalidOrder, OutOfDomain
from .graph import LaplacianOperator

#: Polynomial orders used when the caller does not choose one.
DEFAULT_ORDER_SMOOTH = 80
DEFAULT_ORDER_WARPED_UMT = 200


@dataclass(frozen=True, eq=False)
class ChebyshevFilter:
    coeffs: np.ndarray
    lam_max: float

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @property
    def b(self) -> float:
        return 0.5 * self.lam_max

    def __call__(self, lam):
        return cheb_eval(self, lam)


def cheb_coeffs(kernel, order: int, lam_max: float, quad_points: int | None = None) -> ChebyshevFilter:
    """Coefficients ``d_p = (2/pi) int_0^pi cos(p theta) K(b (cos theta + 1)) dtheta``.

    The integral uses the trapezoidal rule with ``quad_points`` nodes on
    ``[0, pi]`` (default ``8 * order + 1``).
    """
    order = int(order)
    if order < 1:
        raise InvalidOrder(f"order must be >= 1, got {order}")
    if quad_points is None:
        quad_points = 8 * order + 1
    if quad_points < 8 * order:
        raise InvalidOrder(f"need at least 8*M quadrature points, got {quad_points}")
    b = 0.5 * lam_max
    theta = np.linspace(0.0, np.pi, quad_points)
    # clamp against rounding just past the ends of [0, lam_max]
    lam = np.clip(b * (np.cos(theta) + 1.0), 0.0, lam_max)
    k = np.asarray(kernel(lam), dtype=float)
    w = np.full(quad_points, np.pi / (quad_points - 1))
    w[0] *= 0.5
    w[-1] *= 0.5
    p = np.arange(order + 1)
    d = (2.0 / np.pi) * (np.cos(np.outer(p, theta)) @ (w * k))
    return ChebyshevFilter(d, float(lam_max))


def cheb_eval(filt: ChebyshevFilter, lam, atol: float = 1e-12):
    """Evaluate the truncated series at ``lam`` (three-term recurrence)."""
    lam = np.asarray(lam, dtype=float)
    slack = atol * max(1.0, filt.lam_max)
    if np.any(lam < -slack) or np.any(lam > filt.lam_max + slack):
        raise OutOfDomain(f"lambda outside [0, {filt.lam_max}]")
    x = (lam - filt.b) / filt.b
    d = filt.coeffs
    t_prev = np.ones_like(x)
    out = 0.5 * d[0] * t_prev
    if d.size > 1:
        t_cur = x.copy()
        out = out + d[1] * t_cur
        for p in range(2, d.size):
            t_prev, t_cur = t_cur, 2.0 * x * t_cur - t_prev
            out = out + d[p] * t_cur
    return out if out.ndim else float(out)


def _check(L: LaplacianOperator, f: np.ndarray, lam_max: float) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape[0] != L.n:
        raise DimensionMismatch(f"signal length {f.shape[0]} != N_g={L.n}")
    hint = L.lambda_max_hint
    if hint is not None and lam_max < hint * (1.0 - 1e-12):
        raise DomainMismatch(f"filter domain {lam_max} below Laplacian lambda_max {hint}")
    return f


def cheb_apply_many(L: LaplacianOperator, filters: Sequence[ChebyshevFilter], f) -> np.ndarray:
    """Apply several filters sharing one recurrence.

    ``f`` may be a vector or an ``N_g x N_s`` matrix; the result has a
    leading band axis.
    """
    if not filters:
        raise InvalidOrder("no filters given")
    lam_max = filters[0].lam_max
    if any(abs(flt.lam_max - lam_max) > 1e-12 * lam_max for flt in filters):
        raise DomainMismatch("filters must share the same lam_max")
    f = _check(L, f, lam_max)
    M = max(flt.order for flt in filters)
    D = np.zeros((len(filters), M + 1))
    for j, flt in enumerate(filters):
        D[j, : flt.coeffs.size] = flt.coeffs
    b = 0.5 * lam_max
    A = L.matrix

    def shifted(v):
        return (A @ v - b * v) / b

    out = np.multiply.outer(0.5 * D[:, 0], f)
    t_prev = f
    t_cur = shifted(f)
    out += np.multiply.outer(D[:, 1], t_cur)
    for p in range(2, M + 1):
        t_prev, t_cur = t_cur, 2.0 * shifted(t_cur) - t_prev
        out += np.multiply.outer(D[:, p], t_cur)
    return out


def cheb_apply(L: LaplacianOperator, filt: ChebyshevFilter, f) -> np.ndarray:
    """``P(L) f`` for the truncated expansion held by ``filt``."""
    return cheb_apply_many(L, [filt], f)[0]


def filters_for(system, order: int, lam_max: float | None = None) -> list:
    """Chebyshev filters for every kernel of a :class:`KernelSystem`."""
    lam_max = system.lam_max if lam_max is None else lam_max
    return [cheb_coeffs(k, order, lam_max) for k in system.kernels]
