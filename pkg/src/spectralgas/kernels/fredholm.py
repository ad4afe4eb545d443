"""Sine and Airy kernels and Nystrom discretization of Fredholm determinants."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ..errors import TruncationFailure
from ..numerics import airy_ai, gauss_legendre

AIRY_TAIL = 1e-18
AIRY_LIMIT = 200.0


class KernelKind(enum.Enum):
    SINE = "sine"
    AIRY = "airy"


def sine_kernel(x, y):
    d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    pd = np.pi * d
    small = np.abs(d) < 1e-4
    safe = np.where(small, 1.0, pd)
    out = np.where(small, 1.0 - pd**2 / 6.0 + pd**4 / 120.0, np.sin(safe) / safe)
    return out if out.ndim else float(out)


def _airy_matrix(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    ax, apx = airy_ai(x)
    ay, apy = airy_ai(y)
    num = ax[:, None] * apy[None, :] - apx[:, None] * ay[None, :]
    diff = x[:, None] - y[None, :]
    diag = np.isclose(diff, 0.0, atol=1e-12)
    K = np.where(diag, 0.0, num / np.where(diag, 1.0, diff))
    if np.any(diag):
        d = apx**2 - x * ax**2
        K = np.where(diag, d[:, None] * np.ones_like(K), K)
    return K


def airy_kernel(x, y):
    xa, ya = np.atleast_1d(np.asarray(x, dtype=float)), np.atleast_1d(np.asarray(y, dtype=float))
    xa, ya = np.broadcast_arrays(xa, ya)
    out = np.empty(xa.shape)
    for idx in np.ndindex(xa.shape):
        out[idx] = _airy_matrix(np.array([xa[idx]]), np.array([ya[idx]]))[0, 0]
    return out if np.ndim(x) or np.ndim(y) else float(out[0])


def airy_truncation() -> float:
    """Point beyond which Ai(x)^2 < 1e-18."""
    f = lambda t: airy_ai(t)[0] ** 2 - AIRY_TAIL
    if f(AIRY_LIMIT) >= 0:
        raise TruncationFailure("Airy tail does not decay below threshold before x=200")
    return brentq(f, 0.0, 20.0, xtol=1e-12)


_AIRY_CUT = None


def _airy_cut() -> float:
    global _AIRY_CUT
    if _AIRY_CUT is None:
        _AIRY_CUT = airy_truncation()
    return _AIRY_CUT


@dataclass(frozen=True)
class GapProblem:
    kind: KernelKind
    lo: float
    hi: float
    lam: float = 1.0
    order: int = 40

    def __post_init__(self):
        if self.hi < self.lo:
            raise ValueError("interval needs lo <= hi")
        if not 0 < self.lam <= 1:
            raise ValueError("lambda must lie in (0, 1]")
        if self.order < 8:
            raise ValueError("order must be >= 8")


@dataclass(frozen=True)
class FredholmResult:
    value: float
    err_estimate: float


def _kernel_matrix(kind: KernelKind, x: np.ndarray) -> np.ndarray:
    if kind is KernelKind.SINE:
        return sine_kernel(x[:, None], x[None, :])
    return _airy_matrix(x, x)


def _interval(p: GapProblem) -> tuple[float, float]:
    lo, hi = p.lo, p.hi
    if p.kind is KernelKind.AIRY and math.isinf(hi):
        cut = _airy_cut()
        hi = cut if lo < cut else lo + 1.0
    return lo, hi


def det_at_order(kind: KernelKind, lo: float, hi: float, lam: float, order: int) -> float:
    """det(I - lam K) on [lo, hi] by Gauss-Legendre Nystrom.

    Uses the non-symmetric form delta_ij - lam w_j K(x_i, x_j), which stays
    valid (as an analytic continuation) when hi < lo.
    """
    if hi == lo:
        return 1.0
    rule = gauss_legendre(order)
    half, mid = 0.5 * (hi - lo), 0.5 * (hi + lo)
    x = mid + half * rule.nodes
    w = half * rule.weights
    K = _kernel_matrix(kind, x)
    if hi > lo:
        sw = np.sqrt(w)
        A = np.eye(order) - lam * sw[:, None] * K * sw[None, :]
    else:
        A = np.eye(order) - lam * K * w[None, :]
    return float(np.linalg.det(A))


def fredholm_det(p: GapProblem) -> FredholmResult:
    lo, hi = _interval(p)
    if hi == lo:
        return FredholmResult(1.0, 0.0)
    v1 = det_at_order(p.kind, lo, hi, p.lam, p.order)
    v2 = det_at_order(p.kind, lo, hi, p.lam, 2 * p.order)
    return FredholmResult(v1, abs(v1 - v2))
