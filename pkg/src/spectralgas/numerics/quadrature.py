"""Gauss-Legendre and Gauss-Chebyshev rules."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray

    def mapped(self, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights transported affinely from [-1, 1] to [lo, hi]."""
        half = 0.5 * (hi - lo)
        return lo + half * (self.nodes + 1.0), half * self.weights

    def integrate(self, f, lo: float = -1.0, hi: float = 1.0):
        x, w = self.mapped(lo, hi)
        return np.dot(w, f(x))


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> QuadratureRule:
    """n-point Gauss-Legendre rule on [-1, 1] (exact through degree 2n-1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return QuadratureRule(x, w)


@lru_cache(maxsize=64)
def gauss_chebyshev_u(n: int) -> QuadratureRule:
    """Rule for integral of sqrt(1-t^2) f(t) over [-1, 1]; the sqrt weight is folded in."""
    k = np.arange(1, n + 1)
    theta = k * np.pi / (n + 1)
    x = np.cos(theta)[::-1].copy()
    w = (np.pi / (n + 1) * np.sin(theta) ** 2)[::-1].copy()
    x.setflags(write=False)
    w.setflags(write=False)
    return QuadratureRule(x, w)


def composite_legendre(f, lo: float, hi: float, panels: int = 8, order: int = 20):
    """Composite Gauss-Legendre on equal panels; vectorized in f."""
    rule = gauss_legendre(order)
    edges = np.linspace(lo, hi, panels + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        total = total + rule.integrate(f, a, b)
    return total
