"""Universal laws: Gaudin spacing, Tracy-Widom, Wigner surmise, two-point cluster functions."""

from __future__ import annotations

import enum
import math

import numpy as np

from ..numerics import composite_legendre
from .fredholm import GapProblem, KernelKind, det_at_order, fredholm_det
from .painleve import painleve_v_sigma, pv_series, tw_painleve

GAUDIN_ORDER = 40


class Ensemble(enum.Enum):
    HERMITIAN = "hermitian"
    REAL_SYMMETRIC = "real-symmetric"
    QUATERNIONIC = "quaternionic"


def gap_probability(s: float, order: int = GAUDIN_ORDER, route: str = "fredholm") -> float:
    """E(s) = det(I - K_sine on [0, s]).

    Both routes continue analytically to small s < 0, which the finite
    differences below rely on near s = 0: Nystrom through signed weights,
    Painleve through the small-s series of ln E.
    """
    if route == "fredholm":
        return det_at_order(KernelKind.SINE, 0.0, s, 1.0, order)
    if route == "painleve":
        return math.exp(painleve_v_sigma(s) if s >= 0 else pv_series(s))
    raise ValueError(f"unknown route '{route}'")


def _step(s: float) -> float:
    return max(1e-3, s * 1e-3)


def gaudin_density(s: float, order: int = GAUDIN_ORDER, route: str = "fredholm") -> float:
    """p(s) = E''(s) by a central second difference, one Richardson step."""
    if s < 0:
        raise ValueError("s must be non-negative")
    h = _step(s)

    def E(x):
        return gap_probability(x, order, route)

    def d2(hh):
        return (E(s + hh) - 2 * E(s) + E(s - hh)) / hh**2

    return (4 * d2(h / 2) - d2(h)) / 3


def gaudin_cdf(s: float, order: int = GAUDIN_ORDER) -> float:
    """P(spacing <= s) = 1 + E'(s)."""
    if s <= 0:
        return 0.0
    h = _step(s)

    def d1(hh):
        return (gap_probability(s + hh, order) - gap_probability(s - hh, order)) / (2 * hh)

    return 1.0 + (4 * d1(h / 2) - d1(h)) / 3


def _tw_order(s: float) -> int:
    return int(max(40, 4 * (10.0 - s) + 20))


def tw_cdf(s: float, route: str = "fredholm", order: int | None = None) -> float:
    """Tracy-Widom (beta=2) CDF; ``route`` is 'fredholm' or 'painleve'."""
    if route == "painleve":
        return float(tw_painleve(s))
    if route != "fredholm":
        raise ValueError(f"unknown route '{route}'")
    res = fredholm_det(GapProblem(KernelKind.AIRY, s, math.inf, 1.0, order or _tw_order(s)))
    return res.value


def wigner_surmise(x):
    x = np.asarray(x, dtype=float)
    out = 0.5 * np.pi * x * np.exp(-0.25 * np.pi * x * x)
    return out if out.ndim else float(out)


def sine_integral(x: float) -> float:
    """Si(x) = int_0^x sin(t)/t dt by composite Gauss-Legendre."""
    if x == 0:
        return 0.0
    panels = max(4, int(abs(x) / 2.0) + 4)
    return composite_legendre(_sinc_raw, 0.0, x, panels=panels, order=20)


def _sinc_raw(t):
    return np.sinc(np.asarray(t) / np.pi)


def _sinc_pi(r):
    return math.sin(math.pi * r) / (math.pi * r)


def _dsinc_pi(r):
    return math.cos(math.pi * r) / r - math.sin(math.pi * r) / (math.pi * r * r)


def cluster_w2(r: float, ensemble: Ensemble | str = Ensemble.HERMITIAN) -> float:
    """Two-point function at unfolded distance r for the three classical ensembles."""
    if r <= 0:
        raise ValueError("r must be positive")
    ens = Ensemble(ensemble)
    if ens is Ensemble.HERMITIAN:
        return 1.0 - _sinc_pi(r) ** 2
    if ens is Ensemble.REAL_SYMMETRIC:
        tail = 0.5 - sine_integral(math.pi * r) / math.pi
        return float(1.0 - _sinc_pi(r) ** 2 - tail * _dsinc_pi(r))
    head = sine_integral(2 * math.pi * r) / (2 * math.pi)
    return float(1.0 - _sinc_pi(2 * r) ** 2 + head * 2 * _dsinc_pi(2 * r))
