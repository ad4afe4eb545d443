"""Painleve routes: the sigma-form of Painleve V for the sine kernel and the
Hastings-McLeod solution of Painleve II for the Airy kernel."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from ..errors import StepUnderflow
from ..numerics import airy_ai, integrate_ode

PV_START = 1e-4
PII_START = 8.0
PII_END = -8.0


def _sigma_series(a: float) -> np.ndarray:
    """Taylor coefficients c_1..c_9 of sigma(x) for det(I - lam K_sine), a = lam/pi."""
    a2 = a * a
    return np.array(
        [
            0.0,
            -a,
            -a2,
            -a2 * a,
            -a2 * (9 * a2 - 1) / 9,
            -a2 * a * (36 * a2 - 5) / 36,
            -a2 * (450 * a2**2 - 75 * a2 + 4) / 450,
            -a2 * a * (2700 * a2**2 - 525 * a2 + 28) / 2700,
            -a2 * (396900 * a2**3 - 88200 * a2**2 + 5929 * a2 - 180) / 396900,
            -a2 * a * (1587600 * a2**3 - 396900 * a2**2 + 32193 * a2 - 761) / 1587600,
        ]
    )


def pv_series(s: float, lam: float = 1.0) -> float:
    """Small-s series of ln det(I - lam K_sine on [0, s]); valid also for small s < 0."""
    if abs(s) > 0.02:
        raise ValueError("series only used for |s| <= 0.02")
    c = _sigma_series(lam / math.pi)
    k = np.arange(1, len(c))
    return float(np.sum(c[1:] * (math.pi * s) ** k / k))


def _sigma_rhs(x, s):
    sig, d1, d2, _ = s
    A = x * d1 - sig
    B = A + d1 * d1
    d3 = -(x * d2 + 2 * x * B + 2 * A * (x + 2 * d1)) / (x * x)
    return [d1, d2, d3, sig / x]


def painleve_v_sigma(s: float, lam: float = 1.0, tol: float = 1e-13) -> float:
    """ln det(I - lam K_sine on [0, s]) from the sigma-form of Painleve V.

    The third-order ODE obtained by differentiating the sigma-form is started
    at x0 = 1e-4 from the small-x series; int_0^x0 sigma/x uses the series.
    """
    if s <= 0:
        if s == 0:
            return 0.0
        raise ValueError("s must be positive")
    if not 0 < lam <= 1:
        raise ValueError("lambda must lie in (0, 1]")
    c = _sigma_series(lam / math.pi)
    k = np.arange(len(c))
    x_end = math.pi * s
    x0 = min(PV_START, x_end)
    head = float(np.sum(c[1:] * x0 ** k[1:] / k[1:]))
    if x_end <= x0:
        return head
    y0 = [
        float(np.sum(c * x0**k)),
        float(np.sum(k[1:] * c[1:] * x0 ** (k[1:] - 1))),
        float(np.sum(k[2:] * (k[2:] - 1) * c[2:] * x0 ** (k[2:] - 2))),
        0.0,
    ]
    traj = integrate_ode(_sigma_rhs, y0, (x0, x_end), tol)
    return head + float(traj.final[3])


def _pii_rhs(x, s):
    q, dq, _, _ = s
    return [dq, x * q + 2 * q**3, -q * q, -x * q * q]


@lru_cache(maxsize=4)
def _hastings_mcleod(tol: float = 1e-13):
    """Backward trajectory of (q, q', I, J) from x=8, I = int_x^inf q^2, J = int_x^inf t q^2."""
    ai, aip = airy_ai(PII_START)
    x = PII_START
    # Airy tails: int_x^inf Ai^2 = Ai'^2 - x Ai^2 ; int_x^inf t Ai^2 = (x Ai'^2 - x^2 Ai^2 - Ai Ai') / 3
    i0 = aip**2 - x * ai**2
    j0 = (x * aip**2 - x * x * ai**2 - ai * aip) / 3.0
    return integrate_ode(_pii_rhs, [ai, aip, i0, j0], (PII_START, PII_END), tol, atol=1e-30)


def _check_range(s):
    s = np.asarray(s, dtype=float)
    if np.any(s < PII_END):
        raise StepUnderflow("Hastings-McLeod integration is only validated down to s=-8", t=float(np.min(s)))
    return s


def painleve_ii_hm(s):
    """Hastings-McLeod q(s); for s > 8 the Airy asymptote Ai(s) is returned."""
    s = _check_range(s)
    traj = _hastings_mcleod()
    out = np.where(s > PII_START, airy_ai(np.maximum(s, PII_START))[0], 0.0)
    inside = s <= PII_START
    if np.any(inside):
        out = np.where(inside, traj(np.where(inside, s, PII_START))[0], out)
    return out if out.ndim else float(out)


def tw_painleve(s):
    """F_2(s) = exp(-int_s^inf (x - s) q(x)^2 dx)."""
    s = _check_range(s)
    traj = _hastings_mcleod()
    sc = np.minimum(s, PII_START)
    st = traj(sc)
    I, J = st[2], st[3]
    # beyond x=8 the tails are taken from the Airy function
    hi = s > PII_START
    if np.any(hi):
        ai, aip = airy_ai(np.where(hi, s, PII_START))
        I = np.where(hi, aip**2 - s * ai**2, I)
        J = np.where(hi, (s * aip**2 - s * s * ai**2 - ai * aip) / 3.0, J)
    out = np.exp(-(J - s * I))
    return out if out.ndim else float(out)
