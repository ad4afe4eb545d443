"""Airy function Ai and its derivative on the real line.

Large |x| uses the classical asymptotic series. In between, Ai is carried
by high-order Taylor steps of y'' = x y from anchor points: stepping from
x = 0 toward negative x (oscillatory, stable) and backward from x = 8 toward
the origin (Ai is the dominant solution in that direction, so the stepping
is stable too). Forward stepping on x > 0 would amplify the Bi component and
is never used.
"""

from __future__ import annotations

import math

import numpy as np

AI0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
AIP0 = -(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0)

UNDERFLOW_X = 108.0
_POS_ASYMPTOTIC = 8.0
_NEG_ASYMPTOTIC = -10.0
_STEP = 0.25
_N_TAYLOR = 32


def _u_coefficients(n: int) -> np.ndarray:
    u = np.empty(n)
    u[0] = 1.0
    for k in range(1, n):
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1))
    return u


_U = _u_coefficients(40)
_V = np.array([1.0] + [-(6 * k + 1) / (6 * k - 1) * _U[k] for k in range(1, 40)])


def _truncated_sum(coeffs, zeta, sign_alternating=True):
    total, best = 0.0, math.inf
    for k, c in enumerate(coeffs):
        term = c / zeta**k
        if sign_alternating and k % 2:
            term = -term
        if abs(term) > best:
            break
        total += term
        best = abs(term)
        if best < 1e-18 * abs(total):
            break
    return total


def _asymptotic_positive(x: float) -> tuple[float, float]:
    zeta = 2.0 / 3.0 * x**1.5
    pref = math.exp(-zeta) / (2.0 * math.sqrt(math.pi))
    ai = pref / x**0.25 * _truncated_sum(_U, zeta)
    aip = -pref * x**0.25 * _truncated_sum(_V, zeta)
    return ai, aip


def _split_sums(coeffs, zeta):
    even, odd = 0.0, 0.0
    best = math.inf
    for k, c in enumerate(coeffs):
        term = c / zeta**k
        if abs(term) > best:
            break
        best = abs(term)
        sgn = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            even += sgn * term
        else:
            odd += sgn * term
        if best < 1e-18:
            break
    return even, odd


def _asymptotic_negative(x: float) -> tuple[float, float]:
    z = -x
    zeta = 2.0 / 3.0 * z**1.5
    c, s = math.cos(zeta - math.pi / 4), math.sin(zeta - math.pi / 4)
    ue, uo = _split_sums(_U, zeta)
    ve, vo = _split_sums(_V, zeta)
    ai = (c * ue + s * uo) / (math.sqrt(math.pi) * z**0.25)
    aip = z**0.25 / math.sqrt(math.pi) * (s * ve - c * vo)
    return ai, aip


def _taylor(x0, y0, yp0, t, n_terms=_N_TAYLOR):
    """Value and slope at x0 + t of the solution of y'' = x y through (y0, yp0)."""
    a = [y0, yp0, 0.5 * x0 * y0]
    val = y0 + t * (yp0 + t * a[2])
    der = yp0 + 2.0 * a[2] * t
    tk = t * t
    for k in range(3, n_terms):
        ak = (x0 * a[k - 2] + a[k - 3]) / (k * (k - 1))
        a.append(ak)
        der = der + k * ak * tk
        tk = tk * t
        val = val + ak * tk
    return val, der


def _build_anchors():
    xs_pos = np.arange(0.0, _POS_ASYMPTOTIC + _STEP / 2, _STEP)
    pos = np.empty((len(xs_pos), 2))
    pos[-1] = _asymptotic_positive(_POS_ASYMPTOTIC)
    for i in range(len(xs_pos) - 1, 0, -1):
        pos[i - 1] = _taylor(xs_pos[i], pos[i, 0], pos[i, 1], -_STEP, 40)
    n_neg = int(round(-_NEG_ASYMPTOTIC / _STEP))
    xs_neg = -_STEP * np.arange(n_neg + 1)
    neg = np.empty((n_neg + 1, 2))
    neg[0] = (AI0, AIP0)
    for i in range(n_neg):
        neg[i + 1] = _taylor(xs_neg[i], neg[i, 0], neg[i, 1], -_STEP, 40)
    xs = np.concatenate([xs_neg[::-1], xs_pos[1:]])
    vals = np.concatenate([neg[::-1], pos[1:]])
    return xs, vals


_ANCHOR_X, _ANCHOR_V = _build_anchors()


def airy_ai(x, full_output: bool = False):
    """Ai(x) and Ai'(x).

    Accepts scalars or arrays. For x > 108 the pair (0, 0) is returned and,
    with ``full_output``, a third boolean (array) marks the underflow.
    """
    arr = np.asarray(x, dtype=float)
    flat = arr.ravel()
    val = np.zeros_like(flat)
    der = np.zeros_like(flat)
    under = flat > UNDERFLOW_X
    mid = (flat >= _NEG_ASYMPTOTIC) & (flat <= _POS_ASYMPTOTIC)
    if np.any(mid):
        xm = flat[mid]
        idx = np.clip(np.rint((xm - _ANCHOR_X[0]) / _STEP).astype(int), 0, len(_ANCHOR_X) - 1)
        x0 = _ANCHOR_X[idx]
        v, d = _taylor(x0, _ANCHOR_V[idx, 0], _ANCHOR_V[idx, 1], xm - x0)
        val[mid], der[mid] = v, d
    for i in np.flatnonzero(~mid & ~under):
        xi = flat[i]
        val[i], der[i] = _asymptotic_positive(xi) if xi > 0 else _asymptotic_negative(xi)
    if np.isnan(flat).any():
        raise ValueError("airy_ai requires finite arguments")
    if arr.ndim == 0:
        out = (float(val[0]), float(der[0]))
        return out + (bool(under[0]),) if full_output else out
    val, der = val.reshape(arr.shape), der.reshape(arr.shape)
    return (val, der, under.reshape(arr.shape)) if full_output else (val, der)
