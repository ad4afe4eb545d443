"""Topological recursion on genus-0 curves x(z) = c + (u/2)(z + 1/z).

Stable correlators W_{g,n} (as coefficients of dz_1...dz_n) are polynomials in
the partial fractions 1/(z_i - b)^k, b = +-1. They are stored symbolically as
dicts {((b_1,k_1),...,(b_n,k_n)): coeff}. Each recursion step expands the
integrand in w = z - a around a branch point a, with every coefficient itself a
symbolic polynomial in the remaining variables, and reads off the w^-1 term.
"""

from __future__ import annotations

import cmath
import json
import math
import threading
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .equilibrium import SpectralCurveG0
from .errors import Coincident, OnBranchPoint, BranchAmbiguity
from .numerics import Polynomial, RationalFunction

BRANCHES = (1, -1)
MAX_DEPTH = 8
_EMPTY = (0, 0)


# ---------------------------------------------------------------- kernels

def bergman(z1, z2):
    if abs(z1 - z2) < 1e-12:
        raise Coincident("Bergman kernel evaluated on the diagonal")
    return 1.0 / (z1 - z2) ** 2


def _check_branch(z):
    for b in BRANCHES:
        if abs(z - b) < 1e-9:
            raise OnBranchPoint(f"z={z} sits on the branch point {b}")


def recursion_kernel(curve: SpectralCurveG0, z0, z):
    _check_branch(z)
    y = curve.y
    num = 1.0 / (z0 - z) - 1.0 / (z0 - 1.0 / z)
    den = 2.0 * (y(z) - y(1.0 / z)) * curve.dx(z)
    return num / den


# ---------------------------------------------------------------- requests

@dataclass(frozen=True)
class CorrelatorRequest:
    curve: SpectralCurveG0
    n: int
    g: int
    spectators: tuple = ()

    def __post_init__(self):
        validate_indices(self.n, self.g)
        if len(self.spectators) != self.n - 1:
            raise ValueError("need n-1 spectator points")
        for s in self.spectators:
            if min(abs(s - 1), abs(s + 1), abs(s)) < 1e-6:
                raise ValueError(f"spectator {s} too close to 0 or a branch point")


def validate_indices(n: int, g: int, max_depth: int = MAX_DEPTH):
    if n < 1 or g < 0:
        raise ValueError("need n >= 1 and g >= 0")
    if 2 - 2 * g - n >= 0 and (n, g) not in ((1, 0), (2, 0)):
        raise ValueError(f"(n={n}, g={g}) is outside the recursion range")
    if 2 * g + n > max_depth:
        raise ValueError(f"2g+n = {2 * g + n} exceeds the depth cap {max_depth}")


# ---------------------------------------------------------------- local series

class _Window:
    """Dense Laurent coefficients for powers -P..P around a branch point."""

    def __init__(self, P: int):
        self.P = P
        self.L = 2 * P + 1

    def from_laurent(self, v: int, c: np.ndarray) -> np.ndarray:
        out = np.zeros(self.L, dtype=complex)
        for i, ci in enumerate(c):
            p = v + i
            if p > self.P:
                break
            if p < -self.P:
                if ci != 0:
                    raise ArithmeticError("pole order exceeds the series window")
                continue
            out[p + self.P] = ci
        return out

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.convolve(a, b)[self.P : self.P + self.L]


@lru_cache(maxsize=4096)
def _rf_window(kind: str, b: int, k: int, a: int, P: int) -> np.ndarray:
    """Window series of simple building blocks at z = a.

    kind 'pf'  : 1/(z - b)^k
    kind 'ipf' : 1/(1/z - b)^k = z^k / (1 - b z)^k
    kind 'pow' : (1/z - a)^k
    """
    zpoly = Polynomial([0.0, 1.0])
    if kind == "pf":
        rf = RationalFunction(Polynomial([1.0]), Polynomial([-b, 1.0]) ** k, reduce=False)
    elif kind == "ipf":
        rf = RationalFunction(zpoly**k, Polynomial([1.0, -b]) ** k, reduce=False)
    elif kind == "pow":
        rf = RationalFunction(Polynomial([1.0, -a]) ** k, zpoly**k, reduce=False)
    else:
        raise ValueError(kind)
    win = _Window(P)
    v, c = rf.laurent(a, 2 * P + k + 2)
    return win.from_laurent(v, c)


def _rf_series(rf: RationalFunction, a: int, P: int) -> np.ndarray:
    win = _Window(P)
    v, c = rf.laurent(a, 2 * P + 4)
    return win.from_laurent(v, c)


def _monomial_window(P: int, power: int, coeff=1.0) -> np.ndarray:
    out = np.zeros(2 * P + 1, dtype=complex)
    if -P <= power <= P:
        out[power + P] = coeff
    return out


def _merge(k1, k2):
    return tuple(x if x != _EMPTY else y for x, y in zip(k1, k2))


def _series_mul(win: _Window, A: dict, B: dict) -> dict:
    out: dict = {}
    for k1, a1 in A.items():
        for k2, a2 in B.items():
            key = _merge(k1, k2)
            prod = win.mul(a1, a2)
            if key in out:
                out[key] = out[key] + prod
            else:
                out[key] = prod
    return out


def _series_add(A: dict, B: dict) -> dict:
    out = dict(A)
    for k, v in B.items():
        out[k] = out[k] + v if k in out else v
    return out


def _substitute(W: dict, roles, n_slots: int, a: int, win: _Window) -> dict:
    """Expand a stored correlator around z = a.

    ``roles[i]`` says what stored variable i becomes: 'z', 'iz' (1/z) or a
    slot index in the output key.
    """
    out: dict = {}
    P = win.P
    for key, c in W.items():
        arr = _monomial_window(P, 0, c)
        newkey = [_EMPTY] * n_slots
        for (b, k), role in zip(key, roles):
            if role == "z":
                arr = win.mul(arr, _rf_window("pf", b, k, a, P))
            elif role == "iz":
                arr = win.mul(arr, _rf_window("ipf", b, k, a, P))
            else:
                newkey[role] = (b, k)
        newkey = tuple(newkey)
        out[newkey] = out[newkey] + arr if newkey in out else arr
    return out


def _bergman_series(slot: int, inverse: bool, n_slots: int, a: int, win: _Window) -> dict:
    """B(z, z_slot) or B(1/z, z_slot) in powers of w, with t = 1/(z_slot - a)."""
    out = {}
    P = win.P
    for k in range(P + 1):
        s = _rf_window("pow", 0, k, a, P) if inverse else _monomial_window(P, k)
        key = [_EMPTY] * n_slots
        key[slot] = (a, k + 2)
        out[tuple(key)] = (k + 1) * s
    return out


# ---------------------------------------------------------------- recursion engine

class _Engine:
    def __init__(self, curve: SpectralCurveG0):
        self.curve = curve
        self.lock = threading.Lock()
        self.table: dict = {}
        y = curve.y
        self.denom = (y - y.at_inverse()) * curve.dx_rational() * 2.0

    def get(self, g: int, n: int) -> dict:
        key = (g, n)
        if key in self.table:
            return self.table[key]
        w = self._compute(g, n)
        with self.lock:
            return self.table.setdefault(key, w)

    def _factor(self, h: int, first_role: str, rest_slots, n_slots: int, a: int, win: _Window):
        """Series of W_{h, 1+|rest|}(z or 1/z, rest)."""
        if h == 0 and len(rest_slots) == 1:
            return _bergman_series(rest_slots[0], first_role == "iz", n_slots, a, win)
        W = self.get(h, 1 + len(rest_slots))
        return _substitute(W, [first_role, *rest_slots], n_slots, a, win)

    def _compute(self, g: int, n: int) -> dict:
        """W_{g,n}(z0, z_1..z_{n-1}), z0 in slot 0."""
        m = n - 1  # spectators
        n_slots = n
        P = 6 * g + 2 * n + 4
        win = _Window(P)
        J = list(range(1, n))
        result: dict = {}
        for a in BRANCHES:
            # Q(z) = (-1/z^2) [W_{g-1,n+1}(z, 1/z, J) + sum' W(z, I) W(1/z, J\I)]
            Q: dict = {}
            if g >= 1:
                if g == 1 and m == 0:
                    zz = RationalFunction(Polynomial([0.0, 0.0, 1.0]), Polynomial([1.0, 0.0, -2.0, 0.0, 1.0]))
                    Q[tuple([_EMPTY] * n_slots)] = _rf_series(zz, a, P)
                else:
                    W = self.get(g - 1, m + 2)
                    Q = _substitute(W, ["z", "iz", *J], n_slots, a, win)
            for h in range(g + 1):
                for size in range(m + 1):
                    for I in combinations(J, size):
                        rest = [j for j in J if j not in I]
                        if (h == 0 and size == 0) or (h == g and size == m):
                            continue
                        f1 = self._factor(h, "z", list(I), n_slots, a, win)
                        f2 = self._factor(g - h, "iz", rest, n_slots, a, win)
                        Q = _series_add(Q, _series_mul(win, f1, f2))
            minus_inv_z2 = _rf_series(RationalFunction(Polynomial([-1.0]), Polynomial([0.0, 0.0, 1.0])), a, P)
            D = _rf_series(1.0 / self.denom, a, P)
            pre = win.mul(minus_inv_z2, D)
            # K(z0, z) = sum_k t0^(k+1) [w^k - (1/z - a)^k] D(z)
            for k in range(P + 1):
                bracket = _monomial_window(P, k) - _rf_window("pow", 0, k, a, P)
                kser = win.mul(bracket, pre)
                for qkey, qarr in Q.items():
                    full = win.mul(kser, qarr)
                    c = full[P - 1]
                    if c == 0:
                        continue
                    key = ((a, k + 1),) + qkey[1:]
                    result[key] = result.get(key, 0.0) + c
        scale = max((abs(c) for c in result.values()), default=0.0)
        return {k: complex(c) for k, c in sorted(result.items()) if abs(c) > 1e-14 * scale}


_ENGINES: dict = {}
_ENGINES_LOCK = threading.Lock()


def _curve_key(curve: SpectralCurveG0):
    return (
        complex(curve.center),
        complex(curve.halfwidth),
        tuple(curve.y.num.coef),
        tuple(curve.y.den.coef),
    )


def engine(curve: SpectralCurveG0, cached: bool = True) -> _Engine:
    if not cached:
        return _Engine(curve)
    key = _curve_key(curve)
    with _ENGINES_LOCK:
        if key not in _ENGINES:
            _ENGINES[key] = _Engine(curve)
        return _ENGINES[key]


def correlator_symbolic(curve: SpectralCurveG0, n: int, g: int, cached: bool = True, max_depth: int = MAX_DEPTH) -> dict:
    """Partial-fraction table of a stable W_{g,n}."""
    validate_indices(n, g, max_depth)
    if (n, g) in ((1, 0), (2, 0)):
        raise ValueError("seeds have no partial-fraction table")
    return engine(curve, cached).get(g, n)


def eval_symbolic(W: dict, points) -> complex:
    points = [complex(p) for p in points]
    total = 0j
    for key, c in W.items():
        term = c
        for (b, k), z in zip(key, points):
            term /= (z - b) ** k
        total += term
    return total


# ---------------------------------------------------------------- public correlators

def correlator(req: CorrelatorRequest, z0) -> complex:
    pts = [z0, *req.spectators]
    for p in pts:
        _check_branch(p)
    if (req.n, req.g) == (1, 0):
        return complex(req.curve.y(z0) * req.curve.dx(z0))
    if (req.n, req.g) == (2, 0):
        return bergman(z0, req.spectators[0])
    return eval_symbolic(correlator_symbolic(req.curve, req.n, req.g), pts)


def correlator_rational(curve: SpectralCurveG0, n: int, g: int, spectators=()) -> RationalFunction:
    """W_{g,n} as a rational function of its first variable, spectators bound."""
    req = CorrelatorRequest(curve, n, g, tuple(spectators))
    if (n, g) == (1, 0):
        return curve.y * curve.dx_rational()
    if (n, g) == (2, 0):
        s = complex(req.spectators[0])
        return RationalFunction(Polynomial([1.0]), Polynomial([s * s, -2 * s, 1.0]))
    W = correlator_symbolic(curve, n, g)
    coeff: dict = {}
    for key, c in W.items():
        term = c
        for (b, k), z in zip(key[1:], req.spectators):
            term /= (z - b) ** k
        coeff[key[0]] = coeff.get(key[0], 0j) + term
    p = max([k for (b, k) in coeff if b == 1], default=0)
    q = max([k for (b, k) in coeff if b == -1], default=0)
    zm, zp = Polynomial([-1.0, 1.0]), Polynomial([1.0, 1.0])
    num = Polynomial()
    for (b, k), c in coeff.items():
        other = zm ** (p - k) * zp**q if b == 1 else zm**p * zp ** (q - k)
        num = num + other * c
    return RationalFunction(num, zm**p * zp**q)


def rational_to_json(rf: RationalFunction, n: int, g: int, spectators) -> str:
    def enc(coef):
        if np.all(coef.imag == 0):
            return coef.real.tolist()
        return [[c.real, c.imag] for c in coef]

    return json.dumps(
        {
            "n": n,
            "g": g,
            "spectators": enc(np.asarray(spectators, dtype=complex)),
            "rational": {"num": enc(rf.num.coef), "den": enc(rf.den.coef)},
        }
    )


# ---------------------------------------------------------------- x-coordinates

def polynomial_part_y(curve: SpectralCurveG0) -> Polynomial:
    """P(x) with y(z) - P(x(z)) = O(1/z) as z -> infinity."""
    num, den = curve.y.num, curve.y.den
    dd = den.degree
    if not np.allclose(den.coef[:-1], 0):
        raise ValueError("y is not a Laurent polynomial in z")
    lau = {i - dd: c for i, c in enumerate(num.coef)}  # power -> coefficient
    xr = curve.x_rational()
    top = max(lau)
    P = Polynomial()
    rest = curve.y
    half_u = 0.5 * curve.halfwidth
    shift = Polynomial([-curve.center, 1.0])
    for d in range(top, -1, -1):
        v, c = _laurent_at_infinity(rest, d)
        if abs(c) == 0:
            continue
        term = shift**d * (c / half_u**d)
        P = P + term
        rest = rest - _compose(term, xr)
    return P


def _laurent_at_infinity(rf: RationalFunction, d: int):
    """Coefficient of z^d in the expansion of rf at infinity (rf Laurent polynomial)."""
    dd = rf.den.degree
    idx = d + dd
    if 0 <= idx < len(rf.num.coef):
        return d, rf.num.coef[idx] / rf.den.leading
    return d, 0j


def _compose(p: Polynomial, r: RationalFunction) -> RationalFunction:
    out = RationalFunction.constant(0.0)
    for c in p.coef[::-1]:
        out = out * r + c
    return out


def z_of_x(curve: SpectralCurveG0, xi) -> complex:
    t = (complex(xi) - curve.center) / curve.halfwidth
    if abs(t.imag) < 1e-9 and -1 - 1e-9 <= t.real <= 1 + 1e-9:
        raise BranchAmbiguity(f"x={xi} lies on the cut")
    s = cmath.sqrt(t - 1) * cmath.sqrt(t + 1)
    z = t + s
    return z if abs(z) >= 1 else t - s


def map_to_x(curve: SpectralCurveG0, n: int, g: int, points) -> complex:
    """x-plane correlator omega_n^(g)(x_1..x_n) from the z-plane forms."""
    zs = [z_of_x(curve, p) for p in points]
    if len(zs) != n:
        raise ValueError("need n points")
    scale = curve.temperature ** (2 - 2 * g - n)
    if (n, g) == (1, 0):
        P = polynomial_part_y(curve)
        return complex(scale * (curve.y(zs[0]) - P(points[0])))
    if (n, g) == (2, 0):
        val = bergman(zs[0], zs[1]) / (curve.dx(zs[0]) * curve.dx(zs[1]))
        return complex(scale * (val - 1.0 / (points[0] - points[1]) ** 2))
    req = CorrelatorRequest(curve, n, g, tuple(zs[1:]))
    w = correlator(req, zs[0])
    for z in zs:
        w /= curve.dx(z)
    return complex(scale * w)


# ---------------------------------------------------------------- invariants

def _taylor_phi(curve: SpectralCurveG0, a: int, n_terms: int) -> np.ndarray:
    """Taylor coefficients at w = 0 of a primitive of y dx around z = a (zero constant)."""
    ydx = curve.y * curve.dx_rational()
    v, c = ydx.laurent(a, n_terms)
    phi = np.zeros(n_terms + v + 1, dtype=complex)
    for i, ci in enumerate(c):
        p = v + i
        if p < 0:
            if abs(ci) > 1e-10 * max(1.0, np.max(np.abs(c))):
                raise ArithmeticError("y dx is singular at a branch point")
            continue
        if p + 1 < len(phi):
            phi[p + 1] = ci / (p + 1)
    return phi


def branch_residues(curve: SpectralCurveG0, g: int, n: int = 1) -> dict:
    """Res_{z=a} W_{g,n}(z, ...) coefficients, i.e. the (a, 1) partial-fraction parts."""
    W = correlator_symbolic(curve, n, g)
    return {k: c for k, c in W.items() if k[0][1] == 1}


def f_g(curve: SpectralCurveG0, g: int) -> complex:
    """Symplectic invariant F_g for g >= 1.

    For g >= 2 this is (1/(2-2g)) sum_a Res W_{g,1} Phi with dPhi = y dx; at g = 1
    that prefactor is singular and the closed form -(1/24) log(gamma^4 M(1) M(-1))
    is used, gamma = u/2 and M(a) = y'(a) / (2 gamma).
    """
    if g < 1:
        raise ValueError("F_g requires g >= 1")
    if g == 1:
        gamma = 0.5 * curve.halfwidth
        prod = gamma**4
        for a in BRANCHES:
            v, c = curve.y.laurent(a, 3)
            if v != 1:
                raise ArithmeticError("y must have a simple zero at each branch point")
            prod *= c[0] / (2.0 * gamma)
        return complex(-cmath.log(prod) / 24.0)
    W = correlator_symbolic(curve, 1, g)
    total = 0j
    top = max(k for ((b, k),) in W)
    for a in BRANCHES:
        phi = _taylor_phi(curve, a, top + 4)
        for ((b, k),), c in W.items():
            if b == a and k - 1 < len(phi):
                total += c * phi[k - 1]
    return complex(total / (2 - 2 * g))


# ---------------------------------------------------------------- rescaled curve

@dataclass(frozen=True)
class RescaledCurveSpec:
    m: int
    b: float
    eps: float
    gamma: complex

    @classmethod
    def build(cls, m: int, b: float, eps: float) -> "RescaledCurveSpec":
        if m < 1 or b <= 0 or not -1 < eps < 1:
            raise ValueError("need m >= 1, b > 0, |eps| < 1")
        g2m = gamma_power(m, b, eps)
        # principal root of a negative real
        gamma = abs(g2m) ** (1.0 / (2 * m)) * cmath.exp(1j * math.pi / (2 * m))
        return cls(m, b, eps, gamma)

    def to_json(self) -> str:
        g2 = self.gamma**2
        return json.dumps(
            {
                "m": self.m,
                "b": self.b,
                "eps": self.eps,
                "gamma": [self.gamma.real, self.gamma.imag],
                "gamma_squared": [g2.real, g2.imag],
                "gamma_2m": gamma_power(self.m, self.b, self.eps),
            }
        )


def gamma_power(m: int, b: float, eps: float) -> float:
    return -(math.factorial(m) ** 2) * 2 ** (2 * m + 1) / (b * b * (1 - eps * eps) * math.factorial(2 * m))


def rescaled_curve(spec: RescaledCurveSpec) -> SpectralCurveG0:
    m, gamma = spec.m, complex(spec.gamma)
    xi = RationalFunction(Polynomial([0.5 * gamma, 0.0, 0.5 * gamma]), Polynomial([0.0, 1.0]))
    root = RationalFunction(Polynomial([-gamma / 2j, 0.0, gamma / 2j]), Polynomial([0.0, 1.0]))
    poly = np.zeros(2 * m, dtype=complex)
    poly[2 * m - 1] = 1.0
    for n in range(1, m):
        poly[2 * m - 1 - 2 * n] = math.factorial(2 * n) / (math.factorial(n) ** 2 * 4**n) * gamma ** (2 * n)
    pref = spec.b * math.pi * math.sqrt(1 - spec.eps**2)
    y = _compose(Polynomial(poly), xi) * root * pref
    return SpectralCurveG0(0.0, gamma, y, 1.0)


def gaussian_curve(T: float = 1.0) -> SpectralCurveG0:
    """Spectral curve of V = x^2/2 at temperature T: support [-2 sqrt T, 2 sqrt T]."""
    u = 2.0 * math.sqrt(T)
    h = 1.0 / T
    y = RationalFunction(Polynomial([0.25 * u * h, 0.0, -0.25 * u * h]), Polynomial([0.0, 1.0]))
    return SpectralCurveG0(0.0, u, y, T)
