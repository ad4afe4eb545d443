"""Rational functions of one variable and their local Laurent expansions."""

from __future__ import annotations

import numpy as np

from ..errors import NotAPole
from .polynomial import Polynomial

ROOT_TOL = 1e-9


def series_divide(num: np.ndarray, den: np.ndarray, n_terms: int) -> np.ndarray:
    """First ``n_terms`` power-series coefficients of num/den, with den[0] != 0."""
    out = np.zeros(n_terms, dtype=complex)
    num = np.concatenate([num, np.zeros(max(0, n_terms - len(num)))])
    d0 = den[0]
    for k in range(n_terms):
        acc = num[k]
        for j in range(1, min(k, len(den) - 1) + 1):
            acc -= den[j] * out[k - j]
        out[k] = acc / d0
    return out


def _leading_zeros(c: np.ndarray, scale: float, tol: float) -> int:
    k = 0
    while k < len(c) and abs(c[k]) <= tol * scale:
        k += 1
    return k


def _multiplicity(p: Polynomial, r, tol: float = ROOT_TOL) -> int:
    if p.is_zero():
        return 0
    t = p.taylor(r)
    return _leading_zeros(t, float(np.max(np.abs(t))), tol)


def _refine_centre(p: Polynomial, z: complex, m: int) -> complex:
    """An m-fold root of p is a simple root of its (m-1)-th derivative."""
    d = p.derivative(m - 1)
    dd = d.derivative()
    for _ in range(4):
        slope = dd(z)
        if abs(slope) < 1e-300:
            break
        step = d(z) / slope
        z = z - step
        if abs(step) <= 1e-16 * max(1.0, abs(z)):
            break
    return complex(z)


def root_clusters(p: Polynomial, tol: float = ROOT_TOL) -> list[tuple[complex, int]]:
    """Distinct roots of ``p`` with multiplicities.

    Companion eigenvalues of an m-fold root scatter by roughly eps**(1/m). For
    each eigenvalue the nearest neighbours within a loose radius are tried as
    a cluster, largest first; a cluster of size m is accepted only when the
    Taylor coefficients of ``p`` at its refined centre confirm an m-fold root.
    """
    remaining = sorted(p.roots(), key=lambda s: (s.real, s.imag))
    out = []
    while remaining:
        r = remaining[0]
        radius = 0.1 * max(1.0, abs(r))
        near = sorted((s for s in remaining if abs(s - r) <= radius), key=lambda s: abs(s - r))
        chosen, centre = [r], complex(r)
        for m in range(len(near), 1, -1):
            sub = near[:m]
            c = _refine_centre(p, complex(np.mean(sub)), m)
            if _multiplicity(p, c, tol) >= m:
                chosen, centre = sub, c
                break
        for s in chosen:
            remaining.remove(s)
        out.append((centre, len(chosen)))
    return out


class RationalFunction:
    """num/den with a monic denominator, reduced by default."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, reduce: bool = True):
        num = num if isinstance(num, Polynomial) else Polynomial(np.atleast_1d(num))
        den = Polynomial([1.0]) if den is None else den
        den = den if isinstance(den, Polynomial) else Polynomial(np.atleast_1d(den))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        lead = den.leading
        self.num = num / lead
        self.den = den.monic()
        if reduce:
            self._reduce()

    def _reduce(self):
        if self.num.is_zero():
            self.den = Polynomial([1.0])
            return
        num, den = self.num, self.den
        for r, m in root_clusters(den):
            k = min(m, _multiplicity(num, r))
            for _ in range(k):
                lin = Polynomial([-r, 1.0])
                num = num // lin
                den = den // lin
        self.num = num
        self.den = den

    def reduced(self) -> "RationalFunction":
        return RationalFunction(self.num, self.den, reduce=True)

    @classmethod
    def constant(cls, c):
        return cls(Polynomial([c]))

    @classmethod
    def z(cls):
        return cls(Polynomial.x())

    # evaluation
    def __call__(self, z):
        return self.num(z) / self.den(z)

    # arithmetic
    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other, reduce=False)
        return RationalFunction(Polynomial([other]), reduce=False)

    def __add__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(self.den ** (-k), self.num ** (-k))
        return RationalFunction(self.num**k, self.den**k)

    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def at_inverse(self) -> "RationalFunction":
        """f(1/z) as a rational function of z."""
        dn, dd = max(self.num.degree, 0), self.den.degree
        n = Polynomial(self.num.coef[::-1]) * Polynomial.x() ** max(0, dd - dn)
        d = Polynomial(self.den.coef[::-1]) * Polynomial.x() ** max(0, dn - dd)
        return RationalFunction(n, d)

    # structure
    def poles(self) -> list[tuple[complex, int]]:
        return root_clusters(self.den)

    def laurent(self, a, n_terms: int) -> tuple[int, np.ndarray]:
        """Laurent expansion at z=a: returns (v, c) with f = sum_k c[k] (z-a)**(v+k)."""
        dt = self.den.taylor(a)
        nt = self.num.taylor(a)
        m = _leading_zeros(dt, float(np.max(np.abs(dt))), ROOT_TOL)
        if self.num.is_zero():
            return 0, np.zeros(n_terms, dtype=complex)
        k = _leading_zeros(nt, float(np.max(np.abs(nt))), 1e-15)
        c = series_divide(nt[k:], dt[m:], n_terms)
        return k - m, c

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"


def residue_at(f: RationalFunction, pole) -> complex:
    """Residue of f at ``pole`` via the local Laurent expansion."""
    dt = f.den.taylor(pole)
    m = _leading_zeros(dt, float(np.max(np.abs(dt))), ROOT_TOL)
    if m == 0:
        raise NotAPole(f"{pole} is not a root of the denominator")
    v, c = f.laurent(pole, m + 1)
    k = -1 - v
    if k < 0 or k >= len(c):
        return 0j
    return complex(c[k])
