"""Dense univariate polynomials with complex coefficients (ascending order)."""

from __future__ import annotations

import numpy as np


def _as_coef(values) -> np.ndarray:
    c = np.array(values, dtype=complex).ravel()
    nz = np.flatnonzero(c)
    c = c[: nz[-1] + 1] if nz.size else c[:0]
    c.setflags(write=False)
    return c


class Polynomial:
    """p(x) = sum_k coef[k] x**k.

    The coefficient array is kept canonical: trailing exact zeros are dropped,
    so the zero polynomial has an empty coefficient array and degree -1.
    """

    __slots__ = ("coef",)

    def __init__(self, coefficients=()):
        self.coef = _as_coef(coefficients)

    # construction helpers
    @classmethod
    def x(cls) -> "Polynomial":
        return cls([0.0, 1.0])

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def from_roots(cls, roots, leading=1.0) -> "Polynomial":
        p = cls([leading])
        for r in roots:
            p = p * cls([-r, 1.0])
        return p

    # basic properties
    @property
    def degree(self) -> int:
        return len(self.coef) - 1

    def is_zero(self) -> bool:
        return len(self.coef) == 0

    @property
    def leading(self) -> complex:
        return self.coef[-1] if len(self.coef) else 0j

    def is_real(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coef.imag) <= tol * max(1.0, self.norm())))

    def norm(self) -> float:
        return float(np.max(np.abs(self.coef))) if len(self.coef) else 0.0

    def real_coefficients(self) -> np.ndarray:
        return self.coef.real.copy()

    def trim(self, tol: float = 1e-14) -> "Polynomial":
        """Drop top coefficients below ``tol`` times the largest one."""
        if self.is_zero():
            return self
        c = np.array(self.coef)
        c[np.abs(c) <= tol * self.norm()] = 0.0
        return Polynomial(c)

    # evaluation
    def __call__(self, x):
        x = np.asarray(x)
        out = np.zeros_like(x, dtype=complex)
        for c in self.coef[::-1]:
            out = out * x + c
        if out.ndim == 0:
            return complex(out)
        return out

    def taylor(self, a) -> np.ndarray:
        """Coefficients of p(a + w) in powers of w."""
        c = np.array(self.coef, dtype=complex)
        n = len(c)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                c[j] += a * c[j + 1]
        return c

    def shift(self, a) -> "Polynomial":
        return Polynomial(self.taylor(a))

    # arithmetic
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial([other])

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coef), len(other.coef))
        c = np.zeros(n, dtype=complex)
        c[: len(self.coef)] += self.coef
        c[: len(other.coef)] += other.coef
        return Polynomial(c)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-self.coef)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial(self.coef * complex(other))
        if self.is_zero() or other.is_zero():
            return Polynomial()
        return Polynomial(np.convolve(self.coef, other.coef))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial([1.0])
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, scalar):
        return Polynomial(self.coef / complex(scalar))

    def __divmod__(self, other: "Polynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        num = np.array(self.coef, dtype=complex)
        dn, dd = len(num) - 1, other.degree
        if dn < dd:
            return Polynomial(), Polynomial(num)
        q = np.zeros(dn - dd + 1, dtype=complex)
        lead = other.coef[-1]
        for k in range(dn - dd, -1, -1):
            q[k] = num[k + dd] / lead
            num[k : k + dd + 1] -= q[k] * other.coef
        return Polynomial(q), Polynomial(num[:dd])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        return len(self.coef) == len(other.coef) and bool(np.all(self.coef == other.coef))

    def __hash__(self):
        return hash(tuple(self.coef))

    def allclose(self, other, tol=1e-12) -> bool:
        d = self - other
        return d.norm() <= tol * max(1.0, self.norm(), other.norm())

    # calculus
    def derivative(self, k: int = 1) -> "Polynomial":
        c = self.coef
        for _ in range(k):
            if len(c) <= 1:
                return Polynomial()
            c = c[1:] * np.arange(1, len(c))
        return Polynomial(c)

    def antiderivative(self, constant=0.0) -> "Polynomial":
        if self.is_zero():
            return Polynomial([constant])
        c = np.concatenate([[constant], self.coef / np.arange(1, len(self.coef) + 1)])
        return Polynomial(c)

    def monic(self) -> "Polynomial":
        return Polynomial(self.coef / self.leading)

    def roots(self) -> np.ndarray:
        """Companion-matrix eigenvalues followed by one Newton polish step."""
        if self.degree < 1:
            return np.zeros(0, dtype=complex)
        # factor out exact zero roots first
        nz = np.flatnonzero(self.coef)
        k0 = nz[0]
        c = self.coef[k0:]
        n = len(c) - 1
        zeros = np.zeros(k0, dtype=complex)
        if n == 0:
            return zeros
        comp = np.zeros((n, n), dtype=complex)
        comp[1:, :-1] = np.eye(n - 1)
        comp[:, -1] = -c[:-1] / c[-1]
        r = np.linalg.eigvals(comp)
        p = Polynomial(c)
        dp = p.derivative()
        d = dp(r)
        ok = np.abs(d) > 1e-300
        r = r.astype(complex)
        r[ok] = r[ok] - p(r[ok]) / d[ok]
        return np.concatenate([zeros, r])

    def __repr__(self):
        terms = ", ".join(f"{c:.6g}" for c in self.coef)
        return f"Polynomial([{terms}])"
