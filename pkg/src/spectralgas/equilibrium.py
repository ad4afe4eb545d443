"""Equilibrium measures of polynomial potentials with one or two cuts.

With sigma(s) = prod_k (s - e_k) over all endpoints and sqrt(sigma) ~ s^q at
infinity, the density is rho = (1/2pi) h R^(1/2) where h is the polynomial part
of V'/(T sqrt(sigma)). The endpoints are fixed by the large-s expansion
    V'(s) / (T sqrt(sigma(s))) = h(s) + 0/s + ... + 0/s^q + 2/s^(q+1) + ...
which is the contour-moment form of the endpoint constraints. For two cuts
the gap integral of h sqrt(sigma) must also vanish.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DegreeMismatch, GenusUnsupported, NoOneCutSolution, NoTwoCutSolution, Unsolved
from .numerics import Polynomial, RationalFunction, gauss_chebyshev_u, gauss_legendre
from .potentials import Potential

NEWTON_TOL = 1e-12
MAX_ITER = 200
MAX_HALVINGS = 8
CHEB_POINTS = 512
NEG_TOL = 1e-10


class Regularity(enum.Enum):
    REGULAR = "Regular"
    SINGULAR = "Singular"


@dataclass(frozen=True)
class Cut:
    a: float
    b: float

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"cut needs a < b, got [{self.a}, {self.b}]")

    @property
    def center(self):
        return 0.5 * (self.a + self.b)

    @property
    def halfwidth(self):
        return 0.5 * (self.b - self.a)


def _endpoints(cuts) -> np.ndarray:
    return np.array([e for c in cuts for e in (c.a, c.b)], dtype=float)


def _inverse_sqrt_series(endpoints, n_terms: int) -> np.ndarray:
    """Coefficients g_n with 1/sqrt(sigma(s)) = s^-q sum_n g_n s^-n."""
    k = np.arange(n_terms)
    # (1 - e w)^(-1/2) = sum binom(2n, n) (e w / 4)^n
    base = np.ones(n_terms)
    for n in range(1, n_terms):
        base[n] = base[n - 1] * (2 * n - 1) / (2 * n)
    g = np.zeros(n_terms)
    g[0] = 1.0
    for e in endpoints:
        g = np.convolve(g, base * e**k)[:n_terms]
    return g


def _expansion(vprime: np.ndarray, endpoints, n_neg: int) -> tuple[np.ndarray, np.ndarray]:
    """V'(s)/sqrt(sigma(s)) split as (polynomial part, coefficients of s^-1..s^-n_neg)."""
    q = len(endpoints) // 2
    d = len(vprime) - 1
    g = _inverse_sqrt_series(endpoints, d + n_neg + 1)
    pol = np.zeros(max(d - q + 1, 0))
    for p in range(len(pol)):
        pol[p] = sum(vprime[j] * g[j - q - p] for j in range(q + p, d + 1))
    neg = np.zeros(n_neg)
    for k in range(1, n_neg + 1):
        neg[k - 1] = sum(vprime[j] * g[j - q + k] for j in range(max(0, q - k), d + 1))
    return pol, neg


def h_from_endpoints(v: Potential, T: float, cuts) -> Polynomial:
    cuts = list(cuts)
    vp = v.derivative.coef.real / T
    if len(vp) - 1 < len(cuts):
        raise DegreeMismatch("degree(V') must be at least the number of cuts")
    pol, _ = _expansion(vp, _endpoints(cuts), 1)
    return Polynomial(pol)


def _gap_integral(h: Polynomial, endpoints, n: int = 64) -> float:
    """int_{b1}^{a2} h sqrt(sigma) dx, sqrt(sigma) > 0 on the gap."""
    a1, b1, a2, b2 = endpoints
    half = 0.5 * (a2 - b1)
    rule = gauss_legendre(n)
    theta = 0.5 * np.pi * (rule.nodes + 1.0)
    x = b1 + half * (1.0 - np.cos(theta))
    outer = np.sqrt(np.abs((x - a1) * (b2 - x)))
    f = h(x).real * outer * half**2 * np.sin(theta) ** 2
    return float(0.5 * np.pi * np.dot(rule.weights, f))


def _residuals(v: Potential, T: float, endpoints) -> np.ndarray:
    q = len(endpoints) // 2
    vp = v.derivative.coef.real / T
    pol, neg = _expansion(vp, endpoints, q + 1)
    res = list(neg[:q]) + [neg[q] - 2.0]
    if q == 2:
        res.append(_gap_integral(Polynomial(pol), endpoints))
    return np.array(res)


def _newton(v, T, x0) -> np.ndarray | None:
    x = np.array(x0, dtype=float)
    f = _residuals(v, T, x)
    for _ in range(MAX_ITER):
        norm = np.linalg.norm(f)
        if not np.isfinite(norm):
            return None
        if norm < NEWTON_TOL:
            return x
        jac = np.empty((len(x), len(x)))
        for k in range(len(x)):
            dx = 1e-7 * max(1.0, abs(x[k]))
            xp, xm = x.copy(), x.copy()
            xp[k] += dx
            xm[k] -= dx
            jac[:, k] = (_residuals(v, T, xp) - _residuals(v, T, xm)) / (2 * dx)
        try:
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            return None
        t = 1.0
        for _ in range(MAX_HALVINGS + 1):
            trial = x + t * step
            ft = _residuals(v, T, trial)
            if np.all(np.diff(trial) > 0) and np.linalg.norm(ft) < norm:
                break
            t *= 0.5
        else:
            return None
        x, f = trial, ft
    return x if np.linalg.norm(f) < NEWTON_TOL else None


def _minima(v: Potential) -> list[float]:
    """Real local minima of V, deepest first."""
    d1, d2 = v.derivative, v.derivative.derivative()
    crit = [r.real for r in d1.roots() if abs(r.imag) < 1e-8 * max(1.0, abs(r))]
    mins = [r for r in crit if d2(r).real > 0]
    return sorted(mins, key=lambda r: v(r))


def _curvature(v: Potential, x: float) -> float:
    return max(abs(v.derivative.derivative()(x).real), 1e-3)


@dataclass(frozen=True)
class EquilibriumMeasure:
    cuts: tuple
    h: Polynomial
    temperature: float
    potential: Potential | None = field(default=None, compare=False)

    @property
    def q(self) -> int:
        return len(self.cuts)

    @property
    def support(self) -> tuple[float, float]:
        return self.cuts[0].a, self.cuts[-1].b

    def _outer(self, i: int, x):
        """Sign-carrying product of the factors of R that belong to other cuts."""
        out = np.ones_like(np.asarray(x, dtype=float))
        for j, c in enumerate(self.cuts):
            if j != i:
                out = out * (x - c.a) * (x - c.b)
        return (-1.0) ** (self.q - 1 - i) * np.sign(out) * np.sqrt(np.abs(out))

    def density(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for i, c in enumerate(self.cuts):
            inside = (x >= c.a) & (x <= c.b)
            if np.any(inside):
                xi = x[inside]
                local = np.sqrt(np.clip((xi - c.a) * (c.b - xi), 0.0, None))
                out[inside] = self.h(xi).real * np.abs(self._outer(i, xi)) * local * self._sign(i) / (2 * np.pi)
        return out if out.ndim else float(out)

    def _sign(self, i: int) -> float:
        # R^(1/2) on cut i carries (-1)^(q-i) (1-based i)
        return (-1.0) ** (self.q - 1 - i)

    def _cut_mass(self, i: int, n: int = 200) -> float:
        c = self.cuts[i]
        rule = gauss_chebyshev_u(n)
        x = c.center + c.halfwidth * rule.nodes
        f = self.h(x).real * np.abs(self._outer(i, x)) * self._sign(i) / (2 * np.pi)
        return float(c.halfwidth**2 * np.dot(rule.weights, f))

    def filling_fractions(self) -> list[float]:
        return [self._cut_mass(i) for i in range(self.q)]

    def mass(self) -> float:
        return float(sum(self.filling_fractions()))

    def cdf(self, x, order: int = 64):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros_like(x)
        rule = gauss_legendre(order)
        fr = self.filling_fractions()
        for i, c in enumerate(self.cuts):
            out += np.where(x >= c.b, fr[i], 0.0)
            inside = (x > c.a) & (x < c.b)
            for k in np.flatnonzero(inside):
                th_max = np.arccos(np.clip((c.center - x[k]) / c.halfwidth, -1, 1))
                th = 0.5 * th_max * (rule.nodes + 1.0)
                xs = c.center - c.halfwidth * np.cos(th)
                f = self.h(xs).real * np.abs(self._outer(i, xs)) * self._sign(i) / (2 * np.pi)
                out[k] += 0.5 * th_max * c.halfwidth**2 * np.dot(rule.weights, f * np.sin(th) ** 2)
        return out

    def min_density_factor(self) -> float:
        """Smallest signed value of h * sign on Chebyshev points of every cut."""
        k = np.arange(CHEB_POINTS)
        t = np.cos((2 * k + 1) * np.pi / (2 * CHEB_POINTS))
        worst = np.inf
        for i, c in enumerate(self.cuts):
            x = c.center + c.halfwidth * t
            worst = min(worst, float(np.min(self.h(x).real * self._sign(i))))
        return worst

    def to_json(self) -> str:
        return json.dumps(
            {
                "cuts": [{"a": c.a, "b": c.b} for c in self.cuts],
                "h": self.h.coef.real.tolist(),
                "T": self.temperature,
            }
        )

    @classmethod
    def from_json(cls, text: str, potential=None) -> "EquilibriumMeasure":
        d = json.loads(text)
        cuts = tuple(Cut(c["a"], c["b"]) for c in d["cuts"])
        return cls(cuts, Polynomial(d["h"]), d["T"], potential)


def _measure(v, T, endpoints) -> EquilibriumMeasure:
    cuts = tuple(Cut(endpoints[2 * i], endpoints[2 * i + 1]) for i in range(len(endpoints) // 2))
    return EquilibriumMeasure(cuts, h_from_endpoints(v, T, cuts), T, v)


def _acceptable(m: EquilibriumMeasure) -> bool:
    scale = max(1.0, m.h.norm())
    return m.min_density_factor() >= -NEG_TOL * scale and abs(m.mass() - 1.0) < 1e-6


def _one_cut_starts(v, T):
    mins = _minima(v) or [0.0]
    centres = [mins[0], 0.0] + ([0.5 * (mins[0] + mins[1])] if len(mins) > 1 else [])
    for c in centres:
        w0 = 2.0 * np.sqrt(T / _curvature(v, mins[0]))
        for s in (1.0, 0.5, 2.0, 4.0, 0.25):
            yield [c - s * w0, c + s * w0]


def solve_one_cut(v: Potential, T: float) -> EquilibriumMeasure:
    if T <= 0:
        raise ValueError("T must be positive")
    for start in _one_cut_starts(v, T):
        sol = _newton(v, T, start)
        if sol is None:
            continue
        m = _measure(v, T, sol)
        if _acceptable(m):
            return m
    raise NoOneCutSolution(f"no non-negative one-cut measure for T={T}")


def _two_cut_starts(v, T):
    mins = sorted(_minima(v)[:2])
    if len(mins) < 2:
        return
    lo, hi = mins
    for s in (1.0, 0.5, 0.25, 2.0):
        w = s * 2.0 * np.sqrt(T / (2.0 * max(_curvature(v, lo), _curvature(v, hi))))
        w = min(w, 0.45 * (hi - lo))
        yield [lo - w, lo + w, hi - w, hi + w]


def solve_two_cut(v: Potential, T: float) -> EquilibriumMeasure:
    if T <= 0:
        raise ValueError("T must be positive")
    for start in _two_cut_starts(v, T):
        sol = _newton(v, T, start)
        if sol is None:
            continue
        m = _measure(v, T, sol)
        if _acceptable(m):
            return m
    raise NoTwoCutSolution(f"no non-negative two-cut measure for T={T}")


def solve_auto(v: Potential, T: float) -> EquilibriumMeasure:
    try:
        return solve_one_cut(v, T)
    except NoOneCutSolution:
        pass
    try:
        return solve_two_cut(v, T)
    except NoTwoCutSolution as exc:
        raise Unsolved(f"neither one nor two cuts solve V at T={T}") from exc


def classify_regularity(m: EquilibriumMeasure, tol: float = 1e-8) -> Regularity:
    if m.h.degree < 1:
        return Regularity.REGULAR
    scale = max(np.max(np.abs(m.h(np.linspace(*m.support, 65)))), 1e-300)
    for r in m.h.roots():
        x = r.real
        on_support = any(c.a - tol <= x <= c.b + tol for c in m.cuts)
        if on_support and abs(m.h(x)) <= tol * scale:
            return Regularity.SINGULAR
    return Regularity.REGULAR


def density_eval(m: EquilibriumMeasure, x):
    return m.density(x)


def write_density_csv(path, m: EquilibriumMeasure, xs) -> None:
    rho = np.atleast_1d(m.density(np.asarray(xs, dtype=float)))
    with open(path, "w", newline="\n") as fh:
        fh.write("x,rho\n")
        for a, b in zip(xs, rho):
            fh.write(f"{a:.17g},{b:.17g}\n")


@dataclass(frozen=True)
class SpectralCurveG0:
    """x(z) = c + (u/2)(z + 1/z) and a rational y(z) with y(1/z) = -y(z)."""

    center: complex
    halfwidth: complex
    y: RationalFunction
    temperature: float = 1.0

    def x(self, z):
        z = np.asarray(z, dtype=complex)
        return self.center + 0.5 * self.halfwidth * (z + 1.0 / z)

    def dx(self, z):
        z = np.asarray(z, dtype=complex)
        return 0.5 * self.halfwidth * (1.0 - 1.0 / z**2)

    def x_rational(self) -> RationalFunction:
        u = self.halfwidth
        return RationalFunction(Polynomial([0.5 * u, self.center, 0.5 * u]), Polynomial([0.0, 1.0]))

    def dx_rational(self) -> RationalFunction:
        u = self.halfwidth
        return RationalFunction(Polynomial([-0.5 * u, 0.0, 0.5 * u]), Polynomial([0.0, 0.0, 1.0]))

    def z_of_x(self, x):
        """Preimage on the physical sheet |z| > 1."""
        t = (np.asarray(x, dtype=complex) - self.center) / self.halfwidth
        s = np.sqrt(t - 1.0) * np.sqrt(t + 1.0)
        z = t + s
        return np.where(np.abs(z) >= 1.0, z, t - s)

    def shifted(self, c: float) -> "SpectralCurveG0":
        return SpectralCurveG0(self.center + c, self.halfwidth, self.y, self.temperature)

    def scaled(self, lam: float) -> "SpectralCurveG0":
        return SpectralCurveG0(self.center * lam, self.halfwidth * lam, self.y * (1.0 / lam), self.temperature)


def compose(p: Polynomial, r: RationalFunction) -> RationalFunction:
    out = RationalFunction.constant(0.0)
    for c in p.coef[::-1]:
        out = out * r + c
    return out


def build_spectral_curve(m: EquilibriumMeasure) -> SpectralCurveG0:
    if m.q != 1:
        raise GenusUnsupported("only one-cut measures give a genus-0 curve")
    c, u = m.cuts[0].center, m.cuts[0].halfwidth
    xr = RationalFunction(Polynomial([0.5 * u, c, 0.5 * u]), Polynomial([0.0, 1.0]))
    sq = RationalFunction(Polynomial([-0.5 * u, 0.0, 0.5 * u]), Polynomial([0.0, 1.0]))
    y = compose(m.h, xr) * sq * (-0.5)
    return SpectralCurveG0(c, u, y, m.temperature)
