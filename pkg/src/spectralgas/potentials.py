"""Polynomial potential families: quadratic, critical quartic, singular (2m,1) family.

Potentials are stored without the 1/T prefactor; temperature is always passed
separately by consumers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from math import comb, factorial

import numpy as np

from .numerics import Polynomial


@dataclass(frozen=True)
class Potential:
    v: Polynomial
    name: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.v.degree < 2:
            raise ValueError("potential must have degree >= 2")
        lead = self.v.leading
        if self.v.degree % 2 == 0 and lead.real <= 0:
            raise ValueError("even-degree potential needs a positive leading coefficient")

    @property
    def derivative(self) -> Polynomial:
        return self.v.derivative()

    @property
    def coefficients(self) -> np.ndarray:
        return self.v.coef.real + 0.0  # folds -0.0 into 0.0

    def __call__(self, x):
        return self.v(x).real

    def to_json(self) -> str:
        return json.dumps(
            {"name": self.name, "coefficients": self.coefficients.tolist(), "params": self.params}
        )

    @classmethod
    def from_json(cls, text: str) -> "Potential":
        d = json.loads(text)
        return cls(Polynomial(d["coefficients"]), d.get("name", "custom"), dict(d.get("params", {})))


def quadratic() -> Potential:
    return Potential(Polynomial([0.0, 0.0, 0.5]), "quadratic", {})


def critical_quartic(eps: float) -> Potential:
    """V(x) = x^4/4 - (4 cos(pi eps)/3) x^3 + cos(2 pi eps) x^2 + 8 cos(pi eps) x."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError("eps must lie in [0, 1]")
    c1, c2 = math.cos(math.pi * eps), math.cos(2 * math.pi * eps)
    # exact zeros at the symmetric point keep the potential even
    if eps == 0.5:
        c1 = 0.0
    return Potential(
        Polynomial([0.0, 8 * c1, c2, -4 * c1 / 3, 0.25]), "critical-quartic", {"eps": float(eps)}
    )


def critical_temperature_quartic(eps: float) -> float:
    c1 = 0.0 if eps == 0.5 else math.cos(math.pi * eps)
    return 1.0 + 4.0 * c1 * c1


def singular_derivative(m: int, b: float, eps: float) -> Polynomial:
    """V'(x) of the (2m,1) singular family, coefficient by coefficient."""
    coef = np.zeros(2 * m + 2)
    for j in range(2 * m + 2):
        c = comb(2 * m, j - 1) * (-b * eps) ** (2 * m + 1 - j) if j >= 1 else 0.0
        for n in range(1, (2 * m + 1 - j) // 2 + 1):
            c += (
                comb(2 * m, 2 * n + j - 1)
                * (-1) ** j
                * factorial(2 * n - 2)
                * eps ** (2 * (m - n) + 1 - j)
                * b ** (2 * m + 1 - j)
                / (factorial(n) * factorial(n - 1) * 2 ** (2 * n - 1))
            )
        coef[j] = c
    return Polynomial(coef)


def singular_family(m: int, b: float, eps: float) -> Potential:
    if m < 1 or b <= 0 or not -1 < eps < 1:
        raise ValueError("need m >= 1, b > 0, |eps| < 1")
    v = singular_derivative(m, b, eps).antiderivative(0.0)
    return Potential(v, "singular", {"m": int(m), "b": float(b), "eps": float(eps)})


def singular_tc(m: int, b: float, eps: float) -> float:
    s = 0.0
    for n in range(1, m + 2):
        s += (
            eps ** (2 * m - 2 * n + 2)
            * factorial(2 * m)
            / (factorial(n) * factorial(2 * m - 2 * n + 2) * factorial(n - 1) * 2 ** (2 * n - 1))
        )
    return b ** (2 * m + 2) / 2 * s


def critical_temperature(p: Potential) -> float:
    """T_c of a named family; used to resolve symbolic temperatures like '0.5tc'."""
    if p.name == "critical-quartic":
        return critical_temperature_quartic(p.params["eps"])
    if p.name == "singular":
        return singular_tc(p.params["m"], p.params["b"], p.params["eps"])
    raise ValueError(f"no critical temperature known for potential '{p.name}'")


def by_name(name: str, **params) -> Potential:
    name = name.replace("_", "-")
    if name == "quadratic":
        return quadratic()
    if name == "critical-quartic":
        return critical_quartic(params.get("eps", 0.5))
    if name == "singular":
        return singular_family(int(params.get("m", 1)), params.get("b", 2.0), params.get("eps", 0.0))
    raise ValueError(f"unknown potential '{name}'")
