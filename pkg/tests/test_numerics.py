import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectralgas.errors import NotAPole, StepUnderflow
from spectralgas.numerics import (
    Polynomial,
    RationalFunction,
    RngStream,
    airy_ai,
    gauss_legendre,
    integrate_ode,
    residue_at,
)

coef = st.floats(-5, 5, allow_nan=False).filter(lambda v: abs(v) > 1e-3)


# ---- Airy oracle: Maclaurin series summed in 60-digit arithmetic

def maclaurin_airy(x, terms=400):
    with mpmath.workdps(60):
        x = mpmath.mpf(x)
        c1 = mpmath.mpf(3) ** (mpmath.mpf(-2) / 3) / mpmath.gamma(mpmath.mpf(2) / 3)
        c2 = mpmath.mpf(3) ** (mpmath.mpf(-1) / 3) / mpmath.gamma(mpmath.mpf(1) / 3)
        f = g = fp = gp = mpmath.mpf(0)
        tf, tg = mpmath.mpf(1), x
        for k in range(terms):
            n = 3 * k
            f += tf
            g += tg
            fp += n * tf / x if n else 0
            gp += (n + 1) * tg / x
            tf *= x**3 / ((n + 2) * (n + 3))
            tg *= x**3 / ((n + 3) * (n + 4))
        return float(c1 * f - c2 * g), float(c1 * fp - c2 * gp)


def test_gauss_legendre_small_orders():
    r1 = gauss_legendre(1)
    assert np.allclose(r1.nodes, [0.0]) and np.allclose(r1.weights, [2.0])
    r2 = gauss_legendre(2)
    assert np.allclose(r2.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-15)
    assert np.allclose(r2.weights, [1.0, 1.0], atol=1e-15)


def test_gauss_legendre_high_monomial():
    r = gauss_legendre(40)
    assert abs(r.integrate(lambda x: x**38, -1, 1) - 2 / 39) < 1e-13


@pytest.mark.parametrize("n", [1, 3, 8, 20, 64])
def test_gauss_legendre_invariants(n):
    r = gauss_legendre(n)
    assert np.all(np.diff(r.nodes) > 0)
    assert np.all(r.weights > 0)
    assert abs(r.weights.sum() - 2) < 1e-14
    for d in range(2 * n):
        exact = 2 / (d + 1) if d % 2 == 0 else 0.0
        assert abs(r.integrate(lambda x: x**d, -1, 1) - exact) < 1e-12


def test_gauss_legendre_rejects_zero():
    with pytest.raises(ValueError):
        gauss_legendre(0)


def test_quadrature_convergence_doubling():
    f = lambda x: np.exp(np.cos(3 * x))
    exact = gauss_legendre(200).integrate(f, -1, 1)
    prev = None
    for n in (4, 8, 16):
        err = abs(gauss_legendre(n).integrate(f, -1, 1) - exact)
        if prev is not None and prev > 1e-13:
            assert err <= prev / 10 or err < 1e-13
        prev = err


def test_airy_at_zero():
    ai, aip = airy_ai(0.0)
    assert abs(ai - 0.355028053887817) < 1e-15
    assert abs(aip + 0.258819403792807) < 1e-15


@pytest.mark.parametrize("x", [-12.0, -9.7, -6.1, -4.0, -1.0, -0.3, 0.2, 1.0, 3.5, 6.3, 8.0, 10.4, 12.0])
def test_airy_against_maclaurin(x):
    ai, aip = airy_ai(x)
    ref, refp = maclaurin_airy(x)
    assert abs(ai - ref) <= 1e-12 * abs(ref)
    assert abs(aip - refp) <= 1e-12 * abs(refp)


def test_airy_matches_ode_wronskian():
    # Ai solves y'' = x y: check by finite differences of Ai'
    x = np.linspace(-12, 12, 97)
    h = 1e-4
    _, d_plus = airy_ai(x + h)
    _, d_minus = airy_ai(x - h)
    ai, _ = airy_ai(x)
    assert np.allclose((d_plus - d_minus) / (2 * h), x * ai, atol=1e-8)


def test_airy_decay_and_underflow():
    xs = np.linspace(1, 100, 400)
    vals, _ = airy_ai(xs)
    assert np.all(np.diff(vals) < 0) and np.all(vals > 0)
    v, d, flag = airy_ai(150.0, full_output=True)
    assert (v, d, flag) == (0.0, 0.0, True)


def test_residue_examples():
    assert abs(residue_at(RationalFunction([1.0], [-2.0, 1.0]), 2) - 1) < 1e-14
    assert abs(residue_at(RationalFunction([1.0], [1.0, -2.0, 1.0]), 1)) < 1e-14
    assert abs(residue_at(RationalFunction([1.0, 3.0], [-1.0, 0.0, 1.0]), 1) - 2) < 1e-14


def test_residue_not_a_pole():
    with pytest.raises(NotAPole):
        residue_at(RationalFunction([1.0], [-2.0, 1.0]), 3.0)


def test_rational_reduces_common_factor():
    f = RationalFunction(Polynomial.from_roots([1.0, 3.0]), Polynomial.from_roots([1.0, 1.0, 2.0]))
    assert f.den.degree == 2 and f.num.degree == 1
    assert abs(f.den.leading - 1) < 1e-15


@settings(max_examples=40, deadline=None)
@given(st.lists(coef, min_size=1, max_size=4), st.lists(coef, min_size=1, max_size=3))
def test_polynomial_degree_multiplicative(a, b):
    p, q = Polynomial(a), Polynomial(b)
    assert (p * q).degree == p.degree + q.degree


@settings(max_examples=40, deadline=None)
@given(st.lists(coef, min_size=1, max_size=3), st.lists(st.floats(-3, 3), min_size=1, max_size=3, unique=True))
def test_reduction_idempotent(num, roots):
    f = RationalFunction(Polynomial(num), Polynomial.from_roots(roots))
    g = f.reduced()
    assert len(g.num.coef) == len(f.num.coef) and len(g.den.coef) == len(f.den.coef)
    assert np.allclose(g.num.coef, f.num.coef, atol=1e-14)
    assert np.allclose(g.den.coef, f.den.coef, atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(coef, min_size=1, max_size=3),
    st.lists(coef, min_size=1, max_size=3),
    st.integers(1, 3),
    st.integers(1, 3),
)
def test_residue_linear(n1, n2, m1, m2):
    pole = 0.7
    den1 = Polynomial.from_roots([pole] * m1 + [-2.0])
    den2 = Polynomial.from_roots([pole] * m2 + [3.0])
    f, g = RationalFunction(Polynomial(n1), den1), RationalFunction(Polynomial(n2), den2)
    lhs = residue_at(f + g, pole) if pole_of(f + g, pole) else 0.0
    rhs = res_or_zero(f, pole) + res_or_zero(g, pole)
    assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(rhs))


def pole_of(f, p):
    return any(abs(r - p) < 1e-6 for r, _ in f.poles())


def res_or_zero(f, p):
    return residue_at(f, p) if pole_of(f, p) else 0.0


@settings(max_examples=40, deadline=None)
@given(st.lists(coef, min_size=1, max_size=3), st.lists(st.complex_numbers(max_magnitude=3), min_size=3, max_size=5))
def test_residues_sum_to_zero(num, roots):
    roots = [complex(round(r.real, 1), round(r.imag, 1)) for r in roots]
    den = Polynomial.from_roots(roots)
    f = RationalFunction(Polynomial(num[: den.degree - 1] or [1.0]), den)
    total = sum(residue_at(f, r) for r, _ in f.poles())
    assert abs(total) < 1e-9 * max(1.0, max(abs(residue_at(f, r)) for r, _ in f.poles()))


def test_ode_examples():
    tr = integrate_ode(lambda t, y: y, [1.0], (0, 1), 1e-12)
    assert abs(tr.final[0] - math.e) < 1e-10
    tr = integrate_ode(lambda t, y: [y[1], -y[0]], [0.0, 1.0], (0, math.pi), 1e-12)
    assert abs(tr.final[0]) < 1e-9
    with pytest.raises(StepUnderflow) as exc:
        integrate_ode(lambda t, y: y**2, [1.0], (0, 2), 1e-12)
    assert abs(exc.value.t - 1) < 1e-3


def test_ode_dense_output():
    tr = integrate_ode(lambda t, y: y, [1.0], (0, 2), 1e-12, t_eval=[0.5, 1.5])
    assert np.allclose(tr.y_eval[0], np.exp([0.5, 1.5]), rtol=1e-9)


def test_rng_streams_reproducible():
    a = RngStream(42, 3).generator().random(5)
    b = RngStream(42, 3).generator().random(5)
    c = RngStream(42, 4).generator().random(5)
    assert np.array_equal(a, b) and not np.array_equal(a, c)
