"""Acceptance suite: one test per criterion, each records a PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) or through pytest; the
verdicts are printed in the terminal summary either way.
"""

import filecmp
import math
import time

import numpy as np
import pytest
from scipy import integrate

from spectralgas import cli
from spectralgas.equilibrium import solve_auto
from spectralgas.kernels import (
    GapProblem,
    KernelKind,
    fredholm_det,
    gaudin_cdf,
    gaudin_density,
    painleve_v_sigma,
    tw_cdf,
)
from spectralgas.potentials import (
    critical_quartic,
    critical_temperature_quartic,
    quadratic,
    singular_family,
    singular_tc,
)
from spectralgas.recursion import (
    CorrelatorRequest,
    RescaledCurveSpec,
    correlator,
    correlator_rational,
    f_g,
    gaussian_curve,
    map_to_x,
    rescaled_curve,
    z_of_x,
)
from spectralgas.sampler import GasConfig, sample_ensemble
from spectralgas.stats import edge_rescale, estimate_support, histogram, ks_distance, pooled_spacings

TC = critical_temperature_quartic(0.5)
QUARTIC = critical_quartic(0.5)


def _gas(v, T, n, samples, seed, burnin=200, thin=10):
    return sample_ensemble(GasConfig(n, T, 1.0, v, 0.1, seed), samples, burnin, thin)


def test_c01_semicircle(record):
    t0 = time.perf_counter()
    res = _gas(quadratic(), 1.0, 200, 100, seed=101)
    wall = time.perf_counter() - t0
    ks = ks_distance(res.pooled, solve_auto(quadratic(), 1.0).cdf)
    ok = record(1, ks < 0.03 and wall < 60, f"KS={ks:.4f} (<0.03), wall={wall:.1f}s (<60)")
    assert ok


def test_c02_critical_histogram(record):
    res = _gas(QUARTIC, TC, 200, 100, seed=102)
    assert res.pooled.size >= 20_000
    h = histogram(res.pooled, 40, (-2.2, 2.2))
    m = solve_auto(QUARTIC, TC)
    # exact bin averages of rho_c = (1/2pi) x^2 sqrt(4 - x^2) from the CDF
    F = m.cdf(h.edges)
    expect = np.diff(F) / h.widths
    dev = float(np.max(np.abs(h.normalized_density - expect)))
    # the closed form itself, independently of the solver
    closed = [integrate.quad(lambda x: x * x * math.sqrt(max(4 - x * x, 0)) / (2 * math.pi), a, b)[0] / (b - a)
              for a, b in zip(h.edges[:-1], h.edges[1:])]
    assert np.allclose(expect, closed, atol=1e-8)
    ok = record(2, dev < 0.05, f"max binned deviation={dev:.4f} (<0.05), {res.pooled.size} eigenvalues")
    assert ok


def test_c03_phase_structure(record):
    worst, qs = 0.0, []
    for factor, seed in ((2.0, 103), (0.5, 104)):
        m = solve_auto(QUARTIC, factor * TC)
        qs.append(m.q)
        res = _gas(QUARTIC, factor * TC, 200, 100, seed=seed)
        runs = estimate_support(res.pooled, bins=400, range=(-3, 3))
        if len(runs) != m.q:
            worst = math.inf
            continue
        ends = np.array(runs).ravel()
        solver = np.array([(c.a, c.b) for c in m.cuts]).ravel()
        worst = max(worst, float(np.max(np.abs(ends - solver))))
    ok = record(3, qs == [1, 2] and worst < 0.1, f"q={qs} (expect [1, 2]), endpoint mismatch={worst:.3f} (<0.1)")
    assert ok


def test_c04_normalization(record):
    masses = []
    for v, T in [(quadratic(), 1.0), (quadratic(), 3.0), (QUARTIC, TC), (QUARTIC, 2 * TC), (QUARTIC, 0.5 * TC),
                 (critical_quartic(0.3), 1.0)]:
        masses.append(solve_auto(v, T).mass())
    tc_err = 0.0
    for m in (1, 2, 3):
        b, eps = 2.0, 0.25
        dens = lambda x: (x - b * eps) ** (2 * m) * math.sqrt(b * b - x * x) / (2 * math.pi)
        quad = integrate.quad(dens, -b, b, epsabs=1e-14, epsrel=1e-13)[0]
        tc_err = max(tc_err, abs(quad - singular_tc(m, b, eps)))
        masses.append(solve_auto(singular_family(m, b, eps), singular_tc(m, b, eps)).mass())
    mass_err = max(abs(x - 1) for x in masses)
    ok = record(4, mass_err < 1e-8 and tc_err < 1e-8, f"max |mass-1|={mass_err:.1e} (<1e-8), T_c quadrature err={tc_err:.1e} (<1e-8)")
    assert ok


def test_c05_fredholm_convergence(record):
    sine = fredholm_det(GapProblem(KernelKind.SINE, 0.0, 1.0, 1.0, 40)).err_estimate
    airy = fredholm_det(GapProblem(KernelKind.AIRY, 0.0, math.inf, 1.0, 40)).err_estimate
    ok = record(5, sine < 1e-10 and airy < 1e-9, f"sine 40/80 diff={sine:.1e} (<1e-10), Airy diff={airy:.1e} (<1e-9)")
    assert ok


def test_c06_painleve_v(record):
    worst = 0.0
    for s in np.linspace(0.1, 2.0, 39):
        ref = math.log(fredholm_det(GapProblem(KernelKind.SINE, 0.0, s)).value)
        worst = max(worst, abs(painleve_v_sigma(s) - ref))
    ok = record(6, worst < 1e-6, f"sup |ln det discrepancy|={worst:.1e} (<1e-6)")
    assert ok


def test_c07_tracy_widom_routes(record):
    worst = max(abs(tw_cdf(s) - tw_cdf(s, route="painleve")) for s in np.linspace(-5, 2, 71))
    ok = record(7, worst < 1e-5, f"sup |F_fredholm - F_painleve|={worst:.1e} (<1e-5)")
    assert ok


def _gaudin_cdf_table():
    grid = np.linspace(0.0, 5.0, 501)
    return grid, np.array([gaudin_cdf(s) for s in grid])


def test_c08_gaudin(record):
    p = np.vectorize(gaudin_density)
    mass = integrate.quad(p, 0, 6, limit=200)[0]
    mean = integrate.quad(lambda s: s * p(s), 0, 6, limit=200)[0]
    res = _gas(quadratic(), 1.0, 200, 200, seed=108)
    sp = pooled_spacings(res.samples, solve_auto(quadratic(), 1.0).density)
    grid, table = _gaudin_cdf_table()
    ks = ks_distance(sp.values, lambda x: np.interp(x, grid, table, right=1.0))
    ok = record(8, abs(mass - 1) < 1e-4 and abs(mean - 1) < 1e-3 and ks < 0.08,
                f"int p - 1={mass - 1:.1e}, int s p - 1={mean - 1:.1e}, KS={ks:.4f} (<0.08, {sp.values.size} spacings)")
    assert ok


def test_c09_largest_eigenvalue(record):
    n = 100
    res = _gas(quadratic(), 1.0, n, 1000, seed=109)
    scaled = edge_rescale(res.samples.max(axis=1), n)
    grid = np.linspace(-8, 6, 281)
    table = np.array([tw_cdf(s) for s in grid])
    ks = ks_distance(scaled, lambda x: np.interp(x, grid, table, left=0.0, right=1.0))
    ok = record(9, ks < 0.12, f"KS={ks:.4f} (<0.12)")
    assert ok


def test_c10_recursion_exactness(record):
    g = gaussian_curve()
    rf = correlator_rational(g, 2, 0, (0.3 + 0.7j,))
    exact = rf.num.degree == 0 and abs(rf.num.coef[0] - 1) == 0 and np.allclose(rf.den.coef, [(0.3 + 0.7j) ** 2, -2 * (0.3 + 0.7j), 1], rtol=0, atol=1e-15)
    rng = np.random.default_rng(110)
    sym = 0.0
    for _ in range(20):
        pts = 1.5 * np.exp(rng.uniform(0, 1, 3) + 2j * np.pi * rng.uniform(size=3))
        vals = [correlator(CorrelatorRequest(g, 3, 0, (b, c)), a) for a, b, c in
                [(pts[0], pts[1], pts[2]), (pts[0], pts[2], pts[1]), (pts[1], pts[0], pts[2]),
                 (pts[1], pts[2], pts[0]), (pts[2], pts[0], pts[1]), (pts[2], pts[1], pts[0])]]
        sym = max(sym, max(abs(v - vals[0]) for v in vals) / abs(vals[0]))
    w20 = 0.0
    spec = RescaledCurveSpec.build(1, 2.0, 0.0)
    curve, gam = rescaled_curve(spec), spec.gamma
    for _ in range(20):
        x1, x2 = 2.0 * (rng.normal(size=2) + 1j * rng.normal(size=2))
        got = map_to_x(curve, 2, 0, [x1, x2])
        z1, z2 = z_of_x(curve, x1), z_of_x(curve, x2)
        branch = (z1 + 1) * (z2 - 1) / ((z1 - 1) * (z2 + 1))
        r = np.sqrt(complex((gam + x1) * (gam - x2) / ((gam - x1) * (gam + x2))))
        r = -r if abs(r + branch) < abs(r - branch) else r
        expect = (-2 + r + 1 / r) / (4 * (x1 - x2) ** 2)
        w20 = max(w20, abs(got - expect) / abs(expect))
    ok = record(10, exact and sym < 1e-12 and w20 < 1e-10,
                f"W2 exact={exact}, W3 symmetry={sym:.1e} (<1e-12), W20xi rel err={w20:.1e} (<1e-10)")
    assert ok


def test_c11_genus_one_oracle(record):
    n_theta = 256
    xs = 4.0 * np.exp(2j * np.pi * np.arange(n_theta) / n_theta)
    w = np.array([map_to_x(gaussian_curve(), 1, 1, [x]) for x in xs])
    c5 = complex(np.mean(w * xs**5))
    # genus-1 gluings of one 4-valent vertex: of the 3 pairings only (1 3)(2 4) has one face
    ok = record(11, abs(c5 - 1) < 1e-9, f"[x^-5] W_1^(1)={c5.real:.12f} (expect 1, tol 1e-9)")
    assert ok


def test_c12_symplectic_invariance(record):
    g = gaussian_curve()
    f1 = f_g(g, 1)
    d_shift = abs(f_g(g.shifted(0.7), 1) - f1)
    d_scale = abs(f_g(g.scaled(2.0), 1) - f1)
    ok = record(12, d_shift < 1e-10 and d_scale < 1e-10, f"F1 shift diff={d_shift:.1e}, scale diff={d_scale:.1e} (<1e-10)")
    assert ok


def test_c13_determinism(record, tmp_path):
    commands = [
        ["sample", "--potential", "critical-quartic", "--T", "tc", "--N", "50", "--sweeps", "50", "--seed", "7", "--samples", "4"],
        ["sample", "--N", "30", "--samples", "3", "--chains", "3", "--seed", "5"],
        ["compare", "--N", "40", "--samples", "5", "--seed", "2"],
        ["density", "--potential", "critical-quartic", "--T", "0.5tc"],
        ["law", "--law", "tw", "--route", "both", "--lo", "-3", "--hi", "1", "--points", "5"],
        ["law", "--law", "gaudin", "--points", "9"],
        ["recursion", "--curve", "gaussian", "--n", "3", "--g", "1"],
    ]
    same = True
    for k, cmd in enumerate(commands):
        dirs = [tmp_path / f"{k}_{rep}" for rep in (0, 1)]
        for d in dirs:
            assert cli.main([*cmd, "--out", str(d)]) == 0
        names = sorted(p.name for p in dirs[0].iterdir() if p.name != "manifest.json")
        match, mismatch, errors = filecmp.cmpfiles(dirs[0], dirs[1], names, shallow=False)
        same &= not mismatch and not errors
    ok = record(13, same, f"{len(commands)} commands re-run, outputs byte-identical={same} (manifest wall_time excluded)")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
