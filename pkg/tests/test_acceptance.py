"""Acceptance suite: one PASS/FAIL line per criterion, with the measured
quantity, its tolerance and the wall-clock time against its budget.

Run directly (``python3 tests/test_acceptance.py``) or through pytest; in
the latter case the lines are repeated in the terminal summary.
"""

from __future__ import annotations

import math
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from conftest import QUADRATIC_R, SINGLE_LEVEL, THREE_LEVELS, TWO_LEVELS  # noqa: E402
from natanzon import algebra  # noqa: E402
from natanzon.mapping import ChangeOfVariable  # noqa: E402
from natanzon.oracle import bound_energies_numeric, phase_scan  # noqa: E402
from natanzon.params import derive  # noqa: E402
from natanzon.potential import PotentialInstance  # noqa: E402
from natanzon.smatrix import (ExpansionCoefficients, bound_pole_residual, find_poles,  # noqa: E402
                              s_fixed_m)
from natanzon.spectrum import enumerate_levels, quantization_residual  # noqa: E402

FAMILIES = [SINGLE_LEVEL, TWO_LEVELS, QUADRATIC_R]
RESULTS: list[str] = []


def report(number: int, title: str, ok: bool, detail: str, elapsed: float, budget: float) -> bool:
    passed = ok and elapsed < budget
    line = (f"[{'PASS' if passed else 'FAIL'}] {number}. {title}: {detail}; "
            f"runtime {elapsed:.2f} s (< {budget:g} s)")
    RESULTS.append(line)
    print(line)
    return passed


def test_1_pole_spectrum_agreement():
    t0 = time.perf_counter()
    worst, counts_match = 0.0, True
    for params in FAMILIES + [THREE_LEVELS]:
        levels = [s.E for s in enumerate_levels(params)]
        poles = [p.E for p in find_poles(params)]
        counts_match &= len(levels) == len(poles) and len(levels) > 0
        worst = max([worst] + [abs(a - b) / abs(b) for a, b in zip(poles, levels)])
    elapsed = time.perf_counter() - t0
    assert report(1, "pole-spectrum agreement", counts_match and worst < 1e-10,
                  f"4 half-line families, max relative dE {worst:.2e} (< 1e-10)", elapsed, 5)


def test_2_residual_identity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20)
    worst = 0.0
    for _ in range(100):
        a, extra = rng.uniform(-0.5, 3), rng.uniform(0.2, 5)
        params = derive(rng.uniform(0, 60), rng.uniform(-1, 4), -1.0, a, 0.0, max(a, 0) + extra)
        kappa = rng.uniform(0.01, 4)
        if -params.a * -kappa ** 2 + params.f + 1 < 0:
            kappa = 0.01
        n = int(rng.integers(0, 6))
        worst = max(worst, abs(bound_pole_residual(params, kappa, n)
                               - quantization_residual(params, -kappa ** 2, n)))
    elapsed = time.perf_counter() - t0
    assert report(2, "pole residual = quantization residual", worst < 1e-14,
                  f"100 random points, max |difference| {worst:.1e} (< 1e-14)", elapsed, 1)


def test_3_numerov_cross_validation():
    t0 = time.perf_counter()
    worst, largest_grid, counts_match = 0.0, 0, True
    for params in FAMILIES:
        res = bound_energies_numeric(PotentialInstance(params), max_points=32768)
        algebraic = [s.E for s in enumerate_levels(params)]
        counts_match &= len(res.energies) == len(algebraic)
        worst = max([worst] + [abs(a - b) for a, b in zip(res.energies, algebraic)])
        largest_grid = max(largest_grid, res.grid[2])
    elapsed = time.perf_counter() - t0
    assert report(3, "Numerov bound energies", counts_match and worst < 1e-6 and largest_grid <= 32768,
                  f"3 families, max |dE| {worst:.1e} (< 1e-6), largest grid {largest_grid}", elapsed, 30)


def test_4_levinson():
    t0 = time.perf_counter()
    params = TWO_LEVELS
    count = len(enumerate_levels(params))
    res = phase_scan(PotentialInstance(params), np.geomspace(1e-2, 100.0, 200))
    phases = [d for _, d in res.values]
    gap = abs((phases[0] - phases[-1]) / math.pi - count)
    elapsed = time.perf_counter() - t0
    assert report(4, "Levinson phase count", count >= 2 and gap < 0.05,
                  f"{count} levels, |(d(0+) - d(k_max))/pi - {count}| = {gap:.3f} (< 0.05)", elapsed, 60)


def test_5_unitarity_and_recurrence():
    t0 = time.perf_counter()
    coeffs = ExpansionCoefficients.from_params(TWO_LEVELS)
    ks = np.linspace(1e-3, 50.0, 1000)
    unit = recur = 0.0
    m = 0.25
    for k in ks:
        s0 = s_fixed_m(coeffs, m, k).value
        s1 = s_fixed_m(coeffs, m + 1, k).value
        f = coeffs.f_of_k(k)
        unit = max(unit, abs(abs(s0) - 1))
        recur = max(recur, abs(s1 / s0 - (m + 0.5 - 1j * f) / (m + 0.5 + 1j * f)))
    elapsed = time.perf_counter() - t0
    assert report(5, "unitarity and gamma recurrence", unit < 1e-12 and recur < 1e-12,
                  f"1000 k-points at m = 1/4, max ||S|-1| {unit:.1e}, max recurrence gap {recur:.1e}"
                  " (< 1e-12)", elapsed, 1)


def test_6_expansion_coefficients():
    t0 = time.perf_counter()
    worst, smallest_perturbed = 0.0, math.inf
    for params in (TWO_LEVELS, QUADRATIC_R):
        for k in (0.5, 1.0, 2.0):
            for m in (0.0, 1.0, 1.5):
                worst = max(worst, algebra.check_euclidean_expansion(params, k, m))
                smallest_perturbed = min(smallest_perturbed,
                                         algebra.check_euclidean_expansion(params, k, m, f_scale=1.01))
    elapsed = time.perf_counter() - t0
    assert report(6, "expansion coefficients gamma = 0, f = k sqrt(c1)/2",
                  worst < 1e-10 and smallest_perturbed >= 1e-4,
                  f"max residual {worst:.1e} (< 1e-10), min residual at +1% f {smallest_perturbed:.1e} (>= 1e-4)",
                  elapsed, 1)


def test_7_closure():
    t0 = time.perf_counter()
    worst, winners = 0.0, set()
    for params in FAMILIES + [derive(5.0, 0.5, -1.0, 0.7, 0.3, 2.0)]:
        window = algebra.default_window(params)
        be = algebra.SpectralBackend(window, ChangeOfVariable(params), n=256)
        rep = algebra.check_so21_closure(algebra.so21_builders(1.7), be, algebra.test_functions(window, 5), 0.8)
        worst = max(worst, rep["[J0,J+]-J+"], rep["[J0,J-]+J-"], rep["[J+,J-]+2J0"])
        winners.add(tuple(algebra.casimir_winner(rep)))
        asym = algebra.check_so21_closure(algebra.so21_asymptotic_builders(params.c1),
                                          algebra.JetBackend(np.linspace(*window, 7)),
                                          algebra.test_functions(window, 5), 0.8)
        worst = max(worst, asym["[J0,J+]-J+"], asym["[J0,J-]+J-"], asym["[J+,J-]+2J0"])
    for k, m in ((0.5, 0.0), (1.0, 1.0), (2.0, 1.5)):
        worst = max([worst] + list(algebra.check_e2(k, m).values()))
    single = len(winners) == 1 and len(next(iter(winners))) == 1
    elapsed = time.perf_counter() - t0
    assert report(7, "so(2,1) and e(2) closure", worst < 1e-8 and single,
                  f"4 families x 5 functions on 256 points, max residual {worst:.1e} (< 1e-8), "
                  f"Casimir convention {sorted(winners)}", elapsed, 10)


def test_8_connection():
    t0 = time.perf_counter()
    params = TWO_LEVELS
    level = enumerate_levels(params)[0]
    window = algebra.default_window(params)
    be = algebra.SpectralBackend(window, ChangeOfVariable(params), n=256)
    rep = algebra.check_connection(params, be, level.p, level.m, level.E)
    elapsed = time.perf_counter() - t0
    assert report(8, "connection (Q - q) = G (E - H)", rep["residual"] < 1e-7,
                  f"level nu=0 at E={level.E:.6g}, residual {rep['residual']:.1e} (< 1e-7)", elapsed, 5)


def test_9_mapping_fidelity():
    t0 = time.perf_counter()
    tanh2 = ChangeOfVariable(derive(0, 0, -1, 0, 0, 4))
    r = np.linspace(0, 20, 4001)
    e1 = float(np.max(np.abs(tanh2.z_of_r(r) - np.tanh(r / 2) ** 2)))
    logistic = ChangeOfVariable(derive(0, 0, -1, 0, 1, 1))
    r = np.linspace(-20, 20, 4001)
    e2 = float(np.max(np.abs(logistic.z_of_r(r) - 1 / (1 + np.exp(-2 * r)))))
    ode = 0.0
    for params in (QUADRATIC_R, derive(5.0, 0.5, -1.0, 0.7, 0.3, 2.0)):
        cov = ChangeOfVariable(params)
        s = math.sqrt(params.c1)
        r = np.linspace(0.2 * s, 6 * s, 200)
        h = 1e-5
        fd = (cov.solve(r - h)[1] - cov.solve(r + h)[1]) / (2 * h)
        z, w = cov.solve(r)
        ode = max(ode, float(np.max(np.abs(fd * np.sqrt(cov._r_poly_zw(z, w)) / (2 * z * w) - 1))))
    elapsed = time.perf_counter() - t0
    assert report(9, "mapping fidelity", max(e1, e2) < 1e-10 and ode < 1e-6,
                  f"closed-form error {max(e1, e2):.1e} (< 1e-10), ODE residual {ode:.1e} (< 1e-6)", elapsed, 5)


if __name__ == "__main__":
    failures = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
