from __future__ import annotations

import math

import mpmath as mp
import numpy as np
import pytest

from natanzon.mapping import ChangeOfVariable
from natanzon.params import DomainError, derive

from conftest import FULL_LINE, QUADRATIC_R

TANH2 = derive(0, 0, -1, 0, 0, 4)
LOGISTIC = derive(0, 0, -1, 0, 1, 1)


def test_dr_dz_values():
    assert ChangeOfVariable(TANH2).dr_dz(0.25) == pytest.approx(8 / 3, rel=1e-15)
    assert ChangeOfVariable(LOGISTIC).dr_dz(0.5) == pytest.approx(2.0, rel=1e-15)
    with pytest.raises(DomainError):
        ChangeOfVariable(TANH2).dr_dz(1.0)


def test_tanh2_closed_form():
    cov = ChangeOfVariable(TANH2)
    r = np.linspace(0, 20, 2001)
    assert np.max(np.abs(cov.z_of_r(r) - np.tanh(r / 2) ** 2)) < 1e-10
    assert cov.r_of_z(math.tanh(1.0) ** 2) == pytest.approx(2.0, abs=1e-12)
    assert cov.r_of_z(0.0) == 0.0
    z = np.linspace(1e-6, 1 - 1e-6, 301)
    assert np.max(np.abs(cov.r_of_z(z) - 2 * np.arctanh(np.sqrt(z)))) < 1e-10


def test_logistic_closed_form():
    cov = ChangeOfVariable(LOGISTIC)
    r = np.linspace(-20, 20, 2001)
    assert np.max(np.abs(cov.z_of_r(r) - 1 / (1 + np.exp(-2 * r)))) < 1e-10
    assert abs(cov.r_of_z(0.5)) < 1e-15
    with pytest.raises(DomainError):
        cov.r_of_z(0.0)


@pytest.mark.parametrize("params", [QUADRATIC_R, FULL_LINE, derive(1, 0, -1, -0.5, 0.2, 1.3)])
def test_r_of_z_against_mpmath_quadrature(params):
    cov = ChangeOfVariable(params)
    mp.mp.dps = 30

    def drdz(t):
        R = params.a * t * t + params.tau * t + params.c0
        return mp.sqrt(R) / (2 * t * (1 - t))

    z_ref = mp.mpf("0.5") if params.c0 > 0 else mp.mpf(0)
    r_ref = cov.r_of_z(float(z_ref)) if params.c0 > 0 else 0.0
    for z in (0.05, 0.37, 0.8, 0.99):
        exact = r_ref + mp.quad(drdz, [z_ref, z])
        assert cov.r_of_z(z) == pytest.approx(float(exact), abs=1e-11)


@pytest.mark.parametrize("params", [TANH2, LOGISTIC, QUADRATIC_R, FULL_LINE])
def test_round_trip_and_monotone(params):
    cov = ChangeOfVariable(params)
    z = np.concatenate([np.geomspace(1e-6, 0.5, 200), 1 - np.geomspace(1e-6, 0.5, 200)])
    assert np.max(np.abs(cov.z_of_r(cov.r_of_z(z)) - z)) < 1e-12
    assert cov.z_of_r(cov.r_of_z(0.37)) == pytest.approx(0.37, abs=1e-12)
    lo = 0.0 if params.c0 == 0 else -10.0
    r = np.linspace(lo, 15 * math.sqrt(params.c1), 3000)
    zs = cov.z_of_r(r)
    assert np.all(np.diff(zs) >= 0)
    assert np.all((zs >= 0) & (zs <= 1))


@pytest.mark.parametrize("params", [QUADRATIC_R, FULL_LINE])
def test_ode_residual_by_centred_differences(params):
    cov = ChangeOfVariable(params)
    s = math.sqrt(params.c1)
    r = np.linspace(0.2 * s, 6 * s, 200)
    h = 1e-5
    # difference w = 1 - z so the tail does not lose digits to cancellation
    fd = (cov.solve(r - h)[1] - cov.solve(r + h)[1]) / (2 * h)
    z, w = cov.solve(r)
    rhs = 2 * z * w / np.sqrt(params.a * z * z + params.tau * z + params.c0)
    assert np.max(np.abs(fd / rhs - 1)) < 1e-6


@pytest.mark.parametrize("params", [TANH2, QUADRATIC_R, FULL_LINE])
def test_exponential_tail_slope(params):
    cov = ChangeOfVariable(params)
    s = math.sqrt(params.c1)
    r = np.linspace(8 * s, 16 * s, 50)
    _, w = cov.solve(r)
    slope = np.polyfit(r, np.log(w), 1)[0]
    assert slope == pytest.approx(-2 / s, rel=1e-4)


def test_chain_rule_derivatives_match_mpmath():
    p = QUADRATIC_R
    cov = ChangeOfVariable(p)
    mp.mp.dps = 40
    z, w, z1, z2, z3 = cov.z_derivatives(1.3)

    def F(y):
        return 2 * y * (1 - y) / mp.sqrt(p.a * y * y + p.tau * y + p.c0)

    zm = mp.mpf(z)
    F0, F1, F2 = (mp.diff(F, zm, n) for n in (0, 1, 2))
    assert z1 == pytest.approx(float(F0), rel=1e-14)
    assert z2 == pytest.approx(float(F1 * F0), rel=1e-13)
    assert z3 == pytest.approx(float((F2 * F0 + F1 * F1) * F0), rel=1e-12)
