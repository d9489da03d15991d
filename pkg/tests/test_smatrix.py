from __future__ import annotations

import math
import warnings

import mpmath as mp
import numpy as np
import pytest

from natanzon.params import DomainError, derive
from natanzon.smatrix import (ExpansionCoefficients, PoleProximityWarning, bound_pole_residual,
                              find_poles, phase_shift_grid, physical_weight, s_fixed_m)
from natanzon.spectrum import enumerate_levels, quantization_residual

from conftest import HALF_LINE_FAMILIES, SINGLE_LEVEL

C4 = ExpansionCoefficients.from_params(derive(1, 0, -1, 0, 0, 4))


def test_coefficients():
    c = ExpansionCoefficients.from_params(derive(1, 0, -1, 0, 0, 3))
    assert (c.gamma_plus, c.gamma_minus) == (0.0, 0.0)
    assert c.f_of_k(2.0) == pytest.approx(math.sqrt(3.0))


def test_reference_point():
    pt = s_fixed_m(C4, 0.5, 1.0)
    ref = mp.gamma(1 - 1j) / mp.gamma(1 + 1j)
    assert pt.value == pytest.approx(complex(ref), abs=1e-14)
    assert pt.phase == pytest.approx(-2 * float(mp.arg(mp.gamma(1 + 1j))), abs=1e-14)


@pytest.mark.parametrize("m", [-2.3, 0.0, 0.5, 1.7, 12.0])
def test_unitarity_and_small_k(m):
    for k in (1e-8, 0.1, 1.0, 10.0, 200.0):
        assert abs(abs(s_fixed_m(C4, m, k).value) - 1) < 1e-12
    assert abs(s_fixed_m(C4, m, 1e-10).value - 1) < 1e-8


def test_recurrence_and_conjugation():
    for k in np.linspace(0.01, 20, 50):
        f = C4.f_of_k(k)
        for m in (0.0, 0.8, 3.5):
            r = s_fixed_m(C4, m + 1, k).value / s_fixed_m(C4, m, k).value
            assert abs(r - (m + 0.5 - 1j * f) / (m + 0.5 + 1j * f)) < 1e-12
            # S at -k through the same formula
            conj = complex(mp.gamma(m + 0.5 + 1j * f) / mp.gamma(m + 0.5 - 1j * f))
            assert abs(conj - s_fixed_m(C4, m, k).value.conjugate()) < 1e-12


def test_stirling_at_large_k():
    m, k = 0.7, 50.0
    f = C4.f_of_k(k)
    # log Gamma(z) ~ (z - 1/2) log z - z + log(2 pi)/2 + 1/(12 z) - 1/(360 z^3)
    def stirling(z):
        return (z - 0.5) * np.log(z) - z + 0.5 * math.log(2 * math.pi) + 1 / (12 * z) - 1 / (360 * z ** 3) \
            + 1 / (1260 * z ** 5)
    zm, zp = m + 0.5 - 1j * f, m + 0.5 + 1j * f
    expected = (stirling(zm) - stirling(zp)).imag
    pts = phase_shift_grid(derive(1, 0, -1, 0, 0, 4), np.linspace(0.1, k, 400), m)
    assert pts[-1].phase == pytest.approx(expected, abs=1e-9)
    assert all(abs(b.phase - a.phase) < math.pi / 2 for a, b in zip(pts, pts[1:]))


def test_physical_weight():
    assert physical_weight(derive(8, 3, -1, 0, 0, 1), 3.0) == pytest.approx(0.5 * (3 - 2))
    assert physical_weight(derive(3, 0, -1, 1, 0, 2), 1.0) == pytest.approx(0.5 * (math.sqrt(3) - 1))
    m = physical_weight(derive(0, 0, -1, 1, 0, 2), 2.0)
    assert isinstance(m, complex)
    pts = phase_shift_grid(derive(0, 0, -1, 1, 0, 2), [0.5, 2.0], "physical")
    assert not pts[0].m_is_complex and pts[1].m_is_complex


def test_pole_residual_identity():
    rng = np.random.default_rng(3)
    for _ in range(100):
        a, c1 = rng.uniform(0, 2), rng.uniform(0.5, 4)
        p = derive(rng.uniform(0, 40), rng.uniform(-1, 3), -1, a, 0, a + c1)
        kappa, n = rng.uniform(0.01, 5), int(rng.integers(0, 5))
        assert abs(bound_pole_residual(p, kappa, n) - quantization_residual(p, -kappa ** 2, n)) < 1e-14


def test_pole_residual_constructed_and_sign():
    assert bound_pole_residual(SINGLE_LEVEL, 1.0, 0) == 0.0
    r = bound_pole_residual(SINGLE_LEVEL, 1.1, 0)
    assert r < 0 and r == pytest.approx(quantization_residual(SINGLE_LEVEL, -1.21, 0))
    with pytest.raises(DomainError):
        bound_pole_residual(derive(-3, 0, -1, 1, 0, 2), 0.1, 0)


@pytest.mark.parametrize("params", HALF_LINE_FAMILIES)
def test_poles_are_levels(params):
    poles = find_poles(params)
    levels = enumerate_levels(params)
    assert [p.n for p in poles] == [s.nu for s in levels]
    for pole, s in zip(poles, levels):
        assert abs(pole.E - s.E) <= 1e-10 * abs(s.E)
        assert pole.E == -pole.kappa ** 2


def test_no_pole_beyond_last_level():
    poles = find_poles(SINGLE_LEVEL, n_max=5)
    assert len(poles) == 1
    kappa = np.linspace(1e-4, 30, 20000)
    for n in range(1, 5):
        r = [bound_pole_residual(SINGLE_LEVEL, k, n) for k in kappa]
        assert max(r) < 0


def test_pole_proximity_warning():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        s_fixed_m(C4, -0.5, 1e-9)
    assert any(issubclass(w.category, PoleProximityWarning) for w in caught)


def test_delta_factor_and_bad_grid():
    pt = s_fixed_m(C4, 0.5, 1.0, delta_factor=lambda k: np.exp(0.3j))
    base = s_fixed_m(C4, 0.5, 1.0)
    assert pt.phase == pytest.approx(base.phase + 0.3)
    with pytest.raises(DomainError):
        phase_shift_grid(SINGLE_LEVEL, [1.0, 0.5])
