from __future__ import annotations

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from natanzon.gamma import GammaPoleError, gamma_ratio_phase, log_gamma


def test_special_values():
    assert abs(log_gamma(1.0)) < 5e-15
    assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-15)
    assert abs(log_gamma(2.0)) < 5e-15


@pytest.mark.parametrize("y", [0.5, 1.0, 3.0])
def test_modulus_on_half_line(y):
    lg = log_gamma(0.5 + 1j * y)
    assert math.exp(2 * lg.real) == pytest.approx(math.pi / math.cosh(math.pi * y), rel=1e-13)


@pytest.mark.parametrize("n", [0, -1, -7])
def test_poles_raise(n):
    with pytest.raises(GammaPoleError) as info:
        log_gamma(complex(n))
    assert str(n) in str(info.value)


@settings(max_examples=300, deadline=None)
@given(x=st.floats(-50, 50), y=st.floats(-100, 100))
def test_against_mpmath(x, y):
    z = complex(x, y)
    if abs(y) < 1e-3 and abs(x - round(x)) < 1e-3 and x < 0.5:
        return
    ref = complex(mp.loggamma(mp.mpc(x, y)))
    got = complex(log_gamma(z))
    assert abs(got - ref) <= 1e-13 * max(1.0, abs(ref))


def test_array_input_matches_scalar():
    z = np.array([0.3 + 2j, -4.5 + 0.1j, 20 - 30j])
    got = log_gamma(z)
    for zi, gi in zip(z, got):
        assert abs(gi - log_gamma(complex(zi))) <= 4e-16 * abs(gi)


def test_ratio_phase():
    assert gamma_ratio_phase(0.5, 1.0) == pytest.approx(-2 * float(mp.arg(mp.gamma(1 + 1j))), rel=1e-14)
