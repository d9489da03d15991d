"""Principal-branch complex log-gamma.

The argument is shifted up by the recurrence log G(z) = log G(z + n) -
sum log(z + k) until |z + n| is large and Re(z + n) is positive, then the
Stirling series is summed there.  With principal logarithms the shifted
sum is analytic off the non-positive real axis, so the result is the
branch that is continuous in z and real on the positive real axis.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

# B_{2j} / (2j (2j - 1)), j = 1..10
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_R_MIN = 18.0


class GammaPoleError(ValueError):
    def __init__(self, n: int):
        self.n = n
        super().__init__(f"log-gamma has a pole at z = {n}")


def _stirling(w):
    inv = 1.0 / w
    inv2 = inv * inv
    series = np.zeros_like(w)
    for c in reversed(_STIRLING):
        series = series * inv2 + c
    return (w - 0.5) * np.log(w) - w + _HALF_LOG_2PI + series * inv


def _log_gamma_scalar(z: complex) -> complex:
    if z.imag == 0:
        z = complex(z.real, 0.0)
        if z.real <= 0 and z.real == round(z.real):
            raise GammaPoleError(int(z.real))
    target = max(math.sqrt(max(_R_MIN**2 - z.imag**2, 0.0)), 0.5)
    n_shift = max(math.ceil(target - z.real), 0)
    w = z + n_shift
    inv = 1.0 / w
    inv2 = inv * inv
    series = 0.0
    for c in reversed(_STIRLING):
        series = series * inv2 + c
    out = (w - 0.5) * cmath.log(w) - w + _HALF_LOG_2PI + series * inv
    for k in range(n_shift):
        out -= cmath.log(z + k)
    return out


def log_gamma(z):
    """log Gamma(z) for complex z (scalar or array), principal branch."""
    if np.ndim(z) == 0:
        return _log_gamma_scalar(complex(z))
    zc = np.asarray(z, dtype=complex)
    scalar = zc.ndim == 0
    zc = np.atleast_1d(zc).copy()
    # a negative zero imaginary part would put log(z + k) on the lower lip of the cut
    zc.imag[zc.imag == 0] = 0.0
    poles = (zc.imag == 0) & (zc.real <= 0) & (zc.real == np.round(zc.real))
    if poles.any():
        raise GammaPoleError(int(zc.real[poles][0]))
    # number of unit shifts needed for |z + n| >= _R_MIN with Re(z + n) >= 1/2
    need_im = np.sqrt(np.maximum(_R_MIN**2 - zc.imag**2, 0.0))
    target = np.maximum(need_im, 0.5)
    n_shift = np.maximum(np.ceil(target - zc.real), 0).astype(int)
    out = _stirling(zc + n_shift)
    for k in range(int(n_shift.max(initial=0))):
        sel = n_shift > k
        out[sel] -= np.log(zc[sel] + k)
    return complex(out[0]) if scalar else out


def gamma_ratio_phase(m, f):
    """-2 Im log Gamma(m + 1/2 + i f): continuous phase of the conjugate gamma ratio."""
    return -2.0 * np.imag(log_gamma(np.asarray(m) + 0.5 + 1j * np.asarray(f)))
