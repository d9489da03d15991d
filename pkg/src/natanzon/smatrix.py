"""S-matrix of the Euclidean connection and its bound-state poles.

    S_m(k) = Gamma(m + 1/2 - i f(k)) / Gamma(m + 1/2 + i f(k)) * Delta_m(k),
    f(k) = k sqrt(c1) / 2,

with the expansion phases gamma_+ = gamma_- = 0.  The regular factor
Delta_m(k) is not known in closed form here; it is a pluggable callable
that defaults to 1, so only Delta-independent observables (poles,
unitarity, gamma recurrences) are meaningful without one.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .brackets import MultipleRootsError, offsets, refine, sign_brackets
from .gamma import log_gamma
from .params import DomainError, NatanzonParams

DeltaFactor = Callable[[float], complex]
WeightMode = Union[float, str]

KAPPA_LIMIT = 1e3


class PoleProximityWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class ExpansionCoefficients:
    """gamma_+, gamma_- and the slope of f(k) = slope * k."""

    slope: float
    gamma_plus: float = 0.0
    gamma_minus: float = 0.0

    @classmethod
    def from_params(cls, params: NatanzonParams) -> ExpansionCoefficients:
        return cls(slope=0.5 * math.sqrt(params.c1))

    def f_of_k(self, k):
        return self.slope * np.asarray(k) if np.ndim(k) else self.slope * k


@dataclass(frozen=True)
class SMatrixPoint:
    k: float
    m: complex | float
    value: complex
    phase: float

    @property
    def m_is_complex(self) -> bool:
        return isinstance(self.m, complex)

    def as_dict(self) -> dict:
        m = self.m
        return {
            "k": self.k,
            "m_re": m.real if isinstance(m, complex) else m,
            "m_im": m.imag if isinstance(m, complex) else 0.0,
            "re": self.value.real,
            "im": self.value.imag,
            "phase": self.phase,
        }


def _pole_distance(zc: complex) -> float:
    """Distance to the nearest non-positive integer."""
    n = min(round(zc.real), 0)
    return abs(zc - n)


def _exponent(coeffs: ExpansionCoefficients, m, k):
    f = coeffs.f_of_k(k)
    zm = m + 0.5 - 1j * f
    zp = m + 0.5 + 1j * f
    for zc in (zm, zp):
        if _pole_distance(complex(zc)) < 1e-6:
            warnings.warn(f"gamma argument {complex(zc)} within 1e-6 of a pole", PoleProximityWarning,
                          stacklevel=3)
    gam = m * (coeffs.gamma_plus + coeffs.gamma_minus)
    return log_gamma(zm) - log_gamma(zp) + 1j * gam


def s_fixed_m(coeffs: ExpansionCoefficients, m: float, k: float,
              delta_factor: DeltaFactor | None = None) -> SMatrixPoint:
    """S at weight ``m`` and wavenumber ``k``; phase is the continuous branch through S(0) = 1."""
    if not k > 0:
        raise DomainError("k must be positive")
    expo = _exponent(coeffs, m, k)
    value = np.exp(expo)
    phase = float(expo.imag)
    if delta_factor is not None:
        d = complex(delta_factor(k))
        value = value * d
        phase += math.atan2(d.imag, d.real)
    return SMatrixPoint(k=float(k), m=m, value=complex(value), phase=phase)


def physical_weight(params: NatanzonParams, k: float) -> float | complex:
    """(alpha - beta)/2 continued to E = k^2; complex once a radicand turns negative."""
    E = k * k
    ra = -params.a * E + params.f + 1.0
    rb = -params.c0 * E + params.h0 + 1.0
    if ra >= 0 and rb >= 0:
        return 0.5 * (math.sqrt(ra) - math.sqrt(rb))
    return 0.5 * (np.sqrt(complex(ra)) - np.sqrt(complex(rb)))


def bound_pole_residual(params: NatanzonParams, kappa: float, n: int) -> float:
    """Numerator-gamma pole condition on the bound-state axis.

    m(i kappa) + 1/2 - i f = -n with f = -i kappa sqrt(c1)/2 reads
    alpha - beta - kappa sqrt(c1) - (2n + 1) = 0 at E = -kappa^2.
    """
    E = -kappa * kappa
    ra = -params.a * E + params.f + 1.0
    rb = -params.c0 * E + params.h0 + 1.0
    if ra < 0:
        raise DomainError(f"alpha radicand is negative ({ra:.17g}) at kappa={kappa:.17g}")
    if rb < 0:
        raise DomainError(f"beta radicand is negative ({rb:.17g}) at kappa={kappa:.17g}")
    return math.sqrt(ra) - math.sqrt(rb) - kappa * math.sqrt(params.c1) - (2 * n + 1)


def _pole_residual_clipped(params, kappa, n):
    E = -kappa * kappa
    ra = np.maximum(-params.a * E + params.f + 1.0, 0.0)
    rb = np.maximum(-params.c0 * E + params.h0 + 1.0, 0.0)
    return np.sqrt(ra) - np.sqrt(rb) - kappa * math.sqrt(params.c1) - (2 * n + 1)


def kappa_window(params: NatanzonParams) -> tuple[float, float]:
    p = params
    lo, hi = 0.0, math.inf
    if p.a < 0:
        hi = math.sqrt((p.f + 1.0) / -p.a)
    elif p.a > 0 and p.f + 1.0 < 0:
        lo = max(lo, math.sqrt(-(p.f + 1.0) / p.a))
    elif p.a == 0 and p.f + 1.0 < 0:
        return math.nan, math.nan
    if p.h0 + 1.0 < 0:
        if p.c0 == 0:
            return math.nan, math.nan
        lo = max(lo, math.sqrt(-(p.h0 + 1.0) / p.c0))
    return lo, hi


@dataclass(frozen=True)
class Pole:
    n: int
    kappa: float
    E: float

    def as_dict(self) -> dict:
        return {"n": self.n, "kappa": self.kappa, "E": self.E}


def find_pole(params: NatanzonParams, n: int) -> Pole | None:
    lo, hi = kappa_window(params)
    if not lo < hi:
        return None

    def fn(kappa):
        return _pole_residual_clipped(params, kappa, n)

    if math.isfinite(hi):
        span = hi - lo
    else:
        span = max(1.0, lo)
        while fn(lo + span) >= 0 and lo + span < KAPPA_LIMIT:
            span *= 2.0
    kap = lo + offsets(span)
    res = fn(kap)
    brackets = sign_brackets(kap, res)
    if res[0] == 0:
        # kappa = 0 is the threshold, not a bound state
        brackets = [b for b in brackets if b[1] != kap[0]]
    if not brackets:
        return None
    if len(brackets) > 1:
        raise MultipleRootsError(f"pole n={n}", brackets)
    kappa = refine(lambda x: float(fn(x)), *brackets[0])
    if kappa <= 0:
        return None
    return Pole(n=n, kappa=kappa, E=-kappa * kappa)


def find_poles(params: NatanzonParams, n_max: int | None = None) -> list[Pole]:
    """Bound-state poles for n = 0..n_max (or until the first missing one)."""
    poles = []
    n = 0
    while n_max is None or n <= n_max:
        pole = find_pole(params, n)
        if pole is None:
            break
        poles.append(pole)
        n += 1
        if n > 10000:
            break
    return poles


def phase_shift_grid(params: NatanzonParams, k_grid, weight_mode: WeightMode = 0.0,
                     delta_factor: DeltaFactor | None = None) -> list[SMatrixPoint]:
    """S on an increasing k-grid; ``weight_mode`` is a fixed real m or ``"physical"``."""
    k_grid = np.asarray(k_grid, dtype=float)
    if k_grid.ndim != 1 or len(k_grid) == 0 or np.any(k_grid <= 0) or np.any(np.diff(k_grid) <= 0):
        raise DomainError("k_grid must be positive and strictly increasing")
    coeffs = ExpansionCoefficients.from_params(params)
    points = []
    for k in k_grid:
        m = physical_weight(params, float(k)) if weight_mode == "physical" else float(weight_mode)
        points.append(s_fixed_m(coeffs, m, float(k), delta_factor))
    phases = np.unwrap([pt.phase for pt in points])
    return [SMatrixPoint(pt.k, pt.m, pt.value, float(ph)) for pt, ph in zip(points, phases)]
