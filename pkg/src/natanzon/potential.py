"""The hypergeometric Natanzon potential as a function of z and of r."""

from __future__ import annotations

import math
from functools import cached_property

import numpy as np

from .mapping import ChangeOfVariable
from .params import DomainError, NatanzonParams


def v_zw(params: NatanzonParams, z, w, R):
    """V at z with w = 1 - z and R = R(z) supplied by the caller.

    The second term is rearranged so that no 0/0 appears at either end:
    (a + B/(z(z-1)) - 5/4 D/R) z^2 (1-z)^2 / R^2
        == (a z w - B - 5/4 D z w / R) z w / R^2.
    """
    p = params
    if isinstance(z, np.ndarray) or np.isscalar(z):
        z = np.asarray(z)
        w = np.asarray(w)
        num_lo = (p.f * z - (p.h0 - p.h1 + p.f)) * z + p.h0 + 1.0
        num_hi = (p.h1 + 1.0) + w * (p.h0 - p.h1 - p.f) + p.f * w * w
        num = np.where(z < 0.5, num_lo, num_hi)
    else:
        # Taylor jets: choose the form from the expansion point
        if z.value < 0.5:
            num = (p.f * z - (p.h0 - p.h1 + p.f)) * z + p.h0 + 1.0
        else:
            num = (p.h1 + 1.0) + w * (p.h0 - p.h1 - p.f) + p.f * w * w
    zw = z * w
    B = p.a + (p.c1 - p.c0) * (z - w)
    term2 = (p.a * zw - B - 1.25 * p.delta_disc * zw / R) * zw / (R * R)
    return num / R + term2


class PotentialInstance:
    """V(z) and V(r) for one parameter set, sharing a solved mapping."""

    def __init__(self, params: NatanzonParams, cov: ChangeOfVariable | None = None):
        self.params = params
        self.cov = cov if cov is not None else ChangeOfVariable(params)
        self.asymptotic_value = (params.h1 + 1.0) / params.c1

    def v_of_z(self, z):
        z_arr = np.asarray(z, dtype=float)
        if np.any(z_arr <= 0.0) or np.any(z_arr >= 1.0):
            raise DomainError("v_of_z requires 0 < z < 1; use v_limit at the endpoints")
        w = 1.0 - z_arr
        out = v_zw(self.params, z_arr, w, self.cov._r_poly_zw(z_arr, w))
        return float(out) if np.ndim(z) == 0 else out

    def v_limit(self, endpoint: int) -> float:
        """Limit of V at z = 1 (always finite) or z = 0 (finite only for c0 > 0)."""
        p = self.params
        if endpoint == 1:
            return self.asymptotic_value
        if endpoint == 0:
            if p.c0 > 0:
                return (p.h0 + 1.0) / p.c0
            if self.origin_coefficient == 0.0:
                raise NotImplementedError("finite origin limit for c0 = 0 is not tabulated")
            return math.copysign(math.inf, self.origin_coefficient)
        raise ValueError("endpoint must be 0 or 1")

    def v_of_r(self, r):
        r_arr = np.asarray(r, dtype=float)
        if self.params.domain_kind == "half-line" and np.any(r_arr <= 0.0):
            raise DomainError("v_of_r requires r > 0 on the half-line")
        z, w = self.cov.solve(r_arr)
        out = v_zw(self.params, z, w, self.cov._r_poly_zw(z, w))
        return float(out) if np.ndim(r) == 0 else out

    @cached_property
    def origin_coefficient(self) -> float:
        """lim r^2 V(r) as r -> 0+ for half-line sets, from a fit of r^2 V in r^2."""
        if self.params.domain_kind != "half-line":
            return 0.0
        r = np.geomspace(1e-4, 1e-2, 60)
        y = r * r * self.v_of_r(r)
        coef = np.polynomial.polynomial.polyfit(r * r, y, 3)
        c = float(coef[0])
        return 0.0 if abs(c) < 1e-9 else c

    @property
    def indicial_exponent(self) -> float:
        """Positive root s of s (s - 1) = lim r^2 V."""
        return 0.5 + math.sqrt(max(0.25 + self.origin_coefficient, 0.0))
