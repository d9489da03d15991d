"""Change of variable between the radial coordinate r and z in (0, 1).

The mapping solves dz/dr = 2 z (1 - z) / sqrt(R(z)), increasing with
z -> 1 as r -> infinity.  The logarithmic (or square-root, when c0 = 0)
endpoint behaviour of r(z) is integrated in closed form and the smooth
remainder is represented by a Chebyshev series, so r(z) is available to
near machine precision everywhere on the open interval.

Internally points are parametrised by x = log(z / (1 - z)), which keeps
both z and 1 - z accurate near either end.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from numpy.polynomial import Chebyshev
from scipy.special import expit

from .params import DomainError, NatanzonParams, validate

log = logging.getLogger(__name__)

_X_LIMIT = 740.0


def _adaptive_antiderivative(g, lo: float, hi: float, anchor: float, max_degree: int):
    """Chebyshev interpolant of ``g`` on [lo, hi], integrated from ``anchor``.

    Degree doubles until the trailing coefficients are at rounding level.
    """
    deg = 16
    while True:
        cheb = Chebyshev.interpolate(g, deg, domain=[lo, hi])
        coef = np.abs(cheb.coef)
        scale = max(1.0, coef.max())
        if coef[-4:].max() <= 1e-15 * scale:
            break
        if deg >= max_degree:
            log.warning("mapping remainder not resolved at degree %d (tail %.3g)", deg, coef[-4:].max())
            break
        deg = min(2 * deg, max_degree)
    return cheb.integ(lbnd=anchor), deg


def _log_z(x):
    return -np.logaddexp(0.0, -x)


def _log_w(x):
    return -np.logaddexp(0.0, x)


class ChangeOfVariable:
    """Bijection z <-> r for one parameter set.

    Half-line parameter sets (c0 = 0) have r(0) = 0.  Full-line sets
    (c0 > 0) are anchored so that r = 0 at z = 1/2.
    """

    def __init__(self, params: NatanzonParams, table_size: int = 2048, max_degree: int = 4096):
        report = validate(params, "bound")
        if not report.ok:
            raise ValueError("invalid parameters: " + "; ".join(report.violations))
        self.params = params
        self.domain_kind = params.domain_kind
        self.sqrt_c0 = math.sqrt(params.c0)
        self.sqrt_c1 = math.sqrt(params.c1)
        a, tau, c0 = params.a, params.tau, params.c0
        sc0, sc1 = self.sqrt_c0, self.sqrt_c1

        if self.domain_kind == "half-line":
            # r(u) = sqrt(c1) artanh(u) + H(u), u = sqrt(z)
            def rem(v):
                return -a / (np.sqrt(a * v * v + tau) + sc1)

            self._rem, self.degree = _adaptive_antiderivative(rem, 0.0, 1.0, 0.0, max_degree)
            self.r_origin = 0.0
            self._shift = 0.0
            k_plus = sc1 * math.log(2.0) + float(self._rem(1.0))
        else:
            # r(z) = sqrt(c0)/2 log z - sqrt(c1)/2 log(1-z) + G(z) - shift
            def rem(t):
                sr = np.sqrt((a * t + tau) * t + c0)
                return (a * t + tau) / (2.0 * (sr + sc0)) - (a * (t + 1.0) + tau) / (2.0 * (sr + sc1))

            self._rem, self.degree = _adaptive_antiderivative(rem, 0.0, 1.0, 0.5, max_degree)
            self.r_origin = 0.0
            self._shift = 0.0
            self._shift = float(self._r_of_x(np.array([0.0]))[0])
            k_plus = float(self._rem(1.0)) - self._shift
        self.tail_offset = k_plus
        # 1 - z ~ C exp(-2 r / sqrt(c1)) as r -> infinity
        self.tail_constant = math.exp(2.0 * k_plus / sc1)

        zt = 0.5 - 0.5 * np.cos(np.pi * (np.arange(table_size) + 0.5) / table_size)
        xt = np.log(zt) - np.log1p(-zt)
        self._table_x = xt
        self._table_r = self._r_of_x(xt)
        if np.any(np.diff(self._table_r) <= 0):
            raise RuntimeError("mapping table is not strictly increasing")

    # -- r as a function of x = logit(z) -------------------------------------

    def _r_of_x(self, x):
        x = np.asarray(x, dtype=float)
        lz, lw = _log_z(x), _log_w(x)
        if self.domain_kind == "half-line":
            u = np.exp(0.5 * lz)
            with np.errstate(divide="ignore"):
                at = np.where(u < 0.5, np.arctanh(np.minimum(u, 0.5)), np.log1p(u) - 0.5 * lw)
            return self.sqrt_c1 * at + self._rem(u)
        z = expit(x)
        return 0.5 * self.sqrt_c0 * lz - 0.5 * self.sqrt_c1 * lw + self._rem(z) - self._shift

    def _r_poly_zw(self, z, w):
        p = self.params
        lo = (p.a * z + p.tau) * z + p.c0
        hi = p.c1 - w * (2.0 * p.a + p.tau) + p.a * w * w
        return np.where(z < 0.5, lo, hi)

    def _solve_x(self, r):
        """Safeguarded Newton for x(r), vectorised over r."""
        r = np.asarray(r, dtype=float)
        xt, rt = self._table_x, self._table_r
        half = self.domain_kind == "half-line"
        if half:
            target = np.log(r)
            tab = np.log(rt)
        else:
            target = r
            tab = rt
        x = np.interp(target, tab, xt)
        idx = np.searchsorted(tab, target)
        lo = np.where(idx > 0, xt[np.maximum(idx - 1, 0)], -_X_LIMIT)
        hi = np.where(idx < len(xt), xt[np.minimum(idx, len(xt) - 1)], _X_LIMIT)
        # outside the table: extrapolate with the asymptotic slopes
        right = target > tab[-1]
        if np.any(right):
            guess = 2.0 * (r[right] - self.tail_offset) / self.sqrt_c1
            x[right] = np.clip(guess, xt[-1], _X_LIMIT)
        left = target < tab[0]
        if np.any(left):
            # log r ~ x/2 (half-line, tau > 0), log r ~ x (tau = 0), r ~ sqrt(c0) x/2 (full-line)
            if half:
                slope = 0.5 if self.params.tau > 0 else 1.0
            else:
                slope = 0.5 * self.sqrt_c0
            x[left] = np.clip(xt[0] + (target[left] - tab[0]) / slope, -_X_LIMIT, xt[0])
        active = np.ones(x.shape, dtype=bool)
        for _ in range(200):
            xa = x[active]
            ra = self._r_of_x(xa)
            z, w = expit(xa), expit(-xa)
            drdx = 0.5 * np.sqrt(self._r_poly_zw(z, w))
            if half:
                resid = np.log(ra) - target[active]
                deriv = drdx / ra
            else:
                resid = ra - target[active]
                deriv = drdx
            la, ha = lo[active], hi[active]
            la = np.where(resid < 0, np.maximum(la, xa), la)
            ha = np.where(resid > 0, np.minimum(ha, xa), ha)
            with np.errstate(divide="ignore", invalid="ignore"):
                step = resid / deriv
            xn = xa - step
            bad = ~np.isfinite(xn) | (xn <= la) | (xn >= ha)
            xn = np.where(bad, 0.5 * (la + ha), xn)
            lo[active], hi[active] = la, ha
            x[active] = xn
            done = (np.abs(xn - xa) <= 4e-16 * np.maximum(1.0, np.abs(xa))) | (resid == 0)
            idx_active = np.flatnonzero(active)
            active[idx_active[done]] = False
            if not active.any():
                break
        else:
            log.warning("z_of_r: Newton iteration hit the iteration cap")
        return x

    # -- public operations ---------------------------------------------------

    def _check_r(self, r):
        if self.domain_kind == "half-line" and np.any(r < 0):
            raise DomainError("half-line mapping requires r >= 0")
        if not np.all(np.isfinite(r)):
            raise DomainError("r must be finite")

    def solve(self, r):
        """Return ``(z, 1 - z)`` at r, each accurate to relative rounding."""
        r_arr = np.atleast_1d(np.asarray(r, dtype=float))
        self._check_r(r_arr)
        z = np.empty_like(r_arr)
        w = np.empty_like(r_arr)
        origin = r_arr == 0.0
        if self.domain_kind == "half-line" and origin.any():
            z[origin] = 0.0
            w[origin] = 1.0
        rest = ~origin if self.domain_kind == "half-line" else np.ones_like(origin)
        if rest.any():
            x = self._solve_x(r_arr[rest])
            z[rest] = expit(x)
            w[rest] = expit(-x)
        if np.ndim(r) == 0:
            return float(z[0]), float(w[0])
        return z, w

    def z_of_r(self, r):
        return self.solve(r)[0]

    def r_of_z(self, z):
        z_arr = np.atleast_1d(np.asarray(z, dtype=float))
        if np.any(z_arr >= 1.0) or np.any(z_arr < 0.0) or np.any(np.isnan(z_arr)):
            raise DomainError("r_of_z requires 0 <= z < 1 (r is infinite at z = 1)")
        out = np.empty_like(z_arr)
        zero = z_arr == 0.0
        if zero.any():
            if self.domain_kind == "full-line":
                raise DomainError("r is -infinity at z = 0 for c0 > 0")
            out[zero] = 0.0
        nz = ~zero
        if nz.any():
            zz = z_arr[nz]
            out[nz] = self._r_of_x(np.log(zz) - np.log1p(-zz))
        return float(out[0]) if np.ndim(z) == 0 else out

    def dr_dz(self, z):
        z_arr = np.asarray(z, dtype=float)
        if np.any(z_arr <= 0.0) or np.any(z_arr >= 1.0):
            raise DomainError("dr_dz requires 0 < z < 1")
        w = 1.0 - z_arr
        val = np.sqrt(self._r_poly_zw(z_arr, w)) / (2.0 * z_arr * w)
        return float(val) if np.ndim(z) == 0 else val

    def dz_dr(self, r):
        z, w = self.solve(r)
        p = self.params
        if p.c0 == 0.0:
            # R = z (a z + tau): cancel one power of z so r = 0 is finite
            z = np.asarray(z)
            with np.errstate(divide="ignore", invalid="ignore"):
                out = np.where(p.tau > 0, 2.0 * np.sqrt(z) * w / np.sqrt(p.a * z + p.tau),
                               2.0 * w / math.sqrt(p.a) if p.a > 0 else 0.0)
            return float(out) if out.ndim == 0 else out
        return 2.0 * z * w / np.sqrt(self._r_poly_zw(z, w))

    def z_derivatives(self, r):
        """z, 1 - z and the first three r-derivatives of z via the chain rule."""
        z, w = self.solve(r)
        return self.derivatives_at(z, w)

    def derivatives_at(self, z, w):
        p = self.params
        R = self._r_poly_zw(z, w)
        sR = np.sqrt(R)
        P = 2.0 * z * w
        dP = 2.0 * (w - z)
        dR = 2.0 * p.a * z + p.tau
        F = P / sR
        F1 = dP / sR - 0.5 * P * dR / (R * sR)
        F2 = (-4.0 / sR - dP * dR / (R * sR) - p.a * P / (R * sR)
              + 0.75 * P * dR * dR / (R * R * sR))
        z1 = F
        z2 = F1 * F
        z3 = (F2 * F + F1 * F1) * F
        return z, w, z1, z2, z3
