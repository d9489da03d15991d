"""Direct Numerov integration of -psi'' + V psi = E psi on the half-line.

Used as an independent check of the algebraic spectrum and of the
scattering side: bound energies by node counting plus matching, phase
shifts by fitting psi ~ sin(k r + delta) far out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit
from scipy.optimize import brentq


class OracleError(RuntimeError):
    pass


class GridTooCoarseError(OracleError):
    pass


class WindowMissError(OracleError):
    pass


class AsymptoticRegionError(OracleError):
    pass


@njit(cache=True)
def _numerov(g, h, y0, y1):
    n = g.shape[0]
    y = np.empty(n)
    y[0] = y0
    y[1] = y1
    c = h * h / 12.0
    nodes = 0
    for i in range(1, n - 1):
        y[i + 1] = (2.0 * y[i] * (1.0 + 5.0 * c * g[i]) - y[i - 1] * (1.0 - c * g[i - 1])) / (1.0 - c * g[i + 1])
        if y[i + 1] * y[i] < 0.0 or (y[i] == 0.0 and i > 1 and y[i + 1] * y[i - 1] < 0.0):
            nodes += 1
        if abs(y[i + 1]) > 1e200:
            for j in range(i + 2):
                y[j] *= 1e-200
    return y, nodes


@dataclass(frozen=True)
class Grid:
    """Uniform grid r_i = i h, h = r_max / n, starting at index ``i0``."""

    r_max: float
    n: int
    i0: int = 0

    @property
    def h(self) -> float:
        return self.r_max / self.n

    @property
    def r(self) -> np.ndarray:
        return self.h * np.arange(self.i0, self.n + 1)

    @property
    def r_min(self) -> float:
        return self.i0 * self.h

    def refined(self) -> Grid:
        return Grid(self.r_max, 2 * self.n, 2 * self.i0)


@dataclass
class OracleResult:
    kind: str
    values: list
    grid: tuple[float, float, int]
    error_estimate: float
    extra: dict = field(default_factory=dict)

    @property
    def energies(self) -> list[float]:
        if self.kind != "bound-spectrum":
            raise AttributeError("not a bound-spectrum result")
        return list(self.values)

    def as_dict(self) -> dict:
        return {"kind": self.kind, "values": self.values, "grid": list(self.grid),
                "error_estimate": self.error_estimate, **self.extra}


def origin_start(pot, n: int, r_max: float) -> Grid:
    """Grid whose first point keeps the Numerov coefficients positive."""
    L = getattr(pot, "origin_coefficient", 0.0)
    if L == 0.0:
        return Grid(r_max, n, 0)
    return Grid(r_max, n, max(1, math.ceil(math.sqrt(abs(L) / 6.0))))


class _Sampled:
    """Potential values on a grid, cached by grid.

    Beyond ``r_cut`` the potential sits within 1e-18 of its asymptotic
    value and is replaced by that value.
    """

    def __init__(self, pot):
        self.pot = pot
        self.s = float(getattr(pot, "indicial_exponent", 1.0))
        self.v_inf = float(getattr(pot, "asymptotic_value", 0.0))
        self.r_cut = self._cutoff()
        self._cache = {}

    def _cutoff(self) -> float:
        params = getattr(self.pot, "params", None)
        if params is None:
            return math.inf
        sc1 = math.sqrt(params.c1)
        r = np.linspace(0.01 * sc1, 400.0 * sc1, 40001)
        dv = np.abs(self.pot.v_of_r(r) - self.v_inf)
        above = np.flatnonzero(dv >= 1e-18 * max(1.0, abs(self.v_inf)))
        return float(r[above[-1] + 1]) if above.size else float(r[0])

    def values(self, grid: Grid) -> np.ndarray:
        key = (grid.r_max, grid.n, grid.i0)
        if key not in self._cache:
            r = grid.r
            v = np.full_like(r, self.v_inf)
            near = (r > 0) & (r <= self.r_cut)
            v[near] = self.pot.v_of_r(r[near])
            # psi(0) = 0 on a regular origin, so V(0) never enters the recurrence
            v[r == 0] = 0.0
            if len(self._cache) > 8:
                self._cache.clear()
            self._cache[key] = v
        return self._cache[key]

    def outward(self, grid: Grid, E: float):
        g = self.values(grid) - E
        r0, r1 = grid.r[0], grid.r[1]
        return _numerov(g, grid.h, r0**self.s, r1**self.s)

    def inward(self, grid: Grid, E: float, stop: int):
        """Decaying solution integrated from r_max down to index ``stop``."""
        g = (self.values(grid) - E)[stop:][::-1].copy()
        kappa = math.sqrt(max(-E, 1e-12))
        y, _ = _numerov(g, grid.h, 1e-200, 1e-200 * math.exp(kappa * grid.h))
        return y[::-1]


def integrate(pot, E: float, grid: Grid | None = None, r_max: float = 20.0, n: int = 4096):
    """Outward Numerov solution at energy E; returns (r, psi)."""
    sampler = _Sampled(pot)
    grid = grid if grid is not None else origin_start(pot, n, r_max)
    y, _ = sampler.outward(grid, E)
    return grid.r, y


def count_nodes(pot, E: float, grid: Grid) -> int:
    return _Sampled(pot).outward(grid, E)[1]


def default_bound_grid(pot, n: int = 16384) -> Grid:
    return origin_start(pot, n, 20.0 * math.sqrt(pot.params.c1))


def _bound_levels(sampler: _Sampled, grid: Grid, e_lo: float, e_hi: float, level_count: int, tol: float):
    nodes_lo = sampler.outward(grid, e_lo)[1]
    nodes_hi = sampler.outward(grid, e_hi)[1]
    if nodes_lo > 0:
        raise WindowMissError(f"{nodes_lo} states lie below the window bottom E={e_lo}")
    count = min(level_count, nodes_hi - nodes_lo)
    V = sampler.values(grid)
    energies = []
    for lvl in range(count):
        a, b = e_lo, e_hi
        # node count jumps from lvl to lvl + 1 at the level
        while b - a > 1e-5 * max(1.0, abs(b)):
            mid = 0.5 * (a + b)
            if sampler.outward(grid, mid)[1] > lvl:
                b = mid
            else:
                a = mid

        def mismatch(E):
            out, _ = sampler.outward(grid, E)
            inside = np.flatnonzero(V[: len(V) - 2] < E)
            j = int(inside[-1]) if inside.size else len(V) // 2
            j = min(max(j, 2), len(V) - 3)
            inn = sampler.inward(grid, E, j)
            c = out[j] * inn[1] - out[j + 1] * inn[0]
            return c / (math.hypot(out[j], out[j + 1]) * math.hypot(inn[0], inn[1]))

        try:
            E = brentq(mismatch, a, b, xtol=min(tol * 1e-3, 1e-13), rtol=8.9e-16)
        except ValueError:
            while b - a > min(tol * 1e-3, 1e-13) * max(1.0, abs(b)):
                mid = 0.5 * (a + b)
                if sampler.outward(grid, mid)[1] > lvl:
                    b = mid
                else:
                    a = mid
            E = 0.5 * (a + b)
        energies.append(E)
    return energies


def bound_energies_numeric(pot, E_window: tuple[float, float] | None = None, level_count: int = 1000,
                           grid: Grid | None = None, tolerance: float = 1e-8, max_points: int = 32768) -> OracleResult:
    """Numeric bound energies, refined by step halving until N and 2N agree to ``tolerance``."""
    sampler = _Sampled(pot)
    grid = grid if grid is not None else default_bound_grid(pot, 8192)
    if E_window is None:
        vmin = float(sampler.values(grid)[grid.r > 0].min())
        E_window = (vmin - 1.0, pot.asymptotic_value - 1e-9)
    e_lo, e_hi = E_window
    coarse = _bound_levels(sampler, grid, e_lo, e_hi, level_count, tolerance)
    while True:
        fine_grid = grid.refined()
        fine = _bound_levels(sampler, fine_grid, e_lo, e_hi, level_count, tolerance)
        if len(fine) != len(coarse):
            err = math.inf
        else:
            err = max((abs(x - y) for x, y in zip(coarse, fine)), default=0.0)
        if err <= tolerance or 2 * fine_grid.n > max_points:
            break
        grid, coarse = fine_grid, fine
    result = OracleResult("bound-spectrum", fine, (fine_grid.r_min, fine_grid.r_max, fine_grid.n), err)
    if err > tolerance:
        raise GridTooCoarseError(f"step halving disagreement {err:.3g} exceeds {tolerance:.3g}"
                                 f" at N={fine_grid.n}", )
    return result


def asymptotic_radius(pot, threshold: float = 1e-10) -> float:
    """Smallest r beyond which |V| stays below ``threshold`` (on a scan grid)."""
    sc1 = math.sqrt(pot.params.c1)
    r = np.linspace(0.01 * sc1, 200.0 * sc1, 20001)
    v = np.abs(pot.v_of_r(r) - pot.asymptotic_value)
    above = np.flatnonzero(v >= threshold)
    return float(r[above[-1] + 1]) if above.size else float(r[0])


def scattering_grid(pot, k: float, h_max: float | None = None, r_asym: float | None = None) -> Grid:
    """Grid reaching a quarter wavelength past the asymptotic radius with k h <= 0.02."""
    sc1 = math.sqrt(pot.params.c1)
    r_asym = asymptotic_radius(pot) if r_asym is None else r_asym
    h = min(h_max if h_max is not None else 2e-3 * sc1, 0.02 / k)
    r_max = max(r_asym + 0.5 * math.pi / k + 4 * h, 20.0 * sc1)
    n = int(math.ceil(r_max / h))
    return origin_start(pot, n, n * h)


def _phase_on(sampler: _Sampled, grid: Grid, k: float, v_tol: float) -> float:
    y, _ = sampler.outward(grid, k * k)
    r = grid.r
    j2 = len(r) - 1
    j1 = int(round((r[j2] - 0.5 * math.pi / k - r[0]) / grid.h))
    if j1 < 1:
        raise AsymptoticRegionError("grid too short for a quarter wavelength")
    V = sampler.values(grid)
    if abs(V[j1]) > v_tol:
        raise AsymptoticRegionError(f"|V(r1)| = {abs(V[j1]):.3g} exceeds {v_tol:.3g} at r1 = {r[j1]:.6g}")
    r1, r2 = r[j1], r[j2]
    mat = np.array([[math.sin(k * r1), math.cos(k * r1)], [math.sin(k * r2), math.cos(k * r2)]])
    b, c = np.linalg.solve(mat, [y[j1], y[j2]])
    return math.atan2(c, b)


def phase_numeric(pot, k: float, grid: Grid | None = None, v_tol: float = 1e-10) -> float:
    """Phase delta in (-pi, pi] of psi ~ A sin(k r + delta), A > 0."""
    if not k > 0:
        raise ValueError("k must be positive")
    sampler = _Sampled(pot)
    grid = grid if grid is not None else scattering_grid(pot, k)
    return _phase_on(sampler, grid, k, v_tol)


def phase_scan(pot, k_grid, v_tol: float = 1e-10, refine_check: bool = True) -> OracleResult:
    """Numeric phases on an increasing k-grid, unwrapped along the grid."""
    k_grid = np.asarray(k_grid, dtype=float)
    sampler = _Sampled(pot)
    r_asym = asymptotic_radius(pot, v_tol)
    raw, err = [], 0.0
    for k in k_grid:
        grid = scattering_grid(pot, k, r_asym=r_asym)
        d = _phase_on(sampler, grid, k, v_tol)
        if refine_check:
            d2 = _phase_on(sampler, grid.refined(), k, v_tol)
            err = max(err, abs((d2 - d + math.pi) % (2 * math.pi) - math.pi))
            d = d2
        raw.append(d)
    unwrapped = np.unwrap(raw)
    values = [(float(k), float(d)) for k, d in zip(k_grid, unwrapped)]
    return OracleResult("phase-shift", values, (0.0, float("nan"), 0), err)
