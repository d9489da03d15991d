"""Numeric checks of the so(2,1) and e(2) operator content.

Operators act on Psi = exp(i m phi) Phi(r).  At a fixed weight m each
generator reduces to a radial operator  Phi -> c2 Phi'' + c1 Phi' + c0 Phi
together with the weight shift it induces.  Coefficients are written once,
as arithmetic on ``z`` and its r-derivatives, and evaluated by two
backends: Chebyshev collocation on an interior window, and Taylor jets at
sample points.

Realizations (``variant="corrected"``, the default):

    J0 = -i d_phi
    J+- = e^{+-i phi} { +- sqrt(z)(z-1)/z' d_r - i (z+1)/(2 sqrt(z)) d_phi
                        -+ (z-1)/2 [ (1 -+ p)/sqrt(z) - z'' sqrt(z)/z'^2 ] }
    Q  = z (z-1)^2/z'^2 d_r^2 + (z-1)^2/(4z) d_phi^2 + i p (z^2-1)/(2z) d_phi
         + (z-1)^2 [ z^2 (2 z''' z' - 3 z''^2) - z'^4 (p^2 - 1) ] / (4 z z'^4)

    P+- = e^{+-i phi} [ -i d_r + (+- d_phi + i/2) / r ]     (on sqrt(r) psi)
    P^2 = -d_r^2 - (d_phi^2 + 1/4) / r^2

``variant="control"`` flips the sign of the last J+- group, uses 1/16 in
front of d_phi^2 in Q, and (+- i d_phi + 1/2)/r in P+-.  It is a negative
control: the commutators still close but the Casimir and e(2) checks fail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np
from numpy.polynomial import chebyshev as C

from .jets import Jet, exp, ode_jet, sqrt
from .mapping import ChangeOfVariable
from .params import NatanzonParams
from .potential import v_zw

Coef = Callable[["Geometry"], Any]


@dataclass
class Geometry:
    """r, z, 1 - z and z', z'', z''' as arrays (collocation) or jets."""

    r: Any
    z: Any
    w: Any
    z1: Any
    z2: Any
    z3: Any
    params: NatanzonParams | None = None


@dataclass(frozen=True)
class ReducedOperator:
    name: str
    c2: Coef
    c1: Coef
    c0: Coef
    shift: int = 0


def _zero(geo):
    return 0.0


def _const(value):
    return lambda geo: value


Builder = Callable[[float], ReducedOperator]


# -- realizations -------------------------------------------------------------

def so21_builders(p: float, variant: str = "corrected") -> dict[str, Builder]:
    """J0, J+, J-, Q of the z-realization as functions of the weight m."""
    sig = -1.0 if variant == "corrected" else 1.0
    m2_factor = 0.25 if variant == "corrected" else 1.0 / 16.0

    def jpm(s):
        def build(m):
            def c1(g):
                return -s * sqrt(g.z) * g.w / g.z1

            def c0(g):
                sz = sqrt(g.z)
                return (0.5 * m * (g.z + 1.0) / sz
                        - sig * s * 0.5 * g.w * ((1.0 - s * p) / sz - g.z2 * sz / (g.z1 * g.z1)))
            return ReducedOperator("J+" if s > 0 else "J-", _zero, c1, c0, int(s))
        return build

    def q(m):
        def c2(g):
            return g.z * g.w * g.w / (g.z1 * g.z1)

        def c0(g):
            z, zm = g.z, g.w
            z1sq = g.z1 * g.z1
            z1q = z1sq * z1sq
            schw = z * z * (2.0 * g.z3 * g.z1 - 3.0 * g.z2 * g.z2) - z1q * (p * p - 1.0)
            return (-m2_factor * m * m * zm * zm / z
                    + 0.5 * m * p * zm * (z + 1.0) / z
                    + zm * zm * schw / (4.0 * z * z1q))
        return ReducedOperator("Q", c2, _zero, c0, 0)

    return {
        "J0": lambda m: ReducedOperator("J0", _zero, _zero, _const(m), 0),
        "J+": jpm(1.0),
        "J-": jpm(-1.0),
        "Q": q,
    }


def so21_asymptotic_builders(c1: float) -> dict[str, Builder]:
    """Limits r -> infinity (z -> 1) of the z-realization."""
    half = 0.5 * math.sqrt(c1)
    return {
        "J0": lambda m: ReducedOperator("J0", _zero, _zero, _const(m), 0),
        "J+": lambda m: ReducedOperator("J+", _zero, _const(-half), _const(m + 0.5), 1),
        "J-": lambda m: ReducedOperator("J-", _zero, _const(half), _const(m - 0.5), -1),
        "Q": lambda m: ReducedOperator("Q", _const(0.25 * c1), _zero, _const(-0.25), 0),
    }


def e2_builders(variant: str = "corrected") -> dict[str, Builder]:
    """Polar realization of e(2): Lz, P+, P-, P^2."""

    def pm(s):
        def build(m):
            if variant == "corrected":
                def c0(g):
                    return 1j * (s * m + 0.5) / g.r
            else:
                def c0(g):
                    return (-s * m + 0.5) / g.r
            return ReducedOperator("P+" if s > 0 else "P-", _zero, _const(-1j), c0, int(s))
        return build

    def p2(m):
        return ReducedOperator("P2", _const(-1.0), _zero, lambda g: (m * m - 0.25) / (g.r * g.r), 0)

    return {
        "Lz": lambda m: ReducedOperator("Lz", _zero, _zero, _const(m), 0),
        "P+": pm(1.0),
        "P-": pm(-1.0),
        "P2": p2,
    }


def e2_asymptotic_builders() -> dict[str, Builder]:
    return {
        "Lz": lambda m: ReducedOperator("Lz", _zero, _zero, _const(m), 0),
        "P+": lambda m: ReducedOperator("P+", _zero, _const(-1j), _zero, 1),
        "P-": lambda m: ReducedOperator("P-", _zero, _const(-1j), _zero, -1),
        "P2": lambda m: ReducedOperator("P2", _const(-1.0), _zero, _zero, 0),
    }


def expanded_raising_builder(sign: int, k: float, f_k: float, gamma: float = 0.0) -> Builder:
    """e(2) expansion of J+ for the +-k sector:
    e^{i gamma}/(+-k) [(-1/2 -+ i f) P+ + Lz P+], with Lz acting after the raise."""

    def build(m):
        pref = np.exp(1j * gamma) / (sign * k) * (-0.5 - sign * 1j * f_k + (m + 1.0))
        return ReducedOperator("J+exp", _zero, _const(-1j * pref), _zero, 1)

    return build


# -- backends -----------------------------------------------------------------

def _mapping_rhs(params: NatanzonParams):
    a, tau, c0 = params.a, params.tau, params.c0

    def rhs(z):
        return 2.0 * z * (1.0 - z) / sqrt((a * z + tau) * z + c0)
    return rhs


class JetBackend:
    """Apply reduced operators to Taylor jets at a set of sample points."""

    def __init__(self, points, cov: ChangeOfVariable | None = None, order: int = 12):
        self.points = np.asarray(points, dtype=float)
        self.order = order
        self.cov = cov
        self.geometries = [self._geometry(r0) for r0 in self.points]

    def _geometry(self, r0: float) -> Geometry:
        r = Jet.variable(r0, self.order + 3)
        if self.cov is None:
            one = Jet.constant(1.0, self.order + 3)
            return Geometry(r, one, one * 0.0, one, one, one)
        z0, w0 = self.cov.solve(r0)
        z = ode_jet(_mapping_rhs(self.cov.params), z0, self.order + 3)
        wc = -z.c.copy()
        wc[0] = w0
        w = Jet(wc)
        z1 = _mapping_rhs(self.cov.params)(z)
        z2 = z1.d()
        z3 = z2.d()
        return Geometry(r, z, w, z1, z2, z3, self.cov.params)

    def function(self, fn) -> list[Jet]:
        return [fn(g.r) for g in self.geometries]

    def apply(self, op: ReducedOperator, state: list[Jet]) -> list[Jet]:
        out = []
        for g, f in zip(self.geometries, state):
            d1 = f.d()
            d2 = d1.d()
            out.append(op.c2(g) * d2 + op.c1(g) * d1 + op.c0(g) * f)
        return out

    def potential(self, params: NatanzonParams) -> list[Jet]:
        res = []
        for g in self.geometries:
            R = (params.a * g.z + params.tau) * g.z + params.c0
            res.append(v_zw(params, g.z, g.w, R))
        return res

    @staticmethod
    def values(state) -> np.ndarray:
        return np.array([f.value for f in state])

    @staticmethod
    def combine(coefs, states):
        return [sum(c * s[i] for c, s in zip(coefs, states)) for i in range(len(states[0]))]

    @staticmethod
    def multiply(func_state, state):
        return [a * b for a, b in zip(func_state, state)]


class SpectralBackend:
    """Chebyshev collocation on [r_a, r_b]; derivatives taken on chopped coefficients."""

    def __init__(self, window: tuple[float, float], cov: ChangeOfVariable | None = None,
                 n: int = 256, chop: float = 1e-15):
        ra, rb = window
        self.window = (float(ra), float(rb))
        self.n = n
        self.chop = chop
        t = np.cos(np.pi * np.arange(n) / (n - 1))[::-1]
        self.t = t
        self.r = 0.5 * (ra + rb) + 0.5 * (rb - ra) * t
        self._scale = 2.0 / (rb - ra)
        self._vander = C.chebvander(t, n - 1)
        self._vinv = np.linalg.inv(self._vander)
        self.cov = cov
        if cov is None:
            one = np.ones_like(self.r)
            self.geometry = Geometry(self.r, one, 0.0 * one, one, one, one)
        else:
            z, w, z1, z2, z3 = cov.z_derivatives(self.r)
            self.geometry = Geometry(self.r, z, w, z1, z2, z3, cov.params)

    def function(self, fn) -> np.ndarray:
        return fn(self.r)

    def _coef(self, f):
        c = self._vinv @ f
        mag = np.abs(c)
        keep = np.flatnonzero(mag > self.chop * mag.max()) if mag.max() > 0 else np.array([0])
        last = int(keep[-1]) + 1 if keep.size else 1
        return c[:last]

    def derivative(self, f, order: int = 1):
        c = self._coef(f)
        if len(c) <= order:
            return np.zeros_like(f)
        dc = C.chebder(c, order) * self._scale**order
        return C.chebval(self.t, dc)

    def apply(self, op: ReducedOperator, f):
        g = self.geometry
        c = self._coef(f)
        val = C.chebval(self.t, c)
        d1 = C.chebval(self.t, C.chebder(c, 1) * self._scale) if len(c) > 1 else 0.0 * val
        d2 = C.chebval(self.t, C.chebder(c, 2) * self._scale**2) if len(c) > 2 else 0.0 * val
        return op.c2(g) * d2 + op.c1(g) * d1 + op.c0(g) * val

    def potential(self, params: NatanzonParams):
        g = self.geometry
        R = self.cov._r_poly_zw(g.z, g.w)
        return v_zw(params, g.z, g.w, R)

    @staticmethod
    def values(state) -> np.ndarray:
        return np.asarray(state)

    @staticmethod
    def combine(coefs, states):
        return sum(c * s for c, s in zip(coefs, states))

    @staticmethod
    def multiply(func_state, state):
        return func_state * state


# -- generic application helpers ---------------------------------------------

def act(backend, builders: dict[str, Builder], word: str | list[str], m: float, state):
    """Apply a product of generators, rightmost first, tracking the weight."""
    names = [word] if isinstance(word, str) else list(word)
    for name in reversed(names):
        op = builders[name](m)
        state = backend.apply(op, state)
        m = m + op.shift
    return state


def relative_residual(backend, total, terms) -> float:
    num = np.max(np.abs(backend.values(total)))
    den = max(np.max(np.abs(backend.values(t))) for t in terms)
    return float(num / den) if den > 0 else float(num)


def default_window(params: NatanzonParams) -> tuple[float, float]:
    s = math.sqrt(params.c1)
    return 0.5 * s, 5.0 * s


def test_functions(window: tuple[float, float], count: int = 5):
    """Gaussian times polynomial bumps centred inside ``window``."""
    ra, rb = window
    width = (rb - ra) / 8.0
    centres = [ra + (rb - ra) * t for t in (0.5, 0.4, 0.6, 0.45, 0.55)]
    polys = [(1.0,), (0.0, 1.0), (-1.0, 0.0, 1.0), (0.5, -1.0, 0.0, 1.0), (1.0, 0.3, -0.2, 0.0, 0.1)]
    fns = []
    for j in range(count):
        c, coeffs = centres[j % 5], polys[j % 5]

        def fn(r, c=c, coeffs=coeffs):
            x = (r - c) * (1.0 / width)
            poly = 0.0 * x + coeffs[-1]
            for a in reversed(coeffs[:-1]):
                poly = poly * x + a
            return poly * exp(-0.5 * x * x)
        fns.append(fn)
    return fns


CASIMIR_CONVENTIONS = {
    "J0(J0-1) - J+J-": lambda J0m, m, pm, mp: (m * (m - 1.0), -1.0, pm),
    "J0(J0+1) - J+J-": lambda J0m, m, pm, mp: (m * (m + 1.0), -1.0, pm),
    "J+J- - J0(J0-1)": lambda J0m, m, pm, mp: (-m * (m - 1.0), 1.0, pm),
}


def check_so21_closure(builders: dict[str, Builder], backend, functions, m: float) -> dict:
    """Residuals of [J0, J+-] = +-J+-, [J+, J-] = -2 J0 and the Casimir conventions.

    The orderings J0(J0-1) - J+J- and J0(J0+1) - J-J+ are the same element
    once [J+, J-] = -2 J0 holds; both are reported and the convention
    search compares genuinely different candidates.
    """
    res = {"[J0,J+]-J+": 0.0, "[J0,J-]+J-": 0.0, "[J+,J-]+2J0": 0.0}
    cas = {name: 0.0 for name in CASIMIR_CONVENTIONS}
    ordering_gap = 0.0
    for fn in functions:
        f = backend.function(fn)
        jp = act(backend, builders, "J+", m, f)
        jm = act(backend, builders, "J-", m, f)
        j0 = act(backend, builders, "J0", m, f)
        a = act(backend, builders, ["J0", "J+"], m, f)
        b = act(backend, builders, ["J+", "J0"], m, f)
        res["[J0,J+]-J+"] = max(res["[J0,J+]-J+"], relative_residual(
            backend, backend.combine([1, -1, -1], [a, b, jp]), [a, b, jp]))
        a = act(backend, builders, ["J0", "J-"], m, f)
        b = act(backend, builders, ["J-", "J0"], m, f)
        res["[J0,J-]+J-"] = max(res["[J0,J-]+J-"], relative_residual(
            backend, backend.combine([1, -1, 1], [a, b, jm]), [a, b, jm]))
        pm = act(backend, builders, ["J+", "J-"], m, f)
        mp = act(backend, builders, ["J-", "J+"], m, f)
        res["[J+,J-]+2J0"] = max(res["[J+,J-]+2J0"], relative_residual(
            backend, backend.combine([1, -1, 2], [pm, mp, j0]), [pm, mp, j0]))
        q = act(backend, builders, "Q", m, f)
        for name, rule in CASIMIR_CONVENTIONS.items():
            c_scalar, c_op, prod = rule(j0, m, pm, mp)
            total = backend.combine([1, -c_scalar, -c_op], [q, f, prod])
            cas[name] = max(cas[name], relative_residual(backend, total, [q, f, prod]))
        alt = backend.combine([m * (m - 1.0), -1.0, -m * (m + 1.0), 1.0], [f, pm, f, mp])
        ordering_gap = max(ordering_gap, relative_residual(backend, alt, [pm, mp, f]))
    res["casimir"] = cas
    res["J0(J0-1)-J+J- vs J0(J0+1)-J-J+"] = ordering_gap
    return res


def casimir_winner(report: dict, tol: float = 1e-8) -> list[str]:
    return [name for name, v in report["casimir"].items() if v < tol]


def check_connection(params: NatanzonParams, backend, p: float, m: float, E: float,
                     q: float | None = None, nu: int | None = None, functions=None,
                     variant: str = "corrected") -> dict:
    """Residual of (Q - q) f - G (E - H) f with G read off Q's d_r^2 coefficient.

    q defaults to (delta^2 - 1)/4 at E; with ``nu`` it is (m - nu - 1/2)^2 - 1/4.
    """
    if q is None:
        if nu is not None:
            q = (m - nu - 0.5) ** 2 - 0.25
        else:
            q = 0.25 * (-params.c1 * E + params.h1 + 1.0 - 1.0)
    builders = so21_builders(p, variant)
    qop = builders["Q"](m)
    G = qop.c2(backend.geometry) if isinstance(backend, SpectralBackend) else [qop.c2(g) for g in backend.geometries]
    V = backend.potential(params)
    functions = functions if functions is not None else test_functions(default_window(params))
    worst = 0.0
    lap = ReducedOperator("d2", _const(1.0), _zero, _zero)
    for fn in functions:
        f = backend.function(fn)
        qf = backend.apply(qop, f)
        f2 = backend.apply(lap, f)
        ev = backend.combine([E, -1.0], [f, backend.multiply(V, f)])
        rhs = backend.multiply(G, backend.combine([1.0, 1.0], [f2, ev]))
        total = backend.combine([1.0, -q, -1.0], [qf, f, rhs])
        worst = max(worst, relative_residual(backend, total, [qf, backend.combine([q], [f]), rhs]))
    g_vals = backend.values(G) if isinstance(backend, JetBackend) else np.asarray(G)
    return {"residual": worst, "q": q, "r": _points(backend).tolist(), "G": np.real(g_vals).tolist()}


def _points(backend) -> np.ndarray:
    return backend.points if isinstance(backend, JetBackend) else backend.r


def check_e2(k: float, m: float, points=None, variant: str = "corrected") -> dict:
    """e(2) relations of the polar realization and the asymptotic basis actions on exp(+-ikr)."""
    points = np.linspace(1.0, 10.0, 7) if points is None else np.asarray(points, dtype=float)
    backend = JetBackend(points, None, order=8)
    pol = e2_builders(variant)
    asy = e2_asymptotic_builders()
    out = {"[Lz,P+]-P+": 0.0, "[Lz,P-]+P-": 0.0, "[P+,P-]": 0.0, "P+P- - P2": 0.0,
           "[P2,P+]": 0.0, "P+inf": 0.0, "P-inf": 0.0, "P2inf": 0.0, "Lzinf": 0.0}
    for sgn in (1, -1):
        f = backend.function(lambda r: exp(sgn * 1j * k * r))
        a = act(backend, pol, ["Lz", "P+"], m, f)
        b = act(backend, pol, ["P+", "Lz"], m, f)
        pp = act(backend, pol, "P+", m, f)
        out["[Lz,P+]-P+"] = max(out["[Lz,P+]-P+"], relative_residual(
            backend, backend.combine([1, -1, -1], [a, b, pp]), [a, b, pp]))
        a = act(backend, pol, ["Lz", "P-"], m, f)
        b = act(backend, pol, ["P-", "Lz"], m, f)
        pmn = act(backend, pol, "P-", m, f)
        out["[Lz,P-]+P-"] = max(out["[Lz,P-]+P-"], relative_residual(
            backend, backend.combine([1, -1, 1], [a, b, pmn]), [a, b, pmn]))
        a = act(backend, pol, ["P+", "P-"], m, f)
        b = act(backend, pol, ["P-", "P+"], m, f)
        out["[P+,P-]"] = max(out["[P+,P-]"], relative_residual(backend, backend.combine([1, -1], [a, b]), [a, b]))
        p2 = act(backend, pol, "P2", m, f)
        out["P+P- - P2"] = max(out["P+P- - P2"], relative_residual(backend, backend.combine([1, -1], [a, p2]), [a, p2]))
        a = act(backend, pol, ["P2", "P+"], m, f)
        b = act(backend, pol, ["P+", "P2"], m, f)
        out["[P2,P+]"] = max(out["[P2,P+]"], relative_residual(backend, backend.combine([1, -1], [a, b]), [a, b]))
        # asymptotic generators on |+-k, m>
        for name, expect in (("P+", sgn * k), ("P-", sgn * k)):
            got = act(backend, asy, name, m, f)
            key = name + "inf"
            out[key] = max(out[key], relative_residual(
                backend, backend.combine([1, -expect], [got, f]), [got, backend.combine([expect], [f])]))
        got = act(backend, asy, "P2", m, f)
        out["P2inf"] = max(out["P2inf"], relative_residual(
            backend, backend.combine([1, -k * k], [got, f]), [got, backend.combine([k * k], [f])]))
        got = act(backend, asy, "Lz", m, f)
        out["Lzinf"] = max(out["Lzinf"], relative_residual(
            backend, backend.combine([1, -m], [got, f]), [got, backend.combine([m], [f])]))
    return out


def check_euclidean_expansion(params: NatanzonParams, k: float, m: float, f_scale: float = 1.0,
                              gamma: tuple[float, float] = (0.0, 0.0), points=None) -> float:
    """max |J+(asymptotic) phi - J+(e(2) expansion) phi| / |phi| over phi = exp(+-ikr).

    The expansion uses f(k) = f_scale * k sqrt(c1)/2 and phases ``gamma``;
    the unperturbed coefficients give zero up to rounding.
    """
    points = np.linspace(1.0, 10.0, 5) if points is None else np.asarray(points, dtype=float)
    backend = JetBackend(points, None, order=6)
    asy = so21_asymptotic_builders(params.c1)
    f_k = f_scale * 0.5 * k * math.sqrt(params.c1)
    worst = 0.0
    for sgn, gam in ((1, gamma[0]), (-1, gamma[1])):
        phi = backend.function(lambda r: exp(sgn * 1j * k * r))
        lhs = act(backend, asy, "J+", m, phi)
        rhs = backend.apply(expanded_raising_builder(sgn, k, f_k, gam)(m), phi)
        diff = np.abs(backend.values(backend.combine([1, -1], [lhs, rhs])))
        worst = max(worst, float(np.max(diff / np.abs(backend.values(phi)))))
    return worst


def backend_agreement(params: NatanzonParams, cov: ChangeOfVariable, p: float, m: float,
                      window=None, n: int = 256, functions=None) -> float:
    """Largest relative gap between jet and collocation results for J+, J- and Q."""
    window = default_window(params) if window is None else window
    colloc = SpectralBackend(window, cov, n)
    idx = np.arange(n // 8, n - n // 8, max(1, n // 24))
    jet = JetBackend(colloc.r[idx], cov)
    builders = so21_builders(p)
    functions = test_functions(window) if functions is None else functions
    worst = 0.0
    for fn in functions:
        fs, fj = colloc.function(fn), jet.function(fn)
        for name in ("J+", "J-", "Q"):
            a = act(colloc, builders, name, m, fs)[idx]
            b = jet.values(act(jet, builders, name, m, fj))
            scale = np.max(np.abs(act(colloc, builders, name, m, fs)))
            worst = max(worst, float(np.max(np.abs(a - b)) / scale))
    return worst


def algebra_report(params: NatanzonParams, p: float, m: float, E: float | None = None,
                   q: float | None = None, k: float = 1.0, backend: str = "spectral",
                   n: int = 256, cov: ChangeOfVariable | None = None) -> dict:
    """Every algebraic check at one (p, m), collected for reporting."""
    cov = ChangeOfVariable(params) if cov is None else cov
    window = default_window(params)
    fns = test_functions(window)
    if backend == "spectral":
        be = SpectralBackend(window, cov, n)
    elif backend == "jet":
        be = JetBackend(np.linspace(window[0], window[1], 9), cov)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    closure = check_so21_closure(so21_builders(p), be, fns, m)
    report = {
        "backend": backend,
        "window": list(window),
        "p": p,
        "m": m,
        "so21": closure,
        "casimir_convention": casimir_winner(closure),
        "so21_asymptotic": check_so21_closure(
            so21_asymptotic_builders(params.c1), JetBackend(np.linspace(*window, 5)), fns, m),
        "e2": check_e2(k, m),
        "euclidean_expansion": check_euclidean_expansion(params, k, m),
        "backend_agreement": backend_agreement(params, cov, p, m, window, n, fns),
    }
    if E is not None:
        conn = check_connection(params, be, p, m, E, q=q, functions=fns)
        report["connection"] = {"E": E, "q": conn["q"], "residual": conn["residual"]}
    return report
