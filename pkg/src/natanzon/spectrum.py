"""Bound-state energies from the algebraic quantization condition.

A level nu sits where alpha - beta - delta = 2 nu + 1, with

    alpha = sqrt(-a E + f + 1), beta = sqrt(-c0 E + h0 + 1),
    delta = sqrt(-c1 E + h1 + 1).
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass

import numpy as np

from .brackets import MultipleRootsError, offsets, refine, sign_brackets
from .params import DomainError, NatanzonParams

log = logging.getLogger(__name__)

SCAN_LIMIT = 1e6


@dataclass(frozen=True)
class BoundState:
    nu: int
    E: float
    alpha: float
    beta: float
    delta: float
    m: float
    p: float
    q: float

    def as_dict(self) -> dict:
        return asdict(self)


def radicands(params: NatanzonParams, E):
    p = params
    return (-p.a * E + p.f + 1.0, -p.c0 * E + p.h0 + 1.0, -p.c1 * E + p.h1 + 1.0)


def quantization_residual(params: NatanzonParams, E: float, nu: int) -> float:
    """alpha - beta - delta - (2 nu + 1) at energy E."""
    ra, rb, rd = radicands(params, E)
    for name, val in (("alpha", ra), ("beta", rb), ("delta", rd)):
        if val < 0:
            raise DomainError(f"{name} radicand is negative ({val:.17g}) at E={E:.17g}")
    return math.sqrt(ra) - math.sqrt(rb) - math.sqrt(rd) - (2 * nu + 1)


def _residual_clipped(params, E, nu):
    ra, rb, rd = radicands(params, E)
    return (np.sqrt(np.maximum(ra, 0.0)) - np.sqrt(np.maximum(rb, 0.0))
            - np.sqrt(np.maximum(rd, 0.0)) - (2 * nu + 1))


def energy_window(params: NatanzonParams) -> tuple[float, float]:
    """Range of E where all three radicands are non-negative, capped at threshold."""
    p = params
    upper = [p.threshold]
    lower = [-math.inf]
    if p.a > 0:
        upper.append((p.f + 1.0) / p.a)
    elif p.a < 0:
        lower.append((p.f + 1.0) / p.a)
    if p.c0 > 0:
        upper.append((p.h0 + 1.0) / p.c0)
    elif p.h0 + 1.0 < 0:
        return math.nan, math.nan
    if p.a == 0 and p.f + 1.0 < 0:
        return math.nan, math.nan
    return max(lower), min(upper)


def _scan_span(fn, e_up: float, e_low: float) -> float:
    if math.isfinite(e_low):
        return e_up - e_low
    span = max(1.0, abs(e_up))
    while fn(e_up - span) >= 0 and abs(e_up - span) < SCAN_LIMIT:
        span *= 2.0
    return min(span, SCAN_LIMIT + e_up) if e_up - span < -SCAN_LIMIT else span


def level_brackets(params: NatanzonParams, nu: int) -> list[tuple[float, float]]:
    e_low, e_up = energy_window(params)
    if not (e_low < e_up):
        return []

    def fn(E):
        return _residual_clipped(params, E, nu)

    span = _scan_span(fn, e_up, e_low)
    E = e_up - offsets(span)[::-1]
    E = E[E >= e_low] if math.isfinite(e_low) else E
    res = fn(E)
    brackets = sign_brackets(E, res)
    if res[-1] == 0:
        # a root exactly at the top of the window is not a bound level
        brackets = [b for b in brackets if b[1] != E[-1]]
    return brackets


def make_state(params: NatanzonParams, nu: int, E: float) -> BoundState:
    ra, rb, rd = radicands(params, E)
    alpha, beta, delta = (math.sqrt(max(v, 0.0)) for v in (ra, rb, rd))
    return BoundState(nu=nu, E=E, alpha=alpha, beta=beta, delta=delta,
                      m=0.5 * (alpha - beta), p=0.5 * (alpha + beta),
                      q=0.25 * (delta * delta - 1.0))


def solve_level(params: NatanzonParams, nu: int) -> BoundState | None:
    """Level ``nu`` or None when the quantization condition has no root.

    Raises MultipleRootsError if the residual changes sign more than once.
    """
    brackets = level_brackets(params, nu)
    if not brackets:
        return None
    if len(brackets) > 1:
        raise MultipleRootsError(f"nu={nu}", brackets)
    E = refine(lambda e: float(_residual_clipped(params, e, nu)), *brackets[0])
    if E >= params.threshold:
        return None
    res = float(_residual_clipped(params, E, nu))
    if abs(res) > 1e-12:
        log.warning("level nu=%d converged with residual %.3g", nu, res)
    return make_state(params, nu, E)


def enumerate_levels(params: NatanzonParams, max_levels: int = 10000) -> list[BoundState]:
    levels = []
    for nu in range(max_levels):
        state = solve_level(params, nu)
        if state is None:
            break
        levels.append(state)
    return levels


def h_of_eta(params: NatanzonParams, eta):
    """Energy as a function of eta = q + 1/4: -4 eta / c1 + (h1 + 1)/c1."""
    return -4.0 * eta / params.c1 + (params.h1 + 1.0) / params.c1
