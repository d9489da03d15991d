"""Scan-and-bisect root location shared by the spectrum and pole solvers."""

from __future__ import annotations

import numpy as np
from scipy.optimize import brentq


class MultipleRootsError(RuntimeError):
    """More than one sign change where a unique root was expected."""

    def __init__(self, label: str, brackets: list[tuple[float, float]]):
        self.label = label
        self.brackets = brackets
        spans = ", ".join(f"[{lo:.17g}, {hi:.17g}]" for lo, hi in brackets)
        super().__init__(f"{label}: {len(brackets)} sign changes found in {spans}")


def offsets(span: float, n: int = 3000) -> np.ndarray:
    """Scan offsets in [0, span], dense both near 0 and uniformly across."""
    d = np.concatenate(([0.0], np.geomspace(span * 1e-13, span, n), np.linspace(0.0, span, n)[1:]))
    return np.unique(d)


def sign_brackets(xs: np.ndarray, ys: np.ndarray) -> list[tuple[float, float]]:
    """Adjacent pairs of ``xs`` across which ``ys`` changes sign (or hits zero)."""
    s = np.sign(ys)
    out = []
    for i in range(len(xs) - 1):
        if s[i] == 0 and i > 0:
            continue
        if s[i] * s[i + 1] < 0 or (s[i + 1] == 0):
            out.append((float(xs[i]), float(xs[i + 1])))
    return out


def refine(fn, lo: float, hi: float) -> float:
    flo, fhi = fn(lo), fn(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    return brentq(fn, lo, hi, xtol=1e-300, rtol=8.9e-16, maxiter=500)
