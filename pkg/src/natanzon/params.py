"""Natanzon parameter sets and their validity checks."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

FIELDS = ("f", "h0", "h1", "a", "c0", "c1")

DomainKind = Literal["half-line", "full-line"]


class DomainError(ValueError):
    """Argument outside the domain where a formula is defined."""


@dataclass(frozen=True)
class NatanzonParams:
    """The six Natanzon parameters plus the derived ``tau`` and ``delta_disc``.

    Units: hbar = 2m = 1, so energies are 1/length**2 and ``c0``, ``c1`` are
    length**2.
    """

    f: float
    h0: float
    h1: float
    a: float
    c0: float
    c1: float
    tau: float = field(init=False)
    delta_disc: float = field(init=False)

    def __post_init__(self):
        for name in FIELDS:
            object.__setattr__(self, name, float(getattr(self, name)))
        tau = self.c1 - self.c0 - self.a
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "delta_disc", tau * tau - 4.0 * self.a * self.c0)

    @property
    def domain_kind(self) -> DomainKind:
        return "half-line" if self.c0 == 0.0 else "full-line"

    @property
    def threshold(self) -> float:
        """Asymptotic value of the potential, (h1 + 1)/c1."""
        return (self.h1 + 1.0) / self.c1

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in FIELDS}

    def replace(self, **changes: float) -> NatanzonParams:
        values = self.as_dict()
        values.update(changes)
        return NatanzonParams(**values)


def derive(f: float, h0: float, h1: float, a: float, c0: float, c1: float) -> NatanzonParams:
    return NatanzonParams(f=f, h0=h0, h1=h1, a=a, c0=c0, c1=c1)


def from_mapping(data: dict) -> NatanzonParams:
    """Build parameters from a JSON-style mapping with exactly the six keys."""
    unknown = set(data) - set(FIELDS)
    if unknown:
        raise ValueError(f"unknown parameter keys: {sorted(unknown)}")
    missing = [k for k in FIELDS if k not in data]
    if missing:
        raise ValueError(f"missing parameter keys: {missing}")
    values = {}
    for k in FIELDS:
        v = data[k]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ValueError(f"parameter {k!r} must be a number, got {v!r}")
        values[k] = float(v)
    return NatanzonParams(**values)


def load(source: str) -> NatanzonParams:
    """Parse inline JSON, or ``@path`` pointing at a JSON file."""
    if source.startswith("@"):
        text = Path(source[1:]).read_text(encoding="utf-8")
    else:
        text = source
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError("parameters must be a JSON object")
    return from_mapping(data)


def r_poly(params: NatanzonParams, z: float) -> float:
    """R(z) = a z^2 + tau z + c0 on [0, 1]."""
    if not 0.0 <= z <= 1.0:
        raise DomainError(f"z={z!r} outside [0, 1]")
    if z == 1.0:
        return params.c1
    return (params.a * z + params.tau) * z + params.c0


def r_min_open(params: NatanzonParams) -> tuple[float, float]:
    """Infimum of R over the open interval (0, 1) and where it is attained.

    Uses the vertex of the quadratic when it is interior, otherwise the
    endpoint limits.
    """
    a, tau, c0 = params.a, params.tau, params.c0
    candidates = [(c0, 0.0), (params.c1, 1.0)]
    if a != 0.0:
        zv = -tau / (2.0 * a)
        if 0.0 < zv < 1.0:
            candidates.append(((a * zv + tau) * zv + c0, zv))
    return min(candidates)


@dataclass
class ValidityReport:
    mode: str
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {"mode": self.mode, "ok": self.ok, "violations": list(self.violations)}


def validate(params: NatanzonParams, mode: str = "bound") -> ValidityReport:
    """Check the reality and positivity conditions; never raises on bad values."""
    if mode not in ("bound", "scattering"):
        raise ValueError(f"unknown mode {mode!r}")
    violations = []
    values = params.as_dict()
    bad = [k for k, v in values.items() if not math.isfinite(v)]
    if bad:
        return ValidityReport(mode, [f"non-finite parameters: {bad}"])
    if not params.c1 > 0.0:
        violations.append("c1 must be positive")
    if params.c0 < 0.0:
        violations.append("c0 must be non-negative")
    if not violations:
        rmin, zmin = r_min_open(params)
        if rmin < 0.0 or (rmin == 0.0 and 0.0 < zmin < 1.0):
            violations.append(f"R(z) not positive on (0,1): R({zmin:.17g}) = {rmin:.17g}")
        elif params.c0 == 0.0 and (params.tau < 0.0 or (params.tau == 0.0 and params.a <= 0.0)):
            # R(0) = 0: the sign just inside z = 0 comes from the linear and quadratic terms
            violations.append("R(z) not positive on (0,1): negative just above z = 0")
    if mode == "scattering" and params.h1 != -1.0:
        violations.append("scattering mode requires h1 = -1")
    return ValidityReport(mode, violations)
