"""Command-line front end: ``natanzon <subcommand> --params ... [options]``.

Exit codes: 0 success, 1 invalid parameters or out-of-domain request,
2 numerical diagnostic (ambiguous root bracket, grid too coarse, window
miss), 3 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from . import algebra, oracle, params as params_mod, spectrum
from .brackets import MultipleRootsError
from .mapping import ChangeOfVariable
from .params import DomainError, NatanzonParams
from .potential import PotentialInstance
from .smatrix import PoleProximityWarning, find_poles, phase_shift_grid

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class ValidationFailure(Exception):
    pass


# -- number formatting ---------------------------------------------------------

def fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def _plain(obj):
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    return obj


def to_json(obj, indent: int = 2, level: int = 0) -> str:
    """JSON text with every float written to 17 significant digits."""
    obj = _plain(obj)
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + to_json(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    writer = csv.writer(buf, lineterminator="\n")
    header = list(rows[0])
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt_float(v) if isinstance(v, (float, np.floating)) else v for v in
                         (_plain(row[h]) for h in header)])
    return buf.getvalue()


# -- configuration -------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    lo: float
    hi: float
    count: int

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)


def parse_grid(text: str) -> GridSpec:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--grid expects min:max:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"--grid: {exc}") from None
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise UsageError("--grid requires finite min < max")
    if count < 2:
        raise UsageError("--grid requires count >= 2")
    return GridSpec(lo, hi, count)


def parse_mode(text: str):
    if text == "physical":
        return "physical"
    if text.startswith("fixed:"):
        try:
            return float(text[6:])
        except ValueError:
            pass
    raise UsageError(f"--mode expects fixed:<m> or physical, got {text!r}")


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: NatanzonParams
    grid: GridSpec | None
    mode: object
    out: str | None
    fmt: str
    tolerance: float | None
    extra: dict


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="natanzon", description="Natanzon potential workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--params", required=True, help="inline JSON object or @file")
        p.add_argument("--grid", help="min:max:count")
        p.add_argument("--mode", default="fixed:0", help="fixed:<m> or physical")
        p.add_argument("--out", help="output path (default: standard output)")
        p.add_argument("--format", choices=("json", "csv"), default=None)
        p.add_argument("--tolerance", type=float, default=None)
        return p

    common("validate", "check parameter admissibility")
    common("map", "tabulate z(r) and dz/dr")
    common("potential", "tabulate V(r)")
    common("spectrum", "bound levels from the quantization condition")
    common("smatrix", "S-matrix on a k-grid")
    common("poles", "S-matrix poles on the bound-state axis")
    p = common("oracle-compare", "algebraic versus Numerov results")
    p.add_argument("--points", type=int, default=32768, help="largest Numerov grid")
    p = common("algebra-check", "operator-algebra residual report")
    p.add_argument("--p", type=float, default=None, help="generator parameter p")
    p.add_argument("--m", type=float, default=None, help="weight m")
    p.add_argument("--nu", type=int, default=0, help="level used for p, m, E when not given")
    p.add_argument("--k", type=float, default=1.0, help="wavenumber for the e(2) checks")
    p.add_argument("--backend", choices=("spectral", "jet"), default="spectral")
    return parser



def parse_args(argv) -> RunConfig:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code == 0:
            raise
        raise UsageError("invalid command line") from None
    grid = parse_grid(ns.grid) if ns.grid else None
    mode = parse_mode(ns.mode)
    if ns.tolerance is not None and not (ns.tolerance > 0 and math.isfinite(ns.tolerance)):
        raise UsageError("--tolerance must be positive")
    try:
        prm = params_mod.load(ns.params)
    except (ValueError, OSError) as exc:
        raise ValidationFailure(f"cannot read parameters: {exc}") from None
    extra = {k: v for k, v in vars(ns).items()
             if k not in ("command", "params", "grid", "mode", "out", "format", "tolerance")}
    return RunConfig(ns.command, prm, grid, mode, ns.out, ns.format or "", ns.tolerance, extra)


# -- subcommands ---------------------------------------------------------------

def _require(prm: NatanzonParams, mode: str):
    report = params_mod.validate(prm, mode)
    if not report.ok:
        raise ValidationFailure("; ".join(report.violations))


def cmd_validate(cfg: RunConfig):
    bound = params_mod.validate(cfg.params, "bound")
    scat = params_mod.validate(cfg.params, "scattering")
    out = {"params": cfg.params.as_dict(), "tau": cfg.params.tau, "delta": cfg.params.delta_disc,
           "bound": bound.as_dict(), "scattering": scat.as_dict()}
    if bound.ok:
        out["domain"] = cfg.params.domain_kind
    status = EXIT_OK if bound.ok else EXIT_INVALID
    if not bound.ok:
        print("validation failed: " + "; ".join(bound.violations), file=sys.stderr)
    return out, None, status


def _r_grid(cfg: RunConfig) -> np.ndarray:
    if cfg.grid is not None:
        return cfg.grid.values()
    s = math.sqrt(cfg.params.c1)
    lo = 0.01 * s if cfg.params.c0 == 0 else -5.0 * s
    return np.linspace(lo, 10.0 * s, 100)


def cmd_map(cfg: RunConfig):
    _require(cfg.params, "bound")
    cov = ChangeOfVariable(cfg.params)
    r = _r_grid(cfg)
    if cfg.params.c0 == 0 and np.any(r < 0):
        raise DomainError("half-line mapping requires r >= 0")
    z, w = cov.solve(r)
    dz = cov.dz_dr(r)
    rows = [{"r": float(a), "z": float(b), "dzdr": float(c)} for a, b, c in zip(r, z, dz)]
    return {"domain": cfg.params.domain_kind, "rows": rows}, rows, EXIT_OK


def cmd_potential(cfg: RunConfig):
    _require(cfg.params, "bound")
    pot = PotentialInstance(cfg.params)
    r = _r_grid(cfg)
    v = pot.v_of_r(r)
    rows = [{"r": float(a), "V": float(b)} for a, b in zip(r, v)]
    out = {"asymptotic_value": pot.asymptotic_value, "rows": rows}
    if cfg.params.c0 == 0:
        out["origin_coefficient"] = pot.origin_coefficient
        out["indicial_exponent"] = pot.indicial_exponent
    return out, rows, EXIT_OK


def cmd_spectrum(cfg: RunConfig):
    _require(cfg.params, "bound")
    rows = [s.as_dict() for s in spectrum.enumerate_levels(cfg.params)]
    return rows, rows, EXIT_OK


def _k_grid(cfg: RunConfig) -> np.ndarray:
    if cfg.grid is None:
        return np.linspace(0.05, 5.0, 100)
    return cfg.grid.values()


def cmd_smatrix(cfg: RunConfig):
    _require(cfg.params, "scattering")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", PoleProximityWarning)
        pts = phase_shift_grid(cfg.params, _k_grid(cfg), cfg.mode)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    rows = []
    for pt in pts:
        d = pt.as_dict()
        rows.append({"k": d["k"], "m_used": d["m_re"], "m_used_im": d["m_im"],
                     "re_S": d["re"], "im_S": d["im"], "phase": d["phase"]})
    return rows, rows, EXIT_OK


def cmd_poles(cfg: RunConfig):
    _require(cfg.params, "scattering")
    rows = [p.as_dict() for p in find_poles(cfg.params)]
    return rows, rows, EXIT_OK


def cmd_oracle_compare(cfg: RunConfig):
    _require(cfg.params, "scattering")
    if cfg.params.c0 != 0:
        raise DomainError("the Numerov oracle covers half-line families (c0 = 0) only")
    tol = cfg.tolerance if cfg.tolerance is not None else 1e-8
    pot = PotentialInstance(cfg.params)
    levels = spectrum.enumerate_levels(cfg.params)
    numeric = oracle.bound_energies_numeric(pot, tolerance=tol, max_points=cfg.extra["points"])
    table = []
    for i in range(max(len(levels), len(numeric.values))):
        ea = levels[i].E if i < len(levels) else None
        en = numeric.values[i] if i < len(numeric.values) else None
        table.append({"nu": i, "E_algebraic": ea, "E_numeric": en,
                      "dE": (en - ea) if ea is not None and en is not None else None})
    out = {"levels": table, "level_count_match": len(levels) == len(numeric.values),
           "bound_grid": list(numeric.grid), "bound_error_estimate": numeric.error_estimate}
    rows = table
    if cfg.grid is not None:
        k = cfg.grid.values()
        if np.any(k <= 0):
            raise DomainError("k-grid must be positive")
        num = oracle.phase_scan(pot, k)
        alg = phase_shift_grid(cfg.params, k, cfg.mode)
        # arg S is reported as is: its split into 2 delta depends on the omitted Delta factor
        phases = [{"k": float(kk), "delta_numeric": float(d), "arg_S": pt.phase}
                  for (kk, d), pt in zip(num.values, alg)]
        out["phases"] = phases
        out["phase_error_estimate"] = num.error_estimate
        rows = phases
    return out, rows, EXIT_OK


def cmd_algebra_check(cfg: RunConfig):
    _require(cfg.params, "bound")
    ex = cfg.extra
    levels = spectrum.enumerate_levels(cfg.params)
    state = levels[ex["nu"]] if ex["nu"] < len(levels) else None
    p = ex["p"] if ex["p"] is not None else (state.p if state else 1.0)
    m = ex["m"] if ex["m"] is not None else (state.m if state else 0.5)
    use_level = state is not None and ex["p"] is None and ex["m"] is None
    report = algebra.algebra_report(cfg.params, p, m, E=state.E if use_level else None,
                                    k=ex["k"], backend=ex["backend"])
    if cfg.tolerance is not None:
        report["casimir_convention"] = algebra.casimir_winner(report["so21"], cfg.tolerance)
    if use_level:
        conn = algebra.check_connection(
            cfg.params, algebra.JetBackend(np.linspace(*algebra.default_window(cfg.params), 9),
                                           ChangeOfVariable(cfg.params)), p, m, state.E)
        report["G_samples"] = [{"r": r, "G": g} for r, g in zip(conn["r"], conn["G"])]
    rows = [{"relation": k, "residual": v} for k, v in _flatten(report["so21"]).items()]
    return report, rows, EXIT_OK


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        if isinstance(v, dict):
            out.update(_flatten(v, prefix + k + "."))
        else:
            out[prefix + k] = v
    return out


COMMANDS = {
    "validate": cmd_validate,
    "map": cmd_map,
    "potential": cmd_potential,
    "spectrum": cmd_spectrum,
    "smatrix": cmd_smatrix,
    "poles": cmd_poles,
    "oracle-compare": cmd_oracle_compare,
    "algebra-check": cmd_algebra_check,
}

CSV_DEFAULT = {"map", "potential", "smatrix"}


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse_args(argv)
        payload, rows, status = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationFailure, DomainError) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (MultipleRootsError, oracle.OracleError) as exc:
        print(f"numerical diagnostic: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    fmt = cfg.fmt or ("csv" if cfg.command in CSV_DEFAULT else "json")
    if fmt == "csv":
        if rows is None:
            print("usage error: no tabular output for this subcommand", file=sys.stderr)
            return EXIT_USAGE
        text = to_csv(rows)
    else:
        text = to_json(payload) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def main() -> None:
    sys.exit(run())
