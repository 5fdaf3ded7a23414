"""Command-line frontend: sweeps, phase diagrams, critical points, Rabi check.

Subcommands: roots | sweep | phase-diagram | turning-point | sp-closure |
rabi-compare.  Data goes to stdout or --output as CSV or JSON, diagnostics
to stderr.  Exit codes: 0 success, 2 invalid input, 3 solver failure.
Numeric output is fixed at 9 significant digits and runs are deterministic;
set OPTODICKE_WORKERS=<n> to evaluate grid points in a process pool (the
output bytes do not depend on the worker count).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from functools import partial

import numpy as np

from . import diagram, rabi
from .model import ModelParams, SpinBranch, observables_at
from .solver import (
    DegenerateBracket,
    NotFound,
    SolverConfig,
    closure_estimate,
    critical_coupling,
    find_roots,
    sp_closure,
    turning_point,
)

UNITS_NOTE = "all quantities in units of omega_a"

_RANGE_SEP = ":"


class ConfigError(Exception):
    """Invalid CLI/config input; mapped to exit code 2."""


@dataclass
class RunConfig:
    """Effective settings after merging defaults, config file and flags."""

    omega: float = 1.0
    omega_a: float = 1.0
    omega_b: float = 10.0
    n_atoms: int = 1
    zeta: str = "0"
    g: str = "0"
    n_max: int = 300
    width_tol: float = 1e-3
    tol_root: float = 1e-10
    tol_curv: float = 1e-9
    scan_points: int = 2000
    tol_gt: float = 1e-6
    output: str = "-"
    format: str = "csv"


_CONFIG_KEYS = {f.name for f in fields(RunConfig)}
_NUMERIC_KEYS = _CONFIG_KEYS - {"zeta", "g", "output", "format", "n_atoms", "scan_points", "n_max"}
_INT_KEYS = {"n_atoms", "scan_points", "n_max"}


def load_config(path: str) -> dict:
    """Read a JSON config file; unknown keys and malformed values are rejected."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path!r} must hold a JSON object")
    out: dict = {}
    for key, value in raw.items():
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r} in {path!r}")
        out[key] = _coerce(key, value, where=f"{path}:{key}")
    return out


def _coerce(key: str, value, where: str):
    try:
        if key in _INT_KEYS:
            if int(value) != float(value):
                raise ValueError("not an integer")
            return int(value)
        if key in _NUMERIC_KEYS:
            return float(value)
        if key == "format":
            text = str(value)
            if text not in ("csv", "json"):
                raise ValueError("format must be 'csv' or 'json'")
            return text
        return str(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {where}: {exc}") from exc


def _parse_scalar(text: str, name: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"--{name} expects a number, got {text!r}") from exc


def _parse_range(text: str, name: str) -> np.ndarray:
    """Inclusive grid 'min:max:count'; a bare number is a one-point grid."""
    if _RANGE_SEP not in text:
        return np.array([_parse_scalar(text, name)])
    parts = text.split(_RANGE_SEP)
    if len(parts) != 3:
        raise ConfigError(f"--{name} expects min:max:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"--{name} expects min:max:count, got {text!r}") from exc
    if count < 2 or not lo < hi:
        raise ConfigError(f"--{name}: need min < max and count >= 2, got {text!r}")
    return np.linspace(lo, hi, count)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="optodicke",
        description="Variational phases of atoms in an optomechanical cavity",
    )
    common = argparse.ArgumentParser(add_help=False)
    for flag, kw in (
        ("--omega", dict(type=float, help="cavity frequency (default 1)")),
        ("--omega-a", dict(type=float, dest="omega_a", help="atomic frequency (default 1)")),
        ("--omega-b", dict(type=float, dest="omega_b", help="oscillator frequency (default 10)")),
        ("--n-atoms", dict(type=int, dest="n_atoms", help="atom count N (default 1)")),
        ("--tol-root", dict(type=float, dest="tol_root")),
        ("--tol-curv", dict(type=float, dest="tol_curv")),
        ("--scan-points", dict(type=int, dest="scan_points")),
        ("--tol-gt", dict(type=float, dest="tol_gt")),
        ("--config", dict(type=str, help="JSON config file; flags override it")),
        ("--output", dict(type=str, short="-o", help="output path, '-' for stdout")),
        ("--format", dict(type=str, choices=["csv", "json"])),
    ):
        short = kw.pop("short", None)
        names = (short, flag) if short else (flag,)
        common.add_argument(*names, default=None, **kw)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("roots", parents=[common],
                       help="stationary points of both branches at one (g, zeta)")
    p.add_argument("--g", type=str, default=None)
    p.add_argument("--zeta", type=str, default=None)

    p = sub.add_parser("sweep", parents=[common],
                       help="ground state and coexisting branches over a g grid")
    p.add_argument("--g", type=str, default=None, help="grid min:max:count")
    p.add_argument("--zeta", type=str, default=None)

    p = sub.add_parser("phase-diagram", parents=[common],
                       help="phase labels over a (g, zeta) grid, with boundaries")
    p.add_argument("--g", type=str, default=None, help="grid min:max:count")
    p.add_argument("--zeta", type=str, default=None, help="grid min:max:count")

    p = sub.add_parser("turning-point", parents=[common],
                       help="fold coupling g_t where the superradiant roots merge")
    p.add_argument("--zeta", type=str, default=None)

    p = sub.add_parser("sp-closure", parents=[common],
                       help="coupling zeta_star closing the superradiant window")
    p.add_argument("--width-tol", type=float, dest="width_tol", default=None)

    p = sub.add_parser("rabi-compare", parents=[common],
                       help="variational energy vs exact diagonalization (N=1, zeta=0)")
    p.add_argument("--g", type=str, default=None, help="grid min:max:count")
    p.add_argument("--n-max", type=int, dest="n_max", default=None)
    p.add_argument("--detuning", type=str, choices=sorted(rabi.DETUNING_PRESETS),
                   default=None, help="cavity-frequency preset; --omega overrides")

    return parser


def _effective(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        for key, value in load_config(args.config).items():
            setattr(cfg, key, value)
    if getattr(args, "detuning", None) is not None and getattr(args, "omega", None) is None:
        args.omega = rabi.DETUNING_PRESETS[args.detuning]
    for key in _CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, _coerce(key, value, where=f"--{key.replace('_', '-')}"))
    return cfg


def _model_params(cfg: RunConfig, g: float, zeta: float) -> ModelParams:
    try:
        return ModelParams(omega=cfg.omega, omega_a=cfg.omega_a, omega_b=cfg.omega_b,
                           g=g, zeta=zeta, n_atoms=cfg.n_atoms)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _solver_config(cfg: RunConfig) -> SolverConfig:
    try:
        return SolverConfig(tol_root=cfg.tol_root, tol_curv=cfg.tol_curv,
                            scan_points=cfg.scan_points, tol_gt=cfg.tol_gt)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _mapper():
    workers = int(os.environ.get("OPTODICKE_WORKERS", "1") or "1")
    if workers <= 1:
        return None
    return ProcessPoolExecutor(max_workers=workers)


def _map_rows(fn, values):
    pool = _mapper()
    if pool is None:
        return [fn(v) for v in values]
    with pool:
        return list(pool.map(fn, values, chunksize=8))


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def _quantize(value):
    if isinstance(value, float):
        return float(f"{value:.9g}")
    return value


def _emit(cfg: RunConfig, fieldnames: list[str], rows: list[dict]) -> None:
    if cfg.format == "json":
        payload = {
            "units": UNITS_NOTE,
            "rows": [{k: _quantize(row.get(k)) for k in fieldnames} for row in rows],
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buf = io.StringIO()
        buf.write(f"# {UNITS_NOTE}\r\n")
        writer = csv.DictWriter(buf, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _fmt(row.get(k)) for k in fieldnames})
        text = buf.getvalue()
    if cfg.output == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _cmd_roots(cfg: RunConfig) -> tuple[list[str], list[dict]]:
    params = _model_params(cfg, _parse_scalar(cfg.g, "g"), _parse_scalar(cfg.zeta, "zeta"))
    solver_cfg = _solver_config(cfg)
    rows = []
    for branch in SpinBranch:
        rs = find_roots(params, branch, solver_cfg)
        for point in (rs.zero_point, *rs.roots):
            obs = observables_at(params, point)
            rows.append({
                "branch": branch.name.lower(),
                "gamma_bar": point.amplitude,
                "np": obs.n_p,
                "delta_na": obs.delta_n_a,
                "nb": obs.n_b,
                "energy": point.energy,
                "curvature": point.curvature,
                "stability": point.stability.value,
            })
    names = ["branch", "gamma_bar", "np", "delta_na", "nb", "energy", "curvature", "stability"]
    return names, rows


def _sweep_fieldnames() -> list[str]:
    names = ["g", "phase", "np_ground", "dna_ground", "nb_ground", "eps_ground"]
    for tag in diagram.BRANCH_TAGS:
        names += [f"np_{tag}", f"eps_{tag}", f"stability_{tag}"]
    return names


def _sweep_row_dict(row: diagram.SweepRow) -> dict:
    out = {
        "g": row.g,
        "phase": row.phase.value,
        "np_ground": row.ground.n_p,
        "dna_ground": row.ground.delta_n_a,
        "nb_ground": row.ground.n_b,
        "eps_ground": row.ground.energy,
    }
    for entry in row.branches:
        out[f"np_{entry.tag}"] = entry.observables.n_p
        out[f"eps_{entry.tag}"] = entry.observables.energy
        out[f"stability_{entry.tag}"] = entry.stability.value
    return out


def _cmd_sweep(cfg: RunConfig) -> tuple[list[str], list[dict]]:
    grid = _parse_range(cfg.g, "g")
    try:
        spec = diagram.SweepSpec(omega=cfg.omega, omega_a=cfg.omega_a, omega_b=cfg.omega_b,
                                 n_atoms=cfg.n_atoms, zeta=_parse_scalar(cfg.zeta, "zeta"),
                                 g_min=float(grid[0]), g_max=float(grid[-1]),
                                 g_steps=len(grid))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    rows = _map_rows(partial(diagram.sweep_row, spec, config=_solver_config(cfg)), grid)
    return _sweep_fieldnames(), [_sweep_row_dict(r) for r in rows]


def _cmd_phase_diagram(cfg: RunConfig) -> tuple[list[str], list[dict]]:
    g_grid = _parse_range(cfg.g, "g")
    z_grid = _parse_range(cfg.zeta, "zeta")
    try:
        spec = diagram.GridSpec(omega=cfg.omega, omega_a=cfg.omega_a, omega_b=cfg.omega_b,
                                n_atoms=cfg.n_atoms,
                                g_min=float(g_grid[0]), g_max=float(g_grid[-1]),
                                g_steps=len(g_grid),
                                zeta_min=float(z_grid[0]), zeta_max=float(z_grid[-1]),
                                zeta_steps=len(z_grid))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    results = _map_rows(partial(diagram.grid_row, spec, config=_solver_config(cfg)),
                        spec.zeta_grid())
    rows: list[dict] = []
    for cells, _ in results:
        rows += [{"kind": "cell", "zeta": c.zeta, "g": c.g, "phase": c.phase.value,
                  "phase_above": None} for c in cells]
    for _, bounds in results:
        rows += [{"kind": "boundary", "zeta": b.zeta, "g": b.g_refined,
                  "phase": b.phase_below.value, "phase_above": b.phase_above.value}
                 for b in bounds]
    return ["kind", "zeta", "g", "phase", "phase_above"], rows


def _cmd_turning_point(cfg: RunConfig) -> tuple[list[str], list[dict]]:
    zeta = _parse_scalar(cfg.zeta, "zeta")
    if zeta < 0.0:
        raise ConfigError("zeta must be >= 0")
    params = _model_params(cfg, 0.0, zeta)
    g_t = turning_point(params, zeta=zeta, config=_solver_config(cfg))
    row = {"zeta": zeta, "g_c": critical_coupling(params), "g_t": g_t}
    return ["zeta", "g_c", "g_t"], [row]


def _cmd_sp_closure(cfg: RunConfig) -> tuple[list[str], list[dict]]:
    params = _model_params(cfg, 0.0, 0.0)
    star = sp_closure(params, _solver_config(cfg), width_tol=cfg.width_tol)
    row = {
        "zeta_star": star,
        "zeta_estimate": closure_estimate(params),
        "width_tol": cfg.width_tol,
        "g_c": critical_coupling(params),
    }
    return ["zeta_star", "zeta_estimate", "width_tol", "g_c"], [row]


def _cmd_rabi_compare(cfg: RunConfig) -> tuple[list[str], list[dict]]:
    grid = _parse_range(cfg.g, "g")
    try:
        params = rabi.RabiParams(omega=cfg.omega, omega_a=cfg.omega_a, g=0.0)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if cfg.n_max < 2:
        raise ConfigError("n_max must be >= 2")
    rows = _map_rows(partial(rabi.compare_point, params, n_max=cfg.n_max), grid)
    return (["g", "energy_ed", "energy_variational", "deviation"],
            [{"g": r.g, "energy_ed": r.energy_ed, "energy_variational": r.energy_variational,
              "deviation": r.deviation} for r in rows])


_COMMANDS = {
    "roots": _cmd_roots,
    "sweep": _cmd_sweep,
    "phase-diagram": _cmd_phase_diagram,
    "turning-point": _cmd_turning_point,
    "sp-closure": _cmd_sp_closure,
    "rabi-compare": _cmd_rabi_compare,
}


def run(argv=None) -> int:
    """Entry point returning the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        cfg = _effective(args)
        fieldnames, rows = _COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"optodicke: invalid input: {exc}", file=sys.stderr)
        return 2
    except (DegenerateBracket, NotFound, rabi.ConvergenceFailure) as exc:
        print(f"optodicke: solver failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3

    try:
        _emit(cfg, fieldnames, rows)
    except OSError as exc:
        print(f"optodicke: cannot write output: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
