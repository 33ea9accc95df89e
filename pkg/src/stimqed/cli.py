"""Command-line interface: sweeps, lifetime curves, amplitude dumps, verify.

Exit codes: 0 success, 1 invalid input, 2 verify failure, 3 numerical
non-convergence. Output is CSV (12 significant digits, fixed column
order) or JSON mirroring the same columns; identical specs produce
byte-identical files. Sweep points fan out to worker processes; the
STIMQED_WORKERS environment variable caps the pool.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import analytic
from .core import (
    EmitterKind,
    NotConverged,
    QuadratureNotConverged,
    StimqedError,
    params_from_beta,
)
from .oracle import OracleConfig, evolve
from .outstate import Sector, amplitude_grid, reconstruct_probabilities
from .pulses import (
    Pulse,
    PulseShape,
    custom,
    exponential,
    exponential_f_closed,
    half_gaussian,
    overlap_f,
)

_SWEEP_COLUMNS = ("alpha", "p_rr", "p_ll", "p_rl", "loss", "f_factor", "method")
_LIFETIME_COLUMNS = ("alpha", "gamma_tau")
_AMPLITUDE_COLUMNS = ("x_c_minus_t", "x_d", "re", "im")
_TABLES = {
    "sweep": _SWEEP_COLUMNS,
    "lifetime": _LIFETIME_COLUMNS,
    "amplitudes": _AMPLITUDE_COLUMNS,
}


@dataclass(frozen=True)
class SweepSpec:
    """Fully resolved request for one CLI command."""

    command: str
    emitter: EmitterKind = EmitterKind.ATOM
    pulse_shape: str = "exponential"
    pulse_file: str | None = None
    alpha_min: float = 0.1
    alpha_max: float = 10.0
    alpha_steps: int = 25
    beta: float = 1.0
    omega: float = 0.0
    method: str = "analytic"
    out: str | None = None
    format: str = "csv"
    dx: float = 0.01
    horizon: float | None = None
    alpha: float | None = None
    sector: str = "ee"
    grid_extent: float = 10.0
    grid_step: float = 0.1


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    return "%.12g" % value


def render_csv(rows: list[dict], table: str) -> str:
    cols = _TABLES[table]
    lines = [",".join(cols)]
    lines.extend(",".join(_fmt(row[c]) for c in cols) for row in rows)
    return "\n".join(lines) + "\n"


def render_json(rows: list[dict], table: str) -> str:
    cols = _TABLES[table]
    return json.dumps([{c: row[c] for c in cols} for row in rows], indent=2) + "\n"


def load_pulse_file(path: str) -> Pulse:
    """Sampled pulse: header line `dx=<spacing>`, then one `re,im` line per
    grid point, leftmost sample first, last sample at x = 0."""
    lines = Path(path).read_text().strip().splitlines()
    if not lines or not lines[0].strip().startswith("dx="):
        raise ValueError("pulse file must start with a dx=<spacing> header")
    dx = float(lines[0].strip()[3:])
    vals = []
    for raw in lines[1:]:
        raw = raw.strip()
        if not raw:
            continue
        re_s, im_s = raw.split(",")
        vals.append(complex(float(re_s), float(im_s)))
    if len(vals) < 2:
        raise ValueError("pulse file needs at least two samples")
    return custom(np.array(vals), dx)


def _alpha_grid(spec: SweepSpec) -> np.ndarray:
    if spec.alpha_min <= 0.0:
        raise ValueError("alpha-min must be positive")
    if spec.alpha_max < spec.alpha_min:
        raise ValueError("alpha-max must be >= alpha-min")
    if spec.alpha_steps < 1:
        raise ValueError("alpha-steps must be >= 1")
    if spec.alpha_steps == 1:
        return np.array([spec.alpha_min])
    return np.logspace(
        math.log10(spec.alpha_min), math.log10(spec.alpha_max), spec.alpha_steps
    )


def _build_pulse(spec: SweepSpec, alpha: float) -> Pulse:
    if spec.pulse_shape == "exponential":
        return exponential(alpha, spec.omega)
    if spec.pulse_shape == "half-gaussian":
        return half_gaussian(alpha, spec.omega)
    return load_pulse_file(spec.pulse_file)


def _check_spec(spec: SweepSpec) -> None:
    if not 0.0 < spec.beta <= 1.0:
        raise ValueError("beta must be in (0, 1]")
    if spec.method not in ("analytic", "quadrature", "oracle"):
        raise ValueError(f"unknown method {spec.method!r}")
    if spec.pulse_shape == "custom" and spec.pulse_file is None:
        raise ValueError("custom pulse needs --pulse-file")
    if spec.method == "analytic":
        if spec.pulse_shape != "exponential":
            raise ValueError(
                "closed forms cover the exponential pulse only; "
                "use --method oracle for other shapes"
            )
        if spec.beta < 1.0:
            raise ValueError(
                "closed forms are lossless; use --method quadrature or oracle "
                "with --beta below 1"
            )
    if spec.method == "quadrature" and spec.emitter != EmitterKind.ATOM:
        raise ValueError("quadrature amplitudes describe the two-level emitter only")
    if spec.method == "oracle" and spec.emitter == EmitterKind.CLASSICAL_ANCILLA:
        raise ValueError("the classical baseline has no time-evolution route")
    if spec.pulse_shape == "custom" and spec.method != "oracle":
        raise ValueError("sampled pulses run through --method oracle")


def _sweep_row(task: tuple[SweepSpec, float]) -> dict:
    spec, alpha = task
    params = params_from_beta(spec.emitter, spec.beta, spec.omega)
    if spec.method == "analytic":
        probs = analytic.probabilities(spec.emitter, alpha)
        f_factor = exponential_f_closed(alpha)
    elif spec.method == "quadrature":
        probs, diag = reconstruct_probabilities(alpha, params)
        f_factor = diag["f"]
    else:
        pulse = _build_pulse(spec, alpha)
        probs, _ = evolve(
            OracleConfig(params, pulse, dx=spec.dx, horizon=spec.horizon)
        )
        f_factor = overlap_f(pulse, params)
    return {
        "alpha": alpha,
        "p_rr": probs.p_rr,
        "p_ll": probs.p_ll,
        "p_rl": probs.p_rl,
        "loss": probs.loss,
        "f_factor": f_factor,
        "method": spec.method,
    }


def _lifetime_row(task: tuple[SweepSpec, float]) -> dict:
    spec, alpha = task
    params = params_from_beta(spec.emitter, spec.beta, spec.omega)
    pulse = _build_pulse(spec, alpha)
    _, curve = evolve(OracleConfig(params, pulse, dx=spec.dx, horizon=spec.horizon))
    return {"alpha": alpha, "gamma_tau": curve.tau}


def _worker_count() -> int:
    env = os.environ.get("STIMQED_WORKERS", "")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _map_tasks(fn, tasks: list) -> list[dict]:
    workers = min(_worker_count(), len(tasks))
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))  # map preserves task order


def run_sweep(spec: SweepSpec) -> list[dict]:
    _check_spec(spec)
    if spec.pulse_shape == "custom":
        # a sampled pulse has no alpha to sweep; emit its single row
        return [_sweep_row((spec, math.nan))]
    alphas = _alpha_grid(spec)
    return _map_tasks(_sweep_row, [(spec, float(a)) for a in alphas])


def run_lifetime(spec: SweepSpec) -> list[dict]:
    _check_spec(spec)
    if spec.method != "oracle":
        raise ValueError("lifetimes come from the time-evolution route only")
    if spec.pulse_shape == "custom":
        return [_lifetime_row((spec, math.nan))]
    alphas = _alpha_grid(spec)
    return _map_tasks(_lifetime_row, [(spec, float(a)) for a in alphas])


def run_amplitudes(spec: SweepSpec) -> list[dict]:
    if spec.emitter != EmitterKind.ATOM:
        raise ValueError("amplitude grids describe the two-level emitter")
    if spec.alpha is None or spec.alpha <= 0.0:
        raise ValueError("amplitudes need a positive --alpha")
    if spec.grid_extent <= 0.0 or spec.grid_step <= 0.0:
        raise ValueError("grid extent and step must be positive")
    if not 0.0 < spec.beta <= 1.0:
        raise ValueError("beta must be in (0, 1]")
    sector = Sector(spec.sector)
    params = params_from_beta(spec.emitter, spec.beta, spec.omega)
    grid = amplitude_grid(sector, spec.alpha, params, spec.grid_extent, spec.grid_step)
    rows = []
    for i, xc in enumerate(grid.xc_minus_t):
        for j, xd in enumerate(grid.x_d):
            val = grid.values[i, j]
            rows.append(
                {
                    "x_c_minus_t": float(xc),
                    "x_d": float(xd),
                    "re": float(val.real),
                    "im": float(val.imag),
                }
            )
    return rows


def run_verify(stream=None) -> int:
    from .acceptance import format_line, run_all

    stream = stream or sys.stdout
    results = run_all()
    for res in results:
        print(format_line(res), file=stream)
    failed = [r for r in results if not r.passed]
    print(
        f"{len(results) - len(failed)}/{len(results)} criteria passed",
        file=stream,
    )
    return 2 if failed else 0


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 by default; 2 is reserved for verify failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_common(p: _Parser, lifetime: bool = False) -> None:
    emitters = ["atom", "cavity"] if lifetime else ["atom", "cavity", "classical"]
    p.add_argument("--emitter", choices=emitters, default="atom")
    p.add_argument(
        "--pulse", choices=["exponential", "half-gaussian", "custom"],
        default="exponential",
    )
    p.add_argument("--pulse-file", default=None)
    p.add_argument("--alpha-min", type=float, default=0.1)
    p.add_argument("--alpha-max", type=float, default=10.0)
    p.add_argument("--alpha-steps", type=int, default=25)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--omega", type=float, default=0.0)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--dx", type=float, default=0.01)
    p.add_argument("--horizon", type=float, default=None)


def build_parser() -> _Parser:
    parser = _Parser(
        prog="stimqed",
        description="Outcome statistics of stimulated emission in a 1D waveguide",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_sweep = sub.add_parser("sweep", help="alpha sweep of outcome probabilities")
    _add_common(p_sweep)
    p_sweep.add_argument(
        "--method", choices=["analytic", "quadrature", "oracle"], default="analytic"
    )

    p_life = sub.add_parser("lifetime", help="emitter lifetime versus alpha")
    _add_common(p_life, lifetime=True)
    p_life.add_argument("--method", choices=["oracle"], default="oracle")

    p_amp = sub.add_parser("amplitudes", help="two-photon amplitude grid dump")
    p_amp.add_argument("--emitter", choices=["atom"], default="atom")
    p_amp.add_argument("--sector", choices=["ee", "eo"], default="ee")
    p_amp.add_argument("--alpha", type=float, required=True)
    p_amp.add_argument("--beta", type=float, default=1.0)
    p_amp.add_argument("--omega", type=float, default=0.0)
    p_amp.add_argument("--grid-extent", type=float, default=10.0)
    p_amp.add_argument("--grid-step", type=float, default=0.1)
    p_amp.add_argument("--out", default=None)
    p_amp.add_argument("--format", choices=["csv", "json"], default="csv")

    sub.add_parser("verify", help="run the acceptance suite")
    return parser


_EMITTERS = {
    "atom": EmitterKind.ATOM,
    "cavity": EmitterKind.CAVITY,
    "classical": EmitterKind.CLASSICAL_ANCILLA,
}


def _spec_from_args(args: argparse.Namespace) -> SweepSpec:
    return SweepSpec(
        command=args.command,
        emitter=_EMITTERS[getattr(args, "emitter", "atom")],
        pulse_shape=getattr(args, "pulse", "exponential"),
        pulse_file=getattr(args, "pulse_file", None),
        alpha_min=getattr(args, "alpha_min", 0.1),
        alpha_max=getattr(args, "alpha_max", 10.0),
        alpha_steps=getattr(args, "alpha_steps", 25),
        beta=getattr(args, "beta", 1.0),
        omega=getattr(args, "omega", 0.0),
        method=getattr(args, "method", "analytic"),
        out=getattr(args, "out", None),
        format=getattr(args, "format", "csv"),
        dx=getattr(args, "dx", 0.01),
        horizon=getattr(args, "horizon", None),
        alpha=getattr(args, "alpha", None),
        sector=getattr(args, "sector", "ee"),
        grid_extent=getattr(args, "grid_extent", 10.0),
        grid_step=getattr(args, "grid_step", 0.1),
    )


def _emit(rows: list[dict], spec: SweepSpec, table: str) -> None:
    text = (render_csv if spec.format == "csv" else render_json)(rows, table)
    if spec.out:
        Path(spec.out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return run_verify()
    spec = _spec_from_args(args)
    try:
        if spec.command == "sweep":
            _emit(run_sweep(spec), spec, "sweep")
        elif spec.command == "lifetime":
            _emit(run_lifetime(spec), spec, "lifetime")
        else:
            _emit(run_amplitudes(spec), spec, "amplitudes")
    except (QuadratureNotConverged, NotConverged) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (StimqedError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
