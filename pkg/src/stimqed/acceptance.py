"""Benchmark acceptance checks exercised by the verify command and tests.

Each criterion function runs one benchmark scenario end to end and returns
a CriterionResult with a measured-vs-expected summary; nothing here hides
a failure. Tolerances are the published targets of this package's
reference anchors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from . import analytic
from .core import EmitterKind, SystemParams, params_from_beta
from .oracle import OracleConfig, convergence_report, evolve
from .outstate import reconstruct_p_rl, reconstruct_p_rr_ll, reconstruct_probabilities
from .pulses import exponential, half_gaussian, pulse_support


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str


def format_line(result: CriterionResult) -> str:
    tag = "PASS" if result.passed else "FAIL"
    return f"criterion {result.number:2d} {result.name:<34s} {tag}  {result.detail}"


def _interval_check(label, measured, lo, hi):
    ok = lo <= measured <= hi
    return ok, f"{label}={measured:.6g} in [{lo:.6g}, {hi:.6g}]"


def _abs_check(label, measured, expected, tol):
    ok = abs(measured - expected) <= tol
    return ok, f"{label}={measured:.10g} vs {expected:.10g} tol {tol:g}"


def _finish(number, name, checks):
    passed = all(ok for ok, _ in checks)
    shown = [text for ok, text in checks if not ok] or [checks[0][1]]
    if passed and len(checks) > 1:
        shown = [f"{len(checks)} sub-checks", checks[0][1]]
    return CriterionResult(number, name, passed, "; ".join(shown))


def _parabola_vertex(x, y):
    """Vertex of the parabola through three points, for peak refinement."""
    x0, x1, x2 = x
    y0, y1, y2 = y
    denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom
    b = (x2**2 * (y0 - y1) + x1**2 * (y2 - y0) + x0**2 * (y1 - y2)) / denom
    if a == 0.0:
        return x1, y1
    xv = -b / (2.0 * a)
    yv = y0 + (xv - x0) * (b + a * (xv + x0))
    return xv, yv


def criterion_1() -> CriterionResult:
    p = analytic.atom_probabilities(2.0)
    m3 = analytic.metrics(3.0)
    m2 = analytic.metrics(2.0)
    checks = [
        _abs_check("p_rr(2)", p.p_rr, 2.0 / 3.0, 1e-12),
        _abs_check("p_ll(2)", p.p_ll, 1.0 / 18.0, 1e-12),
        _abs_check("p_rl(2)", p.p_rl, 5.0 / 18.0, 1e-12),
        _abs_check("fidelity(3)", m3.fidelity, 0.8125, 1e-12),
        _abs_check("amplification(2)", m2.amplification, 4.0 / 3.0, 1e-12),
    ]
    return _finish(1, "closed_form_anchor_values", checks)


def criterion_2() -> CriterionResult:
    p1 = analytic.atom_probabilities(1.0)
    checks = [
        _abs_check("p_rr(1)", p1.p_rr, 5.0 / 8.0, 1e-12),
        _abs_check("p_ll(1)", p1.p_ll, 1.0 / 8.0, 1e-12),
        _abs_check("p_rl(1)", p1.p_rl, 1.0 / 4.0, 1e-12),
    ]
    for eps in (1e-4, -1e-4):
        q = analytic.atom_probabilities(1.0 + eps)
        jump = max(
            abs(q.p_rr - p1.p_rr), abs(q.p_ll - p1.p_ll), abs(q.p_rl - p1.p_rl)
        )
        checks.append(_abs_check(f"jump(1{eps:+g})", jump, 0.0, 1e-3))
    return _finish(2, "alpha_one_continuity", checks)


def criterion_3() -> CriterionResult:
    alphas = np.logspace(-2, 2, 201)
    checks = []
    for emitter in EmitterKind:
        worst = max(
            abs(analytic.probabilities(emitter, a).total - 1.0) for a in alphas
        )
        checks.append(_abs_check(f"sum({emitter.value})", worst, 0.0, 1e-12))
    return _finish(3, "probability_normalization", checks)


def criterion_4() -> CriterionResult:
    params = SystemParams()
    checks = []
    for a in (0.3, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0):
        ref = analytic.atom_probabilities(a)
        probs, _ = reconstruct_probabilities(a, params)
        err = max(
            abs(probs.p_rr - ref.p_rr),
            abs(probs.p_ll - ref.p_ll),
            abs(probs.p_rl - ref.p_rl),
        )
        checks.append(_abs_check(f"quad_err({a:g})", err, 0.0, 1e-6))
        identity = abs(probs.p_rl - reconstruct_p_rl(exponential(a), params))
        checks.append(_abs_check(f"p_rl_identity({a:g})", identity, 0.0, 1e-8))
    return _finish(4, "quadrature_matches_closed_forms", checks)


def criterion_5() -> CriterionResult:
    checks = [
        _abs_check("p_rl(1)", analytic.atom_probabilities(1.0).p_rl, 0.25, 1e-12),
        _abs_check("argmin_p_rl", analytic.argmin_atom_p_rl(), 1.0, 1e-3),
    ]
    return _finish(5, "cross_pair_extremum", checks)


def criterion_6() -> CriterionResult:
    checks = []
    for emitter in (EmitterKind.ATOM, EmitterKind.CAVITY):
        worst = 0.0
        for a in (0.5, 1.0, 2.0, 5.0):
            cfg = OracleConfig(
                SystemParams(emitter=emitter), exponential(a), dx=0.002
            )
            probs, _ = evolve(cfg)
            ref = analytic.probabilities(emitter, a)
            worst = max(
                worst,
                abs(probs.p_rr - ref.p_rr),
                abs(probs.p_ll - ref.p_ll),
                abs(probs.p_rl - ref.p_rl),
            )
        checks.append(_abs_check(f"evolve_err({emitter.value})", worst, 0.0, 2e-3))
    rows = convergence_report(
        OracleConfig(SystemParams(), exponential(2.0), dx=0.02), refinements=3
    )
    ratios = [
        rows[i]["max_error"] / rows[i + 1]["max_error"] for i in range(len(rows) - 1)
    ]
    checks.append(_interval_check("convergence_ratio", min(ratios), 1.0 / 0.6, math.inf))
    return _finish(6, "evolution_matches_closed_forms", checks)


def criterion_7() -> CriterionResult:
    alphas = np.linspace(1.0, 2.4, 15)
    values = []
    for a in alphas:
        cfg = OracleConfig(SystemParams(), half_gaussian(a), dx=0.005)
        probs, _ = evolve(cfg)
        values.append(probs.p_rr)
    i = int(np.argmax(values))
    if 0 < i < len(alphas) - 1:
        a_star, p_star = _parabola_vertex(alphas[i - 1 : i + 2], values[i - 1 : i + 2])
    else:
        a_star, p_star = float(alphas[i]), values[i]
    checks = [
        _interval_check("max_p_rr", p_star, 0.64, 0.66),
        _interval_check("arg_max", a_star, 1.5, 1.7),
    ]
    return _finish(7, "half_gaussian_maximum", checks)


def criterion_8() -> CriterionResult:
    atom = SystemParams()
    checks = []
    _, curve = evolve(OracleConfig(atom, exponential(3.0), dx=0.01))
    checks.append(_interval_check("tau(3)", curve.tau, 0.75 * 0.98, 0.75 * 1.02))
    _, curve = evolve(OracleConfig(atom, exponential(100.0), dx=0.001))
    checks.append(_interval_check("tau(100)", curve.tau, 0.98, 1.02))
    slow = exponential(0.01)
    cfg = OracleConfig(atom, slow, dx=0.02, horizon=pulse_support(slow) + 30.0)
    _, curve = evolve(cfg)
    checks.append(_interval_check("tau(0.01)", curve.tau, 3.0 * 0.97, 3.0 * 1.03))
    probe = np.array([2.9, 3.0, 3.1])
    taus = [
        evolve(OracleConfig(atom, exponential(a), dx=0.01))[1].tau for a in probe
    ]
    a_min, _ = _parabola_vertex(probe, taus)
    checks.append(_interval_check("argmin_tau", a_min, 2.9, 3.1))
    for a in (0.5, 1.0, 2.0, 10.0):
        cfg = OracleConfig(
            SystemParams(emitter=EmitterKind.CAVITY), exponential(a), dx=0.005
        )
        _, curve = evolve(cfg)
        checks.append(_interval_check(f"cavity_tau({a:g})", curve.tau, 1.0, math.inf))
    return _finish(8, "lifetime_anchors", checks)


def criterion_9() -> CriterionResult:
    params = params_from_beta(EmitterKind.ATOM, 0.9)

    def neg_p_rr(a):
        probs, _ = reconstruct_probabilities(a, params)
        return -probs.p_rr

    res = minimize_scalar(
        neg_p_rr, bracket=(1.7, 2.1, 2.5), method="golden", options={"xtol": 1e-3}
    )
    a_star = float(res.x)
    p_star = -float(res.fun)
    checks = [
        _interval_check("max_p_rr", p_star, 0.62, 0.64),
        _interval_check("arg_max", a_star, 1.99, 2.09),
    ]
    for a in (1.0, 2.0, 3.0):
        q, _ = reconstruct_probabilities(a, params)
        o, _ = evolve(OracleConfig(params, exponential(a), dx=0.01))
        checks.append(
            _abs_check(f"oracle_gap({a:g})", abs(q.p_rr - o.p_rr), 0.0, 1e-2)
        )
    return _finish(9, "loss_model", checks)


def criterion_10() -> CriterionResult:
    alphas = np.logspace(-2, 2, 201)
    ceiling = max(analytic.cavity_probabilities(a).p_rr for a in alphas)
    gap = max(
        abs(analytic.cavity_probabilities(a).p_rl - analytic.atom_probabilities(a).p_rl)
        for a in alphas
    )
    checks = [
        _interval_check("max_cavity_p_rr", ceiling, 0.0, 0.5 - 1e-15),
        _abs_check("p_rl_gap", gap, 0.0, 1e-12),
    ]
    return _finish(10, "cavity_ceiling", checks)


def criterion_11() -> CriterionResult:
    checks = []
    for a in (0.5, 1.0, 2.0, 5.0):
        closed = analytic.classical_probabilities(a)
        s_rr, s_ll = analytic.classical_spectral_probabilities(a)
        checks.append(
            _abs_check(f"spectral_rr({a:g})", s_rr, closed.p_rr, 1e-6)
        )
        checks.append(
            _abs_check(f"spectral_ll({a:g})", s_ll, closed.p_ll, 1e-6)
        )
    return _finish(11, "classical_spectral_baseline", checks)


def criterion_12() -> CriterionResult:
    from .cli import SweepSpec, render_csv, run_sweep

    spec = SweepSpec(
        command="sweep",
        emitter=EmitterKind.ATOM,
        pulse_shape="exponential",
        alpha_min=0.5,
        alpha_max=2.0,
        alpha_steps=5,
        method="quadrature",
    )
    first = render_csv(run_sweep(spec), "sweep")
    second = render_csv(run_sweep(spec), "sweep")
    checks = [
        (
            first == second,
            f"identical_bytes={first == second} ({len(first)} chars)",
        )
    ]
    return _finish(12, "deterministic_sweep_output", checks)


_CRITERIA = (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
    criterion_11,
    criterion_12,
)


def run_all() -> list[CriterionResult]:
    return [fn() for fn in _CRITERIA]
