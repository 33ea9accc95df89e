import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stimqed import analytic
from stimqed.core import (
    EmitterKind,
    NotConverged,
    ResolutionTooCoarse,
    SystemParams,
    params_from_beta,
)
from stimqed.oracle import (
    OracleConfig,
    convergence_report,
    evolve,
    evolve_dense,
    single_photon_check,
)
from stimqed.pulses import exponential, pulse_support

ATOM = SystemParams()
CAVITY = SystemParams(emitter=EmitterKind.CAVITY)


def test_config_rejects_coarse_bins():
    with pytest.raises(ResolutionTooCoarse):
        OracleConfig(ATOM, exponential(10.0), dx=0.05)


def test_config_rejects_short_horizon():
    with pytest.raises(ValueError, match="horizon"):
        OracleConfig(ATOM, exponential(1.0), dx=0.05, horizon=30.0)


def test_config_rejects_classical_emitter():
    classical = SystemParams(emitter=EmitterKind.CLASSICAL_ANCILLA)
    with pytest.raises(ValueError, match="classical"):
        OracleConfig(classical, exponential(1.0), dx=0.01)


def test_config_rejects_bad_spacing():
    for dx in (0.0, -0.1, math.nan):
        with pytest.raises(ValueError):
            OracleConfig(ATOM, exponential(1.0), dx=dx)


def test_default_horizon_scales_with_slow_pulses():
    pulse = exponential(0.5)
    cfg = OracleConfig(ATOM, pulse, dx=0.05)
    assert cfg.horizon == pytest.approx(pulse_support(pulse) + 60.0)
    cfg = OracleConfig(ATOM, exponential(2.0), dx=0.05)
    assert cfg.horizon == pytest.approx(pulse_support(exponential(2.0)) + 30.0)


def test_bare_decay_lifetime():
    probs, curve = evolve(OracleConfig(ATOM, None, dx=0.005, horizon=30.0))
    assert probs is None
    assert curve.p_e[0] == 1.0
    assert np.all(np.diff(curve.p_e) <= 0.0)
    assert curve.tau == pytest.approx(1.0, abs=0.01)


def test_bare_decay_lifetime_with_loss():
    params = params_from_beta(beta=0.9)
    _, curve = evolve(OracleConfig(params, None, dx=0.005, horizon=30.0))
    assert curve.tau == pytest.approx(0.9, abs=0.01)


def test_evolution_approaches_closed_forms():
    probs, curve = evolve(OracleConfig(ATOM, exponential(2.0), dx=0.005))
    ref = analytic.atom_probabilities(2.0)
    assert probs.p_rr == pytest.approx(ref.p_rr, abs=5e-4)
    assert probs.p_ll == pytest.approx(ref.p_ll, abs=5e-4)
    assert probs.p_rl == pytest.approx(ref.p_rl, abs=5e-4)
    assert probs.loss == pytest.approx(0.0, abs=5e-4)
    assert curve.p_e[-1] < 1e-3
    assert np.all(np.diff(curve.p_e) <= 1e-3)


def test_error_shrinks_linearly_with_bin_size():
    rows = convergence_report(OracleConfig(ATOM, exponential(1.0), dx=0.02))
    errs = [row["max_error"] for row in rows]
    assert all(e2 < 0.6 * e1 for e1, e2 in zip(errs, errs[1:]))


def test_convergence_report_requires_closed_references():
    lossy = params_from_beta(beta=0.9)
    with pytest.raises(ValueError):
        convergence_report(OracleConfig(lossy, exponential(1.0), dx=0.02))


@pytest.mark.parametrize(
    "params",
    [ATOM, params_from_beta(beta=0.9), CAVITY],
    ids=["atom", "lossy-atom", "cavity"],
)
def test_dense_reference_matches_streaming(params):
    cfg = OracleConfig(params, exponential(1.0), dx=0.05, horizon=40.0)
    fast, _ = evolve(cfg)
    probs, _, state, audit = evolve_dense(cfg)
    for field in ("p_rr", "p_ll", "p_rl", "loss"):
        assert abs(getattr(probs, field) - getattr(fast, field)) < 1e-12
    assert audit["max_step_drift"] < 1e-10
    assert audit["symmetry_error"] < 1e-15
    assert audit["final_norm_error"] < 1e-10
    assert abs(probs.loss - state.loss_register) < 1e-6


def test_lossy_evolution_matches_frozen_record():
    params = params_from_beta(beta=0.9)
    probs, _ = evolve(OracleConfig(params, exponential(2.04), dx=0.01))
    assert probs.p_rr == pytest.approx(0.620603, abs=2e-3)
    assert probs.p_ll == pytest.approx(0.045319, abs=2e-3)
    assert probs.p_rl == pytest.approx(0.255025, abs=2e-3)
    assert probs.loss == pytest.approx(0.079052, abs=2e-3)


def test_single_excitation_scattering():
    cfg = OracleConfig(ATOM, exponential(1.0), dx=0.005)
    rows = single_photon_check(cfg, detunings=[0.0, 0.5])
    for row in rows:
        assert row["residual"] < 1e-3
        assert row["loss"] == pytest.approx(0.0, abs=1e-3)
        assert row["reflection"] == pytest.approx(
            row["expected_reflection"], abs=0.01
        )
    # resonant matched-bandwidth pulse splits evenly
    assert rows[0]["reflection"] == pytest.approx(0.5, abs=0.01)
    assert rows[1]["reflection"] < rows[0]["reflection"]


def test_single_excitation_shared_between_emitters():
    atom_rows = single_photon_check(
        OracleConfig(ATOM, exponential(1.0), dx=0.01), detunings=[0.3]
    )
    cav_rows = single_photon_check(
        OracleConfig(CAVITY, exponential(1.0), dx=0.01), detunings=[0.3]
    )
    assert atom_rows[0]["reflection"] == pytest.approx(
        cav_rows[0]["reflection"], abs=1e-12
    )


def test_single_excitation_requires_pulse():
    with pytest.raises(ValueError):
        single_photon_check(OracleConfig(ATOM, None, dx=0.01, horizon=30.0))


def test_leftover_excitation_raises_not_converged(monkeypatch):
    # the horizon floor keeps real runs below this; force the guard to fire
    import stimqed.oracle as oracle_module

    monkeypatch.setattr(oracle_module, "_RESIDUAL_TOL", 1e-30)
    cfg = OracleConfig(ATOM, exponential(1.0), dx=0.05, horizon=40.0)
    with pytest.raises(NotConverged):
        evolve(cfg)


@given(alpha=st.floats(min_value=0.5, max_value=3.0))
@settings(max_examples=5, deadline=None)
def test_evolution_tracks_closed_forms(alpha):
    probs, _ = evolve(OracleConfig(ATOM, exponential(alpha), dx=0.02))
    ref = analytic.atom_probabilities(alpha)
    assert abs(probs.p_rr - ref.p_rr) < 5e-3
    assert abs(probs.p_ll - ref.p_ll) < 5e-3
    assert abs(probs.p_rl - ref.p_rl) < 5e-3
    for value in (probs.p_rr, probs.p_ll, probs.p_rl):
        assert 0.0 <= value <= 1.0
