import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stimqed.core import (
    NonPositiveAlpha,
    SystemParams,
    UnnormalizedPulse,
    params_from_beta,
)
from stimqed.pulses import (
    Pulse,
    PulseShape,
    custom,
    evaluate,
    exponential,
    exponential_f_closed,
    half_gaussian,
    half_gaussian_f_closed,
    overlap_f,
    pulse_support,
    pulse_width,
    spontaneous_wavefunction,
    time_bin_amplitudes,
)

ATOM = SystemParams()


def _numeric_norm(pulse, lo, n=400_000):
    x = np.linspace(lo, 0.0, n)
    return np.trapezoid(np.abs(evaluate(pulse, x)) ** 2, x)


def _sampled(ref, x, dx):
    # pre-normalize on the grid so custom() stays quiet
    vals = evaluate(ref, x)
    return custom(vals / math.sqrt(np.trapezoid(np.abs(vals) ** 2, dx=dx)), dx)


def test_exponential_modulus():
    p = exponential(1.0)
    assert abs(evaluate(p, 0.0)) ** 2 == pytest.approx(1.0, abs=1e-14)
    p2 = exponential(2.0)
    assert abs(evaluate(p2, -1.0)) ** 2 == pytest.approx(2.0 * math.exp(-2.0), rel=1e-13)


def test_builtins_vanish_for_positive_x():
    for p in (exponential(0.7), half_gaussian(1.3)):
        assert evaluate(p, 1.0) == 0.0
        assert np.all(evaluate(p, np.array([0.1, 2.0, 50.0])) == 0.0)


@given(alpha=st.floats(min_value=0.05, max_value=20.0))
@settings(max_examples=25, deadline=None)
def test_builtin_norms(alpha):
    for p in (exponential(alpha), half_gaussian(alpha)):
        lo = -pulse_support(p, tail=1e-14)
        assert _numeric_norm(p, lo) == pytest.approx(1.0, abs=1e-6)


def test_half_gaussian_modulus():
    a = 1.5
    p = half_gaussian(a)
    x = -0.8
    expected = math.sqrt(2.0 * a * a / math.pi) * math.exp(-((a * x) ** 2) / 2.0)
    assert abs(evaluate(p, x)) ** 2 == pytest.approx(expected, rel=1e-12)


def test_alpha_must_be_positive():
    with pytest.raises(NonPositiveAlpha):
        exponential(0.0)
    with pytest.raises(NonPositiveAlpha):
        half_gaussian(-2.0)


def test_custom_pulse_interpolation_and_support():
    ref = exponential(1.0)
    dx = 0.01
    x = np.arange(-3000, 1) * dx
    p = _sampled(ref, x, dx)
    assert evaluate(p, 5.0) == 0.0
    assert evaluate(p, -40.0) == 0.0  # outside the sampled grid
    mid = -1.005  # between grid points
    assert abs(evaluate(p, mid)) == pytest.approx(abs(evaluate(ref, mid)), rel=1e-4)


def test_custom_pulse_renormalizes_with_warning():
    dx = 0.01
    x = np.arange(-2000, 1) * dx
    samples = 3.0 * evaluate(exponential(1.0), x)
    with pytest.warns(UserWarning):
        p = custom(samples, dx)
    grid = -np.arange(len(p.samples))[::-1] * dx
    norm = np.trapezoid(np.abs(p.samples) ** 2, grid)
    assert norm == pytest.approx(1.0, abs=1e-10)


def test_spontaneous_matches_unit_alpha_pulse():
    x = np.linspace(-20.0, 0.0, 500)
    ref = evaluate(exponential(1.0), x)
    got = spontaneous_wavefunction(ATOM, x)
    assert np.max(np.abs(ref - got)) < 1e-14


def test_spontaneous_norm_is_beta_when_lossy():
    params = params_from_beta(beta=0.9)
    x = np.linspace(-60.0, 0.0, 400_000)
    norm = np.trapezoid(np.abs(spontaneous_wavefunction(params, x)) ** 2, x)
    assert norm == pytest.approx(0.9, abs=1e-6)


def test_overlap_exponential_closed_form():
    for a in (0.3, 1.0, 2.0, 7.5):
        assert overlap_f(exponential(a), ATOM) == pytest.approx(
            exponential_f_closed(a), abs=1e-10
        )
    assert overlap_f(exponential(1.0), ATOM) == pytest.approx(1.0, abs=1e-10)
    assert exponential_f_closed(2.0) == pytest.approx(8.0 / 9.0, abs=1e-15)


def test_overlap_half_gaussian_closed_form():
    for a in (0.8, 1.6, 3.0):
        assert overlap_f(half_gaussian(a), ATOM) == pytest.approx(
            half_gaussian_f_closed(a), abs=1e-9
        )


def test_overlap_lossy_uses_total_rate_without_renormalizing():
    params = params_from_beta(beta=0.9)
    for a in (1.0, 2.04, 3.0):
        expected = exponential_f_closed(a, params.gamma_ng)
        assert overlap_f(exponential(a), params) == pytest.approx(expected, abs=1e-9)
    # lossy F is strictly below the lossless value
    assert exponential_f_closed(2.0, 1.0 / 9.0) < exponential_f_closed(2.0)


def test_overlap_custom_matches_sampled_shape():
    dx = 0.005
    x = np.arange(-8000, 1) * dx
    p = _sampled(exponential(2.0), x, dx)
    assert overlap_f(p, ATOM) == pytest.approx(exponential_f_closed(2.0), abs=1e-5)


def test_overlap_rejects_unnormalized_custom():
    bad = Pulse(
        shape=PulseShape.CUSTOM,
        samples=np.array([0.1 + 0j, 0.1, 0.1]),
        dx=0.5,
    )
    with pytest.raises(UnnormalizedPulse):
        overlap_f(bad, ATOM)


@given(alpha=st.floats(min_value=0.05, max_value=30.0))
@settings(max_examples=40, deadline=None)
def test_overlap_bounds(alpha):
    f = exponential_f_closed(alpha)
    assert 0.0 < f <= 1.0
    assert half_gaussian_f_closed(alpha) <= 1.0 + 1e-12


def test_width_and_support_scales():
    assert pulse_width(exponential(4.0)) == 0.25
    assert pulse_support(exponential(2.0)) == pytest.approx(
        math.log(1e8) / 2.0, rel=1e-12
    )
    assert pulse_support(half_gaussian(2.0)) < pulse_support(exponential(2.0))


def test_time_bins_unit_norm_and_shape():
    for pulse in (exponential(1.5), half_gaussian(1.5)):
        bins = time_bin_amplitudes(pulse, 0.01, 4000)
        assert np.sum(np.abs(bins) ** 2) == pytest.approx(1.0, abs=1e-12)
        # the sampled envelope tracks the continuum one
        peak = np.argmax(np.abs(bins))
        assert peak < 50


def test_time_bins_match_continuum_projection():
    dx = 0.02
    pulse = exponential(1.0)
    bins = time_bin_amplitudes(pulse, dx, 2500)
    # bin amplitude ~ psi(-t) sqrt(dx) up to O(dx) within the bin
    t = (np.arange(20) + 0.5) * dx
    approx = evaluate(pulse, -t) * math.sqrt(dx)
    assert np.max(np.abs(bins[:20] - approx)) < 2e-4


def test_time_bins_custom_envelope():
    dx = 0.01
    x = np.arange(-4000, 1) * dx
    p = _sampled(exponential(1.0), x, dx)
    ref = time_bin_amplitudes(exponential(1.0), dx, 3000)
    got = time_bin_amplitudes(p, dx, 3000)
    assert np.max(np.abs(ref - got)) < 1e-3
