import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stimqed import analytic
from stimqed.core import EmitterKind, NonPositiveAlpha

ALPHAS = np.logspace(-2, 2, 201)


def test_atom_anchor_values():
    p = analytic.atom_probabilities(2.0)
    assert p.p_rr == pytest.approx(2.0 / 3.0, abs=1e-15)
    assert p.p_ll == pytest.approx(1.0 / 18.0, abs=1e-15)
    assert p.p_rl == pytest.approx(5.0 / 18.0, abs=1e-15)


def test_atom_alpha_one_values():
    p = analytic.atom_probabilities(1.0)
    assert (p.p_rr, p.p_ll, p.p_rl) == pytest.approx((0.625, 0.125, 0.25), abs=1e-15)


def test_no_seam_at_alpha_one():
    # the two-exponential overlap has a removable singularity at alpha=1;
    # the factored closed form must be smooth across it
    p0 = analytic.atom_probabilities(1.0)
    for eps in (1e-9, -1e-9, 1e-6, -1e-6):
        p = analytic.atom_probabilities(1.0 + eps)
        assert abs(p.p_rr - p0.p_rr) < 1e-6
        assert abs(p.p_ll - p0.p_ll) < 1e-6


def test_atom_maximum_at_two():
    assert analytic.argmax_atom_p_rr() == pytest.approx(2.0, abs=1e-5)
    grid = [analytic.atom_probabilities(a).p_rr for a in ALPHAS]
    assert max(grid) <= 2.0 / 3.0 + 1e-12


def test_cross_pair_minimum_at_one():
    assert analytic.argmin_atom_p_rl() == pytest.approx(1.0, abs=1e-5)
    assert analytic.atom_probabilities(1.0).p_rl == 0.25
    for a in ALPHAS:
        p_rl = analytic.atom_probabilities(a).p_rl
        assert 0.25 - 1e-12 <= p_rl <= 0.5 + 1e-12


def test_cavity_values():
    p = analytic.cavity_probabilities(1.0)
    assert p.p_rr == pytest.approx(0.375, abs=1e-15)
    assert p.p_ll == pytest.approx(0.375, abs=1e-15)
    assert p.p_rl == pytest.approx(0.25, abs=1e-15)


def test_cavity_stays_below_half_and_shares_p_rl():
    for a in ALPHAS:
        cav = analytic.cavity_probabilities(a)
        assert cav.p_rr < 0.5
        assert cav.p_rl == pytest.approx(
            analytic.atom_probabilities(a).p_rl, abs=1e-14
        )


def test_classical_values():
    for a in ALPHAS:
        p = analytic.classical_probabilities(a)
        assert p.p_rl == 0.5
        assert p.p_rr == pytest.approx(a / (2.0 * (1.0 + a)), abs=1e-14)
    assert analytic.classical_probabilities(1.0).p_rr == pytest.approx(0.25, abs=1e-15)


def test_classical_spectral_integral_matches_closed():
    for a in (0.5, 1.0, 2.0, 5.0):
        closed = analytic.classical_probabilities(a)
        s_rr, s_ll = analytic.classical_spectral_probabilities(a)
        assert s_rr == pytest.approx(closed.p_rr, abs=1e-8)
        assert s_ll == pytest.approx(closed.p_ll, abs=1e-8)


def test_metrics():
    assert analytic.metrics(3.0).fidelity == pytest.approx(0.8125, abs=1e-15)
    assert analytic.metrics(2.0).amplification == pytest.approx(4.0 / 3.0, abs=1e-15)
    assert analytic.metrics(1.0).amplification == pytest.approx(1.25, abs=1e-15)


def test_dispatch():
    for emitter in EmitterKind:
        p = analytic.probabilities(emitter, 2.0)
        assert p.total == pytest.approx(1.0, abs=1e-12)


@given(alpha=st.floats(min_value=1e-3, max_value=1e3))
@settings(max_examples=200, deadline=None)
def test_probabilities_normalized_and_bounded(alpha):
    for emitter in EmitterKind:
        p = analytic.probabilities(emitter, alpha)
        assert p.total == pytest.approx(1.0, abs=1e-12)
        for v in (p.p_rr, p.p_ll, p.p_rl):
            assert -1e-15 <= v <= 1.0 + 1e-15


@given(alpha=st.floats(min_value=1e-3, max_value=1e3))
@settings(max_examples=100, deadline=None)
def test_stimulated_ordering(alpha):
    # quantum emitter beats the classical intensity baseline in the
    # copied direction, and the atom beats the cavity
    atom = analytic.atom_probabilities(alpha).p_rr
    cav = analytic.cavity_probabilities(alpha).p_rr
    cls = analytic.classical_probabilities(alpha).p_rr
    assert atom >= cav - 1e-12
    assert cav >= cls - 1e-12


def test_rejects_bad_alpha():
    for bad in (0.0, -1.0, float("nan")):
        with pytest.raises(NonPositiveAlpha):
            analytic.atom_probabilities(bad)
