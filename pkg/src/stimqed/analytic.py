"""Closed-form outcome probabilities for the three emitter kinds.

All formulas are for the exponential incident pulse with bandwidth ratio
alpha and a lossless guide; loss and other pulse shapes go through the
quadrature and time-evolution routes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from .core import Method, NonPositiveAlpha, OutcomeProbabilities


@dataclass(frozen=True)
class MetricRecord:
    """Derived stimulated-emission figures of merit at one alpha."""

    alpha: float
    fidelity: float
    amplification: float


def _check_alpha(alpha: float) -> float:
    if not np.isfinite(alpha) or alpha <= 0.0:
        raise NonPositiveAlpha(f"alpha must be positive, got {alpha!r}")
    return float(alpha)


def atom_probabilities(alpha: float) -> OutcomeProbabilities:
    """Two-level emitter.

    P_RR/P_LL are 1/4 [1 + 2a/(1+a)^2 +- (a^2+4a-1)/(1+a)^2]; the second
    term is the exactly factored form of ((1+a)^3-8a)/((a-1)(1+a)^2), so no
    special casing is needed anywhere, including a = 1.
    """
    a = _check_alpha(alpha)
    s = (1.0 + a) ** 2
    return OutcomeProbabilities(
        p_rr=a * (a + 4.0) / (2.0 * s),
        p_ll=1.0 / (2.0 * s),
        p_rl=0.5 - a / s,
        method=Method.CLOSED_FORM,
    )


def cavity_probabilities(alpha: float) -> OutcomeProbabilities:
    """Harmonic (side-coupled cavity) emitter; no two-photon blockade."""
    a = _check_alpha(alpha)
    shared = 2.0 * a / (1.0 + a) ** 2
    split = (a - 1.0) / (a + 1.0)
    return OutcomeProbabilities(
        p_rr=0.25 * (1.0 + shared + split),
        p_ll=0.25 * (1.0 + shared - split),
        p_rl=0.5 * (1.0 - shared),
        method=Method.CLOSED_FORM,
    )


def classical_probabilities(alpha: float) -> OutcomeProbabilities:
    """Intensity-only ancilla with the same spectral response, no interference."""
    a = _check_alpha(alpha)
    return OutcomeProbabilities(
        p_rr=0.5 * a / (1.0 + a),
        p_ll=0.5 / (1.0 + a),
        p_rl=0.5,
        method=Method.CLOSED_FORM,
    )


def probabilities(emitter, alpha: float) -> OutcomeProbabilities:
    from .core import EmitterKind

    table = {
        EmitterKind.ATOM: atom_probabilities,
        EmitterKind.CAVITY: cavity_probabilities,
        EmitterKind.CLASSICAL_ANCILLA: classical_probabilities,
    }
    return table[emitter](alpha)


def metrics(alpha: float) -> MetricRecord:
    """Cloning fidelity eta = P_RR + P_RL/2 and amplification 2 P_RR (atom)."""
    p = atom_probabilities(alpha)
    return MetricRecord(
        alpha=float(alpha),
        fidelity=p.p_rr + 0.5 * p.p_rl,
        amplification=2.0 * p.p_rr,
    )


def classical_spectral_probabilities(alpha: float) -> tuple[float, float]:
    """(P_RR, P_LL) of the classical ancilla from the spectral average.

    Averages the Lorentzian reflectance over the pulse's Lorentzian power
    spectrum: P_RR = 1/2 int |psi(k)|^2 (1 - |r_k|^2) dk. Independent
    numeric route used to validate classical_probabilities.
    """
    a = _check_alpha(alpha)
    hw_pulse = a / 2.0
    hw_res = 0.5

    def spectrum(k):
        return (hw_pulse / np.pi) / (k * k + hw_pulse * hw_pulse)

    def reflectance(k):
        return hw_res * hw_res / (k * k + hw_res * hw_res)

    refl = sum(
        quad(lambda k: spectrum(k) * reflectance(k), lo, hi, epsabs=1e-12, epsrel=1e-12)[0]
        for lo, hi in [(-np.inf, 0.0), (0.0, np.inf)]
    )
    return 0.5 * (1.0 - refl), 0.5 * refl


def argmax_atom_p_rr(lo: float = 0.5, hi: float = 8.0, tol: float = 1e-6) -> float:
    """Location of the P_RR maximum over alpha, golden-section search."""
    res = minimize_scalar(
        lambda a: -atom_probabilities(a).p_rr,
        bracket=(lo, 0.5 * (lo + hi), hi),
        method="golden",
        options={"xtol": tol},
    )
    return float(res.x)


def argmin_atom_p_rl(lo: float = 0.2, hi: float = 5.0, tol: float = 1e-6) -> float:
    """Location of the P_RL minimum over alpha, golden-section search."""
    res = minimize_scalar(
        lambda a: atom_probabilities(a).p_rl,
        bracket=(lo, 0.5 * (lo + hi), hi),
        method="golden",
        options={"xtol": tol},
    )
    return float(res.x)
