"""Unit conventions, system parameters, and shared result types.

Internal unit system: the emitter decay rate into the guide is 1 (gamma),
the group velocity is 1, so times and lengths share one unit and the pulse
bandwidth ratio alpha is the sole shape parameter of the built-in pulses.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np


class EmitterKind(Enum):
    ATOM = "atom"
    CAVITY = "cavity"
    CLASSICAL_ANCILLA = "classical"


class Method(Enum):
    CLOSED_FORM = "analytic"
    QUADRATURE = "quadrature"
    ORACLE = "oracle"


class StimqedError(Exception):
    """Base class for all library errors."""


class NonPositiveGamma(StimqedError):
    pass


class NegativeLoss(StimqedError):
    pass


class NonPositiveAlpha(StimqedError):
    pass


class UnnormalizedPulse(StimqedError):
    pass


class QuadratureNotConverged(StimqedError):
    pass


class NotConverged(StimqedError):
    pass


class ResolutionTooCoarse(StimqedError):
    pass


@dataclass(frozen=True)
class SystemParams:
    """Emitter kind plus the three rates that define the problem.

    gamma: decay rate into the guided mode (scaled to 1 by validate).
    omega: transition frequency in the rotating frame; probabilities do not
        depend on it, amplitude dumps keep the phase factors.
    gamma_ng: non-guided loss rate; beta = gamma / (gamma + gamma_ng).
    """

    emitter: EmitterKind = EmitterKind.ATOM
    gamma: float = 1.0
    omega: float = 0.0
    gamma_ng: float = 0.0

    @property
    def beta(self) -> float:
        return self.gamma / (self.gamma + self.gamma_ng)

    @property
    def gamma_total(self) -> float:
        return self.gamma + self.gamma_ng


def validate(params: SystemParams) -> SystemParams:
    """Check rates and rescale so gamma == 1.

    All rates are divided by gamma; outcome probabilities are invariant under
    this common rescaling, so downstream code can assume gamma == 1.
    """
    g = params.gamma
    if not np.isfinite(g) or g <= 0.0:
        raise NonPositiveGamma(f"gamma must be positive, got {params.gamma!r}")
    if not np.isfinite(params.gamma_ng) or params.gamma_ng < 0.0:
        raise NegativeLoss(f"gamma_ng must be >= 0, got {params.gamma_ng!r}")
    return replace(
        params,
        gamma=1.0,
        omega=params.omega / g,
        gamma_ng=params.gamma_ng / g,
    )


def params_from_beta(
    emitter: EmitterKind = EmitterKind.ATOM,
    beta: float = 1.0,
    omega: float = 0.0,
) -> SystemParams:
    """Build normalized params from the guided fraction beta in (0, 1]."""
    if not 0.0 < beta <= 1.0:
        raise NegativeLoss(f"beta must be in (0, 1], got {beta!r}")
    gamma_ng = (1.0 - beta) / beta
    return SystemParams(emitter=emitter, gamma=1.0, omega=omega, gamma_ng=gamma_ng)


@dataclass(frozen=True)
class OutcomeProbabilities:
    """Joint direction statistics of the two outgoing photons."""

    p_rr: float
    p_ll: float
    p_rl: float
    loss: float = 0.0
    method: Method = Method.CLOSED_FORM

    @property
    def total(self) -> float:
        return self.p_rr + self.p_ll + self.p_rl + self.loss

    def as_dict(self) -> dict:
        return {
            "p_rr": self.p_rr,
            "p_ll": self.p_ll,
            "p_rl": self.p_rl,
            "loss": self.loss,
            "method": self.method.value,
        }


@dataclass(frozen=True)
class LifetimeCurve:
    """Excitation probability on a time grid and its integral tau."""

    times: np.ndarray
    p_e: np.ndarray
    tau: float = field(default=0.0)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        p = np.asarray(self.p_e, dtype=float)
        if t.shape != p.shape or t.ndim != 1:
            raise ValueError("times and p_e must be matching 1D arrays")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "p_e", p)
        if self.tau == 0.0 and len(t) > 1:
            object.__setattr__(self, "tau", float(np.trapezoid(p, t)))
