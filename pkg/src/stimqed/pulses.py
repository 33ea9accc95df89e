"""Incident single-photon wavefunctions and the spontaneous-emission profile.

All built-in shapes live on x <= 0 (the front of the pulse reaches the
emitter at t = 0) and are normalized to unit photon number. The carrier
phase e^{i omega x} is kept on the amplitudes; probabilities never depend
on it.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.integrate import quad

from .core import SystemParams, UnnormalizedPulse

_NORM_WARN = 1e-6
_NORM_TOL = 1e-8


class PulseShape(Enum):
    EXPONENTIAL = "exponential"
    HALF_GAUSSIAN = "half-gaussian"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Pulse:
    """Single-photon wavefunction psi(x).

    Built-ins are parametrized by the bandwidth ratio alpha (pulse decay
    rate over emitter decay rate). Custom pulses are uniform-grid samples
    with spacing dx, last sample at x = 0, linearly interpolated.
    """

    shape: PulseShape
    alpha: float | None = None
    omega: float = 0.0
    samples: np.ndarray | None = None
    dx: float | None = None


def exponential(alpha: float, omega: float = 0.0) -> Pulse:
    if not np.isfinite(alpha) or alpha <= 0.0:
        from .core import NonPositiveAlpha

        raise NonPositiveAlpha(f"alpha must be positive, got {alpha!r}")
    return Pulse(shape=PulseShape.EXPONENTIAL, alpha=float(alpha), omega=float(omega))


def half_gaussian(alpha: float, omega: float = 0.0) -> Pulse:
    if not np.isfinite(alpha) or alpha <= 0.0:
        from .core import NonPositiveAlpha

        raise NonPositiveAlpha(f"alpha must be positive, got {alpha!r}")
    p = Pulse(shape=PulseShape.HALF_GAUSSIAN, alpha=float(alpha), omega=float(omega))
    # defensive check of the normalization constant
    norm2, _ = quad(lambda x: abs(evaluate(p, x)) ** 2, -6.2 / alpha, 0.0)
    if abs(norm2 - 1.0) > _NORM_TOL:
        raise UnnormalizedPulse(f"half-Gaussian norm^2 = {norm2!r}, expected 1")
    return p


def custom(samples, dx: float) -> Pulse:
    """Sampled pulse; renormalizes, warning if the norm is off by > 1e-6."""
    arr = np.asarray(samples, dtype=complex)
    if arr.ndim != 1 or len(arr) < 2:
        raise ValueError("custom pulse needs a 1D array of at least 2 samples")
    if not np.isfinite(dx) or dx <= 0.0:
        raise ValueError(f"sample spacing must be positive, got {dx!r}")
    norm2 = float(np.trapezoid(np.abs(arr) ** 2, dx=dx))
    if norm2 <= 0.0:
        raise UnnormalizedPulse("custom pulse has zero norm")
    if abs(norm2 - 1.0) > _NORM_WARN:
        warnings.warn(
            f"custom pulse norm^2 = {norm2:.6g}; renormalizing", stacklevel=2
        )
    arr = arr / math.sqrt(norm2)
    arr.setflags(write=False)
    return Pulse(shape=PulseShape.CUSTOM, samples=arr, dx=float(dx))


def evaluate(pulse: Pulse, x):
    """psi(x); accepts scalars or arrays, zero for x > 0 / outside the grid."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape, dtype=complex)
    if pulse.shape == PulseShape.EXPONENTIAL:
        a = pulse.alpha
        m = x <= 0.0
        out[m] = 1j * math.sqrt(a) * np.exp((1j * pulse.omega + a / 2.0) * x[m])
    elif pulse.shape == PulseShape.HALF_GAUSSIAN:
        a = pulse.alpha
        m = x <= 0.0
        out[m] = (
            1j
            * (2.0 * a * a / math.pi) ** 0.25
            * np.exp(-((a * x[m]) ** 2) / 4.0 + 1j * pulse.omega * x[m])
        )
    else:
        n = len(pulse.samples)
        x0 = -(n - 1) * pulse.dx
        m = (x >= x0) & (x <= 0.0)
        if np.any(m):
            grid = np.linspace(x0, 0.0, n)
            out[m] = np.interp(x[m], grid, pulse.samples.real) + 1j * np.interp(
                x[m], grid, pulse.samples.imag
            )
    return out if out.ndim else complex(out)


def spontaneous_wavefunction(params: SystemParams, x):
    """Wavepacket of a photon spontaneously emitted by the excited emitter.

    Equals the alpha = 1 exponential pulse when there is no loss. With loss
    the decay rate is gamma + gamma_ng and the function is deliberately not
    renormalized: its squared norm is the guided fraction beta.
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape, dtype=complex)
    m = x <= 0.0
    rate = (params.gamma + params.gamma_ng) / 2.0
    out[m] = (
        1j * math.sqrt(params.gamma) * np.exp((1j * params.omega + rate) * x[m])
    )
    return out if out.ndim else complex(out)


def overlap_f(pulse: Pulse, params: SystemParams) -> float:
    """Indistinguishability factor F = |<psi|phi_sp>|^2.

    Quadrature over the overlap of the incident pulse with the spontaneous
    profile; for built-ins the inner product is real up to roundoff (both
    carry the same global phase at matched carrier).
    """
    if pulse.shape == PulseShape.CUSTOM:
        norm2 = float(np.trapezoid(np.abs(pulse.samples) ** 2, dx=pulse.dx))
        if abs(norm2 - 1.0) > 100 * _NORM_TOL:
            raise UnnormalizedPulse(f"pulse norm^2 = {norm2!r}")
        n = len(pulse.samples)
        grid = np.linspace(-(n - 1) * pulse.dx, 0.0, n)
        integrand = np.conj(pulse.samples) * spontaneous_wavefunction(params, grid)
        inner = complex(np.trapezoid(integrand, dx=pulse.dx))
        return float(abs(inner) ** 2)

    lo = -40.0 / min(1.0, pulse.alpha)

    def f_re(x):
        return (np.conj(evaluate(pulse, x)) * spontaneous_wavefunction(params, x)).real

    def f_im(x):
        return (np.conj(evaluate(pulse, x)) * spontaneous_wavefunction(params, x)).imag

    re, _ = quad(f_re, lo, 0.0, epsabs=1e-13, epsrel=1e-13, limit=200)
    im, _ = quad(f_im, lo, 0.0, epsabs=1e-13, epsrel=1e-13, limit=200)
    if pulse.omega == params.omega:
        assert abs(im) < 1e-8, f"overlap not phase-aligned: Im = {im:.3e}"
    return float(re * re + im * im)


def exponential_f_closed(alpha: float, gamma_ng: float = 0.0) -> float:
    """Closed form of F for the exponential pulse, loss included."""
    s = 1.0 + gamma_ng + alpha
    return 4.0 * alpha / (s * s)


def half_gaussian_f_closed(alpha: float, gamma_ng: float = 0.0) -> float:
    """Closed form of F for the half-Gaussian pulse, loss included."""
    b = (1.0 + gamma_ng) / (2.0 * alpha)
    return (
        math.sqrt(2.0 * math.pi)
        / alpha
        * math.exp(2.0 * b * b)
        * math.erfc(b) ** 2
    )


def pulse_width(pulse: Pulse) -> float:
    """Characteristic temporal scale, used for resolution checks."""
    if pulse.shape == PulseShape.CUSTOM:
        # oracle bins must not be coarser than the provided sampling
        return 10.0 * pulse.dx
    return 1.0 / pulse.alpha


def pulse_support(pulse: Pulse, tail: float = 1e-8) -> float:
    """Duration after which |psi|^2 has dropped below `tail` of its peak."""
    if pulse.shape == PulseShape.CUSTOM:
        return (len(pulse.samples) - 1) * pulse.dx
    cut = math.log(1.0 / tail)
    if pulse.shape == PulseShape.EXPONENTIAL:
        return cut / pulse.alpha
    return math.sqrt(2.0 * cut) / pulse.alpha


_GL4_NODES = np.array(
    [-0.861136311594053, -0.339981043584856, 0.339981043584856, 0.861136311594053]
)
_GL4_WEIGHTS = np.array(
    [0.347854845137454, 0.652145154862546, 0.652145154862546, 0.347854845137454]
)


def time_bin_amplitudes(pulse: Pulse, dx: float, n: int) -> np.ndarray:
    """L2 projection of the pulse envelope onto n time bins of width dx.

    Bin j covers arrival times [j dx, (j+1) dx); the carrier is removed
    (it is restored as a frame phase in the time evolution). The result is
    renormalized so the discrete norm is exactly 1.
    """
    j = np.arange(n)
    t0 = j * dx
    if pulse.shape == PulseShape.EXPONENTIAL:
        a = pulse.alpha
        z = a / 2.0
        vals = (
            1j
            * math.sqrt(a)
            * (np.exp(-z * t0) - np.exp(-z * (t0 + dx)))
            / z
            / math.sqrt(dx)
        )
    else:
        if pulse.shape == PulseShape.HALF_GAUSSIAN:
            a = pulse.alpha

            def env(t):
                return 1j * (2.0 * a * a / math.pi) ** 0.25 * np.exp(-((a * t) ** 2) / 4.0)

        else:
            ns = len(pulse.samples)
            grid_t = np.linspace(0.0, (ns - 1) * pulse.dx, ns)
            rev = pulse.samples[::-1]  # samples as a function of t = -x

            def env(t):
                return np.interp(t, grid_t, rev.real, right=0.0) + 1j * np.interp(
                    t, grid_t, rev.imag, right=0.0
                )

        acc = np.zeros(n, dtype=complex)
        for nd, w in zip(_GL4_NODES, _GL4_WEIGHTS):
            acc += w * env(t0 + dx * (nd + 1.0) / 2.0)
        vals = acc * (dx / 2.0) / math.sqrt(dx)
    norm = math.sqrt(float(np.sum(np.abs(vals) ** 2)))
    if norm <= 0.0:
        raise UnnormalizedPulse("pulse has no weight inside the evolution window")
    return vals / norm
