"""Exact discretization of linear constant-coefficient systems.

For d/dt z = A z + b the exact one-step map is
z_{n+1} = e^{hA} z_n + phi1(hA) h b.  For the trace-free 2x2 matrices that
arise from linearized Hamiltonian flows, A^2 = -omega_sq * I, so e^{hA} and
phi1(hA) reduce to trig (omega_sq > 0), hyperbolic (omega_sq < 0) or
polynomial (omega_sq = 0) closed forms.  Using phi1 instead of
(e^{hA} - I) A^{-1} keeps singular A valid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateStepError
from .hamiltonian import LinearSystem

# below this |omega_sq|, sin/sinh closed forms lose digits; use the series
_DEGENERATE_OMEGA_SQ = 1e-12


@dataclass(slots=True)
class AffineStepMap:
    M: np.ndarray
    w: np.ndarray

    def apply(self, z):
        return self.M @ np.asarray(z, dtype=float) + self.w

    def compose(self, first: "AffineStepMap") -> "AffineStepMap":
        """Map equal to `first` followed by self."""
        return AffineStepMap(self.M @ first.M, self.M @ first.w + self.w)


def _cos_sinc_phi2(omega_sq: float, h: float):
    """cos(h w), sin(h w)/w and (1 - cos(h w))/w^2 for w^2 of any sign."""
    if omega_sq > _DEGENERATE_OMEGA_SQ:
        w = math.sqrt(omega_sq)
        c = math.cos(h * w)
        s = math.sin(h * w) / w
        # 1 - cos via half-angle to avoid cancellation at small h*w
        p2 = 2.0 * math.sin(0.5 * h * w) ** 2 / omega_sq
        return c, s, p2
    if omega_sq < -_DEGENERATE_OMEGA_SQ:
        mu = math.sqrt(-omega_sq)
        c = math.cosh(h * mu)
        s = math.sinh(h * mu) / mu
        p2 = 2.0 * math.sinh(0.5 * h * mu) ** 2 / (-omega_sq)
        return c, s, p2
    z = omega_sq * h * h
    c = 1.0 - z / 2.0 + z * z / 24.0
    s = h * (1.0 - z / 6.0 + z * z / 120.0)
    p2 = h * h * (0.5 - z / 24.0 + z * z / 720.0)
    return c, s, p2


def exact_step_map(lin: LinearSystem, h: float) -> AffineStepMap:
    """One exact step of size h for the affine system (A, b)."""
    c, s, p2 = _cos_sinc_phi2(lin.omega_sq, h)
    M = c * np.eye(2) + s * lin.A
    w = s * lin.b + p2 * (lin.A @ lin.b)
    return AffineStepMap(M, w)


def exact_exp_growth_delta(a: float, h: float) -> float:
    """Denominator function of the exact scheme for xdot = a x."""
    if a == 0.0:
        return h
    return math.expm1(a * h) / a


def exact_harmonic_recurrence(omega: float, h: float,
                              x_n: float, x_nm1: float) -> float:
    """x_{n+1} from the exact three-point recurrence of the oscillator."""
    if omega <= 0:
        raise ValueError("omega must be positive")
    return 2.0 * math.cos(omega * h) * x_n - x_nm1


def exact_harmonic_momentum(omega: float, h: float,
                            x_n: float, x_np1: float) -> float:
    """p_n reconstructed from consecutive exact oscillator samples."""
    s = math.sin(omega * h)
    if s == 0.0:
        raise DegenerateStepError("sin(omega*h) = 0: momentum not recoverable")
    return (x_np1 - math.cos(omega * h) * x_n) / s
