"""Exact pendulum solution via elliptic integrals and Jacobi functions.

Ground truth for the global-error experiments.  Everything is computed
with the arithmetic-geometric mean: K(k) directly, and sn/cn/dn/am by the
descending Landen recursion on the amplitude.  The modulus convention is
k (not m = k^2) throughout.

Orbit regimes for H = p^2/2 - cos x started at x = 0:

    libration   |p0| < 2,  k = |p0|/2,  period 4 K(k)
    rotation    |p0| > 2,  k = 2/|p0|,  period (in x mod 2 pi) 2 k K(k)
    separatrix  |p0| = 2,  sech/tanh closed form, infinite period
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .hamiltonian import PhaseState

_AGM_TOL = 1e-16


class InfinitePeriodError(ValueError):
    """Separatrix orbit: the period diverges."""


class EquilibriumError(ValueError):
    """p0 = 0 sits at the stable equilibrium; no oscillation."""


def elliptic_K(k: float) -> float:
    """Complete elliptic integral of the first kind, modulus k."""
    if not 0.0 <= k < 1.0:
        raise ValueError(f"modulus must satisfy 0 <= k < 1, got {k}")
    a = 1.0
    b = math.sqrt(1.0 - k * k)
    while abs(a - b) > _AGM_TOL * a:
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (a + b)


def _amplitude_chain(u: float, k: float):
    """Landen chain; returns the amplitude phi0 and the next angle phi1."""
    a = [1.0]
    c = [k]
    b = math.sqrt(1.0 - k * k)
    n = 0
    while abs(c[n]) > _AGM_TOL * a[n]:
        an = 0.5 * (a[n] + b)
        cn = 0.5 * (a[n] - b)
        b = math.sqrt(a[n] * b)
        a.append(an)
        c.append(cn)
        n += 1
        if n > 60:  # AGM is quadratic; this is unreachable for k < 1
            break
    phi = (2 ** n) * a[n] * u
    phis = [phi]
    for i in range(n, 0, -1):
        phi = 0.5 * (phi + math.asin(max(-1.0, min(1.0,
                     c[i] / a[i] * math.sin(phi)))))
        phis.append(phi)
    phi0 = phis[-1]
    phi1 = phis[-2] if len(phis) > 1 else phi0
    return phi0, phi1


def jacobi_am(u: float, k: float) -> float:
    """Jacobi amplitude am(u, k), monotone (not reduced mod 2 pi)."""
    if not 0.0 <= k < 1.0:
        raise ValueError(f"modulus must satisfy 0 <= k < 1, got {k}")
    if k == 0.0:
        return u
    return _amplitude_chain(u, k)[0]


def jacobi_sn_cn_dn(u: float, k: float):
    """Jacobi elliptic sn, cn, dn by the descending Landen transformation."""
    if not 0.0 <= k < 1.0:
        raise ValueError(f"modulus must satisfy 0 <= k < 1, got {k}")
    if k == 0.0:
        return math.sin(u), math.cos(u), 1.0
    phi0, phi1 = _amplitude_chain(u, k)
    sn = math.sin(phi0)
    cn = math.cos(phi0)
    # amplitude-ratio form stays accurate where sqrt(1 - k^2 sn^2) would
    # cancel (k near 1), but degenerates to 0/0 at the quarter period where
    # cn itself vanishes; switch to the defining relation there
    den = math.cos(phi1 - phi0)
    if abs(den) > 0.5:
        dn = cn / den
    else:
        dn = math.sqrt(max(0.0, 1.0 - (k * sn) ** 2))
    return sn, cn, dn


@dataclass(slots=True)
class PendulumOrbit:
    p0: float
    regime: str          # libration | rotation | separatrix
    k: float
    period: float        # inf on the separatrix


def classify_orbit(p0: float) -> PendulumOrbit:
    a = abs(p0)
    if a == 0.0:
        raise EquilibriumError("p0 = 0 is the stable equilibrium")
    if a < 2.0:
        k = a / 2.0
        return PendulumOrbit(p0, "libration", k, 4.0 * elliptic_K(k))
    if a > 2.0:
        k = 2.0 / a
        return PendulumOrbit(p0, "rotation", k, 2.0 * k * elliptic_K(k))
    return PendulumOrbit(p0, "separatrix", 1.0, math.inf)


def pendulum_period(p0: float) -> float:
    """Period of the exact orbit (x advance of 2 pi in the rotation case)."""
    orbit = classify_orbit(p0)
    if orbit.regime == "separatrix":
        raise InfinitePeriodError("|p0| = 2: infinite period on the separatrix")
    return orbit.period


def _reduce_time(t: float, period: float):
    """Split t = n*period + r with compensated residual, |r| <= period/2."""
    n = round(t / period)
    # two-product style compensation keeps r accurate for huge t
    r = t - n * period
    r = r - (math.fma(n, period, -n * period) if hasattr(math, "fma") else 0.0)
    return n, r


def pendulum_exact(p0: float, t: float) -> PhaseState:
    """Exact pendulum state at time t for x(0) = 0, p(0) = p0.

    In the rotation regime x is unwrapped: it accumulates 2 pi per period
    instead of being reduced to a fundamental interval.
    """
    if p0 < 0.0:
        s = pendulum_exact(-p0, t)
        return PhaseState(-s.x, -s.p, t)
    orbit = classify_orbit(p0)
    k = orbit.k
    if orbit.regime == "separatrix":
        x = 4.0 * math.atan(math.exp(t)) - math.pi
        p = 2.0 / math.cosh(t)
        return PhaseState(x, p, t)
    if orbit.regime == "libration":
        _, r = _reduce_time(t, orbit.period)
        sn, cn, _ = jacobi_sn_cn_dn(r, k)
        x = 2.0 * math.asin(max(-1.0, min(1.0, k * sn)))
        p = 2.0 * k * cn
        return PhaseState(x, p, t)
    n, r = _reduce_time(t, orbit.period)
    x = 2.0 * jacobi_am(r / k, k) + 2.0 * math.pi * n
    _, _, dn = jacobi_sn_cn_dn(r / k, k)
    p = 2.0 / k * dn
    return PhaseState(x, p, t)
