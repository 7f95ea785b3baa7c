"""One-dimensional Hamiltonian systems.

A system is defined by an energy evaluator ``H(x, p)`` written against the
generic scalar helpers from :mod:`discgrad.jets`, so the same code runs on
floats and on jets.  Built-in systems also carry closed-form partial
derivatives (again generic), which give the fast path for steppers and the
Picard iteration for flow Taylor coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .jets import Jet, gcos, gsin

PARTIAL_KEYS = ("x", "p", "xx", "xp", "pp", "xxx", "xxp", "xpp", "ppp")


@dataclass(slots=True)
class PhaseState:
    x: float
    p: float
    t: float = 0.0


@dataclass(slots=True)
class LinearSystem:
    """Linearized Hamiltonian flow d/dt (xi, eta) = A (xi, eta) + b.

    A is trace-free and satisfies A^2 = -omega_sq * I with
    omega_sq = H_xx * H_pp - H_xp^2.
    """
    A: np.ndarray
    b: np.ndarray
    omega_sq: float


@dataclass(slots=True)
class HamiltonianSystem:
    name: str
    energy: object                      # callable (x, p) -> scalar, generic
    kinetic: object = None              # callable (p), when H = T(p) + V(x)
    potential: object = None            # callable (x)
    partials: dict = field(default_factory=dict)  # closed-form, generic
    quadratic_kinetic: bool = False     # T(p) = p^2 / 2 exactly
    # optional cancellation-free divided differences (x, x1, p, p1); these
    # keep the implicit solver convergent to round-off near turning points
    dd_x: object = None
    dd_p: object = None

    @property
    def separable(self) -> bool:
        return self.kinetic is not None and self.potential is not None

    def d_x(self, x, p):
        """H_x, via the closed form when available, else a jet probe."""
        fn = self.partials.get("x")
        if fn is not None:
            return fn(x, p)
        return self.energy(Jet.variable(x, 1), p).coeffs[1]

    def d_p(self, x, p):
        fn = self.partials.get("p")
        if fn is not None:
            return fn(x, p)
        return self.energy(x, Jet.variable(p, 1)).coeffs[1]


def eval_energy(sys: HamiltonianSystem, s: PhaseState) -> float:
    return sys.energy(s.x, s.p)


def eval_partials(sys: HamiltonianSystem, s: PhaseState, max_order: int = 2,
                  use_oracle: bool = False) -> dict:
    """Mixed partials of H at a state, up to third order.

    Computed by evaluating H over jets along the x, p and diagonal
    directions; mixed partials are recovered from the directional
    coefficients.  With ``use_oracle=True`` the system's closed forms are
    used instead (the two paths are cross-checked in the test suite).
    """
    if max_order not in (1, 2, 3):
        raise ValueError("max_order must be 1, 2 or 3")
    x, p = s.x, s.p
    keys = PARTIAL_KEYS[:2] if max_order == 1 else (
        PARTIAL_KEYS[:5] if max_order == 2 else PARTIAL_KEYS)
    if use_oracle:
        missing = [k for k in keys if k not in sys.partials]
        if missing:
            raise ValueError(f"system {sys.name!r} has no closed form for {missing}")
        return {k: sys.partials[k](x, p) for k in keys}

    m = max_order
    cx = sys.energy(Jet.variable(x, m), p).coeffs
    cp = sys.energy(x, Jet.variable(p, m)).coeffs
    out = {"x": cx[1], "p": cp[1]}
    if m >= 2:
        out["xx"] = 2.0 * cx[2]
        out["pp"] = 2.0 * cp[2]
        cd = sys.energy(Jet.variable(x, m), Jet.variable(p, m)).coeffs
        out["xp"] = cd[2] - cx[2] - cp[2]
    if m == 3:
        out["xxx"] = 6.0 * cx[3]
        out["ppp"] = 6.0 * cp[3]
        # opposite-diagonal probe separates the two mixed third partials
        ce = sys.energy(Jet.variable(x, 3),
                        Jet([p, -1.0, 0.0, 0.0])).coeffs
        out["xpp"] = cd[3] + ce[3] - 2.0 * cx[3]
        out["xxp"] = cd[3] - ce[3] - 2.0 * cp[3]
    return out


def linearize(sys: HamiltonianSystem, s: PhaseState) -> LinearSystem:
    """Linear system of the flow around a fixed phase point."""
    d = eval_partials(sys, s, max_order=2,
                      use_oracle=all(k in sys.partials for k in PARTIAL_KEYS[:5]))
    A = np.array([[d["xp"], d["pp"]],
                  [-d["xx"], -d["xp"]]], dtype=float)
    b = np.array([d["p"], -d["x"]], dtype=float)
    omega_sq = d["xx"] * d["pp"] - d["xp"] ** 2
    return LinearSystem(A, b, omega_sq)


def taylor_flow_coeffs(sys: HamiltonianSystem, s: PhaseState, N: int):
    """Taylor series of the flow through (x, p), as monomial-basis jets.

    Picard iteration over jets: starting from the constant series, apply

        x <- x0 + int H_p(x, p) dh,    p <- p0 - int H_x(x, p) dh

    N times; each pass fixes one more coefficient.  The k-th monomial
    coefficient equals (d^k x / dt^k) / k!.
    """
    if not 1 <= N <= 16:
        raise ValueError("N must be in [1, 16]")
    hx = sys.partials.get("x")
    hp = sys.partials.get("p")
    x0, p0 = s.x, s.p
    X = Jet.constant(x0, 0)
    P = Jet.constant(p0, 0)
    # pass i fixes coefficient i, so derivatives are only needed at order i-1
    for i in range(1, N + 1):
        if hx is not None and hp is not None:
            fx = hp(X, P)
            fp = hx(X, P)
        else:
            # nested-jet differentiation: outer order-1 jets probe H_p, H_x
            zero = Jet.constant(0.0, i - 1)
            one = Jet.constant(1.0, i - 1)
            fx = sys.energy(Jet([X, zero]), Jet([P, one])).coeffs[1]
            fp = sys.energy(Jet([X, one]), Jet([P, zero])).coeffs[1]
        fxc = fx.coeffs if isinstance(fx, Jet) else [fx] + [0.0] * (i - 1)
        fpc = fp.coeffs if isinstance(fp, Jet) else [fp] + [0.0] * (i - 1)
        X = Jet([x0] + [fxc[k] / (k + 1) for k in range(i)], i)
        P = Jet([p0] + [-fpc[k] / (k + 1) for k in range(i)], i)
    return X, P


# -- built-in systems ----------------------------------------------------

def _pendulum_dd_x(x, x1, p, p1):
    # (cos x - cos x1)/(x1 - x) via the product identity: no cancellation
    half = 0.5 * (x1 - x)
    ratio = math.sin(half) / half if half != 0.0 else 1.0
    return math.sin(0.5 * (x + x1)) * ratio


def make_pendulum() -> HamiltonianSystem:
    """H = p^2/2 - cos x."""
    return HamiltonianSystem(
        name="pendulum",
        energy=lambda x, p: 0.5 * p * p - gcos(x),
        kinetic=lambda p: 0.5 * p * p,
        potential=lambda x: -gcos(x),
        quadratic_kinetic=True,
        dd_x=_pendulum_dd_x,
        dd_p=lambda x, x1, p, p1: 0.5 * (p + p1),
        partials={
            "x": lambda x, p: gsin(x),
            "p": lambda x, p: p,
            "xx": lambda x, p: gcos(x),
            "xp": lambda x, p: 0.0,
            "pp": lambda x, p: 1.0,
            "xxx": lambda x, p: -gsin(x),
            "xxp": lambda x, p: 0.0,
            "xpp": lambda x, p: 0.0,
            "ppp": lambda x, p: 0.0,
        },
    )


def make_harmonic(omega: float = 1.0) -> HamiltonianSystem:
    """H = p^2/2 + omega^2 x^2 / 2."""
    w2 = omega * omega
    return HamiltonianSystem(
        name=f"harmonic:{omega:g}",
        energy=lambda x, p: 0.5 * p * p + 0.5 * w2 * x * x,
        kinetic=lambda p: 0.5 * p * p,
        potential=lambda x: 0.5 * w2 * x * x,
        quadratic_kinetic=True,
        dd_x=lambda x, x1, p, p1: 0.5 * w2 * (x + x1),
        dd_p=lambda x, x1, p, p1: 0.5 * (p + p1),
        partials={
            "x": lambda x, p: w2 * x,
            "p": lambda x, p: p,
            "xx": lambda x, p: w2,
            "xp": lambda x, p: 0.0,
            "pp": lambda x, p: 1.0,
            "xxx": lambda x, p: 0.0,
            "xxp": lambda x, p: 0.0,
            "xpp": lambda x, p: 0.0,
            "ppp": lambda x, p: 0.0,
        },
    )


def make_crossterm(alpha: float = 0.5) -> HamiltonianSystem:
    """H = p^2/2 + x^2/2 + alpha*x*p, a non-separable test case."""
    return HamiltonianSystem(
        name=f"crossterm:{alpha:g}",
        energy=lambda x, p: 0.5 * p * p + 0.5 * x * x + alpha * x * p,
        dd_x=lambda x, x1, p, p1: 0.5 * (x + x1) + 0.5 * alpha * (p + p1),
        dd_p=lambda x, x1, p, p1: 0.5 * (p + p1) + 0.5 * alpha * (x + x1),
        partials={
            "x": lambda x, p: x + alpha * p,
            "p": lambda x, p: p + alpha * x,
            "xx": lambda x, p: 1.0,
            "xp": lambda x, p: alpha,
            "pp": lambda x, p: 1.0,
            "xxx": lambda x, p: 0.0,
            "xxp": lambda x, p: 0.0,
            "xpp": lambda x, p: 0.0,
            "ppp": lambda x, p: 0.0,
        },
    )


def system_from_name(name: str) -> HamiltonianSystem:
    """Resolve CLI-style system names: pendulum, harmonic:W, crossterm:A."""
    if name == "pendulum":
        return make_pendulum()
    if name == "harmonic" or name.startswith("harmonic:"):
        omega = float(name.split(":", 1)[1]) if ":" in name else 1.0
        return make_harmonic(omega)
    if name == "crossterm" or name.startswith("crossterm:"):
        alpha = float(name.split(":", 1)[1]) if ":" in name else 0.5
        return make_crossterm(alpha)
    raise ValueError(f"unknown system {name!r}")
