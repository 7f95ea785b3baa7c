"""Elliptic integrals, Jacobi functions and the exact pendulum orbit."""

import math

import pytest
from scipy.integrate import quad

from discgrad.reference import (EquilibriumError, InfinitePeriodError,
                                classify_orbit, elliptic_K, jacobi_am,
                                jacobi_sn_cn_dn, pendulum_exact,
                                pendulum_period)


def test_elliptic_K_endpoints():
    assert elliptic_K(0.0) == pytest.approx(math.pi / 2, rel=1e-15)
    with pytest.raises(ValueError):
        elliptic_K(1.0)
    with pytest.raises(ValueError):
        elliptic_K(-0.1)


@pytest.mark.parametrize("k", [0.1, 0.5, 0.9, 0.99])
def test_elliptic_K_against_quadrature(k):
    val, err = quad(lambda t: 1.0 / math.sqrt(1.0 - (k * math.sin(t)) ** 2),
                    0.0, math.pi / 2, epsabs=1e-13, epsrel=1e-13, limit=200)
    assert elliptic_K(k) == pytest.approx(val, rel=1e-12)


def test_quoted_periods():
    assert pendulum_period(0.02) == pytest.approx(6.283342396, rel=1e-8)
    assert pendulum_period(1.8) == pytest.approx(9.12219655, rel=1e-8)


def test_small_oscillation_limit():
    assert pendulum_period(1e-6) == pytest.approx(2.0 * math.pi, rel=1e-10)


def test_period_errors():
    with pytest.raises(InfinitePeriodError):
        pendulum_period(2.0)
    with pytest.raises(InfinitePeriodError):
        pendulum_period(-2.0)
    with pytest.raises(EquilibriumError):
        pendulum_period(0.0)


def test_classify_orbit():
    assert classify_orbit(1.8).regime == "libration"
    assert classify_orbit(1.8).k == 0.9
    assert classify_orbit(2.5).regime == "rotation"
    assert classify_orbit(2.5).k == 0.8
    assert classify_orbit(2.0).regime == "separatrix"
    assert classify_orbit(-1.0).regime == "libration"


def test_jacobi_trig_limit(rng):
    for _ in range(10):
        u = rng.uniform(-5, 5)
        sn, cn, dn = jacobi_sn_cn_dn(u, 0.0)
        assert sn == math.sin(u) and cn == math.cos(u) and dn == 1.0


def test_jacobi_at_zero(rng):
    for k in (0.1, 0.6, 0.95):
        sn, cn, dn = jacobi_sn_cn_dn(0.0, k)
        assert abs(sn) < 1e-15 and cn == pytest.approx(1.0) \
            and dn == pytest.approx(1.0)


def test_jacobi_identities(rng):
    for _ in range(100):
        u = rng.uniform(-8, 8)
        k = rng.uniform(0.0, 0.999)
        sn, cn, dn = jacobi_sn_cn_dn(u, k)
        assert sn * sn + cn * cn == pytest.approx(1.0, abs=1e-12)
        assert dn * dn + k * k * sn * sn == pytest.approx(1.0, abs=1e-11)


def test_jacobi_quarter_period():
    k = 0.7
    K = elliptic_K(k)
    sn, cn, dn = jacobi_sn_cn_dn(K, k)
    assert sn == pytest.approx(1.0, abs=1e-12)
    assert cn == pytest.approx(0.0, abs=1e-12)
    assert dn == pytest.approx(math.sqrt(1.0 - k * k), rel=1e-10)


def test_jacobi_am_monotone():
    k = 0.9
    vals = [jacobi_am(u, k) for u in (0.0, 1.0, 2.0, 5.0, 10.0)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_exact_initial_condition():
    for p0 in (0.02, 1.8, 2.001, 3.0, -1.8, 2.0):
        s = pendulum_exact(p0, 0.0)
        assert abs(s.x) < 1e-13
        assert s.p == pytest.approx(p0, rel=1e-13)


def test_exact_full_period_return():
    T = pendulum_period(1.8)
    s = pendulum_exact(1.8, T)
    assert abs(s.x) < 1e-8
    assert s.p == pytest.approx(1.8, abs=1e-8)


def test_energy_conservation(rng):
    for _ in range(100):
        p0 = rng.choice([0.02, 0.9, 1.8, 1.99, 2.001, 2.5, 4.0])
        t = rng.uniform(0.0, 200.0)
        s = pendulum_exact(p0, t)
        e = 0.5 * s.p ** 2 - math.cos(s.x)
        assert e == pytest.approx(0.5 * p0 ** 2 - 1.0, abs=1e-12)


def test_satisfies_equation_of_motion(rng):
    d = 1e-5
    for _ in range(100):
        p0 = rng.choice([0.5, 1.8, 2.001, 3.0])
        t = rng.uniform(0.1, 50.0)
        sm = pendulum_exact(p0, t - d)
        s0 = pendulum_exact(p0, t)
        sp = pendulum_exact(p0, t + d)
        assert (sp.x - sm.x) / (2 * d) == pytest.approx(s0.p, abs=1e-8)
        assert (sp.p - sm.p) / (2 * d) == pytest.approx(-math.sin(s0.x),
                                                        abs=1e-8)


def test_periodicity_libration():
    T = pendulum_period(1.8)
    for t in (0.3, 2.7, 8.1):
        a = pendulum_exact(1.8, t)
        b = pendulum_exact(1.8, t + T)
        assert b.x == pytest.approx(a.x, abs=1e-9)
        assert b.p == pytest.approx(a.p, abs=1e-9)


def test_periodicity_rotation_unwrapped():
    T = pendulum_period(2.5)
    for t in (0.2, 1.9, 6.4):
        a = pendulum_exact(2.5, t)
        b = pendulum_exact(2.5, t + T)
        assert b.x == pytest.approx(a.x + 2.0 * math.pi, abs=1e-9)
        assert b.p == pytest.approx(a.p, abs=1e-9)


def test_separatrix_closed_form():
    s = pendulum_exact(2.0, 0.0)
    assert s.x == pytest.approx(0.0, abs=1e-15)
    assert s.p == pytest.approx(2.0)
    far = pendulum_exact(2.0, 40.0)
    assert far.x == pytest.approx(math.pi, abs=1e-12)
    assert far.p == pytest.approx(0.0, abs=1e-12)


def test_negative_momentum_symmetry():
    a = pendulum_exact(1.8, 1.7)
    b = pendulum_exact(-1.8, 1.7)
    assert b.x == -a.x and b.p == -a.p


def test_long_time_reduction():
    # t of order 1e7: compensated period reduction must keep phase accuracy
    T = pendulum_period(1.8)
    n = 10 ** 6
    a = pendulum_exact(1.8, 0.4)
    b = pendulum_exact(1.8, 0.4 + n * T)
    assert b.x == pytest.approx(a.x, abs=1e-6)
    assert b.p == pytest.approx(a.p, abs=1e-6)
