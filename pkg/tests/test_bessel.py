import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from nlhelm import bessel
from conftest import series_j, series_y0


def wronskian_defect(mu, x):
    j, y, jp, yp = bessel.bessel_jy_arrays(mu, np.atleast_1d(x))
    return j * yp - jp * y - 2.0 / (np.pi * np.atleast_1d(x))


def test_small_x_series_leading_term():
    # J_0(x) ~ 1 - x^2/4 for tiny x
    v = bessel.bessel_jy(0.0, 1e-3)
    assert abs(v.j - (1.0 - 1e-6 / 4.0)) < 1e-12


def test_half_integer_closed_form_value():
    # J_{1/2}(x) = sqrt(2/(pi x)) sin x, so J_{1/2}(pi/2) = 2/pi; the series
    # oracle confirms the closed form independently of scipy
    x = math.pi / 2.0
    closed = math.sqrt(2.0 / (math.pi * x)) * math.sin(x)
    assert abs(closed - 2.0 / math.pi) < 1e-15
    assert abs(series_j(0.5, x) - closed) < 1e-13
    v = bessel.bessel_jy(0.5, x)
    assert abs(v.j - 2.0 / math.pi) < 1e-12


@pytest.mark.parametrize("mu", [0.5, 1.5, 2.5])
def test_half_integer_closed_forms_relative(mu):
    xs = np.linspace(0.3, 40.0, 117)
    j, y, _, _ = bessel.bessel_jy_arrays(mu, xs)
    pref = np.sqrt(2.0 / (np.pi * xs))
    if mu == 0.5:
        jc, yc = pref * np.sin(xs), -pref * np.cos(xs)
    elif mu == 1.5:
        jc = pref * (np.sin(xs) / xs - np.cos(xs))
        yc = -pref * (np.cos(xs) / xs + np.sin(xs))
    else:
        jc = pref * ((3.0 / xs ** 2 - 1.0) * np.sin(xs) - 3.0 / xs * np.cos(xs))
        yc = -pref * ((3.0 / xs ** 2 - 1.0) * np.cos(xs) + 3.0 / xs * np.sin(xs))
    assert_allclose(j, jc, rtol=1e-12, atol=1e-300)
    assert_allclose(y, yc, rtol=1e-12, atol=1e-300)


def test_wronskian_identity_envelope_grid():
    # J Y' - J' Y = 2/(pi x) across the validated envelope
    xs = np.logspace(math.log10(bessel.X_MIN), math.log10(bessel.X_MAX), 60)
    for mu in np.arange(0.0, 60.5, 6.0):
        j, y, jp, yp = bessel.bessel_jy_arrays(mu, xs)
        defect = np.abs(j * yp - jp * y - 2.0 / (np.pi * xs))
        tol = np.maximum(1e-10, 1e-8 * (np.abs(j * yp) + np.abs(jp * y)))
        assert np.all(defect <= tol), f"mu={mu}"


def test_wronskian_value_at_2():
    # at x=2 the Wronskian equals 1/pi for any order
    for mu in (0.0, 0.7, 5.0):
        j, y, jp, yp = bessel.bessel_jy_arrays(mu, np.array([2.0]))
        assert abs(j[0] * yp[0] - jp[0] * y[0] - 1.0 / math.pi) < 1e-14


def test_series_oracle_j0_y0():
    v = bessel.bessel_jy(0.0, 1.0)
    assert abs(v.j - series_j(0.0, 1.0)) < 1e-14
    assert abs(v.y - series_y0(1.0)) < 1e-13


def test_hankel_modsq_values():
    # |H_{1/2}|^2 = 2/(pi x) exactly
    assert abs(bessel.hankel1_modsq(0.5, 1.0) - 2.0 / math.pi) < 1e-13
    xs = np.linspace(0.5, 7.0, 9)
    assert_allclose(bessel.hankel1_modsq(0.5, xs), 2.0 / (np.pi * xs), rtol=1e-12)
    # frozen series-oracle value at mu=0, x=1
    assert abs(bessel.hankel1_modsq(0.0, 1.0) - 0.5933167912462313) < 1e-13
    assert abs(series_j(0.0, 1.0) ** 2 + series_y0(1.0) ** 2 - 0.5933167912462313) < 1e-12


def test_hankel_modsq_monotone_decreasing():
    # d/dx (J^2+Y^2) < 0: check both sampled values and the derivative form
    assert bessel.hankel1_modsq(1.0, 2.0) > bessel.hankel1_modsq(1.0, 3.0)
    xs = np.linspace(0.05, 150.0, 400)
    for mu in (0.0, 0.25, 0.5, 1.0, 3.5, 12.0):
        j, y, jp, yp = bessel.bessel_jy_arrays(mu, xs)
        assert np.all(j * jp + y * yp < 0.0), f"mu={mu}"


def test_x_hankel_modsq_monotonicity_split_at_half():
    xs = np.linspace(0.05, 120.0, 500)
    for mu in (0.5, 0.75, 2.0, 9.0):
        vals = xs * bessel.hankel1_modsq(mu, xs)
        assert np.all(np.diff(vals) <= 1e-12), f"mu={mu} should be nonincreasing"
        assert np.all(vals >= 2.0 / math.pi - 1e-12), f"mu={mu} limit bound"
    for mu in (0.0, 0.25, 0.49):
        vals = xs * bessel.hankel1_modsq(mu, xs)
        assert np.all(np.diff(vals) >= -1e-12), f"mu={mu} should be nondecreasing"


def test_derivative_via_recurrence_matches_fd():
    # the recurrence derivative agrees with a central difference
    for mu, x in [(0.0, 1.3), (2.5, 7.0), (10.0, 20.0)]:
        v = bessel.bessel_jy(mu, x)
        d = 1e-6
        vp = bessel.bessel_jy(mu, x + d)
        vm = bessel.bessel_jy(mu, x - d)
        assert abs((vp.j - vm.j) / (2 * d) - v.jp) < 1e-8 * max(1, abs(v.jp))
        assert abs((vp.y - vm.y) / (2 * d) - v.yp) < 1e-8 * max(1, abs(v.yp))


def test_domain_errors():
    with pytest.raises(ValueError):
        bessel.bessel_jy(0.5, 0.0)
    with pytest.raises(ValueError):
        bessel.bessel_jy(0.5, -1.0)
    with pytest.raises(ValueError):
        bessel.bessel_jy(-0.5, 1.0)


def test_overflow_signal():
    # far outside the envelope Y overflows and must signal, not return inf
    with pytest.raises(OverflowError):
        bessel.bessel_jy(150.0, 1e-3)


def test_error_estimate_contract():
    inside = bessel.bessel_jy(1.0, 10.0)
    assert math.isfinite(inside.abs_err_est)
    outside = bessel.bessel_jy(0.5, 500.0)  # x beyond X_MAX
    assert math.isinf(outside.abs_err_est)
    assert math.isfinite(outside.j)  # the call still succeeds


def test_determinism():
    a = bessel.bessel_jy(3.25, 17.0)
    b = bessel.bessel_jy(3.25, 17.0)
    assert (a.j, a.y, a.jp, a.yp) == (b.j, b.y, b.jp, b.yp)


def test_zero_scan_j_half():
    roots = bessel.bessel_zero_scan(0.5, "j", 1.0, 10.0)
    assert_allclose(roots, [math.pi, 2 * math.pi, 3 * math.pi], rtol=1e-12)


def test_zero_scan_y_half():
    # Y_{1/2} ~ -cos x: zeros at odd multiples of pi/2 inside [1, 10]
    roots = bessel.bessel_zero_scan(0.5, "y", 1.0, 10.0)
    assert_allclose(roots, [math.pi / 2, 3 * math.pi / 2, 5 * math.pi / 2], rtol=1e-12)


def test_zero_scan_empty_below_first_zero():
    # first zero of J_0 is ~2.405
    assert len(bessel.bessel_zero_scan(0.0, "j", 0.1, 2.0)) == 0


def test_zero_scan_custom_combination():
    # J + Y of order 1/2 ~ sin x - cos x: zeros at pi/4 + m pi
    roots = bessel.bessel_zero_scan(0.5, (1.0, 1.0), 1.0, 9.0)
    assert_allclose(roots, [math.pi / 4 + math.pi, math.pi / 4 + 2 * math.pi], rtol=1e-12)


def test_zero_scan_rejects_coarse_step():
    with pytest.raises(ValueError, match="too coarse"):
        bessel.bessel_zero_scan(0.5, "j", 1.0, 30.0, step=10.0)


def test_zero_scan_residuals():
    roots = bessel.bessel_zero_scan(7.5, "j", 1.0, 60.0)
    assert len(roots) > 10
    vals = np.abs(bessel.cylinder(7.5, 1.0, 0.0, roots))
    # |f(root)| small relative to the local slope scale
    _, _, jp, _ = bessel.bessel_jy_arrays(7.5, roots)
    assert np.all(vals <= 1e-10 * np.maximum(1.0, np.abs(jp) * roots))
