import math

import numpy as np
import pytest
import scipy.special as sp

from annulab import specfun


def test_log_gamma_exact_points():
    assert specfun.log_gamma(1.0) == pytest.approx(0.0, abs=1e-15)
    assert specfun.log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-14)
    assert specfun.log_gamma(11.0) == pytest.approx(math.log(3628800.0), rel=1e-14)


def test_log_gamma_relative_accuracy():
    import mpmath

    for x in [0.5, 0.7, 1.0, 2.5, 17.0, 123.4, 5678.0, 1e4]:
        exact = float(mpmath.log(mpmath.gamma(x)))
        if exact != 0.0:
            assert abs(specfun.log_gamma(x) - exact) <= 1e-12 * abs(exact)


def test_log_gamma_domain():
    with pytest.raises(ValueError):
        specfun.log_gamma(0.0)
    with pytest.raises(ValueError):
        specfun.log_gamma(-3.0)


def test_bessel_trivial_values():
    assert specfun.bessel_j(0.0, 0.0) == 1.0
    assert specfun.bessel_j(1.0, 0.0) == 0.0
    # half-integer closed form: J_{1/2}(r) = sqrt(2/(pi r)) sin(r)
    assert specfun.bessel_j(0.5, math.pi / 2) == pytest.approx(2.0 / math.pi, rel=1e-12)


def test_series_vs_integral_cross_oracle():
    # the two independent in-package evaluation routes must agree
    a = specfun.bessel_j(1.0, 1.0)
    b = specfun.bessel_j_integral(1.0, 1.0)
    assert abs(a - b) <= 1e-10

    for nu in (1.0, 2.0, 5.0, 10.0):
        for frac in np.linspace(0.1, 1.0, 10):
            r = 2.0 * nu * frac
            s = specfun.bessel_j(nu, r)
            i = specfun.bessel_j_integral(nu, r)
            assert abs(s - i) <= 1e-8 * max(abs(s), abs(i)), (nu, r, s, i)


def test_bessel_against_scipy():
    for nu in (0.0, 0.5, 1.0, 3.0, 8.0, 12.5):
        for r in (0.1, 1.0, 4.0, 9.0, 20.0):
            assert specfun.bessel_j(nu, r) == pytest.approx(float(sp.jv(nu, r)), abs=2e-13, rel=1e-9)


def test_bessel_log_underflow_regime():
    # linear evaluation underflows; log-magnitude form stays finite
    logmag, sign = specfun.bessel_j_log(200.0, 0.1)
    assert sign == 1
    assert math.isfinite(logmag) and logmag < -600
    assert specfun.bessel_j(200.0, 0.1) == 0.0  # graceful underflow


def test_bessel_positive_below_first_zero():
    for nu in (0.0, 1.0, 5.0):
        alpha = specfun.first_positive_zero(nu)
        for r in np.linspace(0.05, 0.999 * alpha, 17):
            assert specfun.bessel_j(nu, r) > 0.0


def test_first_zero_values():
    assert specfun.first_positive_zero(0.5) == pytest.approx(math.pi, abs=1e-9)
    assert specfun.first_positive_zero(0.0) == pytest.approx(2.404825557695773, abs=1e-9)
    # scipy zeros as an extra oracle for integer orders
    for order in (1, 2, 10):
        assert specfun.first_positive_zero(float(order)) == pytest.approx(
            float(sp.jn_zeros(order, 1)[0]), abs=1e-8
        )


def test_first_zero_monotone_in_order():
    zeros = [specfun.first_positive_zero(nu) for nu in (0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0)]
    assert all(z2 > z1 for z1, z2 in zip(zeros, zeros[1:]))


def test_first_zero_large_order_asymptotics():
    # alpha ~ nu + 1.855757 nu^(1/3) as the order grows; at nu = 10 the
    # remainder is within the unit acceptance window
    alpha = specfun.first_positive_zero(10.0)
    assert abs(alpha - (10.0 + 1.855757 * 10.0 ** (1.0 / 3.0))) <= 1.0


def test_order_validation():
    with pytest.raises(ValueError):
        specfun.bessel_j(-1.0, 1.0)
    with pytest.raises(ValueError):
        specfun.bessel_j(1.0, -1.0)
    with pytest.raises(ValueError):
        specfun.bessel_j(math.inf, 1.0)
