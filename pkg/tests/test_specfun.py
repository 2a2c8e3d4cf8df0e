import math

import mpmath
import numpy as np
import pytest
from scipy import integrate

from cauchyid.errors import ParameterError
from cauchyid.specfun import (
    MLParams,
    eval_ml,
    eval_ml_two,
    eval_wright,
    laplace_image,
    ml_tail_integral,
    sign_scan,
    tail_sign,
)


def test_exponential_case():
    r = eval_ml(MLParams(1, 1, 1), -1.0)
    assert r.value == pytest.approx(math.exp(-1), abs=1e-12)
    assert r.abs_err_est < 1e-10


def test_sine_case():
    assert eval_ml(MLParams(2, 2, 1), -4.0).value == pytest.approx(math.sin(2) / 2, abs=1e-12)


@pytest.mark.parametrize("rho,mu,gamma", [(0.5, 1.3, 1.0), (1.7, 2.2, 0.6), (2.0, 0.4, 3.0)])
def test_zero_argument(rho, mu, gamma):
    assert eval_ml(MLParams(rho, mu, gamma), 0.0).value == pytest.approx(1 / math.gamma(mu), rel=1e-14)


def test_two_param_zeros_of_trig():
    assert abs(eval_ml_two(2, 1, -((math.pi / 2) ** 2)).value) < 1e-10
    assert abs(eval_ml_two(2, 3, -((2 * math.pi) ** 2)).value) < 1e-10
    assert eval_ml_two(1.5, 2, 0.0).value == pytest.approx(1.0, abs=1e-15)


def test_positive_argument():
    assert eval_ml(MLParams(1, 1, 1), 2.0).value == pytest.approx(math.exp(2), rel=1e-13)
    assert eval_ml(MLParams(2, 1, 1), 4.0).value == pytest.approx(math.cosh(2), rel=1e-13)


def test_prabhakar_gamma2_against_closed_form():
    # E^2_{1,1}(z) = (1 + z) e^z
    for z in (-0.5, -3.0, -12.0, -40.0):
        assert eval_ml(MLParams(1, 1, 2), z).value == pytest.approx((1 + z) * math.exp(z), abs=1e-12)


def test_against_mpmath_series():
    # independent oracle: mpmath hypergeometric-type direct sum at 50 digits
    def ref(rho, mu, g, z):
        with mpmath.workdps(60):
            return float(
                mpmath.nsum(
                    lambda n: mpmath.rf(g, n) / mpmath.factorial(n) * mpmath.mpf(z) ** n * mpmath.rgamma(mu + rho * n),
                    [0, mpmath.inf],
                )
            )

    for rho, mu, g, z in [(0.7, 1.2, 1.0, -5.0), (1.4, 2.1, 0.8, -8.0), (1.9, 1.5, 1.5, -3.0)]:
        assert eval_ml(MLParams(rho, mu, g), z).value == pytest.approx(ref(rho, mu, g, z), abs=1e-11)


def test_recurrence_sample(rng):
    for _ in range(40):
        rho = rng.uniform(0.05, 2.0)
        mu = rng.uniform(0.2, 5.0)
        z = -rng.uniform(0, 50)
        lhs = eval_ml_two(rho, mu, z).value
        rhs = 1 / math.gamma(mu) + z * eval_ml_two(rho, mu + rho, z).value
        assert abs(lhs - rhs) <= 1e-8 * (1 + abs(lhs))


def test_method_overlap():
    # near |z| = 10 both the series and the asymptotic expansion apply
    from cauchyid.specfun import _asymptotic, _ml_series, _series

    for rho, mu in [(0.6, 1.0), (1.5, 2.5), (1.2, 0.8)]:
        p = MLParams(rho, mu, 1.0)
        for x in (12.0, 20.0):
            s = _series(_ml_series(rho, mu, 1.0), -x)
            a = _asymptotic(p, x)
            assert abs(s.value - a.value) <= s.abs_err_est + a.abs_err_est + 1e-13


def test_large_argument_trig_identity():
    t = np.geomspace(0.1, 50, 64)
    err = max(abs(t_ * t_ * eval_ml_two(2, 3, -t_ * t_).value - (1 - math.cos(t_))) for t_ in t)
    assert err < 1e-9


def test_rejects_bad_params():
    for bad in [(0, 1, 1), (1, -1, 1), (1, 1, 0), (math.nan, 1, 1)]:
        with pytest.raises(ParameterError):
            MLParams(*bad)
    with pytest.raises(ParameterError):
        eval_ml(MLParams(1, 1, 1), math.inf)


def test_wright_examples():
    assert eval_wright(0.3, 1.7, 0.0).value == pytest.approx(1 / math.gamma(1.7), rel=1e-14)
    assert eval_wright(0.0, 2.5, 1.3).value == pytest.approx(math.exp(-1.3) / math.gamma(2.5), rel=1e-14)
    # M-Wright at alpha = 1/2 is the Gaussian exp(-x^2/4)/sqrt(pi)
    assert eval_wright(0.5, 0.5, 1.0).value == pytest.approx(math.exp(-0.25) / math.sqrt(math.pi), rel=1e-12)
    assert eval_wright(0.5, 0.5, 1.0).value == pytest.approx(0.4393912, abs=1e-7)
    for x in (3.0, 7.0, 12.0):
        assert eval_wright(0.5, 0.5, x).value == pytest.approx(math.exp(-x * x / 4) / math.sqrt(math.pi), rel=1e-9)


def test_wright_abs_tol_shortcut():
    fast = eval_wright(0.75, 0.0, 50.0, abs_tol=1e-40)
    assert fast.value == 0.0 or fast.value < 1e-40
    with pytest.raises(ParameterError):
        eval_wright(1.0, 0.5, 1.0)


def test_tail_sign_examples():
    assert tail_sign(MLParams(0.5, 1, 1)) == "+"
    assert tail_sign(MLParams(1.8, 2, 1)) == "+"
    assert tail_sign(MLParams(1.5, 1.5, 1)) == "0"


def test_sign_scan_negative():
    rep = sign_scan(MLParams(1.8, 2.0, 1.0), 200)
    assert rep.negativity_found and rep.certified
    assert abs(rep.min_value) > rep.min_err


def test_sign_scan_in_domain():
    rep = sign_scan(MLParams(0.5, 1.0, 1.0), 200)
    assert not rep.negativity_found


def test_sign_scan_touching_zero():
    rep = sign_scan(MLParams(2, 3, 1), 100)
    assert not rep.negativity_found
    assert abs(rep.min_value) < 1e-12
    assert rep.argmin == pytest.approx((2 * math.pi) ** 2, rel=1e-6)


def test_sign_scan_monotone_in_mu():
    # negativity at a larger mu forces negativity at every smaller mu
    neg = sign_scan(MLParams(1.8, 2.3, 1.0), 200)
    assert neg.certified
    assert sign_scan(MLParams(1.8, 2.0, 1.0), 200).certified


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("rho,beta,g", [(0.5, 1.0, 1.0), (1.5, 2.0, 0.7), (1.9, 1.2, 2.0)])
def test_laplace_identity(s, rho, beta, g):
    p = MLParams(rho, beta, g)
    T = 60.0
    f = lambda t: math.exp(-(s + 1) * t) * t ** (beta - 1) * eval_ml(p, -(t**rho)).value
    v, err = integrate.quad(f, 0, T, limit=400, epsabs=1e-13)
    # the integrand is bounded by C t^(beta-1) e^{-(s+1) t}; beyond T it is below 1e-25
    expected = (s + 1) ** (-beta) / (1 + (s + 1) ** (-rho)) ** g
    assert v == pytest.approx(expected, abs=1e-6 + err)
    assert float(laplace_image(p, 1.0)(s + 1)) == pytest.approx(expected, rel=1e-14)


def test_tail_integral_matches_quadrature():
    # E_{1,1}(-t) = e^-t: tail of t^lam e^-t is an upper incomplete gamma
    v, err = ml_tail_integral(MLParams(1, 1, 1), 0.5, 30.0)
    assert v == pytest.approx(float(mpmath.gammainc(1.5, 30)), rel=1e-8)
    # E_{2,3}(-t) = (1 - cos sqrt t)/t: a 1/t^2 tail with an oscillating part
    lam = -0.5
    v, err = ml_tail_integral(MLParams(2, 3, 1), lam, 400.0)
    # t = u^2: 2 int_20^inf (1 - cos u)/u^2 du, integrated by parts into Si
    inner = mpmath.cos(20) / 20 - (mpmath.pi / 2 - mpmath.si(20))
    ref = float(2 * (mpmath.mpf(1) / 20 - inner))
    assert v == pytest.approx(ref, abs=1e-12)
    assert err < 1e-10


@pytest.mark.parametrize("x", [0.7, 4.0, 25.0])
def test_scan_accuracy_is_honest(x):
    p = MLParams(0.0986, 0.958, 3.967)
    full = eval_ml(p, -x)
    loose = eval_ml(p, -x, rel_tol=1e-9)
    assert abs(loose.value - full.value) <= loose.abs_err_est + full.abs_err_est
    assert loose.abs_err_est <= 1e-9 * abs(loose.value)


def test_mp_coefficients_exact_at_working_precision():
    from cauchyid.specfun import _ml_series

    p = MLParams(0.0986, 0.958, 3.967)
    ps = _ml_series(p.rho, p.mu, p.gamma)
    with mpmath.workdps(40):
        for k in (1, 50, 300):
            ref = mpmath.rf(p.gamma, k) / mpmath.factorial(k) * mpmath.rgamma(mpmath.mpf(p.mu) + mpmath.mpf(p.rho) * k)
            assert abs(ps._mp_coeff(k) / ref - 1) < mpmath.mpf(10) ** -35
