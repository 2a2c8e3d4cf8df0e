import math

import numpy as np
import pytest
from scipy import integrate, stats

from cauchyid import dists
from cauchyid.dists import (
    AlphaCauchyParams,
    GammaTypeParams,
    abs_alpha_cauchy_cdf,
    alpha_cauchy_abs_moment,
    alpha_cauchy_cdf,
    alpha_cauchy_pdf,
    half_stable_abs_moment,
    ks_distance,
    mellin_quadrature,
    moment_report,
    sample_alpha_cauchy,
    sample_gamma,
    sample_student,
    sample_sym_stable,
    sample_wright_M,
    sample_xabcd,
    student_abs_moment,
    wright_M_pdf,
    xabcd_inverse_mellin_laplace,
    xabcd_inverse_mellin_quadrature,
    xabcd_inverse_pdf,
    xabcd_pdf,
)
from cauchyid.errors import ParameterError
from cauchyid.mellin import eval_at, expr_M

N = 200_000


def test_cauchy_density_values():
    p = AlphaCauchyParams(2)
    assert alpha_cauchy_pdf(p, 0.0) == pytest.approx(1 / math.pi, rel=1e-15)
    assert alpha_cauchy_pdf(p, 1.0) == pytest.approx(1 / (2 * math.pi), rel=1e-15)


@pytest.mark.parametrize("alpha", [1.1, 1.5, 2.0, 3.0, 7.5])
def test_cauchy_density_normalized(alpha):
    p = AlphaCauchyParams(alpha)
    v, _ = integrate.quad(lambda t: 2 * alpha_cauchy_pdf(p, t), 0, np.inf, epsabs=0, epsrel=1e-12, limit=200)
    assert v == pytest.approx(1.0, abs=1e-8)


def test_cauchy_moments():
    assert alpha_cauchy_abs_moment(AlphaCauchyParams(1.5), 0) == pytest.approx(1.0, abs=1e-15)
    assert alpha_cauchy_abs_moment(AlphaCauchyParams(2), 0.5) == pytest.approx(math.sqrt(2), rel=1e-14)
    p = AlphaCauchyParams(1.5)
    q = mellin_quadrature(lambda t: 2 * float(alpha_cauchy_pdf(p, t)), 0.3)
    assert alpha_cauchy_abs_moment(p, 0.3) == pytest.approx(q.value, rel=1e-7)


def test_cauchy_cdf():
    p = AlphaCauchyParams(2)
    t = np.array([-30.0, -1.0, 0.0, 0.4, 3.0, 1e3])
    assert alpha_cauchy_cdf(p, t) == pytest.approx(0.5 + np.arctan(t) / np.pi, abs=1e-9)
    p = AlphaCauchyParams(1.5)
    for x in (0.3, 1.7, 2.0, 9.0):
        v, _ = integrate.quad(lambda t: 2 * alpha_cauchy_pdf(p, t), 0, x, epsabs=1e-14)
        assert abs_alpha_cauchy_cdf(p, x) == pytest.approx(v, abs=1e-9)


def test_cauchy_sampler():
    p = AlphaCauchyParams(1.5)
    b = sample_alpha_cauchy(p, N, 42)
    assert abs(moment_report(b, 0.3, alpha_cauchy_abs_moment(p, 0.3)).z_score) < 3
    assert abs(np.mean(np.sign(b.values))) < 3 / math.sqrt(N)
    b2 = sample_alpha_cauchy(AlphaCauchyParams(2), N, 42)
    assert ks_distance(b2, lambda t: 0.5 + np.arctan(t) / np.pi) < 0.01


def test_sampler_reproducible():
    p = AlphaCauchyParams(1.7)
    a, b = sample_alpha_cauchy(p, 1000, 7), sample_alpha_cauchy(p, 1000, 7)
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, sample_alpha_cauchy(p, 1000, 8).values)
    assert a.to_csv() == b.to_csv()
    assert a.to_csv().splitlines()[0] == "# dist=alpha-cauchy(1.7) seed=7 n=1000"


def test_sampler_input_checks():
    with pytest.raises(ParameterError):
        sample_gamma(2.0, 0, 1)
    with pytest.raises(ParameterError):
        sample_gamma(2.0, 10, -1)
    with pytest.raises(ParameterError):
        AlphaCauchyParams(1.0)


def test_wright_M_density_normalized():
    for al, be, t in [(0.5, 0.5, 0.0), (0.3, 0.2, 1.0), (0.75, 0.0, 1.0)]:
        q = mellin_quadrature(lambda x: wright_M_pdf(al, be, t, x), 0.0)
        assert q.value == pytest.approx(1.0, abs=1e-7)


def test_wright_M_gaussian_case():
    # M_{1/2,1/2} is the law of 2|N(0,1)|... up to the scale: density exp(-x^2/4)/sqrt(pi)
    for x in (0.1, 1.0, 2.5):
        assert wright_M_pdf(0.5, 0.5, 0.0, x) == pytest.approx(math.exp(-x * x / 4) / math.sqrt(math.pi), rel=1e-10)


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
def test_wright_M_sampler_moments(s):
    b = sample_wright_M(0.5, 0.5, 0.0, N, 42)
    assert abs(moment_report(b, s, eval_at(expr_M(0.5, 0.5, 0), s)).z_score) < 3


def test_xabcd_density():
    p = GammaTypeParams(0.5, 0.5, 2, 2)
    # the density oscillates like cos(sqrt t) / t^1.5, so the tail is taken analytically
    q = xabcd_inverse_mellin_quadrature(p, 0.0)
    assert q.value == pytest.approx(1.0, abs=1e-6)
    q = mellin_quadrature(lambda t: xabcd_inverse_pdf(p, t), 0.0, upper=1e4)
    assert 0.98 < q.value < 1.0
    for x in (0.05, 0.7, 3.0):
        assert xabcd_pdf(p, x) == pytest.approx(xabcd_inverse_pdf(p, 1 / x) / x**2, rel=1e-14)
    # t^(1-b) f(t) -> K E(0) as t -> 0
    k = xabcd_inverse_pdf(p, 1e-9) / 1e-9 ** (-0.5)
    assert k == pytest.approx(xabcd_inverse_pdf(p, 1e-7) / 1e-7 ** (-0.5), rel=1e-5)


@pytest.mark.parametrize(
    "params,s",
    [((0.5, 0.5, 2, 2), -0.2), ((0.5, 0.5, 2, 2), 0.2), ((0.5, 0.5, 2, 1.5), 0.0), ((0.25, 0.25, 1.5, 1.5), 0.2)],
)
def test_xabcd_mellin_oracles(params, s):
    p = GammaTypeParams(*params)
    exact = eval_at(p.expr(), -s)
    q = xabcd_inverse_mellin_quadrature(p, s)
    assert q.value == pytest.approx(exact, rel=1e-6)
    lap = xabcd_inverse_mellin_laplace(p, s)
    assert lap.value == pytest.approx(exact, rel=1e-9)


@pytest.mark.parametrize("s", [-0.3, 0.25])
def test_xabcd_sampler_moments(s):
    p = GammaTypeParams(0.5, 0.5, 2, 2)
    b = sample_xabcd(p, 100_000, 42)
    assert abs(moment_report(b, s, eval_at(p.expr(), s)).z_score) < 3


def test_xabcd_negative_d_sampler():
    p = GammaTypeParams(0.5, 0.25, 1.5, -1.5)
    b = sample_xabcd(p, 50_000, 3)
    assert abs(moment_report(b, 0.1, eval_at(p.expr(), 0.1)).z_score) < 3


def test_half_stable_sampler():
    b = sample_sym_stable(1.0, N, 42)
    assert ks_distance(np.abs(b.values), lambda t: 2 * np.arctan(t) / np.pi) < 0.01
    assert half_stable_abs_moment(0.5, 0.0) == pytest.approx(1.0, abs=1e-15)
    b = sample_sym_stable(0.5, N, 42)
    assert abs(moment_report(b, 0.2, half_stable_abs_moment(0.5, 0.2)).z_score) < 3


def test_student():
    assert student_abs_moment(1.0, 0.0) == pytest.approx(1.0, abs=1e-15)
    for nu, s in [(0.8, 0.3), (3.0, 1.0)]:
        ref = 2 * integrate.quad(lambda t: t**s * stats.t.pdf(t, nu), 0, np.inf)[0]
        assert student_abs_moment(nu, s) == pytest.approx(ref, rel=1e-7)
    b = sample_student(0.8, N, 42)
    assert abs(moment_report(b, 0.3, student_abs_moment(0.8, 0.3)).z_score) < 3


def test_quadrature_examples():
    assert mellin_quadrature(lambda t: math.exp(-t), 1.0).value == pytest.approx(1.0, rel=1e-12)
    assert mellin_quadrature(lambda t: 1.0, 2.0, upper=1.0).value == pytest.approx(1 / 3, rel=1e-12)


def test_ks_examples(rng):
    x = rng.random(N)
    assert ks_distance(x, lambda t: np.clip(t, 0, 1)) < 0.01
    assert ks_distance(x, dists.ecdf(x)) == 0.0
    assert ks_distance(x, lambda t: np.clip(t, 0, 1) ** 3) > 0.3


def test_gamma_sampler_ks():
    b = sample_gamma(2.5, N, 42)
    assert ks_distance(b, lambda t: stats.gamma.cdf(t, 2.5)) < 0.01
