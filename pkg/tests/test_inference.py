import math

import numpy as np
import pytest

import svadf
from svadf import PriceSeries
from svadf.errors import ExactUnitRootError
from svadf.inference import cauchy_quantile, gamma_hat, infer_root, normal_quantile


def normal_quantile_bisection(p, tol=1e-12):
    """Oracle: invert Phi via bisection on erf."""
    lo, hi = -10.0, 10.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if 0.5 * (1 + math.erf(mid / math.sqrt(2))) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def noiseless_ar1(delta, n, x0=1.0):
    return PriceSeries(values=x0 * delta ** np.arange(n))


class TestQuantiles:
    def test_cauchy_examples(self):
        assert cauchy_quantile(0.975) == pytest.approx(12.7062, abs=1e-4)
        assert cauchy_quantile(0.5) == 0.0
        assert cauchy_quantile(0.25) == pytest.approx(-1.0, abs=1e-12)

    def test_normal_example(self):
        assert normal_quantile(0.975) == pytest.approx(1.959964, abs=1e-6)

    def test_normal_against_bisection_oracle(self):
        for p in (0.01, 0.1, 0.5, 0.9, 0.975, 0.995):
            assert normal_quantile(p) == pytest.approx(
                normal_quantile_bisection(p), abs=1e-8
            )

    def test_domain_errors(self):
        for fn in (cauchy_quantile, normal_quantile):
            for p in (0.0, 1.0, -0.2, 1.3):
                with pytest.raises(ValueError):
                    fn(p)


class TestGammaHat:
    def test_powers_of_ten(self):
        assert gamma_hat(1.01, 100) == pytest.approx(1.0, abs=1e-12)
        assert gamma_hat(1.1, 100) == pytest.approx(0.5, abs=1e-12)
        assert gamma_hat(0.9, 100) == pytest.approx(0.5, abs=1e-12)

    def test_exact_unit_root_rejected(self):
        with pytest.raises(ExactUnitRootError):
            gamma_hat(1.0, 100)


class TestInferRoot:
    def test_explosive_closed_form(self):
        # noiseless delta = 1.1, n = 100: gamma = 0.5, Cauchy half-width
        # 12.7062 * 2 / (10 * 1.1^100)
        inf = infer_root(noiseless_ar1(1.1, 100, x0=5.0))
        assert inf.regime == "explosive"
        assert inf.delta_hat == pytest.approx(1.1, abs=1e-10)
        assert inf.gamma_hat == pytest.approx(0.5, abs=1e-8)
        hw = 12.70620474 * 2.0 / (10.0 * 1.1**100)
        assert hw == pytest.approx(1.844e-4, rel=1e-3)
        assert inf.ci_delta[1] - inf.delta_hat == pytest.approx(hw, rel=1e-4)
        assert inf.ci_delta[0] == pytest.approx(1.09982, abs=1e-5)
        assert inf.ci_delta[1] == pytest.approx(1.10018, abs=1e-5)
        assert inf.classification == "explosive"

    def test_sub_unity_closed_form(self):
        # noiseless delta = 0.99, n = 100: gamma = 1, half-width 1.96*2/100
        inf = infer_root(noiseless_ar1(0.99, 100))
        assert inf.regime == "sub-unity"
        assert inf.gamma_hat == pytest.approx(1.0, abs=1e-9)
        hw = normal_quantile(0.975) * 2.0 / 100.0
        assert hw == pytest.approx(0.0392, abs=1e-4)
        assert inf.ci_delta[1] - inf.delta_hat == pytest.approx(hw, rel=1e-6)
        assert inf.classification == "inconclusive"  # straddles unity

    def test_strongly_stationary_classified_non_explosive(self):
        inf = infer_root(noiseless_ar1(0.5, 400))
        assert inf.classification == "non-explosive"
        assert inf.ci_delta[1] < 1.0

    def test_intervals_centered(self):
        inf = infer_root(noiseless_ar1(1.05, 200))
        assert inf.ci_delta[0] + inf.ci_delta[1] == pytest.approx(2 * inf.delta_hat)
        assert inf.ci_gamma[0] + inf.ci_gamma[1] == pytest.approx(2 * inf.gamma_hat)

    def test_half_width_decreasing_in_n(self):
        widths = [
            infer_root(noiseless_ar1(1.05, n)).ci_delta[1]
            - infer_root(noiseless_ar1(1.05, n)).ci_delta[0]
            for n in (100, 200, 400)
        ]
        assert widths[0] > widths[1] > widths[2]

    def test_exact_unit_root_guard(self):
        # linear ramp: x_t = x_{t-1} + 1 fits delta = 1 exactly
        with pytest.raises(ExactUnitRootError):
            infer_root(PriceSeries(values=np.arange(50.0)))

    def test_no_overflow_for_large_n(self):
        # delta^n would overflow in direct arithmetic
        inf = infer_root(noiseless_ar1(1.02, 5000, x0=1e-10))
        assert inf.regime == "explosive"
        assert inf.ci_delta[1] - inf.ci_delta[0] >= 0.0

    def test_level_validation(self):
        with pytest.raises(ValueError):
            infer_root(noiseless_ar1(1.05, 100), level=1.5)


class TestRegimeDispatchOnSimulated(object):
    def test_explosive_simulated_series_uses_cauchy_regime(self):
        spec = svadf.DgpSpec(
            n=1000,
            vol=svadf.VolSpec(),
            bubble=svadf.BubbleSpec(r_e=1e-9, r_f=1.0, c=1.0, alpha=0.5),
            seed=7,
        )
        inf = infer_root(svadf.simulate(spec))
        assert inf.regime == "explosive"
        assert inf.classification == "explosive"
