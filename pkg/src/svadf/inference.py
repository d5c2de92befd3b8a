"""Point estimation and confidence intervals for the autoregressive root
and the explosiveness exponent, with regime-dependent quantiles.

Sub-unity roots get Normal-quantile intervals; explosive roots get
two-sided standard-Cauchy quantiles.  Growth factors like delta_hat^n are
evaluated in log space to avoid overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import ndtri

from .errors import ExactUnitRootError
from .estimator import Window, fit_ar1
from .series import PriceSeries

__all__ = [
    "RootInference",
    "gamma_hat",
    "normal_quantile",
    "cauchy_quantile",
    "infer_root",
]

# below this distance from 1 the interval formulas are singular
_UNIT_ROOT_TOL = 1e-8


def normal_quantile(p: float) -> float:
    """Standard normal quantile via scipy's ndtri (Cephes inversion,
    absolute error well under 1e-8)."""
    if not (0 < p < 1):
        raise ValueError("p must lie in (0, 1)")
    return float(ndtri(p))


def cauchy_quantile(p: float) -> float:
    """Standard Cauchy quantile, tan(pi * (p - 1/2))."""
    if not (0 < p < 1):
        raise ValueError("p must lie in (0, 1)")
    return math.tan(math.pi * (p - 0.5))


def gamma_hat(delta_hat: float, n: int) -> float:
    """Explosiveness exponent -log|delta_hat - 1| / log n."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if delta_hat == 1.0:
        raise ExactUnitRootError("gamma undefined at an exact unit root")
    return -math.log(abs(delta_hat - 1.0)) / math.log(n)


@dataclass(frozen=True)
class RootInference:
    delta_hat: float
    gamma_hat: float
    ci_delta: tuple[float, float]
    ci_gamma: tuple[float, float]
    regime: str  # "sub-unity" | "explosive"
    level: float
    n: int

    @property
    def classification(self) -> str:
        lo, hi = self.ci_delta
        if lo > 1.0:
            return "explosive"
        if hi < 1.0:
            return "non-explosive"
        return "inconclusive"


def infer_root(series: PriceSeries, level: float = 0.95) -> RootInference:
    """Full-sample root estimate with a regime-matched confidence interval.

    The intercept-included AR(1) fit keeps one estimator path for testing
    and inference; under the driftless model the intercept estimate is
    near zero.
    """
    if not (0 < level < 1):
        raise ValueError("level must lie in (0, 1)")
    fit = fit_ar1(Window.from_series(series))
    n = len(series)
    dh = fit.delta_hat
    if abs(dh - 1.0) <= _UNIT_ROOT_TOL:
        raise ExactUnitRootError(
            "delta_hat indistinguishable from 1; interval formulas are singular"
        )
    gh = gamma_hat(dh, n)
    logn = math.log(n)
    if dh < 1.0:
        cb = normal_quantile((1.0 + level) / 2.0)
        hw_delta = cb * 2.0 / n ** ((1.0 + gh) / 2.0)
        hw_gamma = cb * math.sqrt(2.0) / (n ** ((1.0 - gh) / 2.0) * logn)
        regime = "sub-unity"
    else:
        cc = cauchy_quantile((1.0 + level) / 2.0)
        # 2 cc / (n^gamma * delta^n), in logs
        hw_delta = math.exp(math.log(2.0 * cc) - gh * logn - n * math.log(dh))
        # 2 cc / ((1 + n^-gamma)^n * log n), via n*log1p
        hw_gamma = math.exp(
            math.log(2.0 * cc) - n * math.log1p(n ** (-gh)) - math.log(logn)
        )
        regime = "explosive"
    return RootInference(
        delta_hat=dh,
        gamma_hat=gh,
        ci_delta=(dh - hw_delta, dh + hw_delta),
        ci_gamma=(gh - hw_gamma, gh + hw_gamma),
        regime=regime,
        level=level,
        n=n,
    )
