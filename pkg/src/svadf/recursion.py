"""Forward-recursive test statistics on expanding windows.

The coefficient statistic at window length tau is tau * (delta_hat - 1);
the t-type statistic self-normalizes by the residual scale,
sqrt(sum of squared demeaned lags / sigma_hat^2) * (delta_hat - 1).

For lag order 0 the whole path costs O(n): all expanding-window sums are
prefix sums, accumulated in extended precision after anchoring the series
at its first value (the statistics are exactly location invariant, so
anchoring only improves conditioning).  Windows with a numerically
constant regressor yield NaN markers rather than failing the recursion;
dating treats those as "no crossing".
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRegressorError, SingularDesignError, WindowSizeError
from .estimator import MIN_WINDOW, Window, fit_adf, fit_ar1, select_lag
from .series import PriceSeries

__all__ = ["RecursiveConfig", "StatPath", "stat_at", "recursive_path"]

VARIANTS = ("coefficient", "ttype")

# relative floor under which an expanding-window regressor counts as flat
_DEGENERATE_REL = 1e-15


@dataclass(frozen=True)
class RecursiveConfig:
    """Settings for one forward recursion pass."""

    r0: float = 0.1
    variant: str = "coefficient"
    lag_order: int | str = 0
    auto_l_max: int = 6
    auto_sig_level: float = 0.05

    def __post_init__(self):
        if not (0 < self.r0 < 1):
            raise WindowSizeError("r0 must lie in (0, 1)")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        if self.lag_order != "auto" and int(self.lag_order) < 0:
            raise ValueError("lag_order must be nonnegative or 'auto'")


@dataclass(frozen=True)
class StatPath:
    """Recursive statistic evaluated at each expanding endpoint.

    fractions[i] = taus[i] / n, strictly increasing with the last equal to
    one; values[i] is the statistic on the first taus[i] observations (NaN
    marks a degenerate window).
    """

    n: int
    taus: np.ndarray
    fractions: np.ndarray
    values: np.ndarray
    variant: str
    dates: list | None = None
    label: str = ""

    def __post_init__(self):
        taus = np.asarray(self.taus, dtype=int)
        fr = np.asarray(self.fractions, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if not (taus.size == fr.size == vals.size > 0):
            raise WindowSizeError("path arrays must be non-empty and aligned")
        if np.any(np.diff(fr) <= 0):
            raise WindowSizeError("fractions must be strictly increasing")
        if abs(fr[-1] - 1.0) > 1.0 / self.n + 1e-12:
            raise WindowSizeError("path must extend to the full sample")
        object.__setattr__(self, "taus", taus)
        object.__setattr__(self, "fractions", fr)
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return int(self.taus.size)

    def date_at(self, i: int):
        if self.dates is None:
            return None
        return self.dates[i]


def _stat_from_fit(fit, tau: int, variant: str) -> float:
    if variant == "coefficient":
        return tau * (fit.delta_hat - 1.0)
    if fit.sigma_hat_sq <= 0:
        raise DegenerateRegressorError("zero residual variance, t-type undefined")
    return math.sqrt(fit.sum_sq_demeaned / fit.sigma_hat_sq) * (fit.delta_hat - 1.0)


def stat_at(
    series: PriceSeries, tau: int, variant: str = "coefficient", lag_order: int = 0
) -> float:
    """From-scratch statistic on the first tau observations."""
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    window = Window.from_series(series, end_exclusive=tau)
    fit = fit_ar1(window) if lag_order == 0 else fit_adf(window, lag_order)
    return _stat_from_fit(fit, tau, variant)


def _path_values_l0(values: np.ndarray, taus: np.ndarray, variant: str) -> np.ndarray:
    # anchor at the first value: keeps early windows near zero so the
    # prefix-sum corrections stay well conditioned even when an explosive
    # tail lifts the series many orders of magnitude
    v = values.astype(np.longdouble)
    v = v - v[0]
    x = v[:-1]
    y = v[1:]
    cx = np.cumsum(x)
    cy = np.cumsum(y)
    cxx = np.cumsum(x * x)
    cyy = np.cumsum(y * y)
    cxy = np.cumsum(x * y)
    nrows = taus - 1
    idx = nrows - 1
    nn = nrows.astype(np.longdouble)
    sxx = cxx[idx] - cx[idx] ** 2 / nn
    sxy = cxy[idx] - cx[idx] * cy[idx] / nn
    syy = cyy[idx] - cy[idx] ** 2 / nn
    degen = ~(sxx > _DEGENERATE_REL * np.maximum(cxx[idx], 1.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        delta = sxy / sxx
        if variant == "coefficient":
            stat = taus.astype(np.longdouble) * (delta - 1.0)
        else:
            sigma2 = (syy - delta * sxy) / nn
            degen |= ~(sigma2 > 0)
            stat = np.sqrt(np.abs(sxx / sigma2)) * (delta - 1.0)
    out = np.asarray(stat, dtype=float)
    out[np.asarray(degen)] = np.nan
    return out


def _path_values_adf(
    values: np.ndarray, taus: np.ndarray, variant: str, lag: int
) -> np.ndarray:
    out = np.empty(taus.size, dtype=float)
    for i, tau in enumerate(taus):
        try:
            fit = fit_adf(Window(values, end_exclusive=int(tau)), lag)
            out[i] = _stat_from_fit(fit, int(tau), variant)
        except (DegenerateRegressorError, SingularDesignError, WindowSizeError):
            out[i] = np.nan
    return out


def recursive_path(series: PriceSeries, cfg: RecursiveConfig | None = None) -> StatPath:
    """One statistic per expanding endpoint tau = floor(n r0) .. n."""
    cfg = cfg or RecursiveConfig()
    values = series.values
    n = values.size
    tau0 = int(math.floor(n * cfg.r0))
    if tau0 < MIN_WINDOW:
        raise WindowSizeError(
            f"floor(n * r0) = {tau0} is below the minimum window {MIN_WINDOW}"
        )
    taus = np.arange(tau0, n + 1)
    lag = cfg.lag_order
    if lag == "auto":
        lag = select_lag(Window(values), cfg.auto_l_max, cfg.auto_sig_level)
    lag = int(lag)
    if lag == 0:
        vals = _path_values_l0(values, taus, cfg.variant)
    else:
        if tau0 < MIN_WINDOW + lag:
            raise WindowSizeError(
                f"initial window {tau0} too short for lag order {lag}"
            )
        vals = _path_values_adf(values, taus, cfg.variant, lag)
    dates = None
    if series.dates is not None:
        dates = [series.dates[int(t) - 1] for t in taus]
    return StatPath(
        n=n,
        taus=taus,
        fractions=taus / n,
        values=vals,
        variant=cfg.variant,
        dates=dates,
        label=series.label,
    )
