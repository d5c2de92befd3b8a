"""Least-squares machinery for expanding-window autoregressions.

A window of length tau over values v[0..tau) yields tau - 1 regression
rows: v[j] on [1, v[j-1]] for j = 1..tau-1, so the first value serves as
the initial lag.  Residual variance uses the number of residuals as the
divisor (no degrees-of-freedom correction); sums are accumulated in
extended precision because explosive segments span many orders of
magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .errors import (
    DegenerateRegressorError,
    SingularDesignError,
    WindowSizeError,
)
from .series import PriceSeries

MIN_WINDOW = 8  # leaves >= 5 residual dof with intercept + lag

__all__ = [
    "MIN_WINDOW",
    "Window",
    "Ar1Fit",
    "AdfFit",
    "demean",
    "fit_ar1",
    "fit_adf",
    "select_lag",
    "RecursiveAr1",
]


@dataclass(frozen=True)
class Window:
    """A forward-recursion view into the first ``end_exclusive`` values."""

    values: np.ndarray
    start: int = 0
    end_exclusive: int | None = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        end = vals.size if self.end_exclusive is None else int(self.end_exclusive)
        object.__setattr__(self, "end_exclusive", end)
        if self.start != 0:
            raise WindowSizeError("forward recursion windows must start at 0")
        if end - self.start < MIN_WINDOW:
            raise WindowSizeError(
                f"window needs at least {MIN_WINDOW} observations, got {end - self.start}"
            )
        if end > vals.size:
            raise WindowSizeError("window end exceeds series length")

    @classmethod
    def from_series(cls, series: PriceSeries, end_exclusive: int | None = None) -> "Window":
        return cls(values=series.values, end_exclusive=end_exclusive)

    def __len__(self) -> int:
        return self.end_exclusive - self.start

    def lag_block(self) -> np.ndarray:
        return self.values[self.start : self.end_exclusive - 1]

    def response_block(self) -> np.ndarray:
        return self.values[self.start + 1 : self.end_exclusive]


@dataclass(frozen=True)
class Ar1Fit:
    delta_hat: float
    mu_hat: float
    sum_sq_demeaned: float
    sigma_hat_sq: float
    n_obs: int


@dataclass(frozen=True)
class AdfFit:
    delta_hat: float
    mu_hat: float
    phi: np.ndarray
    lag_order: int
    t_stats: np.ndarray
    sigma_hat_sq: float
    sum_sq_demeaned: float
    n_obs: int


def demean(window) -> np.ndarray:
    """Lagged regressor block minus its own mean; sums to zero.

    Accepts a Window (its lag block is demeaned) or the lagged regressor
    block itself as an array.
    """
    x = window.lag_block() if isinstance(window, Window) else np.asarray(window, dtype=float)
    if x.size < 2:
        raise WindowSizeError("need at least 2 lagged values to demean")
    xl = x.astype(np.longdouble)
    return np.asarray(xl - xl.mean(), dtype=float)


def _degenerate(sxx: float, scale: float) -> bool:
    return not (sxx > 1e-15 * max(scale, 1.0))


def fit_ar1(window: Window) -> Ar1Fit:
    """Intercept-plus-lag OLS over the window's regression rows."""
    x = window.lag_block().astype(np.longdouble)
    y = window.response_block().astype(np.longdouble)
    nobs = x.size
    xbar = x.mean()
    ybar = y.mean()
    xc = x - xbar
    yc = y - ybar
    sxx = float(np.dot(xc, xc))
    if _degenerate(sxx, float(np.dot(x, x))):
        raise DegenerateRegressorError("lagged regressor is (numerically) constant")
    sxy = float(np.dot(xc, yc))
    syy = float(np.dot(yc, yc))
    delta = sxy / sxx
    mu = float(ybar - delta * xbar)
    rss = max(syy - delta * sxy, 0.0)
    return Ar1Fit(
        delta_hat=float(delta),
        mu_hat=mu,
        sum_sq_demeaned=sxx,
        sigma_hat_sq=rss / nobs,
        n_obs=int(nobs),
    )


def fit_adf(window: Window, lag_order: int) -> AdfFit:
    """OLS of v[t] on [1, v[t-1], dv[t-1], ..., dv[t-L]].

    Usable rows start at t = L + 1 (0-based) so every lagged difference
    exists.  Per-phi t statistics share the residual-count variance
    divisor used everywhere else in the recursion.
    """
    if lag_order < 0:
        raise WindowSizeError("lag_order must be nonnegative")
    if len(window) < MIN_WINDOW + lag_order:
        raise WindowSizeError(
            f"window of {len(window)} too short for lag order {lag_order}"
        )
    if lag_order == 0:
        fit = fit_ar1(window)
        return AdfFit(
            delta_hat=fit.delta_hat,
            mu_hat=fit.mu_hat,
            phi=np.empty(0),
            lag_order=0,
            t_stats=np.empty(0),
            sigma_hat_sq=fit.sigma_hat_sq,
            sum_sq_demeaned=fit.sum_sq_demeaned,
            n_obs=fit.n_obs,
        )
    v = window.values[: window.end_exclusive]
    dv = np.diff(v)  # dv[k] = v[k+1] - v[k]
    rows = np.arange(lag_order + 1, v.size)
    y = v[rows]
    cols = [np.ones(rows.size), v[rows - 1]]
    for j in range(1, lag_order + 1):
        cols.append(dv[rows - j - 1])  # lagged difference v[t-j] - v[t-j-1]
    design = np.column_stack(cols)
    coef, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < design.shape[1]:
        raise SingularDesignError("collinear design in augmented regression")
    resid = y - design @ coef
    nobs = rows.size
    sigma2 = float(resid @ resid) / nobs
    xtx_inv = np.linalg.inv(design.T @ design)
    se = np.sqrt(np.maximum(sigma2 * np.diag(xtx_inv), 0.0))
    phi = coef[2:]
    with np.errstate(divide="ignore", invalid="ignore"):
        t_stats = np.where(se[2:] > 0, phi / se[2:], np.inf * np.sign(phi))
    xlag = design[:, 1]
    xlc = xlag - xlag.mean()
    return AdfFit(
        delta_hat=float(coef[1]),
        mu_hat=float(coef[0]),
        phi=phi,
        lag_order=lag_order,
        t_stats=t_stats,
        sigma_hat_sq=sigma2,
        sum_sq_demeaned=float(xlc @ xlc),
        n_obs=int(nobs),
    )


def select_lag(window: Window, l_max: int, sig_level: float = 0.05) -> int:
    """General-to-specific lag choice: drop the last lag while insignificant."""
    if l_max < 0:
        raise WindowSizeError("l_max must be nonnegative")
    if not (0 < sig_level < 1):
        raise ValueError("sig_level must lie in (0, 1)")
    crit = float(ndtri(1.0 - sig_level / 2.0))
    for lag in range(l_max, 0, -1):
        fit = fit_adf(window, lag)
        if abs(fit.t_stats[-1]) >= crit:
            return lag
    return 0


class RecursiveAr1:
    """One-pass expanding-window AR(1) with O(1) updates per observation.

    Sufficient statistics (pair counts, sums, cross-products) are held in
    extended precision; each appended value adds one regression row.  The
    same accumulators back the vectorized path computation, so a from-
    scratch refit at any point is the natural oracle for this class.
    """

    def __init__(self):
        self._last: float | None = None
        self._n = 0
        self._sx = np.longdouble(0.0)
        self._sy = np.longdouble(0.0)
        self._sxx = np.longdouble(0.0)
        self._syy = np.longdouble(0.0)
        self._sxy = np.longdouble(0.0)

    def push(self, value: float) -> None:
        v = np.longdouble(value)
        if self._last is not None:
            x = self._last
            self._n += 1
            self._sx += x
            self._sy += v
            self._sxx += x * x
            self._syy += v * v
            self._sxy += x * v
        self._last = v

    def extend(self, values) -> None:
        for v in np.asarray(values, dtype=float):
            self.push(float(v))

    @property
    def n_obs(self) -> int:
        return self._n

    @property
    def window_length(self) -> int:
        return self._n + 1 if self._last is not None else 0

    def fit(self) -> Ar1Fit:
        if self.window_length < MIN_WINDOW:
            raise WindowSizeError(
                f"need {MIN_WINDOW} observations before fitting, have {self.window_length}"
            )
        n = np.longdouble(self._n)
        sxx = float(self._sxx - self._sx * self._sx / n)
        if _degenerate(sxx, float(self._sxx)):
            raise DegenerateRegressorError("lagged regressor is (numerically) constant")
        sxy = float(self._sxy - self._sx * self._sy / n)
        syy = float(self._syy - self._sy * self._sy / n)
        delta = sxy / sxx
        mu = float(self._sy / n - delta * (self._sx / n))
        rss = max(syy - delta * sxy, 0.0)
        return Ar1Fit(
            delta_hat=delta,
            mu_hat=mu,
            sum_sq_demeaned=sxx,
            sigma_hat_sq=rss / self._n,
            n_obs=self._n,
        )
