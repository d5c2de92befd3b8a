"""Scikit-learn flavored front door for the recursive detection pipeline.

BubbleDetector wires the recursion, thresholds and persistence filter
into a fit/transform/predict surface so the procedure composes with
sklearn tooling (get_params/set_params, clone, pipelines on aligned
arrays).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .dating import Episode, LogRule, PersistenceFilter, datestamp, datestamp_pwy
from .recursion import RecursiveConfig, StatPath, recursive_path
from .series import as_price_series

__all__ = ["BubbleDetector"]


class BubbleDetector(BaseEstimator):
    """Date-stamp a single exuberance episode in a price series.

    Parameters
    ----------
    r0 : float
        Initial window fraction for the forward recursion.
    variant : str
        "coefficient" or "ttype" statistic.
    lag_order : int or "auto"
        Augmentation order for the test regression.
    origination_rule, collapse_rule : threshold rule or None
        None selects the log-rule boundaries log(ns)/10 and log(ns)/2.
    min_above, min_below, consolidation_gap : int
        Persistence filter durations in observations.
    baseline : bool
        Use the single-threshold baseline dating (no buffer, no filter,
        origination_rule on both margins) instead of the asymmetric rules.

    Attributes
    ----------
    stat_path_ : StatPath
    episode_ : Episode or None
    n_ : int
    """

    def __init__(
        self,
        r0: float = 0.1,
        variant: str = "coefficient",
        lag_order: int | str = 0,
        origination_rule=None,
        collapse_rule=None,
        min_above: int = 0,
        min_below: int = 0,
        consolidation_gap: int = 0,
        baseline: bool = False,
    ):
        self.r0 = r0
        self.variant = variant
        self.lag_order = lag_order
        self.origination_rule = origination_rule
        self.collapse_rule = collapse_rule
        self.min_above = min_above
        self.min_below = min_below
        self.consolidation_gap = consolidation_gap
        self.baseline = baseline

    def _check_fitted(self):
        if not hasattr(self, "stat_path_"):
            raise NotFittedError("call fit before using this estimator")

    def fit(self, X, y=None) -> "BubbleDetector":
        series = as_price_series(X)
        cfg = RecursiveConfig(r0=self.r0, variant=self.variant, lag_order=self.lag_order)
        path = recursive_path(series, cfg)
        orig = self.origination_rule or LogRule(10.0, side="right")
        if self.baseline:
            episode = datestamp_pwy(path, orig)
        else:
            coll = self.collapse_rule or LogRule(2.0, side="left")
            filt = PersistenceFilter(
                min_above=self.min_above,
                min_below=self.min_below,
                consolidation_gap=self.consolidation_gap,
            )
            episode = datestamp(path, orig, coll, filt)
        self.n_ = len(series)
        self.stat_path_: StatPath = path
        self.episode_: Episode | None = episode
        return self

    def transform(self, X=None) -> np.ndarray:
        """Statistic aligned to observations; NaN before the first window."""
        self._check_fitted()
        path = self.stat_path_
        out = np.full(self.n_, np.nan)
        out[path.taus - 1] = path.values
        return out

    def predict(self, X=None) -> np.ndarray:
        """Boolean in-episode flag per observation of the fitted series."""
        self._check_fitted()
        mask = np.zeros(self.n_, dtype=bool)
        ep = self.episode_
        if ep is not None:
            start = ep.origin_index - 1
            end = (ep.collapse_index - 1) if ep.collapse_index is not None else self.n_
            mask[start:end] = True
        return mask

    def fit_predict(self, X, y=None) -> np.ndarray:
        return self.fit(X).predict()
