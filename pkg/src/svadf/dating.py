"""Date-stamping of bubble origination and collapse from a statistic path.

Origination is the first upward crossing of the origination boundary that
survives the persistence filter; collapse is the first downward crossing
of the collapse boundary after a minimum-separation buffer of log(n)/n
sample fraction.  Both boundaries are evaluated at the expanding window
size n*s, so a log rule is a curve in s.  Ongoing episodes (origination
without a qualifying collapse) are first-class results.
"""

from __future__ import annotations

import datetime as _dt
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ThresholdDomainError
from .recursion import StatPath

__all__ = [
    "LogRule",
    "FixedValue",
    "TableRule",
    "PersistenceFilter",
    "Episode",
    "threshold_value",
    "threshold_curve",
    "datestamp",
    "datestamp_pwy",
]


@dataclass(frozen=True)
class LogRule:
    """Boundary log(n * s) / divisor in natural logs."""

    divisor: float
    side: str = "right"

    def __post_init__(self):
        if not (self.divisor > 0):
            raise ThresholdDomainError("log-rule divisor must be positive")

    def value(self, n: int, s: float) -> float:
        ns = n * s
        if ns < 2:
            raise ThresholdDomainError("window n*s must be at least 2")
        return math.log(ns) / self.divisor


@dataclass(frozen=True)
class FixedValue:
    """Constant boundary."""

    value_: float
    side: str = "right"

    def value(self, n: int, s: float) -> float:
        if n * s < 2:
            raise ThresholdDomainError("window n*s must be at least 2")
        return self.value_


@dataclass(frozen=True)
class TableRule:
    """Boundary interpolated from a Monte Carlo calibration table.

    The table maps sample sizes to simulated quantiles; the boundary at
    fraction s of an n-sample uses the tabulated value at size n*s,
    linearly interpolated and clamped to the nearest tabulated size
    outside the grid.
    """

    table: object  # CalibrationTable; kept loose to avoid an import cycle
    side: str = "right"

    def value(self, n: int, s: float) -> float:
        ns = n * s
        if ns < 2:
            raise ThresholdDomainError("window n*s must be at least 2")
        sizes = np.asarray(self.table.sizes, dtype=float)
        vals = np.asarray(self.table.values, dtype=float)
        return float(np.interp(ns, sizes, vals))


def threshold_value(rule, n: int, s: float) -> float:
    """Boundary value for an n-sample at expanding fraction s."""
    return rule.value(n, s)


def threshold_curve(rule, path: StatPath) -> np.ndarray:
    ns = path.taus.astype(float)
    sizes_ok = ns >= 2
    out = np.full(ns.size, np.nan)
    for i in np.nonzero(sizes_ok)[0]:
        out[i] = rule.value(path.n, path.fractions[i])
    return out


@dataclass(frozen=True)
class PersistenceFilter:
    """Duration requirements, in observations along the recursion grid.

    min_above: observations the statistic must stay above the origination
    boundary from the crossing on, tolerating interim dips of at most
    consolidation_gap consecutive observations.  min_below: observations
    the statistic must remain below the collapse boundary, uninterrupted.
    Zero durations reduce dating to raw first crossings.
    """

    min_above: int = 0
    min_below: int = 0
    consolidation_gap: int = 0

    def __post_init__(self):
        if min(self.min_above, self.min_below, self.consolidation_gap) < 0:
            raise ValueError("filter durations must be nonnegative")

    @classmethod
    def from_calendar(cls, n: int, span_years: float = 4.0,
                      months_above: float = 2.0, months_below: float = 1.0,
                      gap_months: float = 0.25) -> "PersistenceFilter":
        """Convert calendar durations for a sample covering span_years.

        A month is n / (12 * span_years) observations, so the filter
        tightens proportionally with sampling density.
        """
        per_month = n / (12.0 * span_years)
        return cls(
            min_above=int(round(months_above * per_month)),
            min_below=int(round(months_below * per_month)),
            consolidation_gap=max(1, int(round(gap_months * per_month))),
        )


@dataclass(frozen=True)
class Episode:
    """Dated exuberance episode: fractions, indices, optional calendar dates."""

    r_e_hat: float
    origin_index: int
    r_f_hat: Optional[float] = None
    collapse_index: Optional[int] = None
    origin_date: Optional[_dt.date] = None
    collapse_date: Optional[_dt.date] = None
    max_stat: float = math.nan
    ongoing: bool = False
    label: str = ""
    method: str = field(default="svadf", compare=False)


def _first_persistent_above(above: np.ndarray, min_above: int, gap: int) -> Optional[int]:
    """First index whose crossing stays above for min_above observations,
    allowing interior dips of at most gap consecutive observations.

    The confirmation window must be fully observed: a crossing closer than
    min_above to the sample end cannot qualify, mirroring the calendar
    rule that demands the statistic hold the level for the whole duration.
    """
    m = above.size
    i = 0
    while i < m:
        if not above[i]:
            i += 1
            continue
        run_below = 0
        j = i
        ok = True
        while j < min(i + min_above, m):
            if above[j]:
                run_below = 0
            else:
                run_below += 1
                if run_below > gap:
                    ok = False
                    break
            j += 1
        if ok and (j - i) >= min_above:
            return i
        i = j + 1
    return None


def _first_persistent_below(below: np.ndarray, start: int, min_below: int) -> Optional[int]:
    """First index >= start opening a run of min_below consecutive True."""
    m = below.size
    i = start
    while i < m:
        if not below[i]:
            i += 1
            continue
        j = i
        while j < m and below[j]:
            j += 1
        if j - i >= max(min_below, 1):
            return i
        i = j + 1
    return None


def _first_downward_crossing(
    vals: np.ndarray, cv: np.ndarray, oi: int, eligible: int, min_below: int
) -> Optional[int]:
    """First qualifying drop below the boundary after the statistic has
    been above it.

    A downward crossing requires arming: some index >= oi with the
    statistic strictly above the boundary.  Without arming there is
    nothing to cross down through and the episode stays ongoing.
    """
    with np.errstate(invalid="ignore"):
        above = vals > cv
        below = vals < cv
    armed = np.nonzero(above[oi:])[0]
    if armed.size == 0:
        return None
    start = max(oi + int(armed[0]) + 1, eligible)
    return _first_persistent_below(below, start, min_below)


def _episode_from_indices(
    path: StatPath, oi: int, ci: Optional[int], method: str
) -> Episode:
    end = ci if ci is not None else len(path) - 1
    stats = path.values[oi : end + 1]
    max_stat = float(np.nanmax(stats)) if np.any(np.isfinite(stats)) else math.nan
    return Episode(
        r_e_hat=float(path.fractions[oi]),
        origin_index=int(path.taus[oi]),
        r_f_hat=None if ci is None else float(path.fractions[ci]),
        collapse_index=None if ci is None else int(path.taus[ci]),
        origin_date=path.date_at(oi),
        collapse_date=None if ci is None else path.date_at(ci),
        max_stat=max_stat,
        ongoing=ci is None,
        label=path.label,
        method=method,
    )


def datestamp(
    path: StatPath,
    orig_rule=None,
    coll_rule=None,
    filter: PersistenceFilter | None = None,
) -> Optional[Episode]:
    """Asymmetric-threshold dating with buffer and persistence filter.

    Returns None when no origination crossing survives the filter; returns
    an ongoing Episode when origination is found but no collapse
    qualifies.  Collapse is a downward crossing: the statistic must first
    rise above the collapse boundary after origination, and the episode
    ends at its first qualifying drop below, no earlier than a log(n)/n
    fraction after the origination date.
    """
    orig_rule = orig_rule if orig_rule is not None else LogRule(10.0, side="right")
    coll_rule = coll_rule if coll_rule is not None else LogRule(2.0, side="left")
    filt = filter or PersistenceFilter()
    vals = path.values
    cv_o = threshold_curve(orig_rule, path)
    with np.errstate(invalid="ignore"):
        above = vals > cv_o  # NaN markers never cross
    oi = _first_persistent_above(above, filt.min_above, filt.consolidation_gap)
    if oi is None:
        return None
    buffer_obs = math.log(path.n)
    min_tau = path.taus[oi] + buffer_obs
    eligible = int(np.searchsorted(path.taus, min_tau, side="left"))
    cv_c = threshold_curve(coll_rule, path)
    ci = _first_downward_crossing(vals, cv_c, oi, eligible, filt.min_below)
    return _episode_from_indices(path, oi, ci, method="svadf")


def datestamp_pwy(path: StatPath, single_rule=None) -> Optional[Episode]:
    """Single-threshold baseline: no buffer, no persistence filter.

    With one boundary for both margins the crossing at origination arms
    the collapse immediately, so collapse is the first subsequent dip.
    """
    rule = single_rule if single_rule is not None else LogRule(10.0)
    vals = path.values
    cv = threshold_curve(rule, path)
    with np.errstate(invalid="ignore"):
        above = vals > cv
    oi = _first_persistent_above(above, 0, 0)
    if oi is None:
        return None
    ci = _first_downward_crossing(vals, cv, oi, oi + 1, 0)
    return _episode_from_indices(path, oi, ci, method="pwy")
