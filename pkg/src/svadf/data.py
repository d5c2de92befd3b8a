"""CSV ingestion and emission plus rolling volatility.

Input files carry a header row with configurable date and price columns,
ISO-8601 dates and decimal prices.  Emitted files round-trip through
ingestion at full precision; lines starting with '#' are provenance
comments and are skipped on read.  Ingestion parses whatever rows are
present; length requirements are enforced where windows are built.
"""

from __future__ import annotations

import csv
import datetime as _dt
import math

import numpy as np

from .dating import Episode, threshold_curve
from .errors import DataError, SchemaError
from .recursion import StatPath
from .series import PriceSeries

__all__ = [
    "ingest_csv",
    "series_to_csv",
    "rolling_volatility",
    "statpath_to_csv",
    "episode_to_csv",
    "episode_record",
]


def _open_rows(path):
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.reader(lines))


def ingest_csv(path, date_column: str = "date", price_column: str = "price") -> PriceSeries:
    """Read a price series, sorted by date, duplicates rejected.

    Raises SchemaError when a column is missing and DataError with the
    offending line number when a row fails to parse.
    """
    rows = _open_rows(path)
    if not rows:
        raise SchemaError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    for col in (date_column, price_column):
        if col not in header:
            raise SchemaError(f"{path}: missing column {col!r}")
    di = header.index(date_column)
    pi = header.index(price_column)
    dates: list[_dt.date] = []
    values: list[float] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        try:
            dates.append(_dt.date.fromisoformat(row[di].strip()))
        except (ValueError, IndexError) as exc:
            raise DataError(f"{path}: line {lineno}: bad date {row[di]!r}") from exc
        try:
            value = float(row[pi].strip())
            if not math.isfinite(value):
                raise ValueError
            values.append(value)
        except (ValueError, IndexError) as exc:
            raise DataError(f"{path}: line {lineno}: bad price {row[pi]!r}") from exc
    if not values:
        raise DataError(f"{path}: no data rows")
    order = sorted(range(len(dates)), key=lambda i: dates[i])
    dates = [dates[i] for i in order]
    values = [values[i] for i in order]
    for a, b in zip(dates, dates[1:]):
        if a == b:
            raise DataError(f"{path}: duplicate date {a.isoformat()}")
    label = str(path)
    return PriceSeries(values=np.asarray(values), dates=dates, label=label)


def series_to_csv(series: PriceSeries, path, header_comment: str | None = None) -> None:
    start = series.dates[0] if series.dates else _dt.date(2000, 1, 3)
    with open(path, "w", newline="") as fh:
        if header_comment:
            fh.write(f"# {header_comment}\n")
        writer = csv.writer(fh)
        writer.writerow(["date", "price"])
        for i, v in enumerate(series.values):
            d = series.dates[i] if series.dates else start + _dt.timedelta(days=i)
            writer.writerow([d.isoformat(), repr(float(v))])


def rolling_volatility(series: PriceSeries, window: int = 40) -> np.ndarray:
    """Trailing standard deviation of log-returns; NaN during warm-up.

    Entry t uses the `window` returns ending at t.  Default window of 40
    trading days covers eight weeks.
    """
    if window < 2:
        raise DataError("window must be at least 2")
    values = series.values
    if values.size <= window:
        raise DataError("series must be longer than the window")
    if np.any(values <= 0):
        raise DataError("log-returns need strictly positive prices")
    rets = np.diff(np.log(values))
    rets = rets - rets.mean()  # window variance is shift invariant; this
    # keeps the squared-sum correction well conditioned for drifting series
    out = np.full(values.size, np.nan)
    csum = np.concatenate([[0.0], np.cumsum(rets)])
    csq = np.concatenate([[0.0], np.cumsum(rets**2)])
    for t in range(window, values.size):
        s = csum[t] - csum[t - window]
        ss = csq[t] - csq[t - window]
        var = max(ss / window - (s / window) ** 2, 0.0)
        out[t] = math.sqrt(var)
    return out


def statpath_to_csv(
    path_obj: StatPath,
    path,
    orig_rule=None,
    coll_rule=None,
    header_comment: str | None = None,
) -> None:
    """Plot-ready path: index, date?, r, statistic and threshold curves."""
    cv_o = threshold_curve(orig_rule, path_obj) if orig_rule is not None else None
    cv_c = threshold_curve(coll_rule, path_obj) if coll_rule is not None else None
    with open(path, "w", newline="") as fh:
        if header_comment:
            fh.write(f"# {header_comment}\n")
        writer = csv.writer(fh)
        writer.writerow(["index", "date", "r", "statistic", "cv_origination", "cv_collapse"])
        for i in range(len(path_obj)):
            d = path_obj.date_at(i)
            writer.writerow(
                [
                    int(path_obj.taus[i]),
                    d.isoformat() if d else "",
                    repr(float(path_obj.fractions[i])),
                    repr(float(path_obj.values[i])),
                    repr(float(cv_o[i])) if cv_o is not None else "",
                    repr(float(cv_c[i])) if cv_c is not None else "",
                ]
            )


_EPISODE_FIELDS = [
    "label", "origin_date", "collapse_date", "r_e_hat", "r_f_hat", "ongoing", "max_stat",
]


def episode_record(episode: Episode | None, label: str = "") -> dict:
    if episode is None:
        return {
            "label": label, "origin_date": "", "collapse_date": "",
            "r_e_hat": "", "r_f_hat": "", "ongoing": "", "max_stat": "",
        }
    return {
        "label": episode.label or label,
        "origin_date": episode.origin_date.isoformat() if episode.origin_date else "",
        "collapse_date": episode.collapse_date.isoformat() if episode.collapse_date else "",
        "r_e_hat": repr(episode.r_e_hat),
        "r_f_hat": repr(episode.r_f_hat) if episode.r_f_hat is not None else "",
        "ongoing": str(episode.ongoing).lower(),
        "max_stat": repr(episode.max_stat),
    }


def episode_to_csv(episodes, path, header_comment: str | None = None) -> None:
    with open(path, "w", newline="") as fh:
        if header_comment:
            fh.write(f"# {header_comment}\n")
        writer = csv.DictWriter(fh, fieldnames=_EPISODE_FIELDS)
        writer.writeheader()
        for ep in episodes:
            writer.writerow(episode_record(ep))
