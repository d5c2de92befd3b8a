"""Time-indexed price observations and input coercion helpers."""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSpecError


@dataclass(frozen=True)
class PriceSeries:
    """An ordered series of price levels with optional calendar dates.

    Parameters
    ----------
    values : array-like of float
        Observation levels, all finite.
    dates : list of datetime.date, optional
        Strictly increasing, same length as ``values``.
    label : str
        Free-form identifier carried through reports.
    """

    values: np.ndarray
    dates: list[_dt.date] | None = None
    label: str = ""
    _frozen: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.size == 0:
            raise InvalidSpecError("values must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(vals)):
            raise InvalidSpecError("values must all be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if self.dates is not None:
            if len(self.dates) != vals.size:
                raise InvalidSpecError("dates must match values in length")
            for a, b in zip(self.dates, self.dates[1:]):
                if b <= a:
                    raise InvalidSpecError("dates must be strictly increasing")

    def __len__(self) -> int:
        return int(self.values.size)

    def date_at(self, index: int) -> _dt.date | None:
        if self.dates is None:
            return None
        return self.dates[index]


def as_price_series(X, label: str = "") -> PriceSeries:
    """Coerce an array-like, PriceSeries or (values, dates) pair to PriceSeries."""
    if isinstance(X, PriceSeries):
        return X
    if isinstance(X, tuple) and len(X) == 2:
        return PriceSeries(values=np.asarray(X[0], dtype=float), dates=list(X[1]), label=label)
    return PriceSeries(values=np.asarray(X, dtype=float), label=label)
