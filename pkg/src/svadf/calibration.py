"""Monte Carlo critical-value tables for the recursive statistics.

Null tables hold empirical quantiles of the full-sample statistic across
unit-root replications; alternative tables average per-draw quantile
batches across randomized bubble nuisances.  Quantiles use linear
order-statistic interpolation (numpy's default), so tables reproduce
bit-for-bit from a seed.  Replications derive independent seeds from the
table seed and can be fanned out across workers.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from .dgp import BubbleSpec, DgpSpec, VolSpec, derive_seed, make_rng, simulate
from .errors import InvalidSpecError
from .recursion import stat_at

__all__ = [
    "CalibrationTable",
    "NuisanceSampler",
    "calibrate_null",
    "calibrate_alternative",
    "write_table_csv",
    "read_table_csv",
]

MIN_REPLICATIONS = 100


@dataclass(frozen=True)
class CalibrationTable:
    hypothesis: str  # "null" | "alternative"
    variant: str
    sizes: tuple[int, ...]
    values: tuple[float, ...]
    quantile_level: float
    replications: int
    seed: int

    def __post_init__(self):
        if self.hypothesis not in ("null", "alternative"):
            raise InvalidSpecError("hypothesis must be 'null' or 'alternative'")
        if list(self.sizes) != sorted(set(self.sizes)):
            raise InvalidSpecError("sizes must be strictly increasing")
        if len(self.sizes) != len(self.values):
            raise InvalidSpecError("one value per size required")
        if not all(math.isfinite(v) for v in self.values):
            raise InvalidSpecError("table values must be finite")
        if self.replications < MIN_REPLICATIONS:
            raise InvalidSpecError(f"need at least {MIN_REPLICATIONS} replications")

    def value_at(self, size: float) -> float:
        return float(np.interp(size, np.asarray(self.sizes, float), np.asarray(self.values)))


def _null_stats_chunk(n, vol, variant, seeds):
    out = np.empty(len(seeds))
    for i, s in enumerate(seeds):
        series = simulate(DgpSpec(n=n, vol=vol, bubble=None, seed=s))
        out[i] = stat_at(series, n, variant)
    return out


def calibrate_null(
    sizes,
    B: int,
    q: float,
    vol: VolSpec | None = None,
    variant: str = "coefficient",
    seed: int = 0,
    n_jobs: int = 1,
) -> CalibrationTable:
    """Empirical q-quantile of the full-sample statistic under the
    unit-root null, per sample size."""
    if not (0 < q < 1):
        raise InvalidSpecError("q must lie in (0, 1)")
    if B < MIN_REPLICATIONS:
        raise InvalidSpecError(f"B must be at least {MIN_REPLICATIONS}")
    vol = vol or VolSpec()
    sizes = [int(n) for n in sizes]
    values = []
    for k, n in enumerate(sizes):
        seeds = [derive_seed(seed, k * B + r) for r in range(B)]
        if n_jobs == 1:
            stats = _null_stats_chunk(n, vol, variant, seeds)
        else:
            chunks = np.array_split(np.asarray(seeds, dtype=np.uint64), abs(n_jobs) * 4)
            parts = Parallel(n_jobs=n_jobs)(
                delayed(_null_stats_chunk)(n, vol, variant, [int(s) for s in ch])
                for ch in chunks
                if ch.size
            )
            stats = np.concatenate(parts)
        values.append(float(np.quantile(np.sort(stats), q)))
    return CalibrationTable(
        hypothesis="null",
        variant=variant,
        sizes=tuple(sizes),
        values=tuple(values),
        quantile_level=q,
        replications=B,
        seed=seed,
    )


@dataclass(frozen=True)
class NuisanceSampler:
    """Uniform ranges for the randomized bubble nuisances.

    Draws (r_e, r_f, c, alpha) for the explosive window plus a
    log-volatility innovation scale eta and a volatility level d (the
    unnamed scale nuisance), with r_f drawn above r_e by a minimum
    separation.
    """

    r_e_range: tuple[float, float] = (0.2, 0.5)
    r_f_gap: float = 0.15
    r_f_max: float = 1.0
    c_range: tuple[float, float] = (0.5, 2.0)
    alpha_range: tuple[float, float] = (0.25, 0.65)
    eta_range: tuple[float, float] = (0.0, 1.0)
    d_range: tuple[float, float] = (0.5, 2.0)

    def __post_init__(self):
        lo, hi = self.r_e_range
        if not (0 < lo <= hi < 1):
            raise InvalidSpecError("r_e range must lie inside (0, 1)")
        if hi + self.r_f_gap >= self.r_f_max and hi + self.r_f_gap > 1:
            raise InvalidSpecError("r_f range collapses; shrink r_e range or gap")

    def draw(self, rng: np.random.Generator) -> tuple[BubbleSpec, VolSpec]:
        r_e = rng.uniform(*self.r_e_range)
        r_f = rng.uniform(min(r_e + self.r_f_gap, self.r_f_max), self.r_f_max)
        c = rng.uniform(*self.c_range)
        alpha = rng.uniform(*self.alpha_range)
        eta = rng.uniform(*self.eta_range)
        d = rng.uniform(*self.d_range)
        bubble = BubbleSpec(r_e=r_e, r_f=min(r_f, 1.0), c=c, alpha=alpha)
        vol = VolSpec(kind="logar1", sigma0=d, eta=eta, phi_rule="iterated-log")
        return bubble, vol


def _alt_batch_quantile(n, sampler, variant, q, b_inner, seed):
    rng = make_rng(seed)
    bubble, vol = sampler.draw(rng)
    stats = np.empty(b_inner)
    for r in range(b_inner):
        series = simulate(
            DgpSpec(n=n, vol=vol, bubble=bubble, seed=derive_seed(seed, r + 1))
        )
        stats[r] = stat_at(series, n, variant)
    return float(np.quantile(np.sort(stats), q))


def calibrate_alternative(
    sizes,
    q: float,
    sampler: NuisanceSampler | None = None,
    variant: str = "coefficient",
    seed: int = 0,
    b_outer: int = 20,
    b_inner: int = 50,
    n_jobs: int = 1,
) -> CalibrationTable:
    """Average of per-draw q-quantiles of the full-sample statistic under
    randomized bubble alternatives: b_outer nuisance draws, b_inner
    replications each."""
    if not (0 < q < 1):
        raise InvalidSpecError("q must lie in (0, 1)")
    if b_outer * b_inner < MIN_REPLICATIONS:
        raise InvalidSpecError(f"b_outer*b_inner must be at least {MIN_REPLICATIONS}")
    sampler = sampler or NuisanceSampler()
    sizes = [int(n) for n in sizes]
    values = []
    for k, n in enumerate(sizes):
        seeds = [derive_seed(seed, (k + 1) * 1_000_003 + d) for d in range(b_outer)]
        if n_jobs == 1:
            qs = [
                _alt_batch_quantile(n, sampler, variant, q, b_inner, s) for s in seeds
            ]
        else:
            qs = Parallel(n_jobs=n_jobs)(
                delayed(_alt_batch_quantile)(n, sampler, variant, q, b_inner, s)
                for s in seeds
            )
        values.append(float(np.mean(qs)))
    return CalibrationTable(
        hypothesis="alternative",
        variant=variant,
        sizes=tuple(sizes),
        values=tuple(values),
        quantile_level=q,
        replications=b_outer * b_inner,
        seed=seed,
    )


_TABLE_FIELDS = ["hypothesis", "variant", "n", "q", "B", "value", "seed"]


def write_table_csv(table: CalibrationTable, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_TABLE_FIELDS)
        for n, v in zip(table.sizes, table.values):
            writer.writerow(
                [
                    table.hypothesis,
                    table.variant,
                    n,
                    repr(table.quantile_level),
                    table.replications,
                    repr(v),
                    table.seed,
                ]
            )


def read_table_csv(path) -> CalibrationTable:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or set(_TABLE_FIELDS) - set(reader.fieldnames):
            missing = set(_TABLE_FIELDS) - set(reader.fieldnames or [])
            raise InvalidSpecError(f"calibration csv missing columns {sorted(missing)}")
        rows = list(reader)
    if not rows:
        raise InvalidSpecError("calibration csv has no rows")
    head = rows[0]
    return CalibrationTable(
        hypothesis=head["hypothesis"],
        variant=head["variant"],
        sizes=tuple(int(r["n"]) for r in rows),
        values=tuple(float(r["value"]) for r in rows),
        quantile_level=float(head["q"]),
        replications=int(head["B"]),
        seed=int(head["seed"]),
    )
