"""Experiment harness for the simulation evidence: identification rates,
dating accuracy, and the collapse-gap contrast against the
re-initialization baseline.

Cells and replications use independently derived seeds, so results are
deterministic for a grid seed and aggregation is order-independent.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from .calibration import calibrate_null
from .dating import LogRule, PersistenceFilter, TableRule, datestamp, datestamp_pwy
from .dgp import BubbleSpec, DgpSpec, VolSpec, derive_seed, simulate, simulate_pwy_reinit
from .errors import InvalidSpecError
from .recursion import RecursiveConfig, recursive_path

__all__ = [
    "Design",
    "RuleSet",
    "ExperimentGrid",
    "CellResult",
    "GapPoint",
    "run_power",
    "run_accuracy",
    "run_reinit_gap",
    "default_pwy_rule",
    "power_grid_windows",
    "power_grid_volatility",
    "accuracy_grid",
    "results_to_csv",
    "gap_to_csv",
    "format_results",
]

MIN_CELL_REPLICATIONS = 50

# grid defaults for the window/accuracy replications; the sources report
# neither the explosiveness pair nor the sample size for these designs
DEFAULT_C = 1.0
DEFAULT_ALPHA = 0.5
DEFAULT_ETA = 0.5

# single-boundary divisor calibrated so the baseline's origination
# identification column matches the reported baseline rates
DEFAULT_PWY_DIVISOR = 11.0


def bench_filter(n: int) -> PersistenceFilter:
    """Collapse persistence of one calendar month for an n-observation,
    four-year sample; origination stays a raw first crossing."""
    return PersistenceFilter(min_above=0, min_below=max(1, round(n / 48)), consolidation_gap=0)


@dataclass(frozen=True)
class Design:
    bubble: BubbleSpec
    vol: VolSpec
    n: int
    label: str = ""


@dataclass(frozen=True)
class RuleSet:
    orig_rule: object = field(default_factory=lambda: LogRule(10.0, side="right"))
    coll_rule: object = field(default_factory=lambda: LogRule(2.0, side="left"))
    filter: PersistenceFilter = field(default_factory=PersistenceFilter)
    pwy_rule: object | None = None  # None: calibrate from the homoskedastic null


@dataclass(frozen=True)
class ExperimentGrid:
    designs: tuple[Design, ...]
    B: int = 500
    rules: RuleSet = field(default_factory=RuleSet)
    seed: int = 0
    r0: float = 0.1
    variant: str = "coefficient"
    tol_r_e: float = 0.1
    tol_r_f: float = 0.15

    def __post_init__(self):
        if self.B < MIN_CELL_REPLICATIONS:
            raise InvalidSpecError(f"B must be at least {MIN_CELL_REPLICATIONS}")
        if not self.designs:
            raise InvalidSpecError("grid needs at least one design")


@dataclass(frozen=True)
class CellResult:
    method: str
    r_e: float
    r_f: float
    c: float
    alpha: float
    vol_kind: str
    n: int
    B: int
    orig_rate: float
    coll_rate: float
    mean_r_e_hat: float
    mean_r_f_hat: float
    mse_r_e: float
    mse_r_f: float
    n_episodes: int
    n_collapses: int
    seed: int
    label: str = ""


def default_pwy_rule(
    n: int,
    seed: int,
    B: int = 500,
    q: float = 0.90,
    variant: str = "coefficient",
    n_sizes: int = 7,
    r0: float = 0.1,
) -> TableRule:
    """Single threshold for both margins from the homoskedastic null:
    the q-quantile of the statistic, tabulated across window sizes."""
    lo = max(int(n * r0), 20)
    sizes = sorted(set(np.linspace(lo, n, n_sizes).astype(int).tolist()))
    table = calibrate_null(sizes, B=B, q=q, vol=VolSpec(), variant=variant, seed=seed)
    return TableRule(table)


def _one_replication(design: Design, grid: ExperimentGrid, pwy_rule, seed: int):
    spec = DgpSpec(n=design.n, vol=design.vol, bubble=design.bubble, seed=seed)
    series = simulate(spec)
    path = recursive_path(series, RecursiveConfig(r0=grid.r0, variant=grid.variant))
    ep_sv = datestamp(path, grid.rules.orig_rule, grid.rules.coll_rule, grid.rules.filter)
    ep_pwy = datestamp_pwy(path, pwy_rule)
    out = {}
    for name, ep in (("svadf", ep_sv), ("pwy", ep_pwy)):
        out[name] = (
            ep.r_e_hat if ep is not None else math.nan,
            ep.r_f_hat if ep is not None and ep.r_f_hat is not None else math.nan,
        )
    return out


def _summarize(method, design, grid, re_hats, rf_hats) -> CellResult:
    re_hats = np.asarray(re_hats)
    rf_hats = np.asarray(rf_hats)
    has_ep = np.isfinite(re_hats)
    has_coll = np.isfinite(rf_hats)
    r_e, r_f = design.bubble.r_e, design.bubble.r_f
    orig_ok = has_ep & (np.abs(re_hats - r_e) <= grid.tol_r_e)
    coll_ok = orig_ok & has_coll & (np.abs(rf_hats - r_f) <= grid.tol_r_f)
    B = re_hats.size

    def _mean(a, mask):
        return float(np.mean(a[mask])) if mask.any() else math.nan

    def _mse(a, mask, truth):
        return float(np.mean((a[mask] - truth) ** 2)) if mask.any() else math.nan

    return CellResult(
        method=method,
        r_e=r_e,
        r_f=r_f,
        c=design.bubble.c,
        alpha=design.bubble.alpha,
        vol_kind=design.vol.kind,
        n=design.n,
        B=B,
        orig_rate=float(orig_ok.mean()),
        coll_rate=float(coll_ok.mean()),
        mean_r_e_hat=_mean(re_hats, has_ep),
        mean_r_f_hat=_mean(rf_hats, has_coll),
        mse_r_e=_mse(re_hats, has_ep, r_e),
        mse_r_f=_mse(rf_hats, has_coll, r_f),
        n_episodes=int(has_ep.sum()),
        n_collapses=int(has_coll.sum()),
        seed=grid.seed,
        label=design.label,
    )


def _run_cells(grid: ExperimentGrid, n_jobs: int = 1) -> list[CellResult]:
    pwy_rule = grid.rules.pwy_rule
    if pwy_rule is None:
        n_max = max(d.n for d in grid.designs)
        pwy_rule = default_pwy_rule(
            n_max, seed=derive_seed(grid.seed, 999_983),
            variant=grid.variant, r0=grid.r0,
        )
    results: list[CellResult] = []
    for k, design in enumerate(grid.designs):
        seeds = [derive_seed(grid.seed, (k + 1) * 10_000_019 + r) for r in range(grid.B)]
        if n_jobs == 1:
            reps = [_one_replication(design, grid, pwy_rule, s) for s in seeds]
        else:
            reps = Parallel(n_jobs=n_jobs)(
                delayed(_one_replication)(design, grid, pwy_rule, s) for s in seeds
            )
        for method in ("svadf", "pwy"):
            re_hats = [r[method][0] for r in reps]
            rf_hats = [r[method][1] for r in reps]
            results.append(_summarize(method, design, grid, re_hats, rf_hats))
    return results


def run_power(grid: ExperimentGrid, n_jobs: int = 1) -> list[CellResult]:
    """Origination/collapse identification rates per cell and method.

    A replication identifies origination when an episode is detected with
    the estimate inside the tolerance band; collapse additionally needs a
    dated collapse inside its band, so collapse rates never exceed
    origination rates.
    """
    return _run_cells(grid, n_jobs=n_jobs)


def run_accuracy(grid: ExperimentGrid, n_jobs: int = 1) -> list[CellResult]:
    """Mean estimates and MSE of the dated fractions over replications
    where detection occurred (same engine as run_power; both sets of
    fields are always populated)."""
    return _run_cells(grid, n_jobs=n_jobs)


@dataclass(frozen=True)
class GapPoint:
    n: int
    regime: str
    mean_gap: float
    mean_reset_gap: float
    B: int


def run_reinit_gap(
    ns,
    B: int = 500,
    bubble: BubbleSpec | None = None,
    vol_regimes: dict[str, VolSpec] | None = None,
    x_reset_sd: float = 1.0,
    x0: float = 0.0,
    seed: int = 0,
) -> list[GapPoint]:
    """Mean explosive-window gap |X_tau_f - X_tau_e| versus sample size,
    next to the post-reset gap of the re-initialization baseline."""
    bubble = bubble or BubbleSpec(r_e=0.4, r_f=0.6, c=1.0, alpha=0.5)
    vol_regimes = vol_regimes or {
        "homoskedastic": VolSpec(),
        "sv": VolSpec(kind="logar1", eta=DEFAULT_ETA),
    }
    out: list[GapPoint] = []
    for regime_i, (regime, vol) in enumerate(vol_regimes.items()):
        for n_i, n in enumerate(ns):
            n = int(n)
            te = max(bubble.tau_e(n), 1)
            tf = bubble.tau_f(n)
            if tf >= n - 1:
                raise InvalidSpecError("gap experiment needs r_f below the sample end")
            gaps = np.empty(B)
            resets = np.empty(B)
            for r in range(B):
                s = derive_seed(seed, (regime_i * len(ns) + n_i) * 100_003 + r)
                spec = DgpSpec(n=n, vol=vol, bubble=bubble, x0=x0, seed=s)
                x = simulate(spec).values
                gaps[r] = abs(x[tf] - x[te])
                xr = simulate_pwy_reinit(spec, x_reset_sd=x_reset_sd).values
                resets[r] = abs(xr[tf + 1] - xr[te - 1])
            out.append(
                GapPoint(
                    n=n,
                    regime=regime,
                    mean_gap=float(gaps.mean()),
                    mean_reset_gap=float(resets.mean()),
                    B=B,
                )
            )
    return out


_WINDOW_CELLS = [
    (0.2, 0.50), (0.2, 0.65), (0.2, 0.75),
    (0.3, 0.50), (0.3, 0.65), (0.3, 0.75),
    (0.4, 0.65), (0.4, 0.75),
    (0.5, 0.65), (0.5, 0.75),
]

_VOL_CELLS = [
    ("constant", 0.3, {}), ("constant", 0.5, {}), ("constant", 1.0, {}),
    ("logar1", 0.3, {"eta": 0.1}), ("logar1", 0.5, {"eta": 0.5}),
    ("logar1", 1.0, {"eta": 1.0}),
    ("garch", 0.3, {"alpha_g": 0.05, "beta_g": 0.94}),
    ("garch", 0.5, {"alpha_g": 0.10, "beta_g": 0.89}),
    ("garch", 1.0, {"alpha_g": 0.05, "beta_g": 0.94}),
]

_ACCURACY_CELLS = [
    (0.2, 0.50, 0.3), (0.2, 0.65, 0.3), (0.3, 0.50, 0.3),
    (0.4, 0.50, 0.5), (0.4, 0.65, 0.5), (0.4, 0.75, 0.5),
    (0.5, 0.65, 0.7), (0.4, 0.65, 1.0),
]


def power_grid_windows(
    n: int = 1000,
    B: int = 500,
    c: float = DEFAULT_C,
    alpha: float = DEFAULT_ALPHA,
    eta: float = DEFAULT_ETA,
    seed: int = 0,
) -> ExperimentGrid:
    """Ten-cell grid varying the bubble window under log-AR(1) volatility."""
    vol = VolSpec(kind="logar1", eta=eta)
    designs = tuple(
        Design(BubbleSpec(r_e=re, r_f=rf, c=c, alpha=alpha), vol, n,
               label=f"re{re}_rf{rf}")
        for re, rf in _WINDOW_CELLS
    )
    rules = RuleSet(filter=bench_filter(n), pwy_rule=LogRule(DEFAULT_PWY_DIVISOR))
    return ExperimentGrid(designs=designs, B=B, rules=rules, seed=seed)


def power_grid_volatility(
    n: int = 1000,
    B: int = 500,
    r_e: float = 0.3,
    r_f: float = 0.6,
    alpha: float = DEFAULT_ALPHA,
    seed: int = 0,
) -> ExperimentGrid:
    """Nine-cell grid varying the volatility regime at a fixed window."""
    designs = []
    for kind, c, kw in _VOL_CELLS:
        vol = VolSpec(kind=kind, **kw)
        designs.append(
            Design(BubbleSpec(r_e=r_e, r_f=r_f, c=c, alpha=alpha), vol, n,
                   label=f"{kind}_c{c}")
        )
    rules = RuleSet(filter=bench_filter(n), pwy_rule=LogRule(DEFAULT_PWY_DIVISOR))
    return ExperimentGrid(designs=tuple(designs), B=B, rules=rules, seed=seed)


def accuracy_grid(
    n: int = 1000,
    B: int = 500,
    c: float = DEFAULT_C,
    eta: float = DEFAULT_ETA,
    seed: int = 0,
) -> ExperimentGrid:
    """Eight-cell grid varying window and explosiveness exponent."""
    vol = VolSpec(kind="logar1", eta=eta)
    designs = tuple(
        Design(BubbleSpec(r_e=re, r_f=rf, c=c, alpha=a), vol, n,
               label=f"re{re}_rf{rf}_a{a}")
        for re, rf, a in _ACCURACY_CELLS
    )
    rules = RuleSet(filter=bench_filter(n), pwy_rule=LogRule(DEFAULT_PWY_DIVISOR))
    return ExperimentGrid(designs=designs, B=B, rules=rules, seed=seed)


_RESULT_FIELDS = [
    "label", "method", "r_e", "r_f", "c", "alpha", "vol_kind", "n", "B",
    "orig_rate", "coll_rate", "mean_r_e_hat", "mean_r_f_hat",
    "mse_r_e", "mse_r_f", "n_episodes", "n_collapses", "seed",
]


def results_to_csv(results: list[CellResult], path, header_comment: str | None = None):
    with open(path, "w", newline="") as fh:
        if header_comment:
            fh.write(f"# {header_comment}\n")
        writer = csv.writer(fh)
        writer.writerow(_RESULT_FIELDS)
        for r in results:
            writer.writerow([getattr(r, f) for f in _RESULT_FIELDS])


def gap_to_csv(points: list[GapPoint], path, header_comment: str | None = None):
    with open(path, "w", newline="") as fh:
        if header_comment:
            fh.write(f"# {header_comment}\n")
        writer = csv.writer(fh)
        writer.writerow(["n", "regime", "mean_gap", "mean_reset_gap", "B"])
        for p in points:
            writer.writerow([p.n, p.regime, repr(p.mean_gap), repr(p.mean_reset_gap), p.B])


def format_results(results: list[CellResult]) -> str:
    """Side-by-side comparison table, one row per design."""
    by_label: dict[str, dict[str, CellResult]] = {}
    order = []
    for r in results:
        key = r.label or f"re{r.r_e}_rf{r.r_f}"
        if key not in by_label:
            by_label[key] = {}
            order.append(key)
        by_label[key][r.method] = r
    lines = [
        f"{'design':<22}{'sv orig':>9}{'sv coll':>9}{'pwy orig':>10}{'pwy coll':>10}"
    ]
    for key in order:
        sv = by_label[key].get("svadf")
        pw = by_label[key].get("pwy")
        lines.append(
            f"{key:<22}"
            f"{sv.orig_rate if sv else math.nan:>9.3f}"
            f"{sv.coll_rate if sv else math.nan:>9.3f}"
            f"{pw.orig_rate if pw else math.nan:>10.3f}"
            f"{pw.coll_rate if pw else math.nan:>10.3f}"
        )
    return "\n".join(lines)
