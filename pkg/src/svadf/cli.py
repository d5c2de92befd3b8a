"""Command-line surface: simulation, testing, date-stamping, inference,
calibration and benchmark drivers.

Every command is deterministic given its flags, the optional config file
and the input files.  Flags mirror config keys one-to-one (section name =
command, dashes become underscores); flags win.  The default seed comes
from the SVADF_SEED environment variable.  Errors exit nonzero with one
machine-parseable line: "<category>: <message>".
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
from importlib.metadata import PackageNotFoundError, version as _pkg_version

import numpy as np

from . import bench as bench_mod
from .calibration import (
    NuisanceSampler,
    calibrate_alternative,
    calibrate_null,
    read_table_csv,
    write_table_csv,
)
from .data import (
    episode_record,
    episode_to_csv,
    ingest_csv,
    rolling_volatility,
    series_to_csv,
    statpath_to_csv,
)
from .dating import FixedValue, LogRule, PersistenceFilter, TableRule, datestamp, datestamp_pwy
from .dgp import BubbleSpec, DgpSpec, VolSpec, simulate, simulate_pwy_reinit
from .errors import InvalidSpecError, SvadfError
from .inference import infer_root
from .recursion import RecursiveConfig, recursive_path
from .series import PriceSeries

try:
    VERSION = _pkg_version("svadf")
except PackageNotFoundError:  # running from a source tree
    VERSION = "0.1.0"


def _default_seed() -> int:
    return int(os.environ.get("SVADF_SEED", "0"))


def _provenance(seed) -> str:
    return f"svadf={VERSION} seed={seed}"


def _parse_rule(text: str, side: str):
    kind, _, arg = text.partition(":")
    if kind == "log":
        return LogRule(float(arg), side=side)
    if kind == "fixed":
        return FixedValue(float(arg), side=side)
    if kind == "table":
        return TableRule(read_table_csv(arg), side=side)
    raise InvalidSpecError(f"unknown threshold rule {text!r}; use log:D, fixed:V or table:PATH")


def _vol_from_args(args) -> VolSpec:
    phi: str | float = args.phi
    if phi != "iterated-log":
        phi = float(phi)
    return VolSpec(
        kind=args.vol,
        sigma0=args.sigma0,
        eta=args.eta,
        phi_rule=phi,
        alpha_g=args.alpha_g,
        beta_g=args.beta_g,
    )


def _load_series(args) -> PriceSeries:
    series = ingest_csv(args.input, date_column=args.date_column, price_column=args.price_column)
    if args.log_prices:
        values = series.values
        if np.any(values <= 0):
            raise InvalidSpecError("log-price switch needs strictly positive prices")
        series = PriceSeries(values=np.log(values), dates=series.dates, label=series.label)
    return series


def _cmd_simulate(args) -> int:
    bubble = None
    if args.r_e is not None:
        bubble = BubbleSpec(r_e=args.r_e, r_f=args.r_f, c=args.c, alpha=args.alpha)
    spec = DgpSpec(n=args.n, vol=_vol_from_args(args), bubble=bubble, x0=args.x0, seed=args.seed)
    if args.pwy_reinit:
        series = simulate_pwy_reinit(spec, x_reset_sd=args.reset_sd)
    else:
        series = simulate(spec)
    series_to_csv(series, args.out, header_comment=_provenance(args.seed))
    print(f"wrote {len(series)} observations to {args.out}")
    return 0


def _cmd_test(args) -> int:
    series = _load_series(args)
    n = len(series)
    cfg = RecursiveConfig(r0=args.r0, variant=args.variant, lag_order=args.lag)
    path = recursive_path(series, cfg)
    stat = float(path.values[-1])
    rule = _parse_rule(args.threshold, side="right")
    cv = rule.value(n, 1.0)
    decision = "explosive evidence" if stat > cv else "no explosive evidence"
    print(f"series={series.label} n={n} variant={args.variant}")
    print(f"full-sample statistic = {stat:.6f}")
    print(f"threshold             = {cv:.6f}")
    print(f"decision              = {decision}")
    return 0


def _dating_filter(args) -> PersistenceFilter:
    return PersistenceFilter(
        min_above=args.min_above,
        min_below=args.min_below,
        consolidation_gap=args.gap,
    )


def _cmd_datestamp(args) -> int:
    series = _load_series(args)
    cfg = RecursiveConfig(r0=args.r0, variant=args.variant, lag_order=args.lag)
    path = recursive_path(series, cfg)
    orig = _parse_rule(args.orig, side="right")
    coll = _parse_rule(args.coll, side="left")
    if args.pwy:
        episode = datestamp_pwy(path, orig)
    else:
        episode = datestamp(path, orig, coll, _dating_filter(args))
    if args.out_path:
        statpath_to_csv(path, args.out_path, orig, coll, header_comment=_provenance(args.seed))
    if args.out_episode:
        episode_to_csv([episode] if episode else [], args.out_episode,
                       header_comment=_provenance(args.seed))
    rec = episode_record(episode, label=series.label)
    if episode is None:
        print("no episode detected")
    else:
        for k, v in rec.items():
            print(f"{k:>14} = {v}")
    return 0


def _cmd_infer(args) -> int:
    series = _load_series(args)
    inf = infer_root(series, level=args.level)
    print(f"series={series.label} n={inf.n} level={inf.level}")
    print(f"delta_hat = {inf.delta_hat:.8f}  regime={inf.regime}")
    print(f"gamma_hat = {inf.gamma_hat:.8f}")
    print(f"ci_delta  = ({inf.ci_delta[0]:.8g}, {inf.ci_delta[1]:.8g})")
    print(f"ci_gamma  = ({inf.ci_gamma[0]:.8g}, {inf.ci_gamma[1]:.8g})")
    print(f"classification = {inf.classification}")
    return 0


def _cmd_calibrate(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    if args.hypothesis == "null":
        table = calibrate_null(
            sizes, B=args.B, q=args.q, vol=_vol_from_args(args),
            variant=args.variant, seed=args.seed, n_jobs=args.jobs,
        )
    else:
        table = calibrate_alternative(
            sizes, q=args.q, sampler=NuisanceSampler(), variant=args.variant,
            seed=args.seed, b_outer=args.b_outer, b_inner=args.b_inner,
            n_jobs=args.jobs,
        )
    write_table_csv(table, args.out)
    for n, v in zip(table.sizes, table.values):
        print(f"n={n:>6}  q{table.quantile_level:.2f} = {v:.4f}")
    print(f"wrote {args.out}")
    return 0


def _cmd_bench(args) -> int:
    if args.experiment == "reinit-gap":
        ns = [int(s) for s in args.sizes.split(",")] if args.sizes else list(range(50, 501, 50))
        points = bench_mod.run_reinit_gap(ns, B=args.B, seed=args.seed)
        if args.out:
            bench_mod.gap_to_csv(points, args.out, header_comment=_provenance(args.seed))
        print(f"{'n':>6} {'regime':<14} {'mean_gap':>14} {'mean_reset_gap':>16}")
        for p in points:
            print(f"{p.n:>6} {p.regime:<14} {p.mean_gap:>14.4f} {p.mean_reset_gap:>16.4f}")
        return 0
    builders = {
        "windows": bench_mod.power_grid_windows,
        "volatility": bench_mod.power_grid_volatility,
        "accuracy": bench_mod.accuracy_grid,
    }
    grid = builders[args.experiment](n=args.n, B=args.B, seed=args.seed)
    runner = bench_mod.run_accuracy if args.experiment == "accuracy" else bench_mod.run_power
    results = runner(grid, n_jobs=args.jobs)
    if args.out:
        bench_mod.results_to_csv(results, args.out, header_comment=_provenance(args.seed))
    print(bench_mod.format_results(results))
    return 0


def _cmd_report(args) -> int:
    series = _load_series(args)
    cfg = RecursiveConfig(r0=args.r0, variant=args.variant, lag_order=args.lag)
    path = recursive_path(series, cfg)
    orig = _parse_rule(args.orig, side="right")
    coll = _parse_rule(args.coll, side="left")
    episode = datestamp(path, orig, coll, _dating_filter(args))
    print(f"=== {series.label} (n={len(series)}) ===")
    stat = float(path.values[-1])
    print(f"full-sample {args.variant} statistic: {stat:.4f} "
          f"(origination threshold {orig.value(len(series), 1.0):.4f})")
    try:
        inf = infer_root(series, level=args.level)
        print(f"delta_hat={inf.delta_hat:.6f} gamma_hat={inf.gamma_hat:.4f} "
              f"regime={inf.regime} classification={inf.classification}")
        print(f"ci_delta=({inf.ci_delta[0]:.6g}, {inf.ci_delta[1]:.6g})")
    except SvadfError as exc:
        print(f"inference unavailable ({exc.category}): {exc}")
    try:
        vol = rolling_volatility(series, window=args.vol_window)
        finite = vol[np.isfinite(vol)]
        if finite.size:
            print(f"rolling volatility (w={args.vol_window}): "
                  f"median={np.median(finite):.5f} max={finite.max():.5f}")
    except SvadfError as exc:
        print(f"rolling volatility unavailable ({exc.category}): {exc}")
    if episode is None:
        print("episode: none detected")
    else:
        rec = episode_record(episode, label=series.label)
        status = "ongoing" if episode.ongoing else "closed"
        print(f"episode: {status} r_e_hat={rec['r_e_hat']} r_f_hat={rec['r_f_hat'] or '-'} "
              f"dates=[{rec['origin_date'] or '-'} .. {rec['collapse_date'] or '-'}] "
              f"max_stat={rec['max_stat']}")
    return 0


def _add_series_options(p: argparse.ArgumentParser):
    p.add_argument("--input", required=True, help="input CSV path")
    p.add_argument("--date-column", default="date")
    p.add_argument("--price-column", default="price")
    p.add_argument("--log-prices", action="store_true",
                   help="analyze log prices instead of levels")


def _add_recursion_options(p: argparse.ArgumentParser):
    p.add_argument("--r0", type=float, default=0.1)
    p.add_argument("--variant", choices=["coefficient", "ttype"], default="coefficient")
    p.add_argument("--lag", default=0,
                   type=lambda s: s if s == "auto" else int(s),
                   help="augmentation lag order, or 'auto'")


def _add_dating_options(p: argparse.ArgumentParser):
    p.add_argument("--orig", default="log:10", help="origination rule (log:D|fixed:V|table:PATH)")
    p.add_argument("--coll", default="log:2", help="collapse rule (log:D|fixed:V|table:PATH)")
    p.add_argument("--min-above", type=int, default=0)
    p.add_argument("--min-below", type=int, default=0)
    p.add_argument("--gap", type=int, default=0, help="consolidation gap, observations")


def _add_vol_options(p: argparse.ArgumentParser):
    p.add_argument("--vol", choices=["constant", "logar1", "garch"], default="constant")
    p.add_argument("--sigma0", type=float, default=1.0)
    p.add_argument("--eta", type=float, default=0.0)
    p.add_argument("--phi", default="iterated-log")
    p.add_argument("--alpha-g", type=float, default=0.0)
    p.add_argument("--beta-g", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="svadf",
        description="Volatility-robust recursive explosiveness testing and bubble dating",
    )
    parser.add_argument("--config", help="INI config file; section per command")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate a price path to CSV")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--r-e", type=float, default=None)
    p.add_argument("--r-f", type=float, default=None)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--x0", type=float, default=0.0)
    _add_vol_options(p)
    p.add_argument("--pwy-reinit", action="store_true")
    p.add_argument("--reset-sd", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("test", help="full-sample explosiveness decision")
    _add_series_options(p)
    _add_recursion_options(p)
    p.add_argument("--threshold", default="log:10")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_test)

    p = sub.add_parser("datestamp", help="date-stamp an episode, emit path CSV")
    _add_series_options(p)
    _add_recursion_options(p)
    _add_dating_options(p)
    p.add_argument("--pwy", action="store_true", help="single-threshold baseline dating")
    p.add_argument("--out-path", default=None, help="statistic path CSV")
    p.add_argument("--out-episode", default=None, help="episode record CSV")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_datestamp)

    p = sub.add_parser("infer", help="root and growth-rate confidence intervals")
    _add_series_options(p)
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_infer)

    p = sub.add_parser("calibrate", help="Monte Carlo critical-value tables")
    p.add_argument("--hypothesis", choices=["null", "alternative"], default="null")
    p.add_argument("--sizes", default="500,1000")
    p.add_argument("--B", type=int, default=1000)
    p.add_argument("--q", type=float, default=0.90)
    p.add_argument("--b-outer", type=int, default=20)
    p.add_argument("--b-inner", type=int, default=50)
    _add_vol_options(p)
    p.add_argument("--variant", choices=["coefficient", "ttype"], default="coefficient")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("bench", help="simulation experiments")
    p.add_argument("--experiment",
                   choices=["windows", "volatility", "accuracy", "reinit-gap"],
                   default="windows")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--B", type=int, default=500)
    p.add_argument("--sizes", default=None, help="comma list of n for reinit-gap")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("report", help="combined text summary per series")
    _add_series_options(p)
    _add_recursion_options(p)
    _add_dating_options(p)
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--vol-window", type=int, default=40)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_report)

    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if args.config:
        ini = configparser.ConfigParser()
        read = ini.read(args.config)
        if not read:
            raise InvalidSpecError(f"config file {args.config!r} not found")
        if ini.has_section(args.command):
            explicit = {a.lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
            for key, value in ini.items(args.command):
                attr = key.replace("-", "_")
                if attr in explicit or not hasattr(args, attr):
                    continue
                current = getattr(args, attr)
                if isinstance(current, bool):
                    setattr(args, attr, value.strip().lower() in ("1", "true", "yes"))
                elif isinstance(current, int):
                    setattr(args, attr, int(value))
                elif isinstance(current, float):
                    setattr(args, attr, float(value))
                else:
                    setattr(args, attr, value)
    if getattr(args, "seed", None) is None and hasattr(args, "seed"):
        args.seed = _default_seed()
    return args


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, list(sys.argv[1:] if argv is None else argv))
        return args.func(args)
    except SvadfError as exc:
        print(f"{exc.category}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
