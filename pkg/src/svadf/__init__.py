"""Volatility-robust recursive explosiveness testing, bubble date-stamping
and Monte Carlo calibration for asset-price series."""

from .bench import (
    CellResult,
    Design,
    ExperimentGrid,
    GapPoint,
    RuleSet,
    accuracy_grid,
    default_pwy_rule,
    power_grid_volatility,
    power_grid_windows,
    run_accuracy,
    run_power,
    run_reinit_gap,
)
from .calibration import (
    CalibrationTable,
    NuisanceSampler,
    calibrate_alternative,
    calibrate_null,
    read_table_csv,
    write_table_csv,
)
from .data import ingest_csv, rolling_volatility, series_to_csv, statpath_to_csv
from .dating import (
    Episode,
    FixedValue,
    LogRule,
    PersistenceFilter,
    TableRule,
    datestamp,
    datestamp_pwy,
    threshold_value,
)
from .detector import BubbleDetector
from .dgp import (
    BubbleSpec,
    DgpSpec,
    VolSpec,
    derive_seed,
    gen_volatility,
    make_rng,
    simulate,
    simulate_pwy_reinit,
)
from .errors import (
    DataError,
    DegenerateRegressorError,
    ExactUnitRootError,
    InvalidSpecError,
    SchemaError,
    SingularDesignError,
    SvadfError,
    ThresholdDomainError,
    WindowSizeError,
)
from .estimator import (
    AdfFit,
    Ar1Fit,
    RecursiveAr1,
    Window,
    demean,
    fit_adf,
    fit_ar1,
    select_lag,
)
from .inference import (
    RootInference,
    cauchy_quantile,
    gamma_hat,
    infer_root,
    normal_quantile,
)
from .recursion import RecursiveConfig, StatPath, recursive_path, stat_at
from .series import PriceSeries, as_price_series

__version__ = "0.1.0"
