"""Exception hierarchy shared across the package.

Every error carries a short machine-parseable ``category`` used by the CLI
to emit one-line diagnostics with a stable prefix.
"""


class SvadfError(Exception):
    """Base class for all package errors."""

    category = "error"


class InvalidSpecError(SvadfError):
    """A simulation or experiment spec violates its invariants."""

    category = "invalid-spec"


class WindowSizeError(SvadfError):
    """Too few observations for the requested regression window."""

    category = "window-size"


class DegenerateRegressorError(SvadfError):
    """Lagged regressor has (numerically) zero variance."""

    category = "degenerate-regressor"


class SingularDesignError(SvadfError):
    """Collinear design matrix in the augmented regression."""

    category = "singular-design"


class ExactUnitRootError(SvadfError):
    """delta-hat is exactly (or indistinguishably) 1; interval formulas are singular."""

    category = "exact-unit-root"


class ThresholdDomainError(SvadfError):
    """Threshold requested for a window too small to carry a critical value."""

    category = "threshold-domain"


class SchemaError(SvadfError):
    """Input file is missing a required column."""

    category = "schema"


class DataError(SvadfError):
    """Input file has rows that cannot be parsed or ordered."""

    category = "data"
