"""Data-generating processes: volatility paths, the unit-root null, the
single-bubble alternative and the re-initialization baseline.

Randomness contract
-------------------
All generators are pure functions of their spec.  Each simulation builds a
counter-based Philox generator from ``SeedSequence(seed)``; replication
``r`` of an experiment uses ``derive_seed(master_seed, r)``, so parallel
replications are order-independent and bit-reproducible.  Normal variates
come from numpy's ziggurat sampler (``Generator.standard_normal``).

Draw ordering inside :func:`simulate` is fixed and documented: volatility
innovations are consumed first (for the GARCH regime the innovation block
is shared with the mean equation, one extra leading draw seeds the variance
recursion), then the mean-equation innovations, then any reset draw.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.signal import lfilter

from .errors import InvalidSpecError
from .series import PriceSeries

__all__ = [
    "VolSpec",
    "BubbleSpec",
    "DgpSpec",
    "gen_volatility",
    "simulate",
    "simulate_pwy_reinit",
    "make_rng",
    "derive_seed",
    "iterated_log_phi",
]

MIN_SAMPLE = 20


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator for one simulation stream."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))


def derive_seed(master_seed: int, stream: int) -> int:
    """Collision-resistant per-replication seed, hash(master, stream)."""
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(stream),))
    return int(ss.generate_state(1, np.uint64)[0])


def iterated_log_phi(n: int) -> float:
    """Log-volatility persistence approaching 1 at an iterated-log rate.

    Clamped below at n = 16 so log(log(n)) stays positive and bounded away
    from zero for short samples.
    """
    return 1.0 - 1.0 / math.log(math.log(max(int(n), 16)))


@dataclass(frozen=True)
class VolSpec:
    """Volatility regime for the innovation scale sigma_t.

    kind is one of:

    - ``"constant"``: sigma_t = sigma0.
    - ``"logar1"``: log sigma_t^2 = phi * log sigma_{t-1}^2 + eta_t with
      eta_t ~ N(0, eta^2) and log sigma_0^2 = 2 log(sigma0).  ``phi_rule``
      is either the string ``"iterated-log"`` (persistence from
      :func:`iterated_log_phi`) or a fixed float in (0, 1].
    - ``"garch"``: sigma_t^2 = alpha_g * u_{t-1}^2 + beta_g * sigma_{t-1}^2
      with u_t = sigma_t eps_t and sigma_0^2 = sigma0^2, requiring
      alpha_g + beta_g < 1.  The path is generated jointly with the
      innovations it scales.
    """

    kind: str = "constant"
    sigma0: float = 1.0
    eta: float = 0.0
    phi_rule: str | float = "iterated-log"
    alpha_g: float = 0.0
    beta_g: float = 0.0

    def __post_init__(self):
        if self.kind not in ("constant", "logar1", "garch"):
            raise InvalidSpecError(f"unknown volatility kind {self.kind!r}")
        # constant admits sigma0 = 0, the degenerate noiseless regime used
        # by closed-form checks; the other kinds need a positive scale
        min_ok = self.sigma0 >= 0 if self.kind == "constant" else self.sigma0 > 0
        if not min_ok:
            raise InvalidSpecError("sigma0 must be positive (nonnegative for constant)")
        if self.kind == "logar1":
            if self.eta < 0:
                raise InvalidSpecError("eta must be nonnegative")
            phi = self.resolved_phi(MIN_SAMPLE)
            if not (0 < phi <= 1):
                raise InvalidSpecError("resolved log-vol persistence must lie in (0, 1]")
        if self.kind == "garch":
            if self.alpha_g < 0 or self.beta_g < 0:
                raise InvalidSpecError("garch coefficients must be nonnegative")
            if self.alpha_g + self.beta_g >= 1:
                raise InvalidSpecError("garch requires alpha_g + beta_g < 1")
            if self.alpha_g + self.beta_g == 0:
                raise InvalidSpecError("garch requires alpha_g + beta_g > 0")

    def resolved_phi(self, n: int) -> float:
        if self.phi_rule == "iterated-log":
            return iterated_log_phi(n)
        phi = float(self.phi_rule)
        if not (0 < phi <= 1):
            raise InvalidSpecError("fixed phi must lie in (0, 1]")
        return phi


@dataclass(frozen=True)
class BubbleSpec:
    """Mildly explosive window: root 1 + c / n^alpha over [r_e, r_f].

    alpha may reach 1 (fixed 1 + c/n root), the hardest dating design.
    """

    r_e: float
    r_f: float
    c: float = 1.0
    alpha: float = 0.5

    def __post_init__(self):
        if not (0 < self.r_e < self.r_f <= 1):
            raise InvalidSpecError("need 0 < r_e < r_f <= 1")
        if not (self.c > 0):
            raise InvalidSpecError("c must be positive")
        if not (0 < self.alpha <= 1):
            raise InvalidSpecError("alpha must lie in (0, 1]")

    def delta(self, n: int) -> float:
        return 1.0 + self.c / float(n) ** self.alpha

    def tau_e(self, n: int) -> int:
        return int(math.floor(n * self.r_e))

    def tau_f(self, n: int) -> int:
        return int(math.floor(n * self.r_f))


@dataclass(frozen=True)
class DgpSpec:
    """Full description of one simulated price path."""

    n: int
    vol: VolSpec
    bubble: BubbleSpec | None = None
    x0: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n < MIN_SAMPLE:
            raise InvalidSpecError(f"n must be at least {MIN_SAMPLE}")
        if not math.isfinite(self.x0):
            raise InvalidSpecError("x0 must be finite")
        if not (0 <= int(self.seed) < 2**64):
            raise InvalidSpecError("seed must fit in uint64")

    def with_seed(self, seed: int) -> "DgpSpec":
        return replace(self, seed=int(seed))

    def to_config(self) -> dict[str, str]:
        """Flat key-value form consumed by the CLI and bench configs."""
        cfg = {
            "n": str(self.n),
            "x0": repr(self.x0),
            "seed": str(self.seed),
            "vol.kind": self.vol.kind,
            "vol.sigma0": repr(self.vol.sigma0),
            "vol.eta": repr(self.vol.eta),
            "vol.phi_rule": str(self.vol.phi_rule),
            "vol.alpha_g": repr(self.vol.alpha_g),
            "vol.beta_g": repr(self.vol.beta_g),
        }
        if self.bubble is not None:
            cfg.update(
                {
                    "bubble.r_e": repr(self.bubble.r_e),
                    "bubble.r_f": repr(self.bubble.r_f),
                    "bubble.c": repr(self.bubble.c),
                    "bubble.alpha": repr(self.bubble.alpha),
                }
            )
        return cfg

    @classmethod
    def from_config(cls, cfg: dict[str, str]) -> "DgpSpec":
        phi_rule: str | float = cfg.get("vol.phi_rule", "iterated-log")
        if phi_rule != "iterated-log":
            phi_rule = float(phi_rule)
        vol = VolSpec(
            kind=cfg.get("vol.kind", "constant"),
            sigma0=float(cfg.get("vol.sigma0", 1.0)),
            eta=float(cfg.get("vol.eta", 0.0)),
            phi_rule=phi_rule,
            alpha_g=float(cfg.get("vol.alpha_g", 0.0)),
            beta_g=float(cfg.get("vol.beta_g", 0.0)),
        )
        bubble = None
        if "bubble.r_e" in cfg:
            bubble = BubbleSpec(
                r_e=float(cfg["bubble.r_e"]),
                r_f=float(cfg["bubble.r_f"]),
                c=float(cfg.get("bubble.c", 1.0)),
                alpha=float(cfg.get("bubble.alpha", 0.5)),
            )
        return cls(
            n=int(cfg["n"]),
            vol=vol,
            bubble=bubble,
            x0=float(cfg.get("x0", 0.0)),
            seed=int(cfg.get("seed", 0)),
        )


def _vol_and_eps(spec: VolSpec, n: int, rng: np.random.Generator):
    """Volatility scale sigma_1..sigma_n plus the innovations it is tied to.

    For the GARCH regime the returned eps block is the one the caller must
    use for the mean equation: sigma_t is F_{t-1}-measurable, built from the
    lagged shared innovations.  For the other regimes eps is None and the
    caller draws its own innovations (after this call, fixed order).
    """
    if n < 1:
        raise InvalidSpecError("n must be at least 1")
    if spec.kind == "constant":
        return np.full(n, spec.sigma0, dtype=float), None
    if spec.kind == "logar1":
        phi = spec.resolved_phi(n)
        innov = spec.eta * rng.standard_normal(n)
        logs2_0 = 2.0 * math.log(spec.sigma0)
        logs2, _ = lfilter([1.0], [1.0, -phi], innov, zi=np.array([phi * logs2_0]))
        return np.exp(0.5 * logs2), None
    # garch: sigma_t^2 = sigma_{t-1}^2 * (alpha_g * eps_{t-1}^2 + beta_g),
    # one leading draw eps_0 seeds the recursion, eps_1..eps_n feed the mean.
    e = rng.standard_normal(n + 1)
    step = np.log(spec.alpha_g * e[:n] ** 2 + spec.beta_g)
    logs2 = 2.0 * math.log(spec.sigma0) + np.cumsum(step)
    return np.exp(0.5 * logs2), e[1:]


def gen_volatility(spec: VolSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Simulate sigma_1..sigma_n under the given volatility regime."""
    sigma, _ = _vol_and_eps(spec, n, rng)
    return sigma


def _mean_recursion(u: np.ndarray, spec: DgpSpec) -> np.ndarray:
    """Path X_0..X_{n-1} with X_0 = x0 and innovations u_1..u_{n-1}."""
    n = spec.n
    x = np.empty(n, dtype=float)
    x[0] = spec.x0
    if spec.bubble is None:
        x[1:] = spec.x0 + np.cumsum(u)
        return x
    delta = spec.bubble.delta(n)
    te = max(spec.bubble.tau_e(n), 1)
    tf = spec.bubble.tau_f(n)
    if te > 1:
        x[1:te] = x[0] + np.cumsum(u[: te - 1])
    seg, _ = lfilter(
        [1.0], [1.0, -delta], u[te - 1 : tf], zi=np.array([delta * x[te - 1]])
    )
    x[te : tf + 1] = seg
    if tf < n - 1:
        x[tf + 1 :] = x[tf] + np.cumsum(u[tf:])
    return x


def simulate(spec: DgpSpec) -> PriceSeries:
    """Simulate one path: unit root everywhere except the explosive window.

    X_t = X_{t-1} + sigma_t eps_t outside [tau_e, tau_f] and
    X_t = delta_n X_{t-1} + sigma_t eps_t inside it, with values[0] = x0.
    Deterministic for a fixed seed.
    """
    rng = make_rng(spec.seed)
    sigma, eps = _vol_and_eps(spec.vol, spec.n - 1, rng)
    if eps is None:
        eps = rng.standard_normal(spec.n - 1)
    x = _mean_recursion(sigma * eps, spec)
    return PriceSeries(values=x, label="simulated")


def simulate_pwy_reinit(spec: DgpSpec, x_reset_sd: float = 0.0) -> PriceSeries:
    """Bubble path with the collapse-and-reset mechanism.

    Identical to :func:`simulate` through tau_f; afterwards the level
    restarts from the pre-bubble level plus X^c ~ N(0, x_reset_sd^2) drawn
    once, and evolves as a unit root.
    """
    if spec.bubble is None:
        raise InvalidSpecError("re-initialization model requires a bubble spec")
    if x_reset_sd < 0:
        raise InvalidSpecError("x_reset_sd must be nonnegative")
    rng = make_rng(spec.seed)
    sigma, eps = _vol_and_eps(spec.vol, spec.n - 1, rng)
    if eps is None:
        eps = rng.standard_normal(spec.n - 1)
    x = _mean_recursion(sigma * eps, spec)
    te = max(spec.bubble.tau_e(spec.n), 1)
    tf = spec.bubble.tau_f(spec.n)
    x_reset = x[te - 1] + x_reset_sd * rng.standard_normal()
    if tf < spec.n - 1:
        u = (sigma * eps)[tf:]
        x = x.copy()
        x[tf + 1 :] = x_reset + np.cumsum(u)
    return PriceSeries(values=x, label="simulated-reinit")
