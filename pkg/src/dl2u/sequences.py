"""Sample-size-indexed parameter sequences and volatility scale quantities.

The model's persistence parameters are driven by rate sequences evaluated
at the sample length n: the mean root is 1 -/+ c/k_n and the log-volatility
persistence is 1 - d/log(r_n).  This module evaluates those sequences and
the closed-form moments of the lognormal volatility process (dispersion
factor A_t, unconditional variance x_t, sample average m_n, long-run scale
l_n), all with parallel log-space representations so that large-alpha /
near-unit-phi regimes never overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.special import logsumexp

from .errors import DomainError

__all__ = [
    "SequenceKind",
    "SequenceSpec",
    "Regime",
    "ModelParams",
    "VolatilityScales",
    "eval_sequence",
    "rho_n",
    "phi_n",
    "scales",
]


class SequenceKind(Enum):
    CONSTANT = "constant"
    LOG_OF_N = "log"
    POWER_OF_N = "pow"
    LINEAR_N = "lin"


@dataclass(frozen=True)
class SequenceSpec:
    """A rate sequence: constant, log n, n^a with a in (0, 1], or n."""

    kind: SequenceKind
    value: float | None = None  # constant value or power exponent

    def __post_init__(self):
        if self.kind is SequenceKind.CONSTANT:
            if self.value is None or self.value <= 0:
                raise DomainError("constant sequence needs a positive value")
        elif self.kind is SequenceKind.POWER_OF_N:
            if self.value is None or not 0 < self.value <= 1:
                raise DomainError("power sequence needs exponent in (0, 1]")
        elif self.value is not None:
            raise DomainError(f"{self.kind.value} sequence takes no parameter")

    @staticmethod
    def constant(value: float) -> "SequenceSpec":
        return SequenceSpec(SequenceKind.CONSTANT, float(value))

    @staticmethod
    def log_of_n() -> "SequenceSpec":
        return SequenceSpec(SequenceKind.LOG_OF_N)

    @staticmethod
    def power_of_n(a: float) -> "SequenceSpec":
        return SequenceSpec(SequenceKind.POWER_OF_N, float(a))

    @staticmethod
    def linear_n() -> "SequenceSpec":
        return SequenceSpec(SequenceKind.LINEAR_N)

    @staticmethod
    def parse(text: str) -> "SequenceSpec":
        """Parse CLI notation: 'const:V', 'log', 'pow:A' or 'lin'."""
        head, _, arg = text.partition(":")
        if head == "const":
            return SequenceSpec.constant(float(arg))
        if head == "log":
            return SequenceSpec.log_of_n()
        if head == "pow":
            return SequenceSpec.power_of_n(float(arg))
        if head == "lin":
            return SequenceSpec.linear_n()
        raise DomainError(f"unknown sequence spec {text!r}")

    def label(self) -> str:
        if self.kind is SequenceKind.CONSTANT:
            return f"const:{self.value:g}"
        if self.kind is SequenceKind.LOG_OF_N:
            return "log"
        if self.kind is SequenceKind.POWER_OF_N:
            return f"pow:{self.value:g}"
        return "lin"


def eval_sequence(spec: SequenceSpec, n: int) -> float:
    """Evaluate a rate sequence at sample length n (requires n >= 3)."""
    if n < 3:
        raise DomainError(f"sequence evaluation needs n >= 3, got n={n}")
    if spec.kind is SequenceKind.CONSTANT:
        return spec.value
    if spec.kind is SequenceKind.LOG_OF_N:
        return math.log(n)
    if spec.kind is SequenceKind.POWER_OF_N:
        return float(n) ** spec.value
    return float(n)


class Regime(Enum):
    NEAR_STATIONARY = "stat"
    MILDLY_EXPLOSIVE = "expl"


@dataclass(frozen=True)
class ModelParams:
    """Full parameterization of the double near-unit-root data generator."""

    c: float
    d: float
    alpha: float
    n: int
    kn: SequenceSpec
    regime: Regime
    rn: SequenceSpec = field(default_factory=SequenceSpec.log_of_n)
    y0: float = 0.0
    z0: float = 0.0

    def __post_init__(self):
        if self.c < 0:
            raise DomainError("c must be nonnegative")
        if self.d <= 0:
            raise DomainError("d must be positive")
        if self.alpha < 0:
            raise DomainError("alpha must be nonnegative")
        if self.n < 0:
            raise DomainError("n must be nonnegative")


def rho_n(params: ModelParams) -> float:
    """Autoregressive root 1 -/+ c/k_n for the configured regime."""
    kn = eval_sequence(params.kn, params.n)
    if params.regime is Regime.NEAR_STATIONARY:
        if kn <= params.c and params.c > 0:
            raise DomainError(
                f"near-stationary root needs k_n > c; k_n={kn:g} <= c={params.c:g}"
            )
        return 1.0 - params.c / kn
    return 1.0 + params.c / kn


def _min_admissible_n(rn: SequenceSpec, d: float, n_max: int = 10**9) -> int | None:
    """Smallest n >= 3 with log(r_n) > d, or None if no such n exists."""
    if math.log(eval_sequence(rn, n_max)) <= d:
        return None
    lo, hi = 3, n_max
    while lo < hi:
        mid = (lo + hi) // 2
        if math.log(eval_sequence(rn, mid)) > d:
            hi = mid
        else:
            lo = mid + 1
    return lo


def phi_n(params: ModelParams) -> float:
    """Volatility persistence 1 - d/log(r_n), strictly inside (0, 1)."""
    rn = eval_sequence(params.rn, params.n)
    log_rn = math.log(rn)
    if log_rn <= params.d:
        n_min = _min_admissible_n(params.rn, params.d)
        hint = (
            f"; minimum admissible n is {n_min}"
            if n_min is not None
            else "; no n makes this r_n admissible"
        )
        raise DomainError(
            f"phi_n undefined: log r_n = {log_rn:g} <= d = {params.d:g}"
            f" at n = {params.n}{hint}"
        )
    return 1.0 - params.d / log_rn


@dataclass(frozen=True)
class VolatilityScales:
    """Closed-form scale quantities of the lognormal volatility process.

    All exponential-scale members carry a log-space twin; m_n and l_n may
    be inf in direct space while log_m_n / log_l_n stay finite.
    """

    phi: float
    alpha: float
    n: int
    log_m_n: float
    log_l_n: float
    M_n: int
    delta_n: float
    Z_n: float

    def A(self, t):
        """Dispersion factor (1 - phi^(2t)) / (2 (1 - phi^2)); A(1) = 1/2."""
        t = np.asarray(t)
        phi2 = self.phi * self.phi
        return -np.expm1(2.0 * t * math.log(self.phi)) / (2.0 * (1.0 - phi2))

    def log_x(self, t):
        """log E[sigma_t^2] = alpha^2 A_t."""
        return self.alpha**2 * self.A(t)

    def x(self, t):
        """Unconditional innovation variance E[sigma_t^2] = exp(alpha^2 A_t)."""
        return np.exp(self.log_x(t))

    @property
    def m_n(self) -> float:
        """Sample-average unconditional variance (may overflow; see log_m_n)."""
        return math.exp(self.log_m_n) if self.log_m_n < 709.0 else math.inf

    @property
    def l_n(self) -> float:
        """Long-run scale exp(alpha^2 / (2 (1 - phi^2)))."""
        return math.exp(self.log_l_n) if self.log_l_n < 709.0 else math.inf

    @property
    def A_inf(self) -> float:
        return 1.0 / (2.0 * (1.0 - self.phi * self.phi))


def scales(params: ModelParams) -> VolatilityScales:
    """Compute A_t, x_t, m_n, l_n and the dependence cutoff diagnostics."""
    phi = phi_n(params)
    alpha = params.alpha
    n = params.n
    svc = VolatilityScales
    phi2 = phi * phi

    t = np.arange(1, n + 1, dtype=float)
    A_t = -np.expm1(2.0 * t * math.log(phi)) / (2.0 * (1.0 - phi2))
    log_m = float(logsumexp(alpha**2 * A_t) - math.log(n)) if n >= 1 else 0.0
    log_l = alpha**2 / (2.0 * (1.0 - phi2))

    rn = eval_sequence(params.rn, params.n)
    log_rn = math.log(rn)
    loglog_rn = math.log(log_rn) if log_rn > 0 else -math.inf
    delta = 1.0 if loglog_rn <= 1.0 else 1.0 / loglog_rn
    ratio = log_rn / delta
    M = int(math.floor(log_rn / (2.0 * params.d) * math.log(ratio))) if ratio > 1.0 else 0
    M = max(M, 0)

    return svc(
        phi=phi,
        alpha=alpha,
        n=n,
        log_m_n=log_m,
        log_l_n=log_l,
        M_n=M,
        delta_n=delta,
        Z_n=phi2,
    )
