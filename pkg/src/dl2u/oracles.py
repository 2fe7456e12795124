"""Monte Carlo verification of the lognormal moment identities and limits.

Every check pits a simulation estimate against the closed form the theory
normalizes by, reporting a z-score; |z| <= 4 passes.  Lognormal checks use
antithetic shock pairs, which the symmetry of the identities makes free
variance reduction.  Degenerate alpha = 0 cases must pass with z = 0
exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from . import dgp
from .errors import DomainError
from .estimator import normalized_sum_squares
from .sequences import ModelParams, Regime, eval_sequence, phi_n, rho_n, scales

__all__ = [
    "MomentCheck",
    "check_mean_sigma2",
    "check_fourth_moment",
    "check_cross_moment",
    "check_conditional_mean",
    "check_eq6_convergence",
    "check_wnvn",
    "check_rate_condition",
    "run_moment_suite",
]

MIN_DRAWS = 10**5
Z_THRESHOLD = 4.0


@dataclass(frozen=True)
class MomentCheck:
    label: str
    mc_estimate: float
    closed_form: float
    mc_std_error: float
    z_score: float

    @property
    def passed(self) -> bool:
        return abs(self.z_score) <= Z_THRESHOLD

    def as_dict(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


def _dispersion(phi: float, t: int) -> float:
    """A_t = (1 - phi^(2t)) / (2 (1 - phi^2))."""
    return -math.expm1(2.0 * t * math.log(phi)) / (2.0 * (1.0 - phi * phi))


def _check(label, mc, closed, se) -> MomentCheck:
    z = 0.0 if se == 0.0 and mc == closed else (mc - closed) / se
    return MomentCheck(label, float(mc), float(closed), float(se), float(z))


def _simulate_z(phi: float, alpha: float, t: int, draws: int, seed: int) -> np.ndarray:
    """Antithetic draws of z_t = sum_j phi^j eta_{t-j}, z_0 = 0."""
    if draws < MIN_DRAWS:
        raise DomainError(f"need at least {MIN_DRAWS} draws, got {draws}")
    half = draws // 2
    rng = np.random.Generator(np.random.Philox(key=seed))
    z = np.zeros(half)
    for _ in range(t):
        z = phi * z + alpha * rng.standard_normal(half)
    return np.concatenate([z, -z])  # eta -> -eta flips z's sign


def _mc_mean(values: np.ndarray) -> tuple[float, float]:
    if np.ptp(values) == 0.0:  # constant sample: mean is exact, error zero
        return float(values[0]), 0.0
    mc = float(values.mean())
    se = float(values.std(ddof=1) / math.sqrt(values.size))
    return mc, se


def check_mean_sigma2(alpha, phi, t, draws=MIN_DRAWS, seed=101) -> MomentCheck:
    """E[sigma_t^2] = exp(alpha^2 A_t)."""
    z = _simulate_z(phi, alpha, t, draws, seed)
    mc, se = _mc_mean(np.exp(z))
    closed = math.exp(alpha**2 * _dispersion(phi, t))
    return _check(f"mean_sigma2(alpha={alpha},phi={phi},t={t})", mc, closed, se)


def check_fourth_moment(alpha, phi, t, draws=MIN_DRAWS, seed=202) -> MomentCheck:
    """E[sigma_t^4] = exp(2 Var z_t) = exp(4 alpha^2 A_t)."""
    z = _simulate_z(phi, alpha, t, draws, seed)
    mc, se = _mc_mean(np.exp(2.0 * z))
    closed = math.exp(4.0 * alpha**2 * _dispersion(phi, t))
    return _check(f"fourth_moment(alpha={alpha},phi={phi},t={t})", mc, closed, se)


def check_cross_moment(alpha, phi, s, t, draws=MIN_DRAWS, seed=303) -> MomentCheck:
    """E[sigma_s^2 sigma_t^2] = exp(alpha^2 A_s + alpha^2 A_t + 2 alpha^2 phi^(t-s) A_s)."""
    if s > t:
        raise DomainError("cross moment needs s <= t")
    if draws < MIN_DRAWS:
        raise DomainError(f"need at least {MIN_DRAWS} draws, got {draws}")
    half = draws // 2
    rng = np.random.Generator(np.random.Philox(key=seed))
    z = np.zeros(half)
    for step in range(1, t + 1):
        z = phi * z + alpha * rng.standard_normal(half)
        if step == s:
            z_s = z.copy()
    vals = np.exp(z_s + z)
    vals_anti = np.exp(-z_s - z)
    mc, se = _mc_mean(np.concatenate([vals, vals_anti]))
    a2 = alpha**2
    closed = math.exp(
        a2 * _dispersion(phi, s)
        + a2 * _dispersion(phi, t)
        + 2.0 * a2 * phi ** (t - s) * _dispersion(phi, s)
    )
    return _check(f"cross_moment(alpha={alpha},phi={phi},s={s},t={t})", mc, closed, se)


def check_conditional_mean(alpha, phi, draws=MIN_DRAWS, seed=404) -> MomentCheck:
    """E[sigma_t^2 | z_{t-1} = z] = exp(phi z + alpha^2 / 2), worst grid point."""
    if draws < MIN_DRAWS:
        raise DomainError(f"need at least {MIN_DRAWS} draws, got {draws}")
    half = draws // 2
    rng = np.random.Generator(np.random.Philox(key=seed))
    eta = alpha * rng.standard_normal(half)
    shock = np.concatenate([np.exp(eta), np.exp(-eta)])
    worst = None
    for z_prev in np.linspace(-2.0, 2.0, 5):
        vals = math.exp(phi * z_prev) * shock
        mc, se = _mc_mean(vals)
        closed = math.exp(phi * z_prev + alpha**2 / 2.0)
        chk = _check(f"conditional_mean(alpha={alpha},phi={phi},z={z_prev:g})", mc, closed, se)
        if worst is None or abs(chk.z_score) > abs(worst.z_score):
            worst = chk
    return worst


def check_eq6_convergence(params_grid, paths: int = 200, seed: int = 505) -> dict:
    """Normalized sum of squares drifting to 1/(2c) along an n-grid.

    Passes when the absolute error at the largest n is below the error at
    the smallest n and within 15% of the 1/(2c) target.
    """
    if len(params_grid) < 2:
        raise DomainError("need at least two grid points")
    entries = []
    for params in params_grid:
        if params.regime is not Regime.NEAR_STATIONARY:
            raise DomainError("eq6 convergence check is near-stationary only")
        vol = scales(params)
        y, _, u = dgp.simulate_batch(params, seed, np.arange(paths, dtype=np.uint64))
        ss = np.einsum("ij,ij->i", y[:, 1:], y[:, 1:])
        kn = eval_sequence(params.kn, params.n)
        stats = np.exp(np.log(ss) - math.log(params.n) - math.log(kn) - vol.log_m_n)
        target = 1.0 / (2.0 * params.c)
        entries.append({"n": params.n, "mean": float(stats.mean()),
                        "abs_error": float(abs(stats.mean() - target)), "target": target})
    entries.sort(key=lambda e: e["n"])
    final, first = entries[-1], entries[0]
    passed = (
        final["abs_error"] < first["abs_error"]
        and final["abs_error"] <= 0.15 * final["target"]
    )
    return {"label": "eq6_convergence", "grid": entries, "passed": passed}


def check_wnvn(params: ModelParams, B: int = 2000, seed: int = 606) -> dict:
    """Variances of the explosive auxiliary sums vs 1/(2c), correlation vs 0.

    W_n weights innovations by rho^-j, V_n by rho^-(n-j+1); the limit is an
    independent N(0, 1/(2c)) pair.
    """
    if params.regime is not Regime.MILDLY_EXPLOSIVE:
        raise DomainError("W/V check is explosive-regime only")
    vol = scales(params)
    rho = rho_n(params)
    kn = eval_sequence(params.kn, params.n)
    n = params.n
    _, _, u = dgp.simulate_batch(params, seed, np.arange(B, dtype=np.uint64))
    j = np.arange(1, n + 1)
    half_log_norm = 0.5 * (vol.log_l_n + math.log(kn))
    w_weights = np.exp(-j * math.log(rho) - half_log_norm)
    v_weights = np.exp(-(n - j + 1) * math.log(rho) - half_log_norm)
    W = u @ w_weights
    V = u @ v_weights
    target = 1.0 / (2.0 * params.c)

    def _var_entry(name, x):
        var = float(np.var(x, ddof=1))
        se = var * math.sqrt(2.0 / (len(x) - 1))
        return {"name": name, "value": var, "target": target, "se": se,
                "z": (var - target) / se}

    corr = float(np.corrcoef(W, V)[0, 1])
    corr_se = 1.0 / math.sqrt(B)
    checks = [
        _var_entry("var_W", W),
        _var_entry("var_V", V),
        {"name": "corr_WV", "value": corr, "target": 0.0, "se": corr_se, "z": corr / corr_se},
    ]
    return {
        "label": "wn_vn",
        "checks": checks,
        "passed": all(abs(c["z"]) <= Z_THRESHOLD for c in checks),
    }


def check_rate_condition(params: ModelParams) -> dict:
    """Report the rate-separation ratios; >= 0.5 flags a questionable n."""
    kn = eval_sequence(params.kn, params.n)
    rn = eval_sequence(params.rn, params.n)
    a2 = params.alpha**2
    ratios = {
        "kn_rn^(a2/4d)/n": kn * rn ** (a2 / (4.0 * params.d)) / params.n,
        "kn_rn^(a2/d)/n": kn * rn ** (a2 / params.d) / params.n,
    }
    flags = {name: value >= 0.5 for name, value in ratios.items()}
    return {
        "label": "rate_condition",
        "ratios": ratios,
        "flagged": flags,
        "note": "flagged ratios mean the asymptotic regime is questionable at this n",
    }


def run_moment_suite(draws: int = MIN_DRAWS, seed: int = 707) -> list[MomentCheck]:
    """The default battery of lognormal moment checks."""
    cases = [
        check_mean_sigma2(0.0, 0.9, 3, draws, seed),
        check_mean_sigma2(0.5, 0.9, 3, draws, seed + 1),
        check_mean_sigma2(0.5, 0.5, 1, draws, seed + 2),
        check_fourth_moment(0.0, 0.9, 3, draws, seed + 3),
        check_fourth_moment(0.5, 0.5, 2, draws, seed + 4),
        check_fourth_moment(0.3, 0.95, 10, draws, seed + 5),
        check_cross_moment(0.0, 0.9, 2, 4, draws, seed + 6),
        check_cross_moment(0.5, 0.9, 2, 4, draws, seed + 7),
        check_cross_moment(0.4, 0.3, 2, 12, draws, seed + 8),
        check_conditional_mean(0.0, 0.9, draws, seed + 9),
        check_conditional_mean(0.5, 0.9, draws, seed + 10),
    ]
    return cases
