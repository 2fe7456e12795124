import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dl2u.dgp import RngSeed, SimulatedPath, simulate_path
from dl2u.errors import DegeneratePathError, DomainError, NumericOverflowError
from dl2u.estimator import (
    OlsResult,
    explosive_pair,
    normalized_sum_squares,
    ols_rho,
    pivot_S,
    pivot_T,
    score_rho_error,
    sign_flip,
)
from dl2u.sequences import ModelParams, Regime, SequenceSpec, eval_sequence, rho_n, scales


def stat_params(**kw):
    base = dict(
        c=1.0, d=1.0, alpha=0.5, n=200,
        kn=SequenceSpec.power_of_n(0.25), regime=Regime.NEAR_STATIONARY,
    )
    base.update(kw)
    return ModelParams(**base)


def expl_params(**kw):
    base = dict(
        c=0.5, d=1.0, alpha=0.5, n=300,
        kn=SequenceSpec.power_of_n(0.5), regime=Regime.MILDLY_EXPLOSIVE,
    )
    base.update(kw)
    return ModelParams(**base)


class TestOls:
    def test_noiseless_ar_is_recovered_exactly(self):
        rho = 0.987654321
        y = rho ** np.arange(50)
        assert ols_rho(y).rho_hat == pytest.approx(rho, rel=1e-15)

    def test_degenerate_path_raises(self):
        with pytest.raises(DegeneratePathError):
            ols_rho(np.zeros(10))
        with pytest.raises(DomainError):
            ols_rho([1.0])

    def test_scale_invariance_power_of_two_is_exact(self):
        rng = np.random.default_rng(5)
        y = rng.standard_normal(100).cumsum()
        assert ols_rho(4.0 * y).rho_hat == ols_rho(y).rho_hat

    @settings(max_examples=30, deadline=None)
    @given(lam=st.floats(min_value=0.01, max_value=100.0))
    def test_scale_invariance_general(self, lam):
        rng = np.random.default_rng(5)
        y = rng.standard_normal(100).cumsum()
        assert ols_rho(lam * y).rho_hat == pytest.approx(ols_rho(y).rho_hat, rel=1e-12)


class TestSignFlip:
    def test_is_involution(self):
        rng = np.random.default_rng(7)
        y = rng.standard_normal(31)
        assert np.array_equal(sign_flip(sign_flip(y)), y)

    def test_negates_rho_hat_exactly(self):
        rng = np.random.default_rng(7)
        y = rng.standard_normal(100).cumsum()
        assert ols_rho(sign_flip(y)).rho_hat == -ols_rho(y).rho_hat


class TestScoreForm:
    def test_matches_direct_difference_when_stable(self):
        p = stat_params()
        path = simulate_path(p, RngSeed(1, 0))
        direct = ols_rho(path.y).rho_hat - rho_n(p)
        assert score_rho_error(path) == pytest.approx(direct, rel=1e-8)

    def test_survives_deep_explosive_cancellation(self):
        # rho_n^n here is ~1e33, so the direct difference underflows the
        # rounding error of rho_hat; the score form must stay finite & small
        p = expl_params(n=300, kn=SequenceSpec.power_of_n(0.1))
        path = simulate_path(p, RngSeed(1, 0))
        err = score_rho_error(path)
        assert 0 < abs(err) < 1e-20


class TestPivots:
    def test_pivot_T_value_and_target(self):
        p = stat_params()
        path = simulate_path(p, RngSeed(1, 0))
        ols = ols_rho(path.y)
        piv = pivot_T(ols, p)
        kn = eval_sequence(p.kn, p.n)
        expected = math.sqrt(p.n * kn) * (ols.rho_hat - rho_n(p))
        assert piv.value == pytest.approx(expected, rel=1e-14)
        assert piv.target.label() == "N(0,2)"

    def test_pivot_S_fixture(self):
        # n = 300, c = 0.5, k_n = sqrt(300), centered error 1e-4:
        # rho_n^300 * k_n * 1e-4 / (2c) = 8.838875127750353
        p = expl_params()
        ols = OlsResult(numerator=1.0, denominator=1.0)
        piv = pivot_S(ols, p, rho_error=1e-4)
        assert piv.value == pytest.approx(8.838875127750353, rel=1e-12)
        assert piv.target.label() == "Cauchy(0,1)"

    def test_pivot_regime_guards(self):
        ols = OlsResult(1.0, 1.0)
        with pytest.raises(DomainError):
            pivot_T(ols, expl_params())
        with pytest.raises(DomainError):
            pivot_S(ols, stat_params())

    def test_pivot_S_overflow_names_exponent(self):
        p = expl_params(n=10**5, kn=SequenceSpec.log_of_n())
        with pytest.raises(NumericOverflowError, match="n log rho_n"):
            pivot_S(OlsResult(1.0, 1.0), p, rho_error=1.0)

    def test_pivot_S_zero_error(self):
        assert pivot_S(OlsResult(1.0, 1.0), expl_params(), rho_error=0.0).value == 0.0


class TestNormalizedQuantities:
    def test_sum_squares_alpha_zero_direct(self):
        p = stat_params(alpha=0.0)
        path = simulate_path(p, RngSeed(4, 0))
        vol = scales(p)
        kn = eval_sequence(p.kn, p.n)
        direct = float(path.y[1:] @ path.y[1:]) / (p.n * kn)
        assert normalized_sum_squares(path, p, vol) == pytest.approx(direct, rel=1e-12)

    def test_sum_squares_regime_guard(self):
        p = expl_params()
        path = simulate_path(p, RngSeed(4, 0))
        with pytest.raises(DomainError):
            normalized_sum_squares(path, p, scales(p))

    def test_explosive_pair_ratio_reproduces_pivot(self):
        # at c = 0.5 the pair ratio equals the explosive pivot exactly
        p = expl_params()
        path = simulate_path(p, RngSeed(4, 0))
        vol = scales(p)
        first, second = explosive_pair(path, p, vol)
        piv = pivot_S(ols_rho(path.y), p, rho_error=score_rho_error(path))
        assert first / second == pytest.approx(piv.value, rel=1e-10)

    def test_explosive_pair_regime_guard(self):
        p = stat_params()
        path = simulate_path(p, RngSeed(4, 0))
        with pytest.raises(DomainError):
            explosive_pair(path, p, scales(p))


class TestDegenerateScore:
    def test_zero_lag_path_raises(self):
        path = SimulatedPath(y=np.zeros(5), sigma2=np.ones(5), u=np.zeros(4))
        with pytest.raises(DegeneratePathError):
            score_rho_error(path)
