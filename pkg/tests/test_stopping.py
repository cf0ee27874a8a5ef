import numpy as np
import pytest

from almreg.schedulers import ConstantSchedule
from almreg.stopping import (
    APrioriRule,
    FixedRule,
    MorozovRule,
    RunRecord,
    SweepRecord,
    apriori_admissible,
    build_stopping_rule,
    degenerate_detect,
    degenerate_diagnostics,
    f_rho,
    gamma_tradeoff_infimum,
    gamma_tradeoff_numeric,
    last_discrepancy_index,
    morozov_index,
    optimal_rho,
    power_law_index,
    resolve_rho,
)
from almreg.utils.exceptions import ConfigError, DomainError


class TestRho:
    def test_optimal_rho(self):
        rho_star, f_star = optimal_rho()
        assert rho_star == pytest.approx(1.6404, abs=5e-4)
        assert f_star == pytest.approx(4.6753, abs=5e-4)
        assert f_rho(1.5) > f_star
        assert f_rho(2.0) > f_star

    def test_f_rho_domain(self):
        with pytest.raises(DomainError):
            f_rho(1.0)

    def test_tradeoff_closed_form_matches_numeric(self):
        rng = np.random.default_rng(0)
        for a, b in rng.uniform(0.1, 10.0, size=(100, 2)):
            value, gamma_star = gamma_tradeoff_infimum(a, b)
            numeric, _ = gamma_tradeoff_numeric(a, b)
            assert numeric == pytest.approx(value, rel=1e-9)
            objective = gamma_star / (gamma_star - 1.0) * a + gamma_star ** 2 / (gamma_star - 1.0) * b
            assert objective == pytest.approx(value, rel=1e-12)

    def test_tradeoff_rejects_zero(self):
        with pytest.raises(DomainError):
            gamma_tradeoff_infimum(0.0, 1.0)

    def test_resolve_rho(self):
        assert resolve_rho({'rho': 3.0}) == 3.0
        assert resolve_rho({'rho': None}) == pytest.approx(optimal_rho()[0])


class TestDiscrepancy:
    residuals = [3.0, 2.0, 0.5, 0.1]

    def test_first_and_last_index(self):
        assert morozov_index(self.residuals, 2.0, 0.5) == 3
        assert last_discrepancy_index(self.residuals, 2.0, 0.5) == 2
        assert morozov_index(self.residuals, 2.0, 0.01) is None
        assert last_discrepancy_index([0.1], 2.0, 0.5) is None

    def test_threshold_is_strict(self):
        assert morozov_index([1.0, 0.99], 2.0, 0.5) == 2

    def test_rule_agrees_with_index(self):
        rule = MorozovRule(2.0, 0.5)
        assert rule.threshold == 1.0
        assert rule.index(self.residuals) == 3

    @pytest.mark.parametrize('rho, delta', [(1.0, 0.1), (2.0, -0.1), (2.0, 0.0)])
    def test_bad_parameters(self, rho, delta):
        with pytest.raises(ConfigError):
            MorozovRule(rho, delta)
        with pytest.raises(ConfigError):
            morozov_index(self.residuals, rho, delta)
        with pytest.raises(ConfigError):
            last_discrepancy_index(self.residuals, rho, delta)


class TestAPriori:
    def test_power_law(self):
        index_fn = power_law_index(2.0, 1.0)
        assert index_fn(0.5) == 4
        assert index_fn(100.0) == 1
        rule = APrioriRule(index_fn, 0.25)
        assert rule.steps == 8
        assert rule.index([1.0] * 7) is None
        assert rule.index([1.0] * 8) == 8

    @pytest.mark.parametrize('exponent, convergent, rate_admissible', [
        (1.0, True, True),
        (1.5, True, False),
        (2.0, False, False),
    ])
    def test_admissibility(self, exponent, convergent, rate_admissible):
        deltas = [0.5 ** k for k in range(1, 9)]
        report = apriori_admissible(ConstantSchedule(1.0), power_law_index(1.0, exponent), deltas)
        assert report.convergent is convergent
        assert report.rate_admissible is rate_admissible

    def test_admissibility_needs_decreasing_levels(self):
        with pytest.raises(ConfigError):
            apriori_admissible(ConstantSchedule(), power_law_index(1.0, 1.0), [0.1, 0.2])


class TestDegeneracy:
    @pytest.mark.parametrize('indices, trend, N', [
        ([5, 3, 3, 3, 3], 'constant', 3),
        ([1, 2, 3, 4], 'increasing', None),
        ([1, 3, 2, 4], 'mixed', None),
        ([1, None, 1, 1], 'insufficient', None),
        ([1, 1], 'insufficient', None),
    ])
    def test_patterns(self, indices, trend, N):
        report = degenerate_detect(indices, window=4)
        assert report.trend == trend
        assert report.N == N

    def test_window_too_small(self):
        with pytest.raises(ConfigError):
            degenerate_detect([1, 1, 1], window=2)

    def test_diagnostics_residual_bound(self):
        record = SweepRecord(label='toy', rho=2.0)
        for delta in (0.4, 0.2, 0.1):
            record.append(RunRecord(delta=delta, gamma=2, t_gamma=2.0, residual=delta, stopped=True,
                                    exact_residual=2.5 * delta, p_norm=1.0, dual_value=-0.5))
        report = degenerate_detect(record, window=3)
        diagnostics = degenerate_diagnostics(record, report)
        assert report.N == 2
        assert diagnostics['residual_bound_ok']
        assert diagnostics['p_norm_trend'] == 'nonincreasing'
        assert report.diagnostics is diagnostics


class TestRecord:
    def _record(self):
        record = SweepRecord(label='toy', rho=1.5, seed=3, config={'delta0': 0.1})
        record.append(RunRecord(delta=0.1, gamma=4, t_gamma=4.0, residual=0.12, stopped=True,
                                distances={'l1_error': 0.3}, bound_slacks={'gueler': 0.01}))
        record.append(RunRecord(delta=0.05, gamma=None, t_gamma=None, residual=None, stopped=False,
                                violations=['unstopped']))
        return record

    def test_round_trip(self):
        record = self._record()
        assert SweepRecord.from_dict(record.to_dict()) == record
        assert record.gamma_indices == [4, None]
        assert len(record.stopped_runs) == 1

    def test_rows_are_flat(self):
        row = self._record().runs[0].to_row()
        assert row['l1_error'] == 0.3
        assert row['slack_gueler'] == 0.01

    def test_levels_must_decrease(self):
        record = self._record()
        with pytest.raises(ConfigError):
            record.append(RunRecord(delta=0.05, gamma=1, t_gamma=1.0, residual=0.0, stopped=True))
        with pytest.raises(ConfigError):
            SweepRecord(label='bad', rho=2.0, runs=[
                RunRecord(delta=0.1, gamma=1, t_gamma=1.0, residual=0.0, stopped=True),
                RunRecord(delta=0.2, gamma=1, t_gamma=1.0, residual=0.0, stopped=True),
            ])


def test_build_stopping_rule():
    rule = build_stopping_rule({'rule': 'morozov', 'rho': 2.0, 'delta': 0.1})
    assert isinstance(rule, MorozovRule)
    assert rule.threshold == pytest.approx(0.2)
    assert build_stopping_rule({'rule': 'morozov', 'rho': 2.0}, delta=0.3).delta == 0.3
    assert isinstance(build_stopping_rule({'rule': 'fixed', 'steps': 5}), FixedRule)
    rule = build_stopping_rule({'rule': 'a_priori', 'delta': 0.1, 'apriori_scale': 1.0, 'apriori_exponent': 1.0})
    assert rule.steps == 10
    with pytest.raises(ConfigError, match="not in stopping rule dict"):
        build_stopping_rule({'rule': 'l_curve'})
    with pytest.raises(ConfigError):
        build_stopping_rule({'rule': 'morozov', 'rho': 2.0})
    with pytest.raises(ConfigError):
        build_stopping_rule({'rule': 'fixed'})
